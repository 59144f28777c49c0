//! Row-style Hermite normal form over the integers.
//!
//! The lattices handled here are full rank in `Z^d`. The normal form is
//! lower triangular: `h[i][j] == 0` for `j > i`, positive diagonal, and
//! `0 <= h[i][j] < h[j][j]` for `j < i`.

use super::FieldError;

/// Hermite normal form together with the transformation that produced it.
#[derive(Clone, Debug)]
pub(crate) struct HermiteForm {
    pub h: Vec<Vec<i128>>,
    /// `h[i] == sum_k transform[i][k] * input[k]`.
    pub transform: Vec<Vec<i128>>,
}

fn axpy(dst: &mut [i128], q: i128, src: &[i128]) -> Result<(), FieldError> {
    for (d, s) in dst.iter_mut().zip(src) {
        let t = q.checked_mul(*s).ok_or(FieldError::Overflow)?;
        *d = d.checked_sub(t).ok_or(FieldError::Overflow)?;
    }
    Ok(())
}

/// Computes the HNF of the lattice spanned by `rows` (each of length `dim`).
pub(crate) fn hermite_form(rows: &[Vec<i128>], dim: usize) -> Result<HermiteForm, FieldError> {
    let m = rows.len();
    let mut work: Vec<Vec<i128>> = rows.to_vec();
    let mut trans: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|k| i128::from(i == k)).collect())
        .collect();
    let mut active: Vec<usize> = (0..m).collect();
    let mut pivots = vec![usize::MAX; dim];

    for j in (0..dim).rev() {
        loop {
            let nonzero: Vec<usize> = active.iter().copied().filter(|&r| work[r][j] != 0).collect();
            if nonzero.is_empty() {
                return Err(FieldError::NotFullRank);
            }
            let pivot = *nonzero.iter().min_by_key(|&&r| work[r][j].unsigned_abs()).unwrap();
            if nonzero.len() == 1 {
                if work[pivot][j] < 0 {
                    work[pivot].iter_mut().for_each(|x| *x = -*x);
                    trans[pivot].iter_mut().for_each(|x| *x = -*x);
                }
                pivots[j] = pivot;
                active.retain(|&r| r != pivot);
                break;
            }
            let pv = work[pivot][j];
            let (prow, ptrans) = (work[pivot].clone(), trans[pivot].clone());
            for &r in nonzero.iter().filter(|&&r| r != pivot) {
                let q = work[r][j].div_euclid(pv);
                axpy(&mut work[r], q, &prow)?;
                axpy(&mut trans[r], q, &ptrans)?;
            }
        }
    }

    let mut h: Vec<Vec<i128>> = pivots.iter().map(|&p| work[p].clone()).collect();
    let mut t: Vec<Vec<i128>> = pivots.iter().map(|&p| trans[p].clone()).collect();
    for i in 0..dim {
        for j in (0..i).rev() {
            let q = h[i][j].div_euclid(h[j][j]);
            if q != 0 {
                let (hj, tj) = (h[j].clone(), t[j].clone());
                axpy(&mut h[i], q, &hj)?;
                axpy(&mut t[i], q, &tj)?;
            }
        }
    }
    Ok(HermiteForm { h, transform: t })
}

/// Reduces `v` modulo the lattice with lower-triangular basis `h`, returning
/// the canonical representative with `0 <= v[i] < h[i][i]`.
pub(crate) fn reduce_mod(h: &[Vec<i128>], v: &mut [i128]) {
    for i in (0..h.len()).rev() {
        let q = v[i].div_euclid(h[i][i]);
        if q != 0 {
            for j in 0..=i {
                v[j] -= q * h[i][j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_simple_lattice() {
        // lattice spanned by (4, 0), (2, 2), (6, 4) has index 4 (2Z x 2Z)
        let rows = vec![vec![4, 0], vec![2, 2], vec![6, 4]];
        let f = hermite_form(&rows, 2).unwrap();
        assert_eq!(f.h, vec![vec![2, 0], vec![0, 2]]);
        for (hi, ti) in f.h.iter().zip(&f.transform) {
            let mut acc = [0i128; 2];
            for (k, row) in rows.iter().enumerate() {
                acc[0] += ti[k] * row[0];
                acc[1] += ti[k] * row[1];
            }
            assert_eq!(&acc[..], &hi[..]);
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let rows = vec![vec![1, 2], vec![2, 4]];
        assert!(matches!(hermite_form(&rows, 2), Err(FieldError::NotFullRank)));
    }

    #[test]
    fn reduction_lands_in_box() {
        let h = vec![vec![5, 0], vec![3, 1]];
        let mut v = vec![-17, 9];
        reduce_mod(&h, &mut v);
        assert_eq!(v, vec![(-17 - 27i128).rem_euclid(5), 0]);
    }
}
