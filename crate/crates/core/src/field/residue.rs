use super::hnf::{hermite_form, reduce_mod};
use super::{FieldError, Ideal, NumberField};

/// `O / c` with canonical representatives `0 <= v[i] < h[i][i]` taken from
/// the HNF of `c`. Representatives are indexed in mixed radix, coordinate 0
/// varying fastest.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    field: NumberField,
    modulus: Ideal,
    radices: Vec<i128>,
}

impl ResidueRing {
    pub fn new(field: &NumberField, modulus: &Ideal) -> Self {
        let radices = (0..modulus.degree()).map(|i| modulus.hnf[i][i]).collect();
        ResidueRing { field: field.clone(), modulus: modulus.clone(), radices }
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.modulus.norm() as usize
    }

    pub(crate) fn reduce_wide(&self, v: &mut [i128]) {
        reduce_mod(&self.modulus.hnf, v);
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        self.reduce_wide(&mut w);
        w.into_iter().map(|x| x as i64).collect()
    }

    pub(crate) fn index_wide(&self, v: &[i128]) -> usize {
        let mut w = v.to_vec();
        self.reduce_wide(&mut w);
        let mut idx = 0i128;
        for i in (0..w.len()).rev() {
            idx = idx * self.radices[i] + w[i];
        }
        idx as usize
    }

    pub fn index_of(&self, v: &[i64]) -> usize {
        self.index_wide(&v.iter().map(|&x| x as i128).collect::<Vec<_>>())
    }

    pub(crate) fn element_wide(&self, mut idx: usize) -> Vec<i128> {
        self.radices
            .iter()
            .map(|&r| {
                let c = idx as i128 % r;
                idx /= r as usize;
                c
            })
            .collect()
    }

    pub fn element(&self, idx: usize) -> Vec<i64> {
        self.element_wide(idx).into_iter().map(|x| x as i64).collect()
    }

    /// All `N(c)` representatives, in index order.
    pub fn enumerate(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();
        let b: Vec<i128> = b.iter().map(|&x| x as i128).collect();
        let mut p = self.field.mul_int(&a, &b);
        self.reduce_wide(&mut p);
        p.into_iter().map(|x| x as i64).collect()
    }

    /// Inverse modulo `c`. A non-unit yields `NotInvertible` carrying the
    /// ideal `(x) + c`.
    pub fn invert(&self, x: &[i64]) -> Result<Vec<i64>, FieldError> {
        let d = self.radices.len();
        let xw: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        let mut rows: Vec<Vec<i128>> = (0..d)
            .map(|i| {
                let mut e = vec![0i128; d];
                e[i] = 1;
                self.field.mul_int(&xw, &e)
            })
            .collect();
        rows.extend(self.modulus.hnf.iter().cloned());
        let form = hermite_form(&rows, d)?;
        if (0..d).any(|i| form.h[i][i] != 1) {
            let witness = Ideal::from_lattice_rows(&rows, d)?;
            return Err(FieldError::NotInvertible { witness });
        }
        // h[0] = e_0 = 1 = sum_{k<d} u_k (x e_k) + (element of c)
        let mut y: Vec<i128> = form.transform[0][..d].to_vec();
        self.reduce_wide(&mut y);
        Ok(y.into_iter().map(|v| v as i64).collect())
    }

    pub fn is_unit(&self, x: &[i64]) -> bool {
        self.invert(x).is_ok()
    }

    /// `table[i] = Some(j)` when element `i` is a unit with inverse `j`.
    pub fn inverse_table(&self) -> Vec<Option<usize>> {
        let mut table = vec![None; self.size()];
        for i in 0..self.size() {
            if table[i].is_some() {
                continue;
            }
            if let Ok(inv) = self.invert(&self.element(i)) {
                let j = self.index_of(&inv);
                table[i] = Some(j);
                table[j] = Some(i);
            }
        }
        table
    }

    pub fn unit_count(&self) -> usize {
        self.inverse_table().iter().filter(|e| e.is_some()).count()
    }
}
