use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::quad::{integrate, Estimate};
use super::MeasureError;

pub(crate) const QUAD_TOL: f64 = 1e-11;
pub(crate) const QUAD_PIECES: usize = 4000;
/// Beyond `u = √(λ - 1/4) = 40` the tanh/coth excess is below `e^{-250}`.
const EXCESS_CUTOFF: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Pl0,
    Pl1,
    V10,
    V11,
    Npl0,
    Npl1,
}

impl MeasureKind {
    pub fn plancherel(parity: u8) -> Self {
        if parity % 2 == 0 {
            MeasureKind::Pl0
        } else {
            MeasureKind::Pl1
        }
    }

    pub fn reference(parity: u8) -> Self {
        if parity % 2 == 0 {
            MeasureKind::V10
        } else {
            MeasureKind::V11
        }
    }

    pub fn parity(&self) -> u8 {
        match self {
            MeasureKind::Pl0 | MeasureKind::V10 | MeasureKind::Npl0 => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureKind::Pl0 => "pl0",
            MeasureKind::Pl1 => "pl1",
            MeasureKind::V10 => "v10",
            MeasureKind::V11 => "v11",
            MeasureKind::Npl0 => "npl0",
            MeasureKind::Npl1 => "npl1",
        };
        f.write_str(s)
    }
}

impl FromStr for MeasureKind {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['_', ','], "").as_str() {
            "pl0" => Ok(MeasureKind::Pl0),
            "pl1" => Ok(MeasureKind::Pl1),
            "v10" => Ok(MeasureKind::V10),
            "v11" => Ok(MeasureKind::V11),
            "npl0" => Ok(MeasureKind::Npl0),
            "npl1" => Ok(MeasureKind::Npl1),
            _ => Err(MeasureError::UnknownKind(s.to_string())),
        }
    }
}

/// `λ_b = b/2 (1 - b/2)`.
pub fn discrete_series_point(b: u64) -> f64 {
    let b = b as f64;
    b * (2.0 - b) / 4.0
}

/// Whether `x = b/2 (1 - b/2)` for some `b > 1` with `b ≡ parity (mod 2)`.
pub fn is_discrete_series_point(x: f64, parity: u8) -> bool {
    if !(x <= 0.0) {
        return false;
    }
    let b = (1.0 + (1.0 - 4.0 * x).sqrt()).round();
    if b < 2.0 || (b as u64) % 2 != (parity % 2) as u64 {
        return false;
    }
    (discrete_series_point(b as u64) - x).abs() <= 1e-12 * (1.0 + x.abs())
}

/// A spectral measure of one archimedean coordinate.
///
/// `pl0`/`pl1` and `v10`/`v11` are measures on the eigenvalue line `λ`.
/// `npl0`/`npl1` use a signed coordinate `s` for the spectral parameter:
/// `s <= 0` stands for `ν = i|s|` and `s > 0` for real `ν = s`, so that
/// `λ = 1/4 + s²` or `λ = 1/4 - s²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    pub kind: MeasureKind,
}

impl SpectralMeasure {
    pub fn new(kind: MeasureKind) -> Self {
        SpectralMeasure { kind }
    }

    /// Density of the continuous part at `λ` (or at `s` for the ν-forms).
    pub fn density(&self, x: f64) -> f64 {
        match self.kind {
            MeasureKind::Pl0 | MeasureKind::Pl1 => {
                if x < 0.25 {
                    return 0.0;
                }
                let arg = PI * (x - 0.25).sqrt();
                if self.kind == MeasureKind::Pl0 {
                    arg.tanh()
                } else if arg == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / arg.tanh()
                }
            }
            MeasureKind::V10 | MeasureKind::V11 => {
                let lower = if self.kind == MeasureKind::V10 { 0.0 } else { 0.25 };
                if x >= 1.25 {
                    0.5
                } else if x >= lower {
                    0.5 / (x - 0.25).abs().sqrt()
                } else {
                    0.0
                }
            }
            MeasureKind::Npl0 | MeasureKind::Npl1 => {
                if x > 0.0 {
                    return 0.0;
                }
                let y = -x;
                if self.kind == MeasureKind::Npl0 {
                    2.0 * y * (PI * y).tanh()
                } else {
                    2.0 * y_coth(y)
                }
            }
        }
    }

    /// Atoms `(location, mass)` inside `[a, b]`.
    pub fn atoms_in(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let parity = self.kind.parity() as u64;
        let mut out = Vec::new();
        match self.kind {
            MeasureKind::Pl0 | MeasureKind::Pl1 | MeasureKind::V10 | MeasureKind::V11 => {
                // λ_b >= a  <=>  b <= 1 + √(1 - 4a)
                if a > 0.0 || b < a {
                    return out;
                }
                let b_max = (1.0 + (1.0 - 4.0 * a).sqrt()).floor() as u64 + 1;
                let start = if parity == 0 { 2 } else { 3 };
                let mut n = start;
                while n <= b_max {
                    let x = discrete_series_point(n);
                    if x >= a && x <= b {
                        let mass = match self.kind {
                            MeasureKind::Pl0 | MeasureKind::Pl1 => (n - 1) as f64,
                            _ => (n - 1) as f64 / 2.0,
                        };
                        out.push((x, mass));
                    }
                    n += 2;
                }
            }
            MeasureKind::Npl0 | MeasureKind::Npl1 => {
                // atoms at ν = (b - 1)/2
                if b <= 0.0 || b < a {
                    return out;
                }
                let mut n = if parity == 0 { 2 } else { 3 };
                while ((n - 1) as f64) / 2.0 <= b {
                    let s = (n - 1) as f64 / 2.0;
                    if s >= a {
                        out.push((s, (n - 1) as f64));
                    }
                    n += 2;
                }
            }
        }
        out
    }

    /// Mass of the closed interval `[a, b]`.
    pub fn interval(&self, a: f64, b: f64) -> Result<Estimate, MeasureError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(MeasureError::Unbounded);
        }
        if a > b {
            return Err(MeasureError::InvalidInterval(a, b));
        }
        let atoms: f64 = self.atoms_in(a, b).iter().map(|&(_, m)| m).sum();
        let continuous = match self.kind {
            MeasureKind::Pl0 | MeasureKind::Pl1 => {
                let lo = a.max(0.25);
                if b <= lo {
                    Estimate::default()
                } else {
                    plancherel_continuous(self.kind == MeasureKind::Pl0, (lo - 0.25).sqrt(), (b - 0.25).sqrt())
                }
            }
            MeasureKind::V10 | MeasureKind::V11 => Estimate::exact(self.reference_continuous(a, b)),
            MeasureKind::Npl0 | MeasureKind::Npl1 => {
                // continuous part lives on s <= 0, i.e. ν on the imaginary axis
                let hi = b.min(0.0);
                if hi <= a {
                    Estimate::default()
                } else {
                    plancherel_continuous(self.kind == MeasureKind::Npl0, -hi, -a)
                }
            }
        };
        Ok(continuous.add(Estimate::exact(atoms)))
    }

    /// `∫_a^b` of the continuous part of `V₁`, in closed form.
    fn reference_continuous(&self, a: f64, b: f64) -> f64 {
        let lower = if self.kind == MeasureKind::V10 { 0.0 } else { 0.25 };
        // antiderivative of (1/2)|λ - 1/4|^{-1/2} is sign(λ - 1/4) √|λ - 1/4|
        let g = |x: f64| (x - 0.25).signum() * (x - 0.25).abs().sqrt();
        let (lo, hi) = (a.max(lower), b.min(1.25));
        let singular = if hi > lo { g(hi) - g(lo) } else { 0.0 };
        let flat = if b > 1.25 { 0.5 * (b - a.max(1.25)) } else { 0.0 };
        singular + flat
    }

    /// `∫_{1/4}^∞ (density - 1) dλ` for `pl0`/`pl1` and `∫_{1/4}^∞ (density - 1/2)` for
    /// `V₁`; the finite part of the half-line mass beyond its linear growth.
    pub fn half_line_excess(&self) -> Result<Estimate, MeasureError> {
        match self.kind {
            MeasureKind::Pl0 | MeasureKind::Pl1 => {
                let e = excess_integral(self.kind == MeasureKind::Pl0, 0.0, EXCESS_CUTOFF);
                Ok(e)
            }
            // ∫_{1/4}^{5/4} ((1/2)|λ-1/4|^{-1/2} - 1/2) dλ = 1 - 1/2
            MeasureKind::V10 | MeasureKind::V11 => Ok(Estimate::exact(0.5)),
            _ => Err(MeasureError::Unbounded),
        }
    }

    /// `R(a)` with `μ([a, T]) = c T + R(a) + o(1)` as `T -> ∞`, where `c` is
    /// the asymptotic density.
    pub fn half_line(&self, a: f64) -> Result<Estimate, MeasureError> {
        if !a.is_finite() {
            return Err(MeasureError::Unbounded);
        }
        let (anchor, slope) = match self.kind {
            MeasureKind::Pl0 | MeasureKind::Pl1 => (0.25, 1.0),
            MeasureKind::V10 | MeasureKind::V11 => (0.25, 0.5),
            _ => return Err(MeasureError::Unbounded),
        };
        let tail = self.half_line_excess()?.add(Estimate::exact(-slope * anchor));
        let below = if a < anchor {
            self.interval(a, anchor)?
        } else {
            let part = self.interval(anchor, a)?;
            Estimate { value: -part.value, error: part.error }
        };
        Ok(tail.add(below))
    }
}

/// `y coth(π y)`, continuous at 0.
fn y_coth(y: f64) -> f64 {
    if y == 0.0 {
        1.0 / PI
    } else {
        y / (PI * y).tanh()
    }
}

/// `∫_{u1}^{u2} 2u tanh(πu) du` (or coth), the Plancherel continuous part
/// after `λ = 1/4 + u²`. Split into `u2² - u1²` plus an exponentially
/// decaying remainder.
fn plancherel_continuous(tanh: bool, u1: f64, u2: f64) -> Estimate {
    let linear = Estimate::exact(u2 * u2 - u1 * u1);
    linear.add(excess_integral(tanh, u1.min(EXCESS_CUTOFF), u2.min(EXCESS_CUTOFF)))
}

fn excess_integral(tanh: bool, u1: f64, u2: f64) -> Estimate {
    if u2 <= u1 {
        return Estimate::default();
    }
    let f = move |u: f64| {
        if tanh {
            // 2u (tanh πu - 1)
            -4.0 * u / ((2.0 * PI * u).exp() + 1.0)
        } else if u == 0.0 {
            2.0 / PI
        } else {
            // 2u (coth πu - 1)
            4.0 * u / (2.0 * PI * u).exp_m1()
        }
    };
    integrate(f, u1, u2, QUAD_TOL, QUAD_PIECES)
}
