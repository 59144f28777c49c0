//! Spectral measures on the archimedean eigenvalue lines, the Sato-Tate
//! measures `Φ_𝔭`, and products over boxes.

mod boxes;
pub mod quad;
mod sato_tate;
mod spectral;

use thiserror::Error;

pub use boxes::{box_measure, BoxMeasureKind, SpectralBox};
pub use quad::Estimate;
pub use sato_tate::SatoTateMeasure;
pub use spectral::{discrete_series_point, is_discrete_series_point, MeasureKind, SpectralMeasure};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("interval [{0}, {1}] has a > b")]
    InvalidInterval(f64, f64),
    #[error("unbounded interval")]
    Unbounded,
    #[error("unknown measure kind {0:?}")]
    UnknownKind(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("endpoint {value} of coordinate {coordinate} is a discrete series eigenvalue")]
    ForbiddenEndpoint { coordinate: usize, value: f64 },
    #[error("quadrature error {0} exceeds the tolerance")]
    Inaccurate(f64),
}

/// Values of `npl` on the signed ν-interval `[s1, s2]` and of `pl` on its
/// image under `λ = 1/4 - ν²` (see [`SpectralMeasure`] for the coordinate).
/// The part on the imaginary axis and the part on the real axis are
/// evaluated separately.
pub fn npl_consistency(s1: f64, s2: f64, parity: u8) -> Result<(f64, f64), MeasureError> {
    if !s1.is_finite() || !s2.is_finite() {
        return Err(MeasureError::Unbounded);
    }
    if s1 > s2 {
        return Err(MeasureError::InvalidInterval(s1, s2));
    }
    if s1 == s2 && s1 == 0.0 {
        return Ok((0.0, 0.0));
    }
    let parity = parity % 2;
    let npl = SpectralMeasure::new(if parity == 0 { MeasureKind::Npl0 } else { MeasureKind::Npl1 });
    let pl = SpectralMeasure::new(MeasureKind::plancherel(parity));
    let lambda = |s: f64| if s <= 0.0 { 0.25 + s * s } else { 0.25 - s * s };
    let mut pieces = Vec::new();
    if s1 < 0.0 {
        pieces.push((s1, s2.min(0.0)));
    }
    if s2 > 0.0 {
        pieces.push((s1.max(0.0), s2));
    }
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (a, b) in pieces {
        lhs += npl.interval(a, b)?.value;
        // λ is decreasing in s
        rhs += pl.interval(lambda(b), lambda(a))?.value;
    }
    Ok((lhs, rhs))
}
