//! Deterministic low-discrepancy point sets for witness sampling.
//!
//! Everything downstream (orientation witnesses, Schwarz-Pick samples, cover
//! coverage estimates) needs reproducible, well-spread points rather than
//! cryptographic randomness, so we use the additive recurrence driven by the
//! plastic constant. Same index, same point, on every platform.

use num_complex::Complex64;

// 1/rho and 1/rho^2 where rho is the plastic constant, rho^3 = rho + 1.
const ALPHA1: f64 = 0.754_877_666_246_692_8;
const ALPHA2: f64 = 0.569_840_290_998_053_2;

/// Two-dimensional quasi-random sequence on the unit square.
#[derive(Debug, Clone)]
pub struct R2 {
    n: u64,
}

impl R2 {
    pub fn new() -> Self {
        R2 { n: 0 }
    }

    /// Next point of the sequence, components in [0, 1).
    pub fn next_pair(&mut self) -> (f64, f64) {
        self.n += 1;
        let k = self.n as f64;
        ((0.5 + k * ALPHA1).fract(), (0.5 + k * ALPHA2).fract())
    }

    /// Area-uniform point of the closed disk |z| <= radius.
    ///
    /// The radial map r = radius * sqrt(u) never lands exactly on 0 or on the
    /// rim because the recurrence never hits 0 or 1 exactly.
    pub fn next_in_disk(&mut self, radius: f64) -> Complex64 {
        let (u, v) = self.next_pair();
        let r = radius * u.sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * v)
    }

    /// Area-uniform point of the annulus a < |z| < b.
    pub fn next_in_annulus(&mut self, a: f64, b: f64) -> Complex64 {
        let (u, v) = self.next_pair();
        let r = (a * a + u * (b * b - a * a)).sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * v)
    }
}

impl Default for R2 {
    fn default() -> Self {
        Self::new()
    }
}
