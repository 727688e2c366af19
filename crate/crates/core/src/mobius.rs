//! Builders for Möbius transformations and disk automorphisms.
//!
//! Automorphisms e^{i theta} (z - a)/(1 - conj(a) z) are the equality cases
//! of Schwarz-Pick and the natural reparametrizations in the chain rules, so
//! tests and calibration sweeps construct them constantly. The primitive
//! (antiderivative) turns an automorphism into a dilatation: g with
//! g' = phi gives the harmonic map (z, g) whose dilatation is exactly phi.

use crate::expr::AnalyticExpr;
use num_complex::Complex64;

/// (a z + b) / (c z + d).
pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> AnalyticExpr {
    let z = AnalyticExpr::var();
    let num = AnalyticExpr::add(&AnalyticExpr::mul(&AnalyticExpr::constant(a), &z), &AnalyticExpr::constant(b));
    let den = AnalyticExpr::add(&AnalyticExpr::mul(&AnalyticExpr::constant(c), &z), &AnalyticExpr::constant(d));
    AnalyticExpr::div(&num, &den)
}

/// Disk automorphism e^{i theta} (z - a)/(1 - conj(a) z), |a| < 1.
pub fn automorphism(a: Complex64, theta: f64) -> AnalyticExpr {
    let rot = Complex64::from_polar(1.0, theta);
    mobius(rot, -rot * a, -a.conj(), Complex64::new(1.0, 0.0))
}

/// Antiderivative of [`automorphism`] vanishing at 0.
///
/// For a != 0 the closed form is
/// e^{i theta} [ -z/conj(a) - (1-|a|^2)/conj(a)^2 * log(1 - conj(a) z) ],
/// whose log argument stays in the right half-plane on the disk and so never
/// meets the branch cut. For a = 0 it degenerates to e^{i theta} z^2 / 2.
pub fn automorphism_primitive(a: Complex64, theta: f64) -> AnalyticExpr {
    let z = AnalyticExpr::var();
    let rot = AnalyticExpr::constant(Complex64::from_polar(1.0, theta));
    if a.norm() < 1e-12 {
        let half_sq = AnalyticExpr::mul(&AnalyticExpr::real(0.5), &AnalyticExpr::powi(&z, 2));
        return AnalyticExpr::mul(&rot, &half_sq);
    }
    let ac = a.conj();
    let lin = AnalyticExpr::mul(&AnalyticExpr::constant(-1.0 / ac), &z);
    let log_arg = AnalyticExpr::sub(
        &AnalyticExpr::real(1.0),
        &AnalyticExpr::mul(&AnalyticExpr::constant(ac), &z),
    );
    let coeff = AnalyticExpr::constant(-(1.0 - a.norm_sqr()) / (ac * ac));
    let logterm = AnalyticExpr::mul(&coeff, &AnalyticExpr::log(&log_arg));
    let sum = AnalyticExpr::add(&lin, &logterm);
    // Shift so the primitive vanishes at 0: the log term contributes 0 there,
    // so the sum already does.
    AnalyticExpr::mul(&rot, &sum)
}
