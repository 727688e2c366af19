//! Harmonic mappings f = h + conj(g) in canonical form.
//!
//! The constructor normalizes g(0) = 0 (the canonical decomposition is unique
//! up to that constant) and rejects maps that are already orientation
//! reversing at the origin. Degenerate seeds with h'(0) = g'(0) = 0, such as
//! h = z^3, are admitted; orientation for those is judged pointwise by the
//! Jacobian wherever the map is actually evaluated.

use crate::error::{Error, Result};
use crate::expr::{AnalyticExpr, Jet3};
use num_complex::Complex64;

/// Dilatation value and first two derivatives: omega = g'/h'.
#[derive(Debug, Clone, Copy)]
pub struct DilatationJet {
    pub w0: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
}

/// Value and Jacobian of f at one point.
#[derive(Debug, Clone, Copy)]
pub struct PointEval {
    pub value: Complex64,
    /// |h'|^2 - |g'|^2; positive iff f is locally univalent and orientation
    /// preserving at the point.
    pub jacobian: f64,
}

impl PointEval {
    pub fn orientation_ok(&self) -> bool {
        self.jacobian > 0.0
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicMap {
    label: String,
    h: AnalyticExpr,
    g: AnalyticExpr,
}

/// Threshold below which |h'| is treated as a critical point of h.
pub const HP_EPS: f64 = 1e-14;

impl HarmonicMap {
    /// Canonicalize and validate a pair of analytic parts.
    ///
    /// Fails with [`Error::OrientationError`] when |h'(0)| <= |g'(0)| with
    /// g'(0) != 0; both derivatives vanishing is allowed (see module docs).
    pub fn new(label: impl Into<String>, h: AnalyticExpr, g: AnalyticExpr) -> Result<Self> {
        let origin = Complex64::new(0.0, 0.0);
        let hj = h.eval_jet(origin)?;
        let gj = g.eval_jet(origin)?;
        let hp0 = hj.f1.norm();
        let gp0 = gj.f1.norm();
        if gp0 > 0.0 && hp0 <= gp0 {
            return Err(Error::OrientationError { hp0, gp0 });
        }
        let g = if gj.f0 == origin {
            g
        } else {
            AnalyticExpr::sub(&g, &AnalyticExpr::constant(gj.f0))
        };
        Ok(HarmonicMap { label: label.into(), h, g })
    }

    /// Assemble without canonicalization or seed checks. Used for exact
    /// compositions f o phi, where shifting g by a constant would change the
    /// map's values.
    pub(crate) fn from_parts_raw(label: String, h: AnalyticExpr, g: AnalyticExpr) -> Self {
        HarmonicMap { label, h, g }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn h(&self) -> &AnalyticExpr {
        &self.h
    }

    pub fn g(&self) -> &AnalyticExpr {
        &self.g
    }

    /// True when g is syntactically the zero constant, which is how analytic
    /// maps are written as harmonic ones.
    pub fn is_analytic(&self) -> bool {
        self.g.is_const_zero()
    }

    /// Jets of both analytic parts at z.
    pub fn jets(&self, z: Complex64) -> Result<(Jet3, Jet3)> {
        Ok((self.h.eval_jet(z)?, self.g.eval_jet(z)?))
    }

    /// f(z) = h(z) + conj(g(z)) together with the Jacobian.
    pub fn eval_point(&self, z: Complex64) -> Result<PointEval> {
        let (hj, gj) = self.jets(z)?;
        Ok(PointEval {
            value: hj.f0 + gj.f0.conj(),
            jacobian: hj.f1.norm_sqr() - gj.f1.norm_sqr(),
        })
    }

    /// omega = g'/h' with two derivatives, via the quotient recurrence on
    /// the shifted jets. Fails with [`Error::MathDomain`] at critical points
    /// of h.
    pub fn dilatation_jet(&self, z: Complex64) -> Result<DilatationJet> {
        let (hj, gj) = self.jets(z)?;
        dilatation_from_jets(&hj, &gj, z)
    }

    /// The composition f o phi = (h o phi) + conj(g o phi), exact: the g part
    /// is not re-normalized, so values, operators, and preimage counts all
    /// refer to the true composite.
    pub fn compose_analytic(&self, phi: &AnalyticExpr) -> HarmonicMap {
        HarmonicMap::from_parts_raw(
            format!("{}.pullback", self.label),
            AnalyticExpr::compose(&self.h, phi),
            AnalyticExpr::compose(&self.g, phi),
        )
    }
}

/// Quotient recurrence for omega = g'/h' one order down: the inputs are
/// order-3 jets of h and g, the output is value/first/second of omega.
pub(crate) fn dilatation_from_jets(hj: &Jet3, gj: &Jet3, z: Complex64) -> Result<DilatationJet> {
    if hj.f1.norm() < HP_EPS {
        return Err(Error::MathDomain { at: z, what: "h' vanishes, dilatation undefined".into() });
    }
    let w0 = gj.f1 / hj.f1;
    let w1 = (gj.f2 - w0 * hj.f2) / hj.f1;
    let w2 = (gj.f3 - 2.0 * w1 * hj.f2 - w0 * hj.f3) / hj.f1;
    Ok(DilatationJet { w0, w1, w2 })
}

/// Convenience constructor from expression sources.
pub fn make_harmonic(label: &str, h_src: &str, g_src: &str) -> Result<HarmonicMap> {
    HarmonicMap::new(label, AnalyticExpr::parse(h_src)?, AnalyticExpr::parse(g_src)?)
}
