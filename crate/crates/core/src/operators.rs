//! Schwarzian-type differential operators and their weighted moduli.
//!
//! For analytic f: P(f) = f''/f', S(f) = f'''/f' - (3/2)(f''/f')^2.
//! For harmonic f = h + conj(g) with dilatation omega = g'/h':
//!
//! ```text
//! P_H(f) = P(h) - conj(omega) omega' / (1 - |omega|^2)
//! S_H(f) = S(h) + conj(omega)/(1 - |omega|^2) * (P(h) omega' - omega'')
//!          - (3/2) (conj(omega) omega' / (1 - |omega|^2))^2
//! omega*(z) = omega'(z) (1 - |z|^2) / (1 - |omega(z)|^2)
//! ```
//!
//! The weighted scalar channels attach the hyperbolic weights:
//! pre_q = |P_H|(1-|z|^2), nehari_q = |S_H|(1-|z|^2)^2, and
//! becker_q = pre_q + |omega*| exactly as computed, which is the left side of
//! the harmonic Becker inequality.
//!
//! When g is the literal zero constant the harmonic operators return the
//! analytic ones bit for bit; no dilatation arithmetic runs at all.

use crate::error::{Error, Result};
use crate::expr::{AnalyticExpr, Jet3};
use crate::harmonic::{dilatation_from_jets, HarmonicMap, HP_EPS};
use num_complex::Complex64;

/// The weight 1 - |omega|^2 must exceed this or the hyperbolic terms are
/// declared degenerate.
pub const UNIMODULAR_EPS: f64 = 1e-12;

/// Operator values at a single point.
#[derive(Debug, Clone, Copy)]
pub struct OperatorValues {
    /// Pre-Schwarzian (harmonic version for non-trivial dilatation).
    pub p: Complex64,
    /// Schwarzian (harmonic version for non-trivial dilatation).
    pub s: Complex64,
    /// Hyperbolic derivative of the dilatation; 0 for analytic maps.
    pub hyp: Complex64,
    /// |p| (1 - |z|^2).
    pub pre_q: f64,
    /// |s| (1 - |z|^2)^2.
    pub nehari_q: f64,
    /// pre_q + |hyp|.
    pub becker_q: f64,
}

/// Residuals of the composition identities at one point.
#[derive(Debug, Clone, Copy)]
pub struct ChainRuleResidual {
    /// | P_H(f o phi) - (P_H(f) o phi) phi' - phi''/phi' |.
    pub pre_res: f64,
    /// | S_H(f o phi) - (S_H(f) o phi) phi'^2 - S(phi) |.
    pub sch_res: f64,
    /// |omega*_{f o phi}(z)| - |omega*_f(phi(z))|; nonpositive up to rounding
    /// by Schwarz-Pick, zero when phi is an automorphism.
    pub hyp_gap: f64,
}

fn weight(z: Complex64) -> f64 {
    1.0 - z.norm_sqr()
}

/// P, S, and weighted channels for an analytic jet at z.
pub fn analytic_operators(j: &Jet3, z: Complex64) -> Result<OperatorValues> {
    if j.f1.norm() < HP_EPS {
        return Err(Error::MathDomain {
            at: z,
            what: "f' vanishes, pre-Schwarzian undefined".into(),
        });
    }
    let p = j.f2 / j.f1;
    let s = j.f3 / j.f1 - 1.5 * p * p;
    let w = weight(z);
    let pre_q = p.norm() * w;
    Ok(OperatorValues {
        p,
        s,
        hyp: Complex64::new(0.0, 0.0),
        pre_q,
        nehari_q: s.norm() * w * w,
        becker_q: pre_q,
    })
}

/// Harmonic P_H, S_H, hyperbolic derivative, and weighted channels at z.
pub fn harmonic_operators(f: &HarmonicMap, z: Complex64) -> Result<OperatorValues> {
    let (hj, gj) = f.jets(z)?;
    if f.is_analytic() {
        return analytic_operators(&hj, z);
    }
    if hj.f1.norm() < HP_EPS {
        return Err(Error::MathDomain {
            at: z,
            what: "h' vanishes, harmonic operators undefined".into(),
        });
    }
    let dil = dilatation_from_jets(&hj, &gj, z)?;
    let d = 1.0 - dil.w0.norm_sqr();
    if d < UNIMODULAR_EPS {
        return Err(Error::DilatationUnimodular { at: z });
    }
    let ph = hj.f2 / hj.f1;
    let sh = hj.f3 / hj.f1 - 1.5 * ph * ph;
    let corr = dil.w0.conj() * dil.w1 / d;
    let p = ph - corr;
    let s = sh + (dil.w0.conj() / d) * (ph * dil.w1 - dil.w2) - 1.5 * corr * corr;
    let w = weight(z);
    let hyp = dil.w1 * w / d;
    let pre_q = p.norm() * w;
    Ok(OperatorValues {
        p,
        s,
        hyp,
        pre_q,
        nehari_q: s.norm() * w * w,
        becker_q: pre_q + hyp.norm(),
    })
}

/// Measure how well the composition identities hold at z for the
/// reparametrization phi, which must map the disk into itself and be locally
/// univalent at z.
pub fn chain_rule_residual(
    f: &HarmonicMap,
    phi: &AnalyticExpr,
    z: Complex64,
) -> Result<ChainRuleResidual> {
    let pj = phi.eval_jet(z)?;
    if !(pj.f0.norm_sqr() < 1.0) {
        return Err(Error::RangeViolation { at: z, value: pj.f0 });
    }
    if pj.f1.norm() < HP_EPS {
        return Err(Error::MathDomain {
            at: z,
            what: "phi' vanishes, chain rule undefined".into(),
        });
    }
    let pullback = f.compose_analytic(phi);
    let lhs = harmonic_operators(&pullback, z)?;
    let at_image = harmonic_operators(f, pj.f0)?;

    let p_phi = pj.f2 / pj.f1;
    let s_phi = pj.f3 / pj.f1 - 1.5 * p_phi * p_phi;

    let pre_rhs = at_image.p * pj.f1 + p_phi;
    let sch_rhs = at_image.s * pj.f1 * pj.f1 + s_phi;

    Ok(ChainRuleResidual {
        pre_res: (lhs.p - pre_rhs).norm(),
        sch_res: (lhs.s - sch_rhs).norm(),
        hyp_gap: lhs.hyp.norm() - at_image.hyp.norm(),
    })
}

/// Weighted scalar channels a radial sweep can maximize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// |P_H| (1-|z|^2)
    PreSchwarzian,
    /// |S_H| (1-|z|^2)^2
    Nehari,
    /// |P_H| (1-|z|^2) + |omega*|
    Becker,
    /// |omega*|
    Hyperbolic,
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::PreSchwarzian => "pre_schwarzian",
            Channel::Nehari => "schwarzian",
            Channel::Becker => "becker",
            Channel::Hyperbolic => "hyperbolic",
        }
    }
}

/// Closure evaluating one channel of f, suitable for the sampling layer.
pub fn channel_quantity(f: &HarmonicMap, ch: Channel) -> impl Fn(Complex64) -> Result<f64> + '_ {
    move |z| {
        let ops = harmonic_operators(f, z)?;
        Ok(match ch {
            Channel::PreSchwarzian => ops.pre_q,
            Channel::Nehari => ops.nehari_q,
            Channel::Becker => ops.becker_q,
            Channel::Hyperbolic => ops.hyp.norm(),
        })
    }
}
