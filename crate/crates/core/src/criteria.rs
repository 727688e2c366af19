//! Verdict engine for the univalence and bounded-valence criteria.
//!
//! Norm criteria compare a disk sup-norm against a constant; limsup criteria
//! compare the boundary trend of a weighted channel. Every verdict carries
//! the measured quantity, the threshold, and the margin, and never claims
//! more than "numerically indicated": the quantity is a sampled estimate.
//!
//! A map that fails local univalence at any sampled point (h' vanishing
//! inside the disk, so the weighted channel poisons to +inf there) cannot
//! satisfy any criterion: the hypotheses of all of them include a
//! sense-preserving, locally univalent map. The poison propagates into the
//! quantity, so `satisfied == (quantity < threshold)` stays exact.

use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::operators::{channel_quantity, Channel};
use crate::sampling::{limsup_estimate, radius_ladder, scan_circle, sup_norm, SweepConfig};
use crate::valence::{valence_sweep, GridSpec};
use serde::Serialize;

/// The six criterion inequalities, named on the wire by the constant they
/// bound and the operator they bound it with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    /// sup |P(f)|(1-|z|^2) < 1 for analytic f (univalence).
    #[serde(rename = "becker_analytic")]
    BeckerAnalytic,
    /// sup |S(f)|(1-|z|^2)^2 < 2 for analytic f (univalence).
    #[serde(rename = "nehari_analytic")]
    NehariAnalytic,
    /// sup [ |P_H|(1-|z|^2) + |omega*| ] < 1 (univalence, harmonic).
    #[serde(rename = "becker_harmonic")]
    BeckerHarmonic,
    /// limsup_{|z|->1} [ |P_H|(1-|z|^2) + |omega*| ] < 1 (bounded valence).
    #[serde(rename = "thm_main_pre_schwarzian")]
    LimsupPreSchwarzian,
    /// limsup_{|z|->1} |S_H|(1-|z|^2)^2 < delta0 (bounded valence).
    #[serde(rename = "thm_main2_schwarzian")]
    LimsupSchwarzian,
    /// sup over r0 <= |z| < 1 of |S|(1-|z|^2)^2 < 2 (analytic, annulus).
    #[serde(rename = "schwarz_annulus")]
    SchwarzAnnulus,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::BeckerAnalytic,
        Criterion::NehariAnalytic,
        Criterion::BeckerHarmonic,
        Criterion::LimsupPreSchwarzian,
        Criterion::LimsupSchwarzian,
        Criterion::SchwarzAnnulus,
    ];

    pub fn wire_name(&self) -> &'static str {
        match self {
            Criterion::BeckerAnalytic => "becker_analytic",
            Criterion::NehariAnalytic => "nehari_analytic",
            Criterion::BeckerHarmonic => "becker_harmonic",
            Criterion::LimsupPreSchwarzian => "thm_main_pre_schwarzian",
            Criterion::LimsupSchwarzian => "thm_main2_schwarzian",
            Criterion::SchwarzAnnulus => "schwarz_annulus",
        }
    }

    pub fn from_wire_name(name: &str) -> Option<Criterion> {
        Criterion::ALL.iter().copied().find(|c| c.wire_name() == name)
    }

    /// Criteria whose hypotheses require g identically zero.
    pub fn analytic_only(&self) -> bool {
        matches!(
            self,
            Criterion::BeckerAnalytic | Criterion::NehariAnalytic | Criterion::SchwarzAnnulus
        )
    }

    fn is_univalence(&self) -> bool {
        matches!(
            self,
            Criterion::BeckerAnalytic | Criterion::NehariAnalytic | Criterion::BeckerHarmonic
        )
    }
}

/// How far the estimate was pushed toward the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certitude {
    /// Ladder fit inside the radius clip; the value is a plain estimate.
    #[serde(rename = "estimate")]
    Estimate,
    /// Requested rungs were clipped at the maximum radius; the boundary
    /// trend is pinned at the clip rather than approaching 1.
    #[serde(rename = "boundary-clipped")]
    BoundaryClipped,
}

/// Inputs a criterion may need beyond the map itself.
#[derive(Debug, Clone, Copy)]
pub struct CheckParams {
    /// Threshold for the limsup Schwarzian criterion. No default exists;
    /// the sharp constant is an open question.
    pub delta0: Option<f64>,
    /// Inner radius of the annulus criterion.
    pub r0: Option<f64>,
    pub sweep: SweepConfig,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { delta0: None, r0: None, sweep: SweepConfig::default() }
    }
}

/// Parameter echo serialized with each verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerdictParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Verdict {
    pub criterion: Criterion,
    /// Estimated sup or limsup; +inf when the map failed its hypotheses at
    /// a sampled point.
    pub quantity: f64,
    pub threshold: f64,
    pub satisfied: bool,
    /// threshold - quantity.
    pub margin: f64,
    pub certitude: Certitude,
    pub params: VerdictParams,
}

fn ensure_analytic(f: &HarmonicMap, criterion: Criterion) -> Result<()> {
    if f.is_analytic() {
        return Ok(());
    }
    // Not syntactically zero; accept when g's jets vanish on a witness set.
    let mut seq = crate::quasi::R2::new();
    for _ in 0..12 {
        let z = seq.next_in_disk(0.9);
        let (_, gj) = f.jets(z)?;
        let size = gj.f0.norm().max(gj.f1.norm()).max(gj.f2.norm()).max(gj.f3.norm());
        if size > 1e-13 {
            return Err(Error::AnalyticOnly { criterion: criterion.wire_name().into() });
        }
    }
    Ok(())
}

fn poisoned(profile_diags: &[String]) -> bool {
    !profile_diags.is_empty()
}

/// Evaluate one criterion for f.
pub fn check(f: &HarmonicMap, criterion: Criterion, params: &CheckParams) -> Result<Verdict> {
    if criterion.analytic_only() {
        ensure_analytic(f, criterion)?;
    }
    let cfg = params.sweep;
    let clipped = 1.0 - 0.5f64.powi(cfg.ladder_depth as i32) > cfg.rmax;
    let certitude = if clipped { Certitude::BoundaryClipped } else { Certitude::Estimate };

    let mut echo = VerdictParams { delta0: None, r0: None };
    let (quantity, threshold) = match criterion {
        Criterion::BeckerAnalytic | Criterion::BeckerHarmonic => {
            let q = channel_quantity(f, Channel::Becker);
            let (est, _) = sup_norm(&q, &cfg);
            (est.value, 1.0)
        }
        Criterion::NehariAnalytic => {
            let q = channel_quantity(f, Channel::Nehari);
            let (est, _) = sup_norm(&q, &cfg);
            (est.value, 2.0)
        }
        Criterion::LimsupPreSchwarzian => {
            let q = channel_quantity(f, Channel::Becker);
            let (_, profile) = sup_norm(&q, &cfg);
            let value = if poisoned(&profile.diagnostics) {
                f64::INFINITY
            } else {
                limsup_estimate(&profile)?.value
            };
            (value, 1.0)
        }
        Criterion::LimsupSchwarzian => {
            let delta0 = match params.delta0 {
                Some(d) if d > 0.0 => d,
                _ => return Err(Error::MissingParam { name: "delta0" }),
            };
            echo.delta0 = Some(delta0);
            let q = channel_quantity(f, Channel::Nehari);
            let (_, profile) = sup_norm(&q, &cfg);
            let value = if poisoned(&profile.diagnostics) {
                f64::INFINITY
            } else {
                limsup_estimate(&profile)?.value
            };
            (value, delta0)
        }
        Criterion::SchwarzAnnulus => {
            let r0 = match params.r0 {
                Some(r) if (0.0..1.0).contains(&r) => r,
                _ => return Err(Error::MissingParam { name: "r0" }),
            };
            echo.r0 = Some(r0);
            let q = channel_quantity(f, Channel::Nehari);
            let mut value = f64::NEG_INFINITY;
            let mut any_poison = false;
            let mut radii: Vec<f64> = radius_ladder(cfg.ladder_depth, cfg.rmax)
                .into_iter()
                .filter(|&r| r > r0)
                .collect();
            radii.insert(0, r0.min(cfg.rmax));
            for r in radii {
                let scan = scan_circle(&q, r, cfg.base_angular);
                any_poison |= scan.diagnostic.is_some();
                value = value.max(scan.sup);
            }
            if any_poison {
                value = f64::INFINITY;
            }
            (value, 2.0)
        }
    };

    Ok(Verdict {
        criterion,
        quantity,
        threshold,
        satisfied: quantity < threshold,
        margin: threshold - quantity,
        certitude,
        params: echo,
    })
}

/// What a verdict claims about valence, if anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prediction {
    Univalent,
    Bounded,
    None,
}

/// Outcome of holding a verdict against measured valence.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionCheck {
    pub predicted: Prediction,
    pub measured_max: i64,
    pub consistent: bool,
    /// Valence at the inner comparison radius, for bounded-valence claims.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_inner: Option<i64>,
}

/// Cross-validate a verdict against the valence oracles.
///
/// A satisfied univalence criterion must see max_count <= 1 at radius r; a
/// satisfied bounded-valence criterion must see the same max_count at the
/// previous dyadic rung and at r. Unsatisfied verdicts predict nothing and
/// are consistent by definition (the criteria are sufficient, not
/// necessary).
pub fn validate_prediction(
    f: &HarmonicMap,
    v: &Verdict,
    r: f64,
    wgrid: &GridSpec,
) -> Result<PredictionCheck> {
    let predicted = if !v.satisfied {
        Prediction::None
    } else if v.criterion.is_univalence() {
        Prediction::Univalent
    } else {
        Prediction::Bounded
    };
    match predicted {
        Prediction::Univalent => {
            let report = valence_sweep(f, r, wgrid)?;
            Ok(PredictionCheck {
                predicted,
                measured_max: report.max_count,
                consistent: report.max_count <= 1,
                measured_inner: None,
            })
        }
        Prediction::Bounded => {
            let r_inner = if r > 0.5 { 1.0 - 2.0 * (1.0 - r) } else { 0.5 * r };
            let inner = valence_sweep(f, r_inner, wgrid)?;
            let outer = valence_sweep(f, r, wgrid)?;
            Ok(PredictionCheck {
                predicted,
                measured_max: outer.max_count,
                consistent: outer.max_count == inner.max_count,
                measured_inner: Some(inner.max_count),
            })
        }
        Prediction::None => {
            let report = valence_sweep(f, r, wgrid)?;
            Ok(PredictionCheck {
                predicted,
                measured_max: report.max_count,
                consistent: true,
                measured_inner: None,
            })
        }
    }
}
