//! Annulus-cover verification and derivative-growth inequalities.
//!
//! A cover family is a candidate univalent self-map psi of the disk plus a
//! rotation count M and an overlap parameter rho in (1/2, 1). The rotated
//! copies psi_k = e^{2k pi i/M} psi are supposed to jointly cover the
//! annulus q < |zeta| < 1 with q = 2 rho - 1. Nothing here constructs such
//! a psi; the module measures how close a supplied candidate comes:
//! injectivity is spot-checked on point pairs, coverage and containment are
//! sampled fractions, and the norm channel reuses the disk sup-norm so
//! there is a single source of truth for |P(psi)|(1-|z|^2).

use crate::error::{Error, Result};
use crate::expr::AnalyticExpr;
use crate::harmonic::HarmonicMap;
use crate::operators::{channel_quantity, Channel};
use crate::quasi::R2;
use crate::sampling::{sup_norm, SweepConfig, RMAX_DEFAULT};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Candidate cover family: generator, sheet count, overlap parameter.
#[derive(Debug, Clone)]
pub struct CoverFamily {
    pub psi: AnalyticExpr,
    pub m: usize,
    pub rho: f64,
}

impl CoverFamily {
    pub fn new(psi: AnalyticExpr, m: usize, rho: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadGrid { what: "rotation count m must be positive".into() });
        }
        if !(rho > 0.5 && rho < 1.0) {
            return Err(Error::BadGrid {
                what: format!("rho must lie in (1/2, 1), got {rho}"),
            });
        }
        Ok(CoverFamily { psi, m, rho })
    }

    /// Inner radius of the target annulus.
    pub fn q(&self) -> f64 {
        2.0 * self.rho - 1.0
    }

    fn rotation(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * k as f64 / self.m as f64)
    }
}

/// Measured facts about one cover candidate. Fractions are sampled
/// estimates, never set-equality claims.
#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub m: usize,
    pub rho: f64,
    pub q: f64,
    pub alpha: f64,
    /// No sampled pair collapsed under psi.
    pub injectivity: bool,
    pub pairs_checked: usize,
    /// sup |P(psi)|(1-|z|^2) over the standard ladder.
    pub norm: f64,
    pub norm_ok: bool,
    /// Fraction of annulus samples with a Newton preimage under some psi_k.
    pub coverage: f64,
    pub annulus_samples: usize,
    /// Fraction of disk samples whose image lands in the annulus.
    pub containment: f64,
}

fn self_map_value(psi: &AnalyticExpr, z: Complex64) -> Result<Complex64> {
    let w = psi.eval(z)?;
    if w.norm() >= 1.0 {
        return Err(Error::RangeViolation { at: z, value: w });
    }
    Ok(w)
}

/// Damped analytic Newton for psi(z) = w from one seed. Returns the root
/// when the iteration lands strictly inside the disk with a small residual.
fn newton_root(psi: &AnalyticExpr, w: Complex64, seed: Complex64) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..64 {
        let j = match psi.eval_jet(z) {
            Ok(j) => j,
            Err(_) => return None,
        };
        let res = j.f0 - w;
        if res.norm() < 1e-9 {
            return Some(z);
        }
        if j.f1.norm() < 1e-14 {
            return None;
        }
        let step = res / j.f1;
        let mut lambda = 1.0;
        let mut moved = false;
        while lambda >= 1.0 / 256.0 {
            let cand = z - step * lambda;
            if cand.norm() < 1.0 {
                if let Ok(next) = psi.eval(cand) {
                    if (next - w).norm() <= res.norm() || lambda * step.norm() < 1e-12 {
                        z = cand;
                        moved = true;
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            return None;
        }
        if (lambda * step.norm()) < 1e-13 {
            let j = psi.eval_jet(z).ok()?;
            return if (j.f0 - w).norm() < 1e-9 { Some(z) } else { None };
        }
    }
    None
}

fn has_preimage(psi: &AnalyticExpr, w: Complex64, seeds: &[Complex64]) -> bool {
    seeds.iter().any(|&s| newton_root(psi, w, s).is_some())
}

/// Verify a cover candidate at the given norm bound with sampled coverage.
pub fn verify_cover(
    c: &CoverFamily,
    alpha: f64,
    n_annulus: usize,
    n_pairs: usize,
) -> Result<CoverReport> {
    verify_cover_with(c, alpha, n_annulus, n_pairs, &SweepConfig::default())
}

/// As [`verify_cover`] with an explicit sweep configuration for the norm
/// channel.
pub fn verify_cover_with(
    c: &CoverFamily,
    alpha: f64,
    n_annulus: usize,
    n_pairs: usize,
    cfg: &SweepConfig,
) -> Result<CoverReport> {
    if !(alpha > 0.0) {
        return Err(Error::BadGrid { what: format!("alpha must be positive, got {alpha}") });
    }
    if n_annulus == 0 {
        return Err(Error::BadGrid { what: "annulus sample count must be positive".into() });
    }
    let q = c.q();

    // Injectivity spot check on quasi-random pairs.
    let mut pair_seq = R2::new();
    let mut injective = true;
    for _ in 0..n_pairs {
        let z1 = pair_seq.next_in_disk(RMAX_DEFAULT);
        let z2 = pair_seq.next_in_disk(RMAX_DEFAULT);
        let w1 = self_map_value(&c.psi, z1)?;
        let w2 = self_map_value(&c.psi, z2)?;
        if (w1 - w2).norm() < 1e-10 && (z1 - z2).norm() > 1e-6 {
            injective = false;
        }
    }

    // Norm channel through the operators module, never a private formula.
    let map = HarmonicMap::new("psi", c.psi.clone(), AnalyticExpr::real(0.0))?;
    let quantity = channel_quantity(&map, Channel::PreSchwarzian);
    let (norm_est, _) = sup_norm(&quantity, cfg);
    let norm = norm_est.value;

    // Coverage: each annulus sample needs a preimage under some rotation.
    let mut seed_seq = R2::new();
    let mut seeds: Vec<Complex64> = (0..64).map(|_| seed_seq.next_in_disk(0.98)).collect();
    seeds.push(Complex64::new(0.0, 0.0));
    let mut target_seq = R2::new();
    let mut covered = 0usize;
    for _ in 0..n_annulus {
        let zeta = target_seq.next_in_annulus(q, 1.0);
        let found = (0..c.m).any(|k| {
            // psi_k(z) = zeta  <=>  psi(z) = conj(rot_k) * zeta.
            has_preimage(&c.psi, c.rotation(k).conj() * zeta, &seeds)
        });
        if found {
            covered += 1;
        }
    }

    // Containment: images of disk samples must land in the annulus.
    let mut disk_seq = R2::new();
    let mut contained = 0usize;
    for _ in 0..n_annulus {
        let z = disk_seq.next_in_disk(RMAX_DEFAULT);
        let w = self_map_value(&c.psi, z)?;
        if w.norm() > q {
            contained += 1;
        }
    }

    Ok(CoverReport {
        m: c.m,
        rho: c.rho,
        q,
        alpha,
        injectivity: injective,
        pairs_checked: n_pairs,
        norm,
        norm_ok: norm < alpha,
        coverage: covered as f64 / n_annulus as f64,
        annulus_samples: n_annulus,
        containment: contained as f64 / n_annulus as f64,
    })
}

/// Suprema of the derivative-growth inequalities tied to the pre-Schwarzian
/// norm: with alpha_hat = sup |P|(1-|z|^2), both
/// |P'|(1-|z|^2)^2 <= 4 alpha_hat and
/// |S|(1-|z|^2)^2 <= 4 alpha_hat + alpha_hat^2 / 2
/// hold for locally univalent analytic f. Failure beyond the additive
/// slack indicates a broken operator, not a broken map.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthReport {
    pub alpha_hat: f64,
    pub p_prime_sup: f64,
    pub schwarzian_sup: f64,
    pub p_prime_ok: bool,
    pub schwarzian_ok: bool,
}

/// Measure the growth inequalities over the standard ladder.
pub fn derivative_growth_check(f: &AnalyticExpr) -> Result<GrowthReport> {
    derivative_growth_check_with(f, &SweepConfig::default())
}

/// As [`derivative_growth_check`] with an explicit sweep configuration.
pub fn derivative_growth_check_with(
    f: &AnalyticExpr,
    cfg: &SweepConfig,
) -> Result<GrowthReport> {
    let map = HarmonicMap::new("growth", f.clone(), AnalyticExpr::real(0.0))?;
    let (alpha_est, _) = sup_norm(&channel_quantity(&map, Channel::PreSchwarzian), cfg);
    let (sch_est, _) = sup_norm(&channel_quantity(&map, Channel::Nehari), cfg);

    let pp = |z: Complex64| -> Result<f64> {
        let j = f.eval_jet(z)?;
        if j.f1.norm() < crate::harmonic::HP_EPS {
            return Err(Error::MathDomain { at: z, what: "derivative vanished".into() });
        }
        let p = j.f2 / j.f1;
        let p_prime = j.f3 / j.f1 - p * p;
        let w = 1.0 - z.norm_sqr();
        Ok(p_prime.norm() * w * w)
    };
    let (pp_est, _) = sup_norm(&pp, cfg);

    let alpha_hat = alpha_est.value;
    Ok(GrowthReport {
        alpha_hat,
        p_prime_sup: pp_est.value,
        schwarzian_sup: sch_est.value,
        p_prime_ok: pp_est.value <= 4.0 * alpha_hat + 1e-9,
        schwarzian_ok: sch_est.value <= 4.0 * alpha_hat + alpha_hat * alpha_hat / 2.0 + 1e-9,
    })
}
