//! Supremum estimation for weighted quantities on the disk.
//!
//! Strategy: scan circles |z| = r with uniform angular grids, doubling the
//! count until the circle maximum stabilizes, then climb a dyadic radius
//! ladder r_j = 1 - 2^-j toward the boundary. Doubling keeps sample sets
//! nested, so per-circle maxima are monotone under refinement, and the whole
//! procedure is deterministic: same quantity, same configuration, same bits.
//!
//! A quantity that fails to evaluate at a sample point poisons that sample to
//! +inf and records a diagnostic; it is never dropped silently. Estimates are
//! lower bounds by construction (finitely many samples of a supremum), so a
//! poisoned +inf is an honest "the sup is unbounded here" signal, e.g. for
//! |P| of z^3 at the origin.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Hard cap on samples per circle.
pub const MAX_ANGULAR: usize = 1 << 20;
/// Relative stall threshold that stops angular doubling.
pub const ANGULAR_STALL: f64 = 1e-6;
/// Radii are clipped below 1 by this margin.
pub const RMAX_DEFAULT: f64 = 1.0 - 1e-4;
/// Two top rungs agreeing to this relative tolerance mark a converged norm.
pub const LADDER_STALL: f64 = 1e-4;

/// Sweep configuration shared by norms, criteria, and the CLI.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepConfig {
    /// Number of dyadic ladder rungs 1 - 2^-j, j = 1..=depth.
    pub ladder_depth: usize,
    /// Angular sample count is base_angular * ceil(1/(1-r)), capped.
    pub base_angular: usize,
    /// Radii never exceed this clip.
    pub rmax: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { ladder_depth: 13, base_angular: 256, rmax: RMAX_DEFAULT }
    }
}

/// Result of maximizing a quantity over one circle.
#[derive(Debug, Clone)]
pub struct CircleScan {
    pub radius: f64,
    pub sup: f64,
    pub attained_at: Complex64,
    pub samples_used: usize,
    /// True when a doubling pass changed the maximum by less than
    /// [`ANGULAR_STALL`] relative; false when the cap cut refinement short.
    pub converged: bool,
    /// First poisoned sample, if any.
    pub diagnostic: Option<String>,
}

/// Supremum estimate over the whole disk (up to the radius clip).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub attained_at: Complex64,
    pub samples_used: usize,
    pub converged: bool,
}

/// Per-radius suprema along the ladder, radii strictly increasing in (0, 1).
#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub sups: Vec<f64>,
    pub angular_counts: Vec<usize>,
    pub refined: Vec<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Boundary limsup estimate extrapolated from a profile.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimsupEstimate {
    pub value: f64,
    /// True when the last four rungs are monotone (either direction), the
    /// cheap signal that the profile has settled into its boundary trend.
    pub monotone_tail: bool,
}

/// The dyadic rungs 1 - 2^-j for j = 1..=depth, clipped to rmax,
/// deduplicated, ascending.
pub fn radius_ladder(depth: usize, rmax: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(depth);
    for j in 1..=depth {
        let r = 1.0 - 0.5f64.powi(j as i32);
        let r = r.min(rmax);
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    out
}

/// Maximize q over the circle |z| = r with full refinement bookkeeping.
///
/// Each refinement doubles the angular count; the sample set of every pass
/// contains the previous one, so the running maximum never decreases.
pub fn scan_circle<Q>(q: Q, r: f64, base_angular: usize) -> CircleScan
where
    Q: Fn(Complex64) -> Result<f64>,
{
    debug_assert!((0.0..1.0).contains(&r));
    if r == 0.0 {
        let z = Complex64::new(0.0, 0.0);
        let (v, diag) = eval_poisoned(&q, z);
        return CircleScan {
            radius: r,
            sup: v,
            attained_at: z,
            samples_used: 1,
            converged: true,
            diagnostic: diag,
        };
    }
    let scale = (1.0 / (1.0 - r)).ceil() as usize;
    // Start no higher than a quarter of the cap: a stall can only be
    // observed on a refinement pass, so at least two doublings must fit
    // under MAX_ANGULAR for `converged` to be reachable on dense circles.
    let n0 = (base_angular.saturating_mul(scale)).clamp(16, MAX_ANGULAR / 4);

    let mut best = f64::NEG_INFINITY;
    let mut best_at = Complex64::new(r, 0.0);
    let mut samples_used = 0usize;
    let mut diagnostic: Option<String> = None;
    let mut n = n0;
    let mut prev: Option<f64> = None;
    let mut converged = false;

    loop {
        // Evaluate only the odd multiples on refinement passes; even ones
        // were already seen at the previous count.
        let step = if prev.is_none() { 1 } else { 2 };
        let start = if prev.is_none() { 0 } else { 1 };
        let mut k = start;
        while k < n {
            let theta = std::f64::consts::TAU * (k as f64) / (n as f64);
            let z = Complex64::from_polar(r, theta);
            let (v, diag) = eval_poisoned(&q, z);
            samples_used += 1;
            if diagnostic.is_none() {
                diagnostic = diag;
            }
            if v > best {
                best = v;
                best_at = z;
            }
            k += step;
        }
        if best.is_infinite() {
            // Refinement cannot change a poisoned maximum.
            converged = true;
            break;
        }
        if let Some(p) = prev {
            let delta = best - p;
            let rel = if best == 0.0 { 0.0 } else { delta / best.abs() };
            if rel < ANGULAR_STALL {
                converged = true;
                break;
            }
        }
        if n >= MAX_ANGULAR {
            break;
        }
        prev = Some(best);
        n = (n * 2).min(MAX_ANGULAR);
    }

    CircleScan { radius: r, sup: best, attained_at: best_at, samples_used, converged, diagnostic }
}

fn eval_poisoned<Q>(q: &Q, z: Complex64) -> (f64, Option<String>)
where
    Q: Fn(Complex64) -> Result<f64>,
{
    match q(z) {
        Ok(v) if v.is_nan() => {
            (f64::INFINITY, Some(format!("quantity returned NaN at {z}, poisoned to +inf")))
        }
        Ok(v) => (v, None),
        Err(e) => (f64::INFINITY, Some(format!("poisoned at {z}: {e}"))),
    }
}

/// Supremum of q over the circle |z| = r.
pub fn sup_on_circle<Q>(q: Q, r: f64, base_angular: usize) -> f64
where
    Q: Fn(Complex64) -> Result<f64>,
{
    scan_circle(q, r, base_angular).sup
}

/// Weighted sup-norm over the clipped disk: the maximum of the circle
/// suprema over {0} and the radius ladder, with the full profile attached.
///
/// `converged` requires the two outermost rungs to agree to [`LADDER_STALL`]
/// relative, every scanned circle to have refined to a stall, and no rung to
/// be poisoned.
pub fn sup_norm<Q>(q: Q, cfg: &SweepConfig) -> (SupEstimate, RadialProfile)
where
    Q: Fn(Complex64) -> Result<f64>,
{
    let ladder = radius_ladder(cfg.ladder_depth, cfg.rmax);
    let mut radii = Vec::with_capacity(ladder.len());
    let mut sups = Vec::with_capacity(ladder.len());
    let mut angular_counts = Vec::with_capacity(ladder.len());
    let mut refined = Vec::with_capacity(ladder.len());
    let mut diagnostics = Vec::new();

    let center = scan_circle(&q, 0.0, cfg.base_angular);
    let mut best = center.sup;
    let mut best_at = center.attained_at;
    let mut samples = center.samples_used;
    let mut all_refined = center.converged;
    if let Some(d) = center.diagnostic {
        diagnostics.push(format!("r=0: {d}"));
    }

    for &r in &ladder {
        let scan = scan_circle(&q, r, cfg.base_angular);
        samples += scan.samples_used;
        all_refined &= scan.converged;
        if scan.sup > best {
            best = scan.sup;
            best_at = scan.attained_at;
        }
        if let Some(d) = &scan.diagnostic {
            diagnostics.push(format!("r={r}: {d}"));
        }
        radii.push(r);
        sups.push(scan.sup);
        angular_counts.push(scan.samples_used);
        refined.push(scan.converged);
    }

    let tail_stable = match sups.len() {
        0 | 1 => false,
        n => {
            let a = sups[n - 2];
            let b = sups[n - 1];
            if !a.is_finite() || !b.is_finite() {
                false
            } else {
                let denom = b.abs().max(a.abs()).max(1e-300);
                (b - a).abs() / denom < LADDER_STALL || (a == 0.0 && b == 0.0)
            }
        }
    };

    let estimate = SupEstimate {
        value: best,
        attained_at: best_at,
        samples_used: samples,
        converged: tail_stable && all_refined && best.is_finite(),
    };
    let profile = RadialProfile { radii, sups, angular_counts, refined, diagnostics };
    (estimate, profile)
}

/// Estimate limsup of the quantity as |z| -> 1 from the outermost rungs:
/// the maximum of the last three circle suprema.
///
/// Needs at least 6 rungs so the tail is actually near the boundary.
pub fn limsup_estimate(profile: &RadialProfile) -> Result<LimsupEstimate> {
    let n = profile.sups.len();
    if n < 6 {
        return Err(Error::InsufficientProfile { rungs: n });
    }
    let tail = &profile.sups[n - 3..];
    let value = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last4 = &profile.sups[n - 4..];
    // A settled profile may be constant up to rounding jitter; monotone is
    // judged with a relative slack so that counts as settled. Infinite
    // entries produce NaN differences and correctly fail both directions.
    let scale = last4.iter().fold(1.0f64, |m, &s| m.max(s.abs()));
    let slack = 1e-9 * scale;
    let non_inc = last4.windows(2).all(|w| w[1] - w[0] <= slack);
    let non_dec = last4.windows(2).all(|w| w[0] - w[1] <= slack);
    Ok(LimsupEstimate { value, monotone_tail: non_inc || non_dec })
}
