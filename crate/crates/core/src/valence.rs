//! Preimage counting on subdisks |z| < r.
//!
//! Two independent counters answer "how many solutions does f(z) = w have":
//!
//! * [`winding_number`]: the total change of arg(f(z) - w) around |z| = r,
//!   divided by 2 pi. For orientation-preserving maps (positive Jacobian)
//!   every preimage contributes +1, with multiplicity.
//! * [`preimages_newton`]: damped Newton iteration from a triangular seed
//!   lattice filling the subdisk, deduplicated. Finds the distinct roots but
//!   is blind to multiplicity.
//!
//! [`valence_sweep`] runs both across a grid of targets and cross-checks
//! them; a disagreement or a failed computation flags the target instead of
//! aborting the sweep. The sweep's max_count is the measured valence on the
//! subdisk, a lower bound for the valence on the whole disk.
//!
//! Contours that pass too close to a preimage make the argument increments
//! unstable, so the contour radius is nudged outward by 1e-4 up to three
//! times before giving up. The winding walk keeps every argument increment
//! below pi/2 by bisection; initial sampling is dense enough (128 segments)
//! that the walk only ever refines local features.

use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::quasi::R2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Newton seed lattices larger than this abort with SeedBudgetExceeded.
pub const DEFAULT_SEED_BUDGET: usize = 250_000;
/// Witness points used to certify a positive Jacobian inside the contour.
const WITNESS_COUNT: usize = 160;
/// Initial contour segments before adaptive bisection.
const CONTOUR_SEGMENTS: usize = 128;
/// Bisection depth cap; beyond this the contour is declared degenerate.
const MAX_DEPTH: u32 = 24;

/// Rectangular target grid, endpoints inclusive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    /// (lo, hi, n) along the real axis.
    pub re: (f64, f64, usize),
    /// (lo, hi, n) along the imaginary axis.
    pub im: (f64, f64, usize),
}

impl GridSpec {
    pub fn new(re: (f64, f64, usize), im: (f64, f64, usize)) -> Result<Self> {
        let g = GridSpec { re, im };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi, n)) in [("re", self.re), ("im", self.im)] {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::BadGrid { what: format!("{name} endpoints must be finite") });
            }
            if n == 0 {
                return Err(Error::BadGrid { what: format!("{name} count must be positive") });
            }
            if lo > hi {
                return Err(Error::BadGrid { what: format!("{name} range is reversed") });
            }
        }
        Ok(())
    }

    /// Row-major targets, imaginary axis outer.
    pub fn targets(&self) -> Vec<Complex64> {
        let (rlo, rhi, rn) = self.re;
        let (ilo, ihi, inn) = self.im;
        let step = |lo: f64, hi: f64, n: usize, k: usize| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * (k as f64) / ((n - 1) as f64)
            }
        };
        let mut out = Vec::with_capacity(rn * inn);
        for iy in 0..inn {
            let y = step(ilo, ihi, inn, iy);
            for ix in 0..rn {
                out.push(Complex64::new(step(rlo, rhi, rn, ix), y));
            }
        }
        out
    }
}

/// Winding count plus how it was obtained.
#[derive(Debug, Clone, Copy)]
pub struct WindingOutcome {
    pub count: i64,
    /// Contour radius actually used after perturbation.
    pub radius_used: f64,
    pub perturbed: bool,
    pub evals: usize,
}

/// Number of preimages of w in |z| < r, counted with multiplicity.
pub fn winding_number(f: &HarmonicMap, w: Complex64, r: f64) -> Result<i64> {
    Ok(winding_number_detailed(f, w, r)?.count)
}

/// As [`winding_number`], keeping the perturbation bookkeeping.
pub fn winding_number_detailed(f: &HarmonicMap, w: Complex64, r: f64) -> Result<WindingOutcome> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::BadGrid { what: format!("contour radius {r} not in (0, 1)") });
    }
    check_witnesses(f, r)?;
    let mut last_depth_failure = None;
    for attempt in 0..4 {
        let ra = r + attempt as f64 * 1e-4;
        if ra >= 1.0 - 1e-9 {
            break;
        }
        match walk_contour(f, w, ra) {
            Ok((turns, evals)) => {
                let count = turns.round();
                if (turns - count).abs() > 1e-6 {
                    return Err(Error::NonConvergence {
                        what: format!("winding sum {turns} is not an integer"),
                    });
                }
                let count = count as i64;
                if count < 0 {
                    return Err(Error::OrientationViolation {
                        at: Complex64::new(ra, 0.0),
                        jacobian: -1.0,
                    });
                }
                return Ok(WindingOutcome {
                    count,
                    radius_used: ra,
                    perturbed: attempt > 0,
                    evals,
                });
            }
            Err(Walk::NearTarget) => continue,
            Err(Walk::DepthExhausted) => {
                // A root hugging the contour forces unbounded bisection;
                // treat like a near hit and nudge outward.
                last_depth_failure = Some(attempt);
                continue;
            }
            Err(Walk::Fatal(e)) => return Err(e),
        }
    }
    if last_depth_failure == Some(3) {
        return Err(Error::NonConvergence {
            what: format!("contour bisection exceeded depth {MAX_DEPTH} after perturbations"),
        });
    }
    Err(Error::ContourThroughTarget { target: w, radius: r })
}

fn check_witnesses(f: &HarmonicMap, r: f64) -> Result<()> {
    let mut seq = R2::new();
    for _ in 0..WITNESS_COUNT {
        let z = seq.next_in_disk(r);
        let p = f.eval_point(z)?;
        if p.jacobian <= 0.0 {
            return Err(Error::OrientationViolation { at: z, jacobian: p.jacobian });
        }
    }
    Ok(())
}

enum Walk {
    /// f - w became too small on the contour; nudge and retry.
    NearTarget,
    DepthExhausted,
    Fatal(Error),
}

fn contour_value(
    f: &HarmonicMap,
    w: Complex64,
    r: f64,
    theta: f64,
    evals: &mut usize,
) -> std::result::Result<Complex64, Walk> {
    let z = Complex64::from_polar(r, theta);
    let p = f.eval_point(z).map_err(Walk::Fatal)?;
    *evals += 1;
    if p.jacobian <= 0.0 {
        return Err(Walk::Fatal(Error::OrientationViolation { at: z, jacobian: p.jacobian }));
    }
    Ok(p.value - w)
}

// Walk |z| = r accumulating arg increments of v = f(z) - w, bisecting any
// segment whose increment reaches pi/2. Returns total turns (sum / 2 pi).
fn walk_contour(f: &HarmonicMap, w: Complex64, r: f64) -> std::result::Result<(f64, usize), Walk> {
    let mut evals = 0usize;
    let n = CONTOUR_SEGMENTS;
    let mut base = Vec::with_capacity(n + 1);
    let mut vmax = 0.0f64;
    for k in 0..n {
        let theta = std::f64::consts::TAU * (k as f64) / (n as f64);
        let v = contour_value(f, w, r, theta, &mut evals)?;
        vmax = vmax.max(v.norm());
        base.push((theta, v));
    }
    base.push((std::f64::consts::TAU, base[0].1));
    let near_tol = 1e-8 * (1.0 + vmax);
    if base.iter().any(|(_, v)| v.norm() < near_tol) {
        return Err(Walk::NearTarget);
    }

    let mut total = 0.0f64;
    // Depth-first over segments keeps the summation order deterministic.
    let mut stack: Vec<(f64, Complex64, f64, Complex64, u32)> = Vec::with_capacity(64);
    for pair in base.windows(2).rev() {
        let (ta, va) = pair[0];
        let (tb, vb) = pair[1];
        stack.push((ta, va, tb, vb, 0));
    }
    while let Some((ta, va, tb, vb, depth)) = stack.pop() {
        let delta = (vb / va).arg();
        if delta.abs() < std::f64::consts::FRAC_PI_2 {
            total += delta;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Walk::DepthExhausted);
        }
        let tm = 0.5 * (ta + tb);
        let vm = contour_value(f, w, r, tm, &mut evals)?;
        if vm.norm() < near_tol {
            return Err(Walk::NearTarget);
        }
        stack.push((tm, vm, tb, vb, depth + 1));
        stack.push((ta, va, tm, vm, depth + 1));
    }
    Ok((total / std::f64::consts::TAU, evals))
}

/// Distinct roots plus per-sweep bookkeeping.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub roots: Vec<Complex64>,
    pub seeds: usize,
    /// Seeds dropped at a numerically singular Jacobian.
    pub dropped_singular: usize,
}

/// Distinct preimages of w in |z| < r by damped Newton from a triangular
/// lattice of spacing (1-r)/4.
pub fn preimages_newton(f: &HarmonicMap, w: Complex64, r: f64) -> Result<Vec<Complex64>> {
    Ok(preimages_newton_detailed(f, w, r, DEFAULT_SEED_BUDGET)?.roots)
}

/// As [`preimages_newton`] with an explicit seed budget.
pub fn preimages_newton_detailed(
    f: &HarmonicMap,
    w: Complex64,
    r: f64,
    budget: usize,
) -> Result<NewtonOutcome> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::BadGrid { what: format!("subdisk radius {r} not in (0, 1)") });
    }
    let spacing = (1.0 - r) / 4.0;
    let row_step = spacing * 0.75f64.sqrt();
    let rows = (r / row_step).floor() as i64;

    let needed = count_lattice(r, spacing, row_step, rows);
    if needed > budget {
        return Err(Error::SeedBudgetExceeded { needed, budget });
    }

    let mut roots: Vec<Complex64> = Vec::new();
    let mut seeds = 0usize;
    let mut dropped = 0usize;
    for iy in -rows..=rows {
        let y = iy as f64 * row_step;
        let half = iy.rem_euclid(2) == 1;
        let x_off = if half { 0.5 * spacing } else { 0.0 };
        let x_max = (r * r - y * y).max(0.0).sqrt();
        let k_min = ((-x_max - x_off) / spacing).ceil() as i64;
        let k_max = ((x_max - x_off) / spacing).floor() as i64;
        for k in k_min..=k_max {
            let seed = Complex64::new(k as f64 * spacing + x_off, y);
            if seed.norm_sqr() > r * r {
                continue;
            }
            seeds += 1;
            match newton_from_seed(f, w, seed, r) {
                NewtonSeed::Root(z) => {
                    if !roots.iter().any(|&q| (q - z).norm() <= 1e-8) {
                        roots.push(z);
                    }
                }
                NewtonSeed::Singular => dropped += 1,
                NewtonSeed::Lost => {}
            }
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(NewtonOutcome { roots, seeds, dropped_singular: dropped })
}

fn count_lattice(r: f64, spacing: f64, row_step: f64, rows: i64) -> usize {
    let mut total = 0usize;
    for iy in -rows..=rows {
        let y = iy as f64 * row_step;
        let x_off = if iy.rem_euclid(2) == 1 { 0.5 * spacing } else { 0.0 };
        let x_max = (r * r - y * y).max(0.0).sqrt();
        let k_min = ((-x_max - x_off) / spacing).ceil() as i64;
        let k_max = ((x_max - x_off) / spacing).floor() as i64;
        if k_max >= k_min {
            total += (k_max - k_min + 1) as usize;
        }
    }
    total
}

enum NewtonSeed {
    Root(Complex64),
    Singular,
    Lost,
}

// Solve h'(z) dz + conj(g'(z)) conj(dz) = w - f(z). Writing A = h'(z),
// B = conj(g'(z)), R for the residual, the 2x2 real system inverts to
// dz = (conj(A) R - B conj(R)) / (|A|^2 - |B|^2).
fn newton_from_seed(f: &HarmonicMap, w: Complex64, mut z: Complex64, r: f64) -> NewtonSeed {
    let residual = |z: Complex64| -> Option<(Complex64, Complex64, Complex64)> {
        let (hj, gj) = f.jets(z).ok()?;
        Some((w - (hj.f0 + gj.f0.conj()), hj.f1, gj.f1))
    };
    let Some((mut res, mut hp, mut gp)) = residual(z) else {
        return NewtonSeed::Lost;
    };
    for _ in 0..60 {
        let jac = hp.norm_sqr() - gp.norm_sqr();
        if jac.abs() < 1e-14 {
            return NewtonSeed::Singular;
        }
        let step = (hp.conj() * res - gp.conj() * res.conj()) / jac;
        let mut lambda = 1.0f64;
        let mut accepted = None;
        while lambda >= 1.0 / 256.0 {
            let cand = z + lambda * step;
            if cand.norm_sqr() >= (1.0 - 1e-9) * (1.0 - 1e-9) {
                lambda *= 0.5;
                continue;
            }
            match residual(cand) {
                Some((nres, nhp, ngp)) if nres.norm() <= res.norm() || lambda * step.norm() < 1e-12 => {
                    accepted = Some((cand, nres, nhp, ngp, lambda));
                    break;
                }
                _ => lambda *= 0.5,
            }
        }
        let Some((cand, nres, nhp, ngp, lambda)) = accepted else {
            return NewtonSeed::Lost;
        };
        let moved = lambda * step.norm();
        z = cand;
        res = nres;
        hp = nhp;
        gp = ngp;
        if moved < 1e-12 {
            if z.norm() < r && res.norm() < 1e-8 {
                return NewtonSeed::Root(z);
            }
            return NewtonSeed::Lost;
        }
    }
    NewtonSeed::Lost
}

/// Per-target status of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetFlag {
    /// Winding succeeded unperturbed and the Newton cross-check agreed.
    Clean,
    /// Winding needed a contour nudge; count still trusted.
    PerturbedContour,
    /// A witness or contour sample had nonpositive Jacobian.
    OrientationViolation,
    /// Newton lattice exceeded the seed budget; winding count stands alone.
    SeedBudget,
    /// Winding and Newton disagreed, usually a multiple root on the grid.
    CountMismatch,
    /// Winding itself failed; count recorded as 0 and excluded from trust.
    Failed,
}

/// Valence measurements across a target grid.
#[derive(Debug, Clone, Serialize)]
pub struct ValenceReport {
    pub radius: f64,
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    pub targets: Vec<Complex64>,
    pub counts: Vec<i64>,
    pub max_count: i64,
    pub crosscheck: Vec<bool>,
    pub flags: Vec<TargetFlag>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Count preimages for every grid target on |z| < r with both oracles.
///
/// Individual target failures are recorded, never fatal. max_count is the
/// maximum of the per-target counts, i.e. the measured valence on the
/// subdisk.
pub fn valence_sweep(f: &HarmonicMap, r: f64, wgrid: &GridSpec) -> Result<ValenceReport> {
    if !(r > 0.0 && r <= crate::sampling::RMAX_DEFAULT) {
        return Err(Error::BadGrid {
            what: format!("sweep radius {r} not in (0, {}]", crate::sampling::RMAX_DEFAULT),
        });
    }
    wgrid.validate()?;
    let targets = wgrid.targets();
    let mut counts = Vec::with_capacity(targets.len());
    let mut crosscheck = Vec::with_capacity(targets.len());
    let mut flags = Vec::with_capacity(targets.len());
    let mut diagnostics = Vec::new();

    for &w in &targets {
        let (count, mut flag) = match winding_number_detailed(f, w, r) {
            Ok(out) => (
                out.count,
                if out.perturbed { TargetFlag::PerturbedContour } else { TargetFlag::Clean },
            ),
            Err(e @ Error::OrientationViolation { .. }) => {
                diagnostics.push(format!("target {w}: {e}"));
                (0, TargetFlag::OrientationViolation)
            }
            Err(e) => {
                diagnostics.push(format!("target {w}: {e}"));
                (0, TargetFlag::Failed)
            }
        };
        let mut agreed = false;
        if matches!(flag, TargetFlag::Clean | TargetFlag::PerturbedContour) {
            match preimages_newton_detailed(f, w, r, DEFAULT_SEED_BUDGET) {
                Ok(out) => {
                    agreed = out.roots.len() as i64 == count;
                    if !agreed {
                        diagnostics.push(format!(
                            "target {w}: winding {count} vs {} Newton roots",
                            out.roots.len()
                        ));
                        flag = TargetFlag::CountMismatch;
                    }
                }
                Err(Error::SeedBudgetExceeded { needed, budget }) => {
                    if flag == TargetFlag::Clean {
                        flag = TargetFlag::SeedBudget;
                    }
                    diagnostics.push(format!(
                        "target {w}: Newton skipped, lattice {needed} over budget {budget}"
                    ));
                }
                Err(e) => {
                    diagnostics.push(format!("target {w}: Newton failed: {e}"));
                    flag = TargetFlag::CountMismatch;
                }
            }
        }
        counts.push(count);
        crosscheck.push(agreed);
        flags.push(flag);
    }

    let max_count = counts.iter().copied().max().unwrap_or(0);
    Ok(ValenceReport { radius: r, targets, counts, max_count, crosscheck, flags, diagnostics })
}
