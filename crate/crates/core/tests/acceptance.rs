//! Desk-scale acceptance suite. Each test pins one advertised guarantee of
//! the toolkit, at its stated tolerance and runtime budget, and prints a
//! single pass line. Oracles are closed forms where they exist (Koebe norms,
//! Mobius annihilation, automorphism equality in Schwarz-Pick) and
//! independent numerics everywhere else (finite differences against jets,
//! Newton preimages against winding counts).

use std::time::{Duration, Instant};

use harmap::cover::derivative_growth_check_with;
use harmap::criteria::{self, CheckParams, Criterion};
use harmap::expr::AnalyticExpr;
use harmap::harmonic::make_harmonic;
use harmap::mobius;
use harmap::operators::{analytic_operators, harmonic_operators, chain_rule_residual, channel_quantity, Channel};
use harmap::quasi::R2;
use harmap::sampling::{sup_norm, SweepConfig};
use harmap::valence::{valence_sweep, GridSpec, TargetFlag};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn finish(n: usize, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {n} ({name}) took {:.2}s, budget {:.0}s",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    println!("[acceptance] criterion {n} ({name}): PASS ({:.2}s)", elapsed.as_secs_f64());
}

/// Relative error with an absolute floor so a near-zero reference does not
/// turn rounding noise into a failure.
fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1e-9)
}

// 1. Jet entries match fourth-order central finite differences on a corpus
//    of five expressions at 100 points each, relative error below 1e-6.
#[test]
fn criterion_1_jet_correctness() {
    let started = Instant::now();
    // (source, entire): entire functions take a fixed step; the three
    // disk-singular members blow up exactly at z = 1, so their step scales
    // with the distance to that point. The scale balances stencil truncation
    // (grows like h^4 times the seventh derivative) against the 1/h^3
    // rounding blowup of the third-difference; smaller is not safer.
    let corpus = [
        ("z^3-0.5*z+0.1", true),
        ("exp(0.5*z)", true),
        ("log(1-z)", false),
        ("koebe(z)", false),
        ("(1+z)/(1-z)^3", false),
    ];
    for (src, entire) in corpus {
        let f = AnalyticExpr::parse(src).unwrap();
        let mut rng = R2::new();
        for _ in 0..100 {
            let z = rng.next_in_disk(0.9);
            let h = if entire { 0.01 } else { 0.003 * (c(1.0, 0.0) - z).norm() };
            let at = |k: f64| f.eval(z + c(k * h, 0.0)).unwrap();
            let (m3, m2, m1, p1, p2, p3) =
                (at(-3.0), at(-2.0), at(-1.0), at(1.0), at(2.0), at(3.0));
            let fd1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
            let fd2 = (-p2 + 16.0 * p1 - 30.0 * at(0.0) + 16.0 * m1 - m2) / (12.0 * h * h);
            let fd3 = (m3 - 8.0 * m2 + 13.0 * m1 - 13.0 * p1 + 8.0 * p2 - p3) / (8.0 * h * h * h);

            let jet = f.eval_jet(z).unwrap();
            assert!(rel_err(jet.f0, at(0.0)) < 1e-6, "{src}: f0 off at {z}");
            assert!(rel_err(jet.f1, fd1) < 1e-6, "{src}: f1 vs fd {:.2e} at {z}", rel_err(jet.f1, fd1));
            assert!(rel_err(jet.f2, fd2) < 1e-6, "{src}: f2 vs fd {:.2e} at {z}", rel_err(jet.f2, fd2));
            assert!(rel_err(jet.f3, fd3) < 1e-6, "{src}: f3 vs fd {:.2e} at {z}", rel_err(jet.f3, fd3));
        }
    }
    finish(1, "jet correctness", started, Duration::from_secs(5));
}

// 2. The Schwarzian annihilates every Mobius transformation, and the
//    harmonic operators reduce to the analytic ones bit for bit when g = 0.
#[test]
fn criterion_2_mobius_annihilation_and_reduction() {
    let started = Instant::now();
    let mut rng = R2::new();
    for _ in 0..2000 {
        // t + s (z + beta) / (gamma z + 1), pole 1/|gamma| >= 2 outside the
        // closed disk, determinant s (1 - beta gamma) bounded away from 0.
        let beta = rng.next_in_disk(0.5);
        let gamma = rng.next_in_disk(0.5);
        let t = rng.next_in_disk(1.0);
        let (u, v) = rng.next_pair();
        let s = Complex64::from_polar(0.5 + 1.5 * u, std::f64::consts::TAU * v);
        let m = mobius::mobius(t * gamma + s, t + s * beta, gamma, c(1.0, 0.0));

        let z = rng.next_in_disk(0.9);
        let ops = analytic_operators(&m.eval_jet(z).unwrap(), z).unwrap();
        assert!(ops.s.norm() < 1e-12, "S(Mobius) = {:.3e} at {z}", ops.s.norm());
    }

    let reduction_corpus = [
        "z",
        "koebe(z)",
        "exp(z)",
        "exp(0.5*z)",
        "log(1-z)",
        "1/(1-z)",
        "z-0.25*z^2",
        "z+0.1*z^3",
        "z/(1-0.5*z)",
        "(1+z)/(1-z)^3",
    ];
    for src in reduction_corpus {
        let f = make_harmonic(src, src, "0").unwrap();
        let mut rng = R2::new();
        for _ in 0..40 {
            let z = rng.next_in_disk(0.9);
            let hm = harmonic_operators(&f, z).unwrap();
            let an = analytic_operators(&f.h().eval_jet(z).unwrap(), z).unwrap();
            let bits = |w: Complex64| (w.re.to_bits(), w.im.to_bits());
            assert_eq!(bits(hm.p), bits(an.p), "{src}: P_H != P at {z}");
            assert_eq!(bits(hm.s), bits(an.s), "{src}: S_H != S at {z}");
            assert_eq!(bits(hm.hyp), bits(c(0.0, 0.0)), "{src}: hyp != 0 at {z}");
            assert_eq!(hm.pre_q.to_bits(), an.pre_q.to_bits(), "{src}: pre_q at {z}");
            assert_eq!(hm.nehari_q.to_bits(), an.nehari_q.to_bits(), "{src}: nehari_q at {z}");
            assert_eq!(hm.becker_q.to_bits(), an.becker_q.to_bits(), "{src}: becker_q at {z}");
        }
    }
    finish(2, "Mobius annihilation and reduction", started, Duration::from_secs(5));
}

// 3. Composition identities for P_H and S_H under disk automorphisms hold to
//    1e-9, and the hyperbolic chain inequality never overshoots by 1e-12.
#[test]
fn criterion_3_chain_rules() {
    let started = Instant::now();
    let maps = [
        ("z", "0"),
        ("koebe(z)", "0.002*z^2"),
        ("z-0.5*z^2", "0.15*z^2-0.1*z^3"),
        ("z", "0.5*z^2"),
        ("z/(1-0.5*z)", "0.01*z^2"),
    ];
    let autos = [
        (c(0.0, 0.0), 0.0),
        (c(0.3, 0.2), 0.7),
        (c(0.0, -0.5), 1.2),
        (c(0.6, 0.0), 3.0),
        (c(-0.4, 0.4), 5.5),
    ];
    for (h, g) in maps {
        let f = make_harmonic(h, h, g).unwrap();
        for (a, theta) in autos {
            let phi = mobius::automorphism(a, theta);
            let mut rng = R2::new();
            for _ in 0..40 {
                let z = rng.next_in_disk(0.8);
                let res = chain_rule_residual(&f, &phi, z).unwrap();
                assert!(res.pre_res < 1e-9, "({h},{g}) pre residual {:.3e} at {z}", res.pre_res);
                assert!(res.sch_res < 1e-9, "({h},{g}) sch residual {:.3e} at {z}", res.sch_res);
                assert!(res.hyp_gap <= 1e-12, "({h},{g}) hyp gap {:.3e} at {z}", res.hyp_gap);
            }
        }
    }
    finish(3, "chain rules", started, Duration::from_secs(30));
}

// 4. Schwarz-Pick: the hyperbolic derivative of a disk self-map never
//    exceeds 1, and equals 1 everywhere exactly for automorphisms.
#[test]
fn criterion_4_schwarz_pick() {
    let started = Instant::now();
    let hyp = |omega: &AnalyticExpr, z: Complex64| -> f64 {
        let j = omega.eval_jet(z).unwrap();
        let d = 1.0 - j.f0.norm_sqr();
        assert!(d > 0.0, "sample left the disk");
        j.f1.norm() * (1.0 - z.norm_sqr()) / d
    };
    for src in ["z^2", "0.5*z", "(z-0.3)/(1-0.3*z)*z", "0.3+0.4*z", "exp(z-1)"] {
        let omega = AnalyticExpr::parse(src).unwrap();
        let mut rng = R2::new();
        for _ in 0..2000 {
            let z = rng.next_in_disk(0.99);
            let v = hyp(&omega, z);
            assert!(v <= 1.0 + 1e-12, "{src}: |omega*| = {v} at {z}");
        }
    }
    for (a, theta) in [(c(0.4, -0.1), 0.3), (c(-0.2, 0.55), 2.1), (c(0.0, 0.0), 4.4)] {
        let omega = mobius::automorphism(a, theta);
        let mut rng = R2::new();
        for _ in 0..2000 {
            let z = rng.next_in_disk(0.99);
            let v = hyp(&omega, z);
            assert!((v - 1.0).abs() <= 1e-12, "automorphism |omega*| = {v} at {z}");
        }
    }
    finish(4, "Schwarz-Pick", started, Duration::from_secs(10));
}

// 5. Koebe norm benchmarks: both weighted sup-norms equal 6 to 1e-3 at
//    ladder depth 13 (closed forms: sup (4+2r) and a constant 6 profile).
#[test]
fn criterion_5_koebe_norms() {
    let started = Instant::now();
    let f = make_harmonic("koebe", "koebe(z)", "0").unwrap();
    let cfg = SweepConfig::default();
    assert_eq!(cfg.ladder_depth, 13);
    let (pre, _) = sup_norm(channel_quantity(&f, Channel::PreSchwarzian), &cfg);
    let (sch, _) = sup_norm(channel_quantity(&f, Channel::Nehari), &cfg);
    assert!((pre.value - 6.0).abs() <= 1e-3, "|P(koebe)| norm {}", pre.value);
    assert!((sch.value - 6.0).abs() <= 1e-3, "|S(koebe)| norm {}", sch.value);
    finish(5, "Koebe norm benchmarks", started, Duration::from_secs(20));
}

// 6. Growth bounds |P'| (1-|z|^2)^2 <= 4a and |S| (1-|z|^2)^2 <= 4a + a^2/2
//    hold on every locally univalent corpus expression.
#[test]
fn criterion_6_derivative_growth() {
    let started = Instant::now();
    let corpus = [
        "z",
        "koebe(z)",
        "z/(1-z)",
        "log(1-z)",
        "exp(z)",
        "exp(0.25*z)",
        "z-0.25*z^2",
        "z+0.1*z^3",
        "(1+z)/(1-z)^3",
        "1/(1-z)",
    ];
    let cfg = SweepConfig { ladder_depth: 12, base_angular: 128, ..SweepConfig::default() };
    for src in corpus {
        let f = AnalyticExpr::parse(src).unwrap();
        let report = derivative_growth_check_with(&f, &cfg).unwrap();
        assert!(
            report.p_prime_ok,
            "{src}: |P'| bound fails, sup {} vs 4a = {}",
            report.p_prime_sup,
            4.0 * report.alpha_hat
        );
        assert!(
            report.schwarzian_ok,
            "{src}: |S| bound fails, sup {} vs {}",
            report.schwarzian_sup,
            4.0 * report.alpha_hat + report.alpha_hat * report.alpha_hat / 2.0
        );
    }
    finish(6, "derivative growth bounds", started, Duration::from_secs(30));
}

// 7. The two valence oracles agree on every clean target, with the counts
//    the algebra predicts: 3 for the cube, 2 on the two-sheeted quadratic,
//    1 for injective maps, including w = 0 under z + conj(z)^2/2.
#[test]
fn criterion_7_valence_oracles() {
    let started = Instant::now();
    struct Case {
        h: &'static str,
        g: &'static str,
        r: f64,
        re: (f64, f64, usize),
        im: (f64, f64, usize),
        count: i64,
    }
    let cases = [
        Case { h: "z^3", g: "0", r: 0.8, re: (0.05, 0.3, 5), im: (0.02, 0.25, 5), count: 3 },
        Case { h: "z", g: "0.5*z", r: 0.6, re: (-0.2, 0.2, 5), im: (-0.1, 0.1, 5), count: 1 },
        Case { h: "koebe(z)", g: "0", r: 0.7, re: (-0.15, 0.15, 5), im: (-0.15, 0.15, 5), count: 1 },
        Case { h: "z", g: "0.5*z^2", r: 0.8, re: (-0.1, 0.1, 5), im: (-0.1, 0.1, 5), count: 1 },
        Case { h: "exp(z)-1", g: "0", r: 0.8, re: (-0.3, 0.3, 5), im: (-0.3, 0.3, 5), count: 1 },
        Case { h: "z^2-0.2*z", g: "0", r: 0.8, re: (0.05, 0.25, 5), im: (0.05, 0.2, 5), count: 2 },
    ];
    for case in cases {
        let f = make_harmonic(case.h, case.h, case.g).unwrap();
        let grid = GridSpec::new(case.re, case.im).unwrap();
        let report = valence_sweep(&f, case.r, &grid).unwrap();
        assert_eq!(report.targets.len(), 25);
        for (i, &w) in report.targets.iter().enumerate() {
            assert_eq!(
                report.flags[i],
                TargetFlag::Clean,
                "({},{}) target {w}: flag {:?} [{}]",
                case.h,
                case.g,
                report.flags[i],
                report.diagnostics.join("; ")
            );
            assert!(report.crosscheck[i], "({},{}) oracles disagree at {w}", case.h, case.g);
            assert_eq!(
                report.counts[i], case.count,
                "({},{}) count at {w}",
                case.h, case.g
            );
        }
        assert_eq!(report.max_count, case.count);
        // The middle row/column of the half-disk grid passes through the
        // origin, the mandated w = 0 probe.
        if case.g == "0.5*z^2" {
            assert!(report.targets.iter().any(|w| w.norm() == 0.0));
        }
    }
    finish(7, "valence oracle equivalence", started, Duration::from_secs(60));
}

// 8. Verdicts predict measurements: a satisfied Becker verdict forces
//    measured valence 1, and a satisfied boundary limsup verdict forces the
//    same max count on the two near-boundary subdisks.
#[test]
fn criterion_8_prediction_consistency() {
    let started = Instant::now();
    // Expected verdicts: the affine and squeeze maps satisfy both criteria;
    // z/(1-0.5z) only the boundary limsup (its Becker sup peaks near 1.07
    // in the middle of the disk); koebe and the half-disk map satisfy
    // neither; z^2 is branched at the center, which voids the
    // sense-preserving hypothesis and surfaces as an infinite quantity.
    let corpus = [
        ("z", "0.5*z"),
        ("z", "0.25*z^2"),
        ("z/(1-0.5*z)", "0"),
        ("koebe(z)", "0"),
        ("z", "0.5*z^2"),
        ("z^2", "0"),
    ];
    let params = CheckParams::default();
    let mut becker_hits = 0;
    let mut limsup_hits = 0;
    for (h, g) in corpus {
        let f = make_harmonic(h, h, g).unwrap();

        let becker = criteria::check(&f, Criterion::BeckerHarmonic, &params).unwrap();
        if becker.satisfied {
            becker_hits += 1;
            let grid = GridSpec::new((-0.1, 0.1, 3), (-0.1, 0.1, 3)).unwrap();
            let sweep = valence_sweep(&f, 0.95, &grid).unwrap();
            assert_eq!(sweep.max_count, 1, "({h},{g}) satisfied Becker but max {}", sweep.max_count);
        }

        let limsup = criteria::check(&f, Criterion::LimsupPreSchwarzian, &params).unwrap();
        if limsup.satisfied {
            limsup_hits += 1;
            // Targets sit off the critical values of every corpus member so
            // the winding counts are stable at both radii.
            let grid = GridSpec::new((0.04, 0.16, 3), (0.04, 0.16, 3)).unwrap();
            let near = valence_sweep(&f, 1.0 - 0.5f64.powi(8), &grid).unwrap();
            let nearer = valence_sweep(&f, 1.0 - 0.5f64.powi(10), &grid).unwrap();
            assert_eq!(
                near.max_count, nearer.max_count,
                "({h},{g}) max count moved between subdisks: {} vs {}",
                near.max_count, nearer.max_count
            );
        }
    }
    assert_eq!(becker_hits, 2, "Becker-satisfied corpus shifted");
    assert_eq!(limsup_hits, 3, "limsup-satisfied corpus shifted");
    finish(8, "criterion-prediction consistency", started, Duration::from_secs(120));
}

// 9. Two CLI runs on the same spec produce byte-identical reports, both on
//    stdout and through --out.
#[test]
fn criterion_9_cli_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("probe.json");
    std::fs::write(&spec, "{\"label\":\"probe\",\"h\":\"koebe(z)\",\"g\":\"0.01*z^2\"}\n").unwrap();

    let run = |out: &std::path::Path| {
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_harmap"))
            .arg("analyze")
            .arg(&spec)
            .arg("--ladder-depth")
            .arg("8")
            .arg("--angular-base")
            .arg("64")
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert!(output.status.success(), "analyze failed: {}", String::from_utf8_lossy(&output.stderr));
        output.stdout
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let stdout_a = run(&a);
    let stdout_b = run(&b);
    assert_eq!(stdout_a, stdout_b, "stdout differs between runs");
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b, "report files differ between runs");
    finish(9, "CLI determinism", started, Duration::from_secs(10));
}
