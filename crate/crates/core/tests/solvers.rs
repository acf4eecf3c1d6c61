use std::f64::consts::PI;

use biharmonic_core::biharmonic::cpn_bitension_from_invariants;
use biharmonic_core::clifford::{
    clifford_minus4_candidates, clifford_minus4_solve, clifford_tension_bitension, hypersurface_predicates,
    screen_candidate, sphere_bundle_analyze, sphere_bundle_frame_trace, sphere_bundle_minus4_roots,
    torus_extrinsic_oracle, zhang_residual, zhang_solve_two_block, HypersurfaceData, LagrangianTorusSpec,
    ProductSphereConfig, RootStatus,
};
use biharmonic_core::families::{
    helix_cos2_bound, helix_interval_warning, helix_k2_quartic, solve_order4_helix, Branch, HelixClass,
};
use biharmonic_core::ToleranceConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn roots(m1: usize, m2: usize) -> Vec<f64> {
    let mut r: Vec<f64> = clifford_minus4_solve(m1, m2, &tol()).unwrap().iter().map(|r| r.a_sq).collect();
    r.sort_by(f64::total_cmp);
    r
}

fn assert_roots(got: &[f64], want: [f64; 2]) {
    let mut want = want.to_vec();
    want.sort_by(f64::total_cmp);
    assert_eq!(got.len(), 2, "{got:?}");
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
}

/// `α₀` with `cos α₀ = c`, in the `sin > 0` regime or shifted by `π`.
fn admissible_alphas(count: usize) -> Vec<f64> {
    let cmax = helix_cos2_bound().sqrt();
    (0..count)
        .map(|i| {
            let c = -cmax * (i / 2 + 1) as f64 / (count / 2 + 1) as f64;
            let a = c.acos();
            if i % 2 == 0 {
                a
            } else {
                a + PI
            }
        })
        .collect()
}

#[test]
fn helix_solutions_satisfy_the_system() {
    let mut solved = 0;
    for alpha in admissible_alphas(200) {
        let (s, c) = alpha.sin_cos();
        for branch in [Branch::Plus, Branch::Minus] {
            let Ok(sol) = solve_order4_helix(alpha, branch, &tol()) else {
                continue;
            };
            solved += 1;
            assert!(helix_k2_quartic(alpha, sol.k2).abs() <= 1e-12);
            assert!((sol.k1 * sol.k1 + sol.k2 * sol.k2 - 1.0 - 3.0 * c * c).abs() <= 1e-10);
            assert!((sol.k2 * sol.k3 + 1.5 * (2.0 * alpha).sin()).abs() <= 1e-10);
            let r = cpn_bitension_from_invariants(&sol.invariants(), &sol.je1(), &tol()).unwrap();
            assert!(r.norm <= 1e-10, "{alpha} {branch:?}: {}", r.norm);
            let want = if sol.tau12 < 0.0 { HelixClass::I3 } else { HelixClass::I4 };
            assert_eq!(sol.class_label, Some(want));
            assert!(s * c < 0.0);
        }
    }
    assert!(solved >= 200, "only {solved} solutions");
}

#[test]
fn helix_outside_admissible_set_is_rejected() {
    for c in [0.05, 0.3, -0.3, 0.9] {
        let alpha = f64::acos(c);
        assert!(solve_order4_helix(alpha, Branch::Plus, &tol()).is_err());
    }
    // the quoted-interval gap emits a warning and has no solution
    let c2 = 0.5 * (helix_cos2_bound() + (7.0 - 4.0 * 3f64.sqrt()) / 2.0);
    let alpha = (-c2.sqrt()).acos();
    assert!(helix_interval_warning(alpha).is_some());
    assert!(solve_order4_helix(alpha, Branch::Plus, &tol()).is_err());
}

#[test]
fn clifford_examples() {
    let r2 = 2f64.sqrt();
    assert_roots(&roots(1, 1), [(2.0 - r2) / 4.0, (2.0 + r2) / 4.0]);
    let r13 = 13f64.sqrt();
    assert_roots(&roots(1, 3), [(5.0 - r13) / 12.0, (5.0 + r13) / 12.0]);
    for p in 0..=10 {
        let m = 2 * p + 1;
        let k = (2 * p + 2) as f64;
        assert_roots(&roots(m, m), [(k - k.sqrt()) / (2.0 * k), (k + k.sqrt()) / (2.0 * k)]);
    }
    for p in [1usize, 3, 5] {
        let pf = p as f64;
        let d = (32.0 * pf + 25.0).sqrt();
        let den = 16.0 * pf + 12.0;
        assert_roots(&roots(2 * p + 1, 2 * p), [(8.0 * pf + 7.0 - d) / den, (8.0 * pf + 7.0 + d) / den]);
    }
    for n in 2..=20usize {
        let nf = n as f64;
        let d = (nf * nf + 2.0 * nf + 5.0).sqrt();
        let den = 4.0 * (nf + 1.0);
        assert_roots(&roots(1, 2 * n - 1), [(nf + 3.0 - d) / den, (nf + 3.0 + d) / den]);
    }
}

#[test]
fn clifford_roots_close_both_forms_and_mirror() {
    for m1 in 1..=12 {
        for m2 in 1..=12 {
            let mine = clifford_minus4_solve(m1, m2, &tol()).unwrap();
            for r in &mine {
                assert!(r.condition_residual <= 1e-11);
                assert!(r.quadratic_residual <= 1e-11);
            }
            let mut mirror: Vec<f64> = roots(m2, m1).iter().map(|t| 1.0 - t).collect();
            mirror.sort_by(f64::total_cmp);
            let own = roots(m1, m2);
            assert_eq!(own.len(), mirror.len());
            for (a, b) in own.iter().zip(&mirror) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn clifford_bitension_matches_condition_at_roots() {
    for (m1, m2, p, q) in [(1, 1, 0, 0), (1, 3, 0, 1), (3, 2, 1, 1)] {
        for r in clifford_minus4_solve(m1, m2, &tol()).unwrap() {
            let cfg = ProductSphereConfig::from_a_sq(p, q, r.a_sq, m1, m2).unwrap();
            let (t, t2) = clifford_tension_bitension(&cfg).unwrap();
            assert!((t - r.tension).abs() < 1e-14);
            assert!((t2 + 4.0 * t).abs() <= 1e-11);
            assert!(t.abs() > 1e-9);
        }
    }
}

#[test]
fn minimal_filter_at_equal_radii() {
    let r = screen_candidate(3, 3, 0.5, &tol());
    assert_eq!(r.status, RootStatus::ExcludedMinimal);
    assert!(r.tension.abs() < 1e-15);
    assert_eq!(screen_candidate(1, 1, 1.5, &tol()).status, RootStatus::OutOfRange);
    // candidates list keeps everything the quadratic produced
    assert_eq!(clifford_minus4_candidates(2, 5, &tol()).unwrap().len(), 2);
    assert!(clifford_minus4_solve(0, 1, &tol()).is_err());
}

#[test]
fn sphere_bundle_grid() {
    let t = tol();
    for p in 1..=10usize {
        let [lo, hi] = sphere_bundle_minus4_roots(p);
        for root in [lo, hi] {
            let a = sphere_bundle_analyze(p, root, &t).unwrap();
            assert!(a.minus4_residual <= 1e-12, "p={p}: {}", a.minus4_residual);
            assert!(a.minus4_biharmonic);
        }
        let n = 10_000;
        let mut hits = Vec::new();
        let mut prev: Option<f64> = None;
        for i in 1..n {
            let x = i as f64 / n as f64;
            let a = sphere_bundle_analyze(p, x, &t).unwrap();
            assert!(!a.proper_biharmonic_in_sphere);
            assert!(!a.projection_proper_biharmonic);
            assert!(a.minimal_in_clifford_torus);
            // sign change of the (-4) bracket between grid points
            if let Some(pb) = prev {
                if pb.signum() != a.minus4_bracket.signum() {
                    hits.push(x);
                }
            }
            prev = Some(a.minus4_bracket);
        }
        assert_eq!(hits.len(), 2);
        assert!((hits[0] - lo).abs() <= 1e-4 && (hits[1] - hi).abs() <= 1e-4);
        let half = sphere_bundle_analyze(p, 0.5, &t).unwrap();
        assert!(half.biharmonic_bracket.abs() < 1e-12 && half.tension_norm < 1e-12);
        assert!(half.minimal_in_sphere);
    }
    assert!(sphere_bundle_analyze(1, 1.0, &t).is_err());
    assert!(sphere_bundle_analyze(0, 0.5, &t).is_err());
}

#[test]
fn sphere_bundle_frame_trace_reproduces_mean_curvature() {
    for p in 1..=6usize {
        for x in [0.1, 0.37, 0.5, 0.81] {
            let (h1, h2) = sphere_bundle_frame_trace(p, x).unwrap();
            let a = sphere_bundle_analyze(p, x, &tol()).unwrap();
            assert!(h1.abs() <= 1e-12);
            assert!((h2 - a.mean_curvature_coefficient).abs() <= 1e-12);
        }
    }
}

fn zhang_closed_form_specs() -> Vec<LagrangianTorusSpec> {
    let r = 41f64.sqrt();
    [1.0, -1.0]
        .iter()
        .map(|s| {
            let u = (9.0 + s * r) / 20.0;
            let v = (11.0 - s * r) / 40.0;
            LagrangianTorusSpec::from_squares(&[u, v, v]).unwrap()
        })
        .collect()
}

#[test]
fn zhang_closed_form_and_two_block() {
    let closed = zhang_closed_form_specs();
    for s in &closed {
        let r = zhang_residual(s, &tol());
        assert!(r.norm <= 1e-12 && !r.minimal);
        assert!(torus_extrinsic_oracle(s, -4.0) <= 1e-10);
    }
    let mut found = zhang_solve_two_block(2, &tol()).unwrap();
    found.sort_by(|a, b| a.radii[0].total_cmp(&b.radii[0]));
    assert_eq!(found.len(), 2);
    let mut want = closed.clone();
    want.sort_by(|a, b| a.radii[0].total_cmp(&b.radii[0]));
    for (f, w) in found.iter().zip(&want) {
        for (x, y) in f.radii.iter().zip(&w.radii) {
            assert!((x - y).abs() < 1e-12);
        }
    }
    for n in 3..=8 {
        for s in zhang_solve_two_block(n, &tol()).unwrap() {
            assert!(zhang_residual(&s, &tol()).norm <= 1e-10);
            assert!(torus_extrinsic_oracle(&s, -4.0) <= 1e-10);
        }
    }
    assert!(zhang_solve_two_block(1, &tol()).is_err());
}

#[test]
fn zhang_harmonic_torus_is_flagged() {
    for n in 1..=5 {
        let sq = vec![1.0 / (n + 1) as f64; n + 1];
        let spec = LagrangianTorusSpec::from_squares(&sq).unwrap();
        let r = zhang_residual(&spec, &tol());
        assert!(r.minimal && r.norm < 1e-12);
        assert!(torus_extrinsic_oracle(&spec, 3.7) < 1e-12);
    }
}

#[test]
fn zhang_oracle_agreement_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a4a);
    let mut specs = zhang_closed_form_specs();
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let w: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let sum: f64 = w.iter().sum();
        let sq: Vec<f64> = w.iter().map(|x| x / sum).collect();
        specs.push(LagrangianTorusSpec::from_squares(&sq).unwrap());
    }
    for s in &specs {
        let zero_r = zhang_residual(s, &tol()).norm <= 1e-10;
        let zero_o = torus_extrinsic_oracle(s, -4.0) <= 1e-10;
        assert_eq!(zero_r, zero_o, "{:?}", s.radii);
    }
    assert!(LagrangianTorusSpec::new(vec![0.6, 0.6]).is_err());
    assert!(LagrangianTorusSpec::new(vec![-0.6, 0.8]).is_err());
}

#[test]
fn hypersurface_table() {
    // (n, |H|², |B|², c, m̄)
    let rows: [(usize, f64, f64, f64, Option<usize>); 20] = [
        (2, 0.25, 6.0, 1.0, None),
        (2, 0.5, 6.0, 1.0, None),
        (2, 1.0, 6.0, 1.0, Some(2)),
        (3, 0.1, 8.0, 1.0, None),
        (3, 1.4, 8.0, 1.0, None),
        (3, 2.0, 8.0, 1.0, Some(1)),
        (1, 0.3, 4.0, 1.0, None),
        (4, 0.9, 10.0, 1.0, None),
        (4, 0.9, 11.0, 1.0, None),
        (5, 1.2, 12.0, 1.0, Some(3)),
        (2, 0.0, 6.0, 1.0, None),
        (2, 0.4, 3.0, 0.5, None),
        (3, 0.4, 16.0, 2.0, None),
        (2, 0.4, 0.0, 0.0, None),
        (2, 0.4, 1.0, -1.0, None),
        (6, 1.05, 14.0, 1.0, None),
        (6, 1.0, 14.0, 1.0, None),
        (7, 0.7, 15.9, 1.0, None),
        (8, 2.5, 18.0, 1.0, Some(1)),
        (10, 0.01, 22.0, 1.0, None),
    ];
    for (n, h2, b2, c, m_bar) in rows {
        let data = HypersurfaceData {
            n,
            mean_curvature_sq: h2,
            second_ff_norm_sq: b2,
            c,
            m_bar,
        };
        let p = hypersurface_predicates(&data, &tol()).unwrap();
        let nf = n as f64;
        assert_eq!(p.second_ff_defect, b2 - 2.0 * c * (nf + 1.0));
        assert_eq!(p.proper_biharmonic, b2 == 2.0 * c * (nf + 1.0) && h2 > 0.0 && c > 0.0);
        let mb = m_bar.unwrap_or(2 * n - 1) as f64;
        assert_eq!(p.within_tangent_bound, h2 > 0.0 && h2 <= (mb + 3.0) / mb);
        assert_eq!(p.within_normal_bound, h2 > 0.0 && h2 <= 1.0);
        assert_eq!(p.nonexistence_note.is_some(), c <= 0.0);
        match p.scalar_curvature {
            Some(s) => {
                assert_eq!(c, 1.0);
                let want = 4.0 * nf * nf - 2.0 * nf - 4.0 + (2.0 * nf - 1.0).powi(2) * h2;
                assert!((s - want).abs() < 1e-12);
            }
            None => assert_ne!(c, 1.0),
        }
    }
    let p = hypersurface_predicates(
        &HypersurfaceData {
            n: 2,
            mean_curvature_sq: 0.25,
            second_ff_norm_sq: 6.0,
            c: 1.0,
            m_bar: None,
        },
        &tol(),
    )
    .unwrap();
    assert_eq!(p.scalar_curvature, Some(10.25));
    assert!(hypersurface_predicates(
        &HypersurfaceData {
            n: 0,
            mean_curvature_sq: 0.1,
            second_ff_norm_sq: 1.0,
            c: 1.0,
            m_bar: None
        },
        &tol()
    )
    .is_err());
}
