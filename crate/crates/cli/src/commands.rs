use std::f64::consts::PI;

use biharmonic_core::ambient::horizontality_defect;
use biharmonic_core::biharmonic::{
    cpn_bitension_from_invariants, cpn_curve_bitension, hopf_relation_defect, je1_coefficients,
    lambda_biharmonic_residual, quartic_ode_residual, sphere_curve_bitension, tension_coefficients, CurveInvariants,
};
use biharmonic_core::clifford::{
    clifford_minus4_candidates, screen_candidate, sphere_bundle_analyze, sphere_bundle_minus4_roots,
    torus_extrinsic_oracle, torus_tension_norm, zhang_residual, zhang_solve_two_block, CliffordRoot,
    HypersurfaceData, LagrangianTorusSpec, RootStatus as CoreRootStatus,
};
use biharmonic_core::curves::{downstairs_apparatus, frenet_apparatus, CurveFamily};
use biharmonic_core::families::{
    classify_helix_cp2, helix_cos2_bound, helix_interval_warning, helix_k2_quartic, holomorphic_circle_lift,
    horizontal_geodesic, lift_curve_tau12_pm1, lift_curve_tau12_zero, solve_order4_helix, sphere_helix, Branch,
    HelixSolution, Tau12ZeroKind, TrigCurve,
};
use biharmonic_core::roots::{safeguarded_newton, sign_change_brackets};
use biharmonic_core::{AmbientVector, GeometryError, SpherePoint, ToleranceConfig};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::report::{BiharmonicReport, Root, RootStatus};
use crate::{BranchArg, CliError, CliResult, CurveArgs, Family};

const MINUS_FOUR: f64 = -4.0;

fn emit(report: BiharmonicReport) -> CliResult<String> {
    report.finish().map(|r| r.to_json()).map_err(CliError::Domain)
}

fn family_name(f: Family) -> String {
    f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn branches(b: BranchArg) -> Vec<Branch> {
    match b {
        BranchArg::Plus => vec![Branch::Plus],
        BranchArg::Minus => vec![Branch::Minus],
        BranchArg::Both => vec![Branch::Plus, Branch::Minus],
    }
}

pub(crate) fn build_family(a: &CurveArgs, tol: &ToleranceConfig) -> CliResult<TrigCurve> {
    let name = family_name(a.family);
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--family {name} needs --{flag}")));
    let takes_k1 = matches!(
        a.family,
        Family::Tau12ZeroHelix | Family::HolomorphicCircle | Family::SphereHelix
    );
    if (a.k1.is_some() && !takes_k1) || (a.k2.is_some() && a.family != Family::SphereHelix) {
        return Err(CliError::Usage(format!("--family {name} takes no curvature flags beyond its own")));
    }
    Ok(match a.family {
        Family::Tau12Pm1 => lift_curve_tau12_pm1(a.n.unwrap_or(1))?,
        Family::Tau12ZeroCircle => lift_curve_tau12_zero(Tau12ZeroKind::Circle, 0.0, a.n.unwrap_or(2))?,
        Family::Tau12ZeroHelix => lift_curve_tau12_zero(Tau12ZeroKind::Helix, need(a.k1, "k1")?, a.n.unwrap_or(3))?,
        Family::HolomorphicCircle => {
            let n = a.n.unwrap_or(1);
            if n < 1 {
                return Err(GeometryError::Domain("the holomorphic circle lift needs n >= 1".into()).into());
            }
            let k = need(a.k1, "k1")?;
            holomorphic_circle_lift(k, &AmbientVector::basis(n, 0), &AmbientVector::basis(n, 2), tol)?
        }
        Family::SphereHelix => sphere_helix(need(a.k1, "k1")?, need(a.k2, "k2")?, a.n.unwrap_or(1))?,
        Family::HorizontalGeodesic => horizontal_geodesic(a.n.unwrap_or(1))?,
    })
}

fn curve_inputs(r: &mut BiharmonicReport, a: &CurveArgs, fam: &TrigCurve) {
    r.input("family", family_name(a.family)).input("n", fam.n());
    for (k, v) in fam.params() {
        r.input(&k, v);
    }
}

#[derive(Debug, Clone, Serialize)]
struct CurveSample {
    s: f64,
    order: usize,
    curvatures: Vec<f64>,
    tension: f64,
    bitension: f64,
    lambda_residual: f64,
    quartic_ode: f64,
    horizontality: f64,
    cpn: Result<(f64, f64), String>,
}

fn eval_curve(fam: &TrigCurve, s: f64, lambda: f64, tol: &ToleranceConfig) -> CliResult<CurveSample> {
    let jet = fam.jet(s)?;
    jet.validate(tol)?;
    let app = frenet_apparatus(fam, s, 4.min(2 * fam.n() + 1), tol)?;
    let inv = CurveInvariants::from_apparatus(&app)?;
    let t2 = sphere_curve_bitension(&app)?;
    let tc = tension_coefficients(&inv);
    let lam = lambda_biharmonic_residual(&t2, &tc, lambda)?;
    let p = SpherePoint::new(jet.position().clone(), tol.unit_norm)?;
    let horizontality = horizontality_defect(&p, jet.velocity(), tol.orthogonality)?;
    let cpn = if horizontality <= tol.orthogonality {
        downstairs_apparatus(&app, &p, tol)
            .and_then(|down| cpn_curve_bitension(&down, &je1_coefficients(&down), tol))
            .and_then(|r| Ok((r.norm, hopf_relation_defect(fam, s, tol)?)))
            .map_err(|e| e.to_string())
    } else {
        Err(format!("not horizontal (defect {horizontality:e})"))
    };
    Ok(CurveSample {
        s,
        order: app.order,
        curvatures: app.curvatures.clone(),
        tension: tc.iter().map(|x| x * x).sum::<f64>().sqrt(),
        bitension: t2.norm,
        lambda_residual: lam.norm,
        quartic_ode: quartic_ode_residual(&jet),
        horizontality,
        cpn,
    })
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

pub(crate) fn verify_curve(a: &CurveArgs, samples: usize, lambda: f64, tol: &ToleranceConfig) -> CliResult<String> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let fam = build_family(a, tol)?;
    let params: Vec<f64> = (0..samples)
        .map(|i| if samples == 1 { 0.0 } else { 2.0 * PI * i as f64 / (samples - 1) as f64 })
        .collect();
    let evals = params
        .par_iter()
        .map(|&s| eval_curve(&fam, s, lambda, tol))
        .collect::<CliResult<Vec<_>>>()?;

    let mut r = BiharmonicReport::new("verify curve", *tol);
    curve_inputs(&mut r, a, &fam);
    r.input("samples", samples).input("lambda", lambda);
    r.lambda = Some(lambda);
    r.residual("tension", max_of(evals.iter().map(|e| e.tension)))
        .residual("bitension", max_of(evals.iter().map(|e| e.bitension)))
        .residual("lambda_residual", max_of(evals.iter().map(|e| e.lambda_residual)))
        .residual("horizontality", max_of(evals.iter().map(|e| e.horizontality)));
    if a.family == Family::Tau12Pm1 {
        r.residual("quartic_ode", max_of(evals.iter().map(|e| e.quartic_ode)));
    }
    match evals.iter().find_map(|e| e.cpn.as_ref().err()) {
        None => {
            r.residual("cpn_bitension", max_of(evals.iter().filter_map(|e| e.cpn.as_ref().ok().map(|c| c.0))));
            r.residual(
                "hopf_relation_defect",
                max_of(evals.iter().filter_map(|e| e.cpn.as_ref().ok().map(|c| c.1))),
            );
        }
        Some(msg) => r.warnings.push(format!("projection to CP^n skipped: {msg}")),
    }
    let first = &evals[0];
    if evals.iter().any(|e| e.order != first.order) {
        r.warnings.push("osculating order varies along the curve".into());
    }
    let spread = max_of(evals.iter().flat_map(|e| {
        e.curvatures
            .iter()
            .zip(&first.curvatures)
            .map(|(x, y)| (x - y).abs())
            .collect::<Vec<_>>()
    }));
    r.annotate("order", first.order)
        .annotate("curvatures", &first.curvatures)
        .annotate("curvature_spread", spread);
    emit(r)
}

pub(crate) fn sample_curve(a: &CurveArgs, ds: f64, count: usize, tol: &ToleranceConfig) -> CliResult<String> {
    let fam = build_family(a, tol)?;
    let dim = 2 * fam.n() + 2;
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("s".to_string())
        .chain((1..=dim).map(|i| format!("x{i}")))
        .collect();
    let csv_err = |e: csv::Error| CliError::Domain(format!("CSV output failed: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..count {
        let s = i as f64 * ds;
        let p = fam.position(s);
        let row: Vec<String> = std::iter::once(s)
            .chain(p.coords().iter().copied())
            .map(|x| format!("{x:.16e}"))
            .collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

fn clifford_root(label: String, c: &CliffordRoot) -> Option<Root> {
    let status = match c.status {
        CoreRootStatus::Admissible => RootStatus::Admissible,
        CoreRootStatus::ExcludedMinimal => RootStatus::ExcludedMinimal,
        CoreRootStatus::OutOfRange => return None,
    };
    Some(Root {
        label,
        value: c.a_sq,
        residual: c.condition_residual.max(c.quadratic_residual),
        status,
    })
}

pub(crate) fn solve_clifford(
    m1: Option<usize>,
    m2: Option<usize>,
    a_sq: Option<f64>,
    grid: Option<usize>,
    tol: &ToleranceConfig,
) -> CliResult<String> {
    let mut r = BiharmonicReport::new("solve clifford", *tol);
    r.lambda = Some(MINUS_FOUR);
    let pairs: Vec<(usize, usize)> = match (m1.zip(m2), grid) {
        (Some(p), None) => vec![p],
        (None, Some(g)) if g > 0 => (1..=g).flat_map(|a| (1..=g).map(move |b| (a, b))).collect(),
        _ => return Err(CliError::Usage("give --m1 and --m2, or --grid >= 1".into())),
    };
    if let Some(t) = a_sq {
        let (m1, m2) = pairs[0];
        r.input("m1", m1).input("m2", m2).input("a_sq", t);
        let c = screen_candidate(m1, m2, t, tol);
        if m1 == 0 || m2 == 0 {
            return Err(GeometryError::Domain(format!("need m1, m2 >= 1, got {m1}, {m2}")).into());
        }
        let root = clifford_root("a_sq".into(), &c)
            .ok_or_else(|| CliError::Domain(format!("a² must lie in (0, 1), got {t}")))?;
        r.roots.push(root);
        r.annotate("candidates", vec![c]);
        return emit(r);
    }
    let solved = pairs
        .par_iter()
        .map(|&(a, b)| clifford_minus4_candidates(a, b, tol).map(|c| (a, b, c)))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_some() {
        r.input("grid", pairs.len());
    } else {
        r.input("m1", pairs[0].0).input("m2", pairs[0].1);
    }
    let mut all = Vec::new();
    for (a, b, cands) in solved {
        for c in cands {
            let label = if grid.is_some() {
                format!("m1={a},m2={b}:a_sq")
            } else {
                "a_sq".to_string()
            };
            match clifford_root(label, &c) {
                Some(root) => r.roots.push(root),
                None => r.warnings.push(format!("m1={a}, m2={b}: candidate a² = {} outside (0, 1)", c.a_sq)),
            }
            all.push(json!({"m1": a, "m2": b, "candidate": c}));
        }
    }
    let adm = r.roots.iter().filter(|x| x.status == RootStatus::Admissible);
    let worst = max_of(adm.map(|x| x.residual));
    r.residual("max_root_residual", worst).annotate("candidates", all);
    emit(r)
}

pub(crate) fn solve_zhang(n: usize, tol: &ToleranceConfig) -> CliResult<String> {
    let specs = zhang_solve_two_block(n, tol)?;
    let mut r = BiharmonicReport::new("solve zhang", *tol);
    r.input("n", n);
    r.lambda = Some(MINUS_FOUR);
    let mut details = Vec::new();
    for spec in &specs {
        let z = zhang_residual(spec, tol);
        let oracle = torus_extrinsic_oracle(spec, MINUS_FOUR);
        r.roots.push(Root {
            label: "a1_sq".into(),
            value: spec.radii[0] * spec.radii[0],
            residual: z.norm.max(oracle),
            status: RootStatus::Admissible,
        });
        details.push(json!({
            "radii_sq": spec.radii.iter().map(|a| a * a).collect::<Vec<_>>(),
            "zhang_residual": z.norm,
            "oracle_residual": oracle,
            "tension": torus_tension_norm(spec),
        }));
    }
    r.residual("max_root_residual", max_of(r.roots.iter().map(|x| x.residual)));
    r.annotate("specs", details);
    emit(r)
}

/// `count` values of `α₀` across the admissible set, alternating between
/// the `sin α₀ > 0` regime and its shift by `π`.
pub fn admissible_alpha_grid(count: usize) -> Vec<f64> {
    let cmax = helix_cos2_bound().sqrt();
    let half = count / 2 + 1;
    (0..count)
        .map(|i| {
            let a = (-cmax * (i / 2 + 1) as f64 / half as f64).acos();
            if i % 2 == 0 {
                a
            } else {
                a + PI
            }
        })
        .collect()
}

fn helix_residual(sol: &HelixSolution, tol: &ToleranceConfig) -> CliResult<f64> {
    let (s, c) = sol.alpha0.sin_cos();
    let cpn = cpn_bitension_from_invariants(&sol.invariants(), &sol.je1(), tol)?.norm;
    Ok([
        cpn,
        helix_k2_quartic(sol.alpha0, sol.k2).abs(),
        (sol.k1 * sol.k1 + sol.k2 * sol.k2 - 1.0 - 3.0 * c * c).abs(),
        (sol.k2 * sol.k3 + 3.0 * s * c).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

pub(crate) fn solve_helix(
    alpha0: Option<f64>,
    branch: BranchArg,
    grid: Option<usize>,
    tol: &ToleranceConfig,
) -> CliResult<String> {
    let mut r = BiharmonicReport::new("solve helix", *tol);
    let alphas = match (alpha0, grid) {
        (Some(a), None) => {
            r.input("alpha0", a);
            vec![a]
        }
        (None, Some(g)) if g > 0 => {
            r.input("grid", g);
            admissible_alpha_grid(g)
        }
        _ => return Err(CliError::Usage("give --alpha0 or --grid >= 1".into())),
    };
    r.input("branch", format!("{branch:?}").to_lowercase());
    let jobs: Vec<(usize, f64, Branch)> = alphas
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| branches(branch).into_iter().map(move |b| (i, a, b)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(i, a, b)| (i, a, b, solve_order4_helix(a, b, tol)))
        .collect();
    let mut solutions = Vec::new();
    let mut failures = Vec::new();
    for (i, a, b, res) in results {
        match res {
            Ok(sol) => {
                let label = format!("alpha0[{i}] {}: k2", format!("{b:?}").to_lowercase());
                r.roots.push(Root {
                    label,
                    value: sol.k2,
                    residual: helix_residual(&sol, tol)?,
                    status: RootStatus::Admissible,
                });
                solutions.push(sol);
            }
            Err(e @ (GeometryError::Domain(_) | GeometryError::NonFinite(_))) if grid.is_none() => {
                return Err(e.into())
            }
            Err(e) => failures.push(json!({"alpha0": a, "branch": b, "error": e.to_string()})),
        }
    }
    for a in &alphas {
        if let Some(w) = helix_interval_warning(*a) {
            if !r.warnings.contains(&w) {
                r.warnings.push(w);
            }
        }
    }
    r.residual("max_root_residual", max_of(r.roots.iter().map(|x| x.residual)));
    r.annotate("solutions", solutions).annotate("failures", failures);
    emit(r)
}

fn minus4_bracket(p: f64, x: f64) -> f64 {
    let ratio = x / (1.0 - x);
    -1.0 - 2.0 * p * (ratio + 1.0 / ratio) + 4.0 * p + 5.0
}

fn minus4_bracket_deriv(p: f64, x: f64) -> f64 {
    -2.0 * p * (1.0 / (1.0 - x).powi(2) - 1.0 / (x * x))
}

pub(crate) fn solve_sphere_bundle(
    p: usize,
    a_sq: Option<f64>,
    grid: Option<usize>,
    tol: &ToleranceConfig,
) -> CliResult<String> {
    let mut r = BiharmonicReport::new("solve sphere-bundle", *tol);
    r.input("p", p);
    r.lambda = Some(MINUS_FOUR);
    if let Some(t) = a_sq {
        r.input("a_sq", t);
        let a = sphere_bundle_analyze(p, t, tol)?;
        r.residual("tension", a.tension_norm)
            .residual("bitension", a.bitension_norm)
            .residual("lambda_residual", a.minus4_residual)
            .residual("projection", a.projection_residual)
            .residual(
                "frame_trace_defect",
                (a.frame_trace_coefficient - a.mean_curvature_coefficient).abs(),
            );
        r.annotate("analysis", &a);
        return emit(r);
    }
    // validates p
    sphere_bundle_analyze(p, 0.5, tol)?;
    let pf = p as f64;
    let closed = sphere_bundle_minus4_roots(p);
    let located: Vec<f64> = match grid {
        None => closed.to_vec(),
        Some(0) => return Err(CliError::Usage("--grid must be at least 1".into())),
        Some(cells) => {
            r.input("grid", cells);
            let pts: Vec<f64> = (1..cells).map(|i| i as f64 / cells as f64).collect();
            let flags = pts
                .par_iter()
                .map(|&x| sphere_bundle_analyze(p, x, tol))
                .collect::<Result<Vec<_>, _>>()?;
            r.annotate(
                "grid_proper_biharmonic_in_sphere",
                flags.iter().filter(|a| a.proper_biharmonic_in_sphere).count(),
            )
            .annotate(
                "grid_projection_proper_biharmonic",
                flags.iter().filter(|a| a.projection_proper_biharmonic).count(),
            );
            let f = |x: f64| minus4_bracket(pf, x);
            let df = |x: f64| minus4_bracket_deriv(pf, x);
            let eps = 1e-9;
            sign_change_brackets(f, eps, 1.0 - eps, cells)
                .into_iter()
                .filter_map(|(lo, hi)| safeguarded_newton(f, df, lo, hi, 1e-16, 200))
                .collect()
        }
    };
    for x in &located {
        let a = sphere_bundle_analyze(p, *x, tol)?;
        r.roots.push(Root {
            label: "a_sq".into(),
            value: *x,
            residual: a.minus4_residual,
            status: if a.minimal_in_sphere {
                RootStatus::ExcludedMinimal
            } else {
                RootStatus::Admissible
            },
        });
    }
    let distance = max_of(located.iter().map(|x| {
        closed
            .iter()
            .map(|c| (c - x).abs())
            .fold(f64::INFINITY, f64::min)
    }));
    r.residual("max_root_residual", max_of(r.roots.iter().map(|x| x.residual)))
        .residual("closed_form_distance", distance);
    r.annotate("closed_form_roots", closed)
        .annotate("projection_proper_biharmonic", false);
    emit(r)
}

pub(crate) fn verify_torus(radii_sq: &[f64], lambda: f64, tol: &ToleranceConfig) -> CliResult<String> {
    let spec = LagrangianTorusSpec::from_squares(radii_sq)?;
    let z = zhang_residual(&spec, tol);
    let mut r = BiharmonicReport::new("verify torus", *tol);
    r.input("radii_sq", radii_sq.to_vec()).input("lambda", lambda);
    r.lambda = Some(lambda);
    r.residual("tension", torus_tension_norm(&spec))
        .residual("bitension", torus_extrinsic_oracle(&spec, 0.0))
        .residual("lambda_residual", torus_extrinsic_oracle(&spec, lambda))
        .residual("zhang", z.norm);
    r.annotate("zhang_components", &z.residuals).annotate("minimal", z.minimal);
    if z.minimal {
        r.warnings
            .push("all a_k² = 1/(n+1): the torus is minimal, hence harmonic and excluded".into());
    }
    emit(r)
}

pub(crate) fn verify_hypersurface(
    n: usize,
    mean_curvature_sq: f64,
    second_ff_norm_sq: f64,
    c: f64,
    m_bar: Option<usize>,
    tol: &ToleranceConfig,
) -> CliResult<String> {
    let data = HypersurfaceData {
        n,
        mean_curvature_sq,
        second_ff_norm_sq,
        c,
        m_bar,
    };
    let p = biharmonic_core::clifford::hypersurface_predicates(&data, tol)?;
    let mut r = BiharmonicReport::new("verify hypersurface", *tol);
    r.input("n", n)
        .input("mean_curvature_sq", mean_curvature_sq)
        .input("second_ff_norm_sq", second_ff_norm_sq)
        .input("c", c);
    if let Some(m) = m_bar {
        r.input("m_bar", m);
    }
    r.residual("second_ff_defect", p.second_ff_defect.abs());
    if let Some(note) = &p.nonexistence_note {
        r.warnings.push(note.clone());
    }
    r.annotate("predicates", &p);
    emit(r)
}

pub(crate) fn classify_helix(
    curvatures: Option<((f64, f64), f64)>,
    torsions: Option<Vec<f64>>,
    alpha0: Option<f64>,
    branch: BranchArg,
    tol: &ToleranceConfig,
) -> CliResult<String> {
    let mut r = BiharmonicReport::new("classify helix", *tol);
    let (k, t, je1) = match (curvatures, torsions, alpha0) {
        (Some(((k1, k2), k3)), Some(t), None) => {
            if t.len() != 6 {
                return Err(CliError::Usage(format!(
                    "--torsions takes six values (τ12,τ13,τ14,τ23,τ24,τ34), got {}",
                    t.len()
                )));
            }
            r.input("k1", k1).input("k2", k2).input("k3", k3).input("torsions", t.clone());
            let je1 = vec![0.0, -t[0], -t[1], -t[2]];
            ([k1, k2, k3], t, je1)
        }
        (None, None, Some(a)) => {
            let b = match branch {
                BranchArg::Both => return Err(CliError::Usage("--branch must be plus or minus here".into())),
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            };
            r.input("alpha0", a).input("branch", format!("{b:?}").to_lowercase());
            if let Some(w) = helix_interval_warning(a) {
                r.warnings.push(w);
            }
            let sol = solve_order4_helix(a, b, tol)?;
            r.annotate("solution", &sol);
            ([sol.k1, sol.k2, sol.k3], sol.torsions().to_vec(), sol.je1().to_vec())
        }
        _ => {
            return Err(CliError::Usage(
                "give --k1 --k2 --k3 --torsions, or --alpha0 with --branch".into(),
            ))
        }
    };
    let class = classify_helix_cp2(k[0], k[1], k[2], &t, tol)?;
    let inv = CurveInvariants {
        order: 4,
        k,
        tau12: t[0],
        ..Default::default()
    };
    let bitension = cpn_bitension_from_invariants(&inv, &je1, tol)?;
    let best = class
        .rows()
        .iter()
        .map(|x| x.distance)
        .fold(f64::INFINITY, f64::min);
    r.residual("tension", k[0])
        .residual("bitension", bitension.norm)
        .residual("classification_distance", best);
    r.annotate("class", class.label()).annotate("rows", class.rows());
    emit(r)
}
