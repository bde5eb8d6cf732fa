//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Built without the libtest harness.

mod common;

use std::f64::consts::PI;
use std::fmt::Display;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use nodalscope::dihedral::{self, ContraPhasalSolver, DihedralParams};
use nodalscope::nodal::{self, NodalOutcome, NodalRecord};
use nodalscope::random::{self, RandomGraphOptions};
use nodalscope::scattering::{self, attach_leads, OpenGraph};
use nodalscope::spectral;
use nodalscope::verify;
use nodalscope::{builtins, linalg, Error, GraphPoint, MetricGraph, VertexCondition::*};
use rand::Rng;

type Outcome = Result<String, String>;

fn err(e: impl Display) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn point(edge: &str, x: f64) -> GraphPoint {
    GraphPoint::new(edge, x)
}

fn records(g: &MetricGraph, n_max: usize) -> Result<Vec<NodalRecord>, String> {
    Ok(nodal::nodal_records(g, n_max)
        .map_err(err)?
        .into_iter()
        .filter_map(|o| match o {
            NodalOutcome::Record(r) => Some(r),
            NodalOutcome::Skipped { .. } => None,
        })
        .collect())
}

fn closed_form_spectra() -> Outcome {
    let d = builtins::interval(1.0, Dirichlet, Dirichlet);
    let ks = spectral::first_eigenvalues(&d, 100).map_err(err)?.expanded();
    let worst_d = (1..=100).map(|n| (ks[n - 1] - n as f64 * PI).abs()).fold(0.0, f64::max);
    ensure(worst_d < 1e-9, || format!("Dirichlet interval deviates by {worst_d:e}"))?;

    let nn = builtins::interval(1.0, Neumann, Neumann);
    let ks = spectral::first_eigenvalues(&nn, 100).map_err(err)?.expanded();
    let worst_n = (1..=100).map(|n| (ks[n - 1] - (n - 1) as f64 * PI).abs()).fold(0.0, f64::max);
    ensure(ks[0] == 0.0 && worst_n < 1e-9, || format!("Neumann interval deviates by {worst_n:e}"))?;

    let m_max = 20;
    let circle = spectral::eigenvalues_up_to(&builtins::circle(1.0), 2.0 * PI * (m_max as f64 + 0.5)).map_err(err)?;
    ensure(circle.zero_modes == 1 && circle.pairs[0].k == 0.0, || "circle zero mode missing".into())?;
    let positive: Vec<_> = circle.pairs.iter().filter(|p| p.k > 0.0).collect();
    ensure(positive.len() == m_max, || format!("circle: {} positive levels, expected {m_max}", positive.len()))?;
    let mut worst_c = 0.0f64;
    for (m, p) in (1..).zip(&positive) {
        ensure(p.multiplicity == 2, || format!("circle level {m} has multiplicity {}", p.multiplicity))?;
        worst_c = worst_c.max((p.k - 2.0 * PI * m as f64).abs());
    }
    ensure(worst_c < 1e-9, || format!("circle deviates by {worst_c:e}"))?;
    Ok(format!("max deviation D {worst_d:.1e}, N {worst_n:.1e}, circle {worst_c:.1e}; {m_max} double levels"))
}

/// A random graph with leads on one or two random vertices.
fn random_open_graph<R: Rng>(rng: &mut R, opts: &RandomGraphOptions) -> Result<OpenGraph, String> {
    let g = random::random_graph(rng, opts);
    let nv = g.num_vertices();
    let first = rng.random_range(0..nv);
    let mut marked = vec![g.vertices()[first].id.clone()];
    if rng.random_bool(0.5) {
        let second = (first + 1 + rng.random_range(0..nv - 1)) % nv;
        marked.push(g.vertices()[second].id.clone());
    }
    attach_leads(&g, &marked).map_err(err)
}

fn unitarity() -> Outcome {
    let mut rng = random::rng(2024);
    let (mut worst_u, mut worst_s, mut worst_q) = (0.0f64, 0.0f64, 0.0f64);
    let mut samples = 0;
    let mut in_delta = 0;
    for i in 0..190 {
        let opts = RandomGraphOptions { beta: i % 3, delta_vertex: 0.3, ..Default::default() };
        let og = random_open_graph(&mut rng, &opts)?;
        let k = rng.random_range(0.1..20.0);
        worst_u = worst_u.max(linalg::unitarity_defect(&spectral::evolution_map(&og.base, k).map_err(err)?));
        let s = scattering::scattering_matrix(&og, k).map_err(err)?;
        worst_q = worst_q.max(linalg::unitarity_defect(&s.q()));
        worst_s = worst_s.max(linalg::unitarity_defect(s.s()));
        in_delta += usize::from(s.in_delta);
        samples += 1;
    }
    // the b = c cycle with leads at both vertices is singular at k = m pi / 2
    let cycle = builtins::dihedral_cycle(1.0, 1.0).map_err(err)?;
    let og = attach_leads(&cycle, &["p", "q"]).map_err(err)?;
    for m in 1..=10 {
        let k = PI * m as f64 / 2.0;
        worst_u = worst_u.max(linalg::unitarity_defect(&spectral::evolution_map(&cycle, k).map_err(err)?));
        let s = scattering::scattering_matrix(&og, k).map_err(err)?;
        worst_q = worst_q.max(linalg::unitarity_defect(&s.q()));
        worst_s = worst_s.max(linalg::unitarity_defect(s.s()));
        in_delta += usize::from(s.in_delta);
        samples += 1;
    }
    ensure(samples == 200, || format!("{samples} samples"))?;
    ensure(in_delta >= 5, || format!("only {in_delta} singular samples"))?;
    ensure(worst_u < 1e-12 && worst_q < 1e-12, || format!("U defect {worst_u:e}, Q defect {worst_q:e}"))?;
    ensure(worst_s < 1e-10, || format!("S defect {worst_s:e}"))?;
    Ok(format!("{samples} samples ({in_delta} singular); max defect U {worst_u:.1e}, Q {worst_q:.1e}, S {worst_s:.1e}"))
}

fn monotone_phases() -> Outcome {
    let r3 = 3f64.sqrt();
    let tree = random::seeded_graph(31, &RandomGraphOptions { beta: 1, ..Default::default() });
    let cases: Vec<(&str, OpenGraph)> = vec![
        ("interval", attach_leads(&builtins::interval(1.0 / r3, Neumann, Dirichlet), &["l"]).map_err(err)?),
        ("lasso", attach_leads(&builtins::lasso(), &["b"]).map_err(err)?),
        ("dumbbell", attach_leads(&builtins::dumbbell(), &["a", "b"]).map_err(err)?),
        (
            "dihedral cycle",
            attach_leads(&DihedralParams::default().cycle(), &["p", "q"]).map_err(err)?,
        ),
        ("random", attach_leads(&tree, &["v0", "v1"]).map_err(err)?),
    ];
    let steps = 10_000;
    let (k0, h) = (0.05, 1e-3);
    let ks: Vec<f64> = (0..=steps).map(|i| k0 + h * i as f64).collect();
    let mut min_step = f64::INFINITY;
    for (name, og) in &cases {
        let rows = scattering::scattering_sweep(og, &ks).map_err(err)?;
        let mut violations = 0;
        for w in rows.windows(2) {
            for (a, b) in w[0].phases.iter().zip(&w[1].phases) {
                min_step = min_step.min(b - a);
                violations += usize::from(b - a < -1e-8);
            }
        }
        ensure(violations == 0, || format!("{name}: {violations} decreasing steps"))?;
        let first = &rows[0].phases;
        let last = &rows[steps].phases;
        ensure(first.iter().zip(last).all(|(a, b)| b > a), || format!("{name}: a branch did not advance"))?;
    }
    Ok(format!("{} graphs x {steps} steps, smallest phase step {min_step:.2e}", cases.len()))
}

fn duality() -> Outcome {
    let k_max = 20.0;
    let mut rng = random::rng(77);
    let mut worst = 0.0f64;
    let mut total = 0;
    let mut check = |name: String, og: &OpenGraph| -> Result<(), String> {
        let dual = scattering::inside_outside_spectrum(og, k_max).map_err(|e| format!("{name}: {e}"))?;
        let spec: Vec<f64> =
            spectral::eigenvalues_up_to(&og.base, k_max).map_err(err)?.expanded().into_iter().filter(|&k| k > 0.0).collect();
        let dev = common::max_deviation(&dual, &spec)
            .ok_or_else(|| format!("{name}: {} dual values vs {} eigenvalues", dual.len(), spec.len()))?;
        ensure(dev < 1e-8, || format!("{name}: deviation {dev:e}"))?;
        worst = worst.max(dev);
        total += spec.len();
        Ok(())
    };
    for i in 0..10 {
        let opts = RandomGraphOptions { beta: i % 3, ..Default::default() };
        let og = random_open_graph(&mut rng, &opts)?;
        check(format!("random graph {i}"), &og)?;
    }
    let cycle = builtins::dihedral_cycle(1.0, 1.0).map_err(err)?;
    let og = attach_leads(&cycle, &["p", "q"]).map_err(err)?;
    let singular = scattering::delta_set(&og, k_max).map_err(err)?;
    ensure(!singular.is_empty(), || "b = c cycle has an empty singular set".into())?;
    check("b = c cycle".into(), &og)?;
    Ok(format!("11 graphs, {total} eigenvalues, {} singular points on the cycle; max deviation {worst:.1e}", singular.len()))
}

fn nodal_bounds() -> Outcome {
    let mut checked = 0;
    for seed in 0..10u64 {
        let beta = (seed % 3) as usize;
        let g = random::seeded_graph(100 + seed, &RandomGraphOptions { beta, ..Default::default() });
        let recs: Vec<_> = records(&g, 90)?.into_iter().take(50).collect();
        ensure(recs.len() == 50, || format!("seed {seed}: only {} usable eigenfunctions", recs.len()))?;
        for r in &recs {
            ensure(r.all_bounds_hold(), || format!("seed {seed}, n = {}: bounds fail for {r:?}", r.n))?;
            if beta == 0 {
                ensure(r.mu == r.n - 1 && r.nu == r.n, || format!("tree seed {seed}, n = {}: mu {}, nu {}", r.n, r.mu, r.nu))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} eigenfunctions on 10 graphs satisfy every bound; trees exact"))
}

/// Formula against direct zero counts over all applicable indices.
fn formula_agreement(name: &str, g: &MetricGraph, n_max: usize) -> Result<(usize, usize), String> {
    let mut applicable = 0;
    let mut skipped = 0;
    for r in records(g, n_max)? {
        match nodal::formula_mu(g, r.n, r.k) {
            Ok(Some(f)) => {
                ensure(f == r.mu, || format!("{name}, n = {}: formula {f} vs direct {}", r.n, r.mu))?;
                applicable += 1;
            }
            Ok(None) | Err(Error::AmbiguousCount(_)) => skipped += 1,
            Err(e) => return Err(format!("{name}, n = {}: {e}", r.n)),
        }
    }
    ensure(applicable > n_max / 2, || format!("{name}: only {applicable} applicable indices"))?;
    Ok((applicable, skipped))
}

fn single_cycle() -> Outcome {
    let lasso = builtins::lasso();
    // first seed giving a cycle with a pendant tree and no self-loop
    let opts = RandomGraphOptions { beta: 1, min_vertices: 4, ..Default::default() };
    let random = (0..)
        .map(|seed| random::seeded_graph(seed, &opts))
        .find(|g| {
            (0..g.num_vertices()).any(|v| g.degree(v) == 1) && g.edges().iter().all(|e| e.from != e.to)
        })
        .expect("some seed qualifies");
    let (a, _) = formula_agreement("lasso", &lasso, 100)?;
    let (b, _) = formula_agreement("random", &random, 100)?;
    Ok(format!("exact match on {a} lasso and {b} random-graph indices"))
}

fn disjoint_cycles() -> Outcome {
    let (a, _) = formula_agreement("dumbbell", &builtins::dumbbell(), 60)?;
    let (b, _) = formula_agreement("cycle chain", &builtins::cycle_chain(), 60)?;
    Ok(format!("exact match on {a} dumbbell and {b} cycle-chain indices"))
}

fn dihedral_formulas() -> Outcome {
    let params = DihedralParams::default();
    let recs = records(&params.graph(), 100)?;
    let mut old = 0;
    for r in &recs {
        let (m, d) = (dihedral::dihedral_mu(&params, r.n), dihedral::dihedral_nu(&params, r.n));
        ensure(r.mu_with_boundary == m, || format!("n = {}: zeros {} vs formula {m}", r.n, r.mu_with_boundary))?;
        ensure(r.nu == d, || format!("n = {}: domains {} vs formula {d}", r.n, r.nu))?;
        if r.n > params.threshold_index() {
            let f = dihedral::dihedral_old_formula(&params, r.n);
            ensure(f == r.nu as f64, || format!("n = {}: earlier formula {f} vs {}", r.n, r.nu))?;
            old += 1;
        }
    }
    ensure(recs.len() >= 90, || format!("only {} applicable indices", recs.len()))?;
    Ok(format!("{} indices match both formulas; earlier formula matches {old} indices above n = {}", recs.len(), params.threshold_index()))
}

/// Compares the scattering-side sign count with eigenfunction signs on
/// the first `count` positive eigenvalues.
fn swcf_against(
    name: &str,
    g: &MetricGraph,
    x1: &GraphPoint,
    x2: &GraphPoint,
    count: usize,
    oracle_sign: impl Fn(usize, &spectral::Eigenpair) -> Result<i64, String>,
) -> Result<(), String> {
    let spec = spectral::first_eigenvalues(g, count + 2).map_err(err)?;
    let positive: Vec<_> = spec.pairs.iter().filter(|p| p.k > 0.0).cloned().collect();
    ensure(positive.iter().take(count + 1).all(|p| p.is_simple()), || format!("{name}: degenerate level"))?;
    let top = 0.5 * (positive[count - 1].k + positive[count].k);
    let events = scattering::swcf_events(g, x1, x2, top).map_err(err)?;
    ensure(events.len() == count, || format!("{name}: {} events, expected {count}", events.len()))?;
    let mut oracle = spec.zero_modes as i64;
    let mut mids = Vec::new();
    let mut expect = Vec::new();
    for (i, (e, p)) in events.iter().zip(&positive).enumerate() {
        ensure((e.k - p.k).abs() < 1e-8, || format!("{name}: event {} at {} vs eigenvalue {}", i + 1, e.k, p.k))?;
        let s = oracle_sign(i + 1, p)?;
        ensure(e.sign == s, || format!("{name}: sign {} vs oracle {s} at k = {}", e.sign, p.k))?;
        oracle += s;
        mids.push(0.5 * (p.k + positive[i + 1].k));
        expect.push(oracle);
    }
    let counts = scattering::sign_weighted_counts(g, x1, x2, &mids).map_err(err)?;
    ensure(counts == expect, || format!("{name}: counts {counts:?} vs oracle {expect:?}"))?;
    for (&k, &w) in mids.iter().zip(&counts) {
        let n = spectral::counting_function(g, k).map_err(err)? as i64;
        let diff = n - w;
        ensure(diff >= 0 && diff % 2 == 0 && diff / 2 <= n, || format!("{name}: N = {n}, N_x1x2 = {w} at k = {k}"))?;
    }
    let last = scattering::differing_sign_count(g, x1, x2, *mids.last().expect("nonempty")).map_err(err)?;
    ensure(last as i64 == (spectral::counting_function(g, mids[count - 1]).map_err(err)? as i64 - counts[count - 1]) / 2, || {
        format!("{name}: differing count {last} inconsistent")
    })?;
    Ok(())
}

fn swcf() -> Outcome {
    let (x1, x2) = (0.1 * 2f64.sqrt(), 0.5 * (5f64.sqrt() - 1.0));
    let interval = builtins::interval(1.0, Dirichlet, Dirichlet);
    swcf_against("interval", &interval, &point("e", x1), &point("e", x2), 50, |n, _| {
        Ok((common::dirichlet_mode(n, x1) * common::dirichlet_mode(n, x2)).signum() as i64)
    })?;
    let lasso = builtins::lasso();
    let (p1, p2) = (point("loop", x1), point("loop", x2));
    swcf_against("lasso", &lasso, &p1, &p2, 50, |_, pair| {
        let f = spectral::eigenfunction(&lasso, pair).map_err(err)?;
        let v1 = spectral::evaluate(&lasso, &f, &p1).map_err(err)?;
        let v2 = spectral::evaluate(&lasso, &f, &p2).map_err(err)?;
        let scale = spectral::sup_norm(&lasso, &f);
        ensure(v1.abs() > 1e-6 * scale && v2.abs() > 1e-6 * scale, || format!("oracle vanishes at k = {}", pair.k))?;
        Ok((v1 * v2).signum() as i64)
    })?;
    Ok("50 eigenvalues each on the interval and the lasso; counts and differing counts consistent".into())
}

fn interlacing() -> Outcome {
    let bases = [
        ("lasso", builtins::lasso()),
        ("dumbbell", builtins::dumbbell()),
        ("dihedral", DihedralParams::default().graph()),
    ];
    let mut parts = Vec::new();
    for (name, g) in &bases {
        let rep = verify::verify_interlacing(g, 20, 7).map_err(err)?;
        ensure(rep.inequalities.ok(), || format!("{name}: {:?}", rep.inequalities.first_failure))?;
        ensure(rep.strictness.ok() && rep.strictness.checked > 0, || {
            format!("{name}: strictness {:?} over {} cases", rep.strictness.first_failure, rep.strictness.checked)
        })?;
        parts.push(format!("{name} {}/{} strict {}", rep.inequalities.passed, rep.inequalities.checked, rep.strictness.checked));
    }
    Ok(parts.join(", "))
}

fn dihedral_events() -> Outcome {
    let params = DihedralParams::default();
    let g = params.graph();
    let events = dihedral::dihedral_events(&params, 30);
    let k_top = events.last().expect("30 events").k;
    let spectrum = spectral::eigenvalues_up_to(&g, k_top + 1.0).map_err(err)?.expanded();
    let mut partial = 0;
    let mut min_gap = f64::INFINITY;
    for e in &events {
        partial += e.d;
        let n = spectral::counting_function(&g, e.k).map_err(err)?;
        ensure(partial == n, || format!("P = {}: sum d_p = {partial} vs N = {n}", e.p))?;
        let gap = spectrum.iter().map(|k| (k - e.k).abs()).fold(f64::INFINITY, f64::min);
        min_gap = min_gap.min(gap);
    }
    ensure(min_gap >= 1e-8, || format!("event within {min_gap:e} of an eigenvalue"))?;
    let solver = ContraPhasalSolver::new(&params).map_err(err)?;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let k = k_top * (i as f64 + 0.5) / 100.0;
        let d = solver.at(k).map_err(err)?.defects();
        worst = worst.max(d.d1_n2).max(d.d2_n1).max(d.realness);
    }
    ensure(worst < 1e-8, || format!("contra-phasal defect {worst:e}"))?;
    Ok(format!("30 events consistent, min gap {min_gap:.2e}, contra-phasal defect {worst:.1e} at 100 samples"))
}

fn diagnostics() -> Outcome {
    let params = DihedralParams::default();
    let rows = dihedral::spectral_identity_check(&params, 200).map_err(err)?;
    let violations: Vec<usize> = rows.iter().filter(|r| !r.equal).map(|r| r.n).collect();
    ensure(violations.is_empty(), || format!("floor identity fails at n = {violations:?}"))?;

    let eligible: Vec<usize> = (1..=100).filter(|&n| dihedral::discontinuity_distance(&params, n) > 0.01).collect();
    let sup_error = |terms: usize| -> f64 {
        eligible
            .iter()
            .map(|&n| (dihedral::periodic_orbit_mu(&params, n, terms) - dihedral::dihedral_mu(&params, n) as f64).abs())
            .fold(0.0, f64::max)
    };
    let ks = [1e2, 1e3, 1e4, 1e5];
    let errors: Vec<f64> = ks.iter().map(|&t| sup_error(t as usize)).collect();
    ensure(errors[3] < 1e-3, || format!("K = 1e5 sup error {:e}", errors[3]))?;
    let slope = common::log_log_slope(&ks, &errors);
    ensure((-1.25..=-0.75).contains(&slope), || format!("sup-error slope {slope} (errors {errors:?})"))?;
    Ok(format!(
        "identity holds for n <= 200; {} indices, sup error at K = 1e5 {:.1e}, log-log slope {slope:.3}",
        eligible.len(),
        errors[3]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("closed-form spectra", closed_form_spectra),
        ("unitarity of U, Q and S", unitarity),
        ("monotone scattering phases", monotone_phases),
        ("inside-outside duality", duality),
        ("nodal bounds", nodal_bounds),
        ("single-cycle zero formula", single_cycle),
        ("disjoint-cycle zero formula", disjoint_cycles),
        ("dihedral count formulas", dihedral_formulas),
        ("sign-weighted counting", swcf),
        ("interlacing under surgery", interlacing),
        ("dihedral event bookkeeping", dihedral_events),
        ("identity and periodic-orbit sums", diagnostics),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
