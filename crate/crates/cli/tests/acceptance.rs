//! Acceptance criteria 1 to 10. Each test prints one `PASS`/`FAIL` line to
//! stderr (bypassing the harness capture) and then asserts.

use std::f64::consts::{PI, TAU};
use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use osculate::circles::{evolute_point, evolute_signed_length, verify_tait_kneser, PairRelation};
use osculate::conics::{osculating_conic, verify_theorem5, Conic};
use osculate::cubics::{osculating_cubic, spiral_oval_preset, Cubic, DEFAULT_RESOLUTION};
use osculate::curves::{find_vertices, PlaneCurve, DEFAULT_VERTEX_GRID};
use osculate::moebius::{
    moebius_graphs_disjoint, schwarzian, schwarzian_zero_count, verify_theorem6, CircleDiffeo, MoebiusMap,
};
use osculate::render::FigurePreset;
use osculate::taylor::{
    count_derivative_zeros, difference_higher_convexity, taylor_poly, taylor_velocity, verify_disjoint_even,
    verify_disjoint_odd, SmoothFunction, TaylorOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and budgets.
const STRING_TOL: f64 = 1e-7;
const CRITERION_1_BUDGET: Duration = Duration::from_secs(5);
const ASTROID_TOL: f64 = 1e-9;
const EVOLUTE_TOTAL_TOL: f64 = 1e-6;
const VELOCITY_REL_TOL: f64 = 1e-6;
const VELOCITY_STEP: f64 = 1e-5;
const CONIC_TOL: f64 = 1e-9;
const SCHWARZIAN_TOL: f64 = 1e-10;
const SCHWARZIAN_TAN_TOL: f64 = 1e-9;
const ORACLE_GRID: usize = 10_000;
const CUBIC_TOL: f64 = 1e-7;
const CRITERION_9_BUDGET: Duration = Duration::from_secs(60);
const SEED: u64 = 2024;

/// Prints the criterion line, then fails the test if any check failed.
fn verdict(n: u32, title: &str, checks: &[(&str, bool)]) {
    let ok = checks.iter().all(|c| c.1);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let line = if ok {
        format!("acceptance criterion {n:>2}: PASS  {title}\n")
    } else {
        format!("acceptance criterion {n:>2}: FAIL  {title}  (failed: {})\n", failed.join("; "))
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "{}", line.trim_end());
}

#[test]
fn criterion_01_tait_kneser_spiral() {
    let c = PlaneCurve::log_spiral(0.2, 0.0, 3.0 * PI).unwrap();
    let start = Instant::now();
    let r = verify_tait_kneser(&c, 100).unwrap();
    let elapsed = start.elapsed();
    let nested = r.report.pairs().filter(|p| p.2.is_nested()).count();
    let string_ok = r.string_defects.len() == 99 && r.string_defects.iter().all(|d| *d < STRING_TOL);
    let title = format!(
        "LogSpiral(0.2) on [0, 3pi], 100 circles: {nested}/4950 nested, worst margin {:.3e}, max string defect {:.2e}, {:.2?}",
        r.report.worst_margin,
        r.string_defects.iter().fold(0.0f64, |a, b| a.max(*b)),
        elapsed
    );
    verdict(
        1,
        &title,
        &[
            ("4950 nested pairs", nested == 4950 && r.report.pairs().count() == 4950),
            ("worst margin > 0", r.report.worst_margin > 0.0),
            ("string identity < 1e-7", string_ok),
            ("runtime < 5 s", elapsed < CRITERION_1_BUDGET),
        ],
    );
}

#[test]
fn criterion_02_ellipse_negative_control() {
    // The arc contains the vertex at t = pi/2.
    let e = PlaneCurve::ellipse_arc(2.0, 1.0, 0.3, PI - 0.3).unwrap();
    let r = verify_tait_kneser(&e, 40).unwrap();
    let intersecting = r.report.count(PairRelation::Intersecting);
    let title = format!(
        "Ellipse(2,1) arc [0.3, pi-0.3]: monotone curvature {}, offending t {:?}, {intersecting} intersecting pairs",
        r.report.monotone_curvature, r.offending_t
    );
    verdict(
        2,
        &title,
        &[
            ("precondition fails", !r.report.monotone_curvature && r.offending_t.is_some()),
            ("some pair intersects", intersecting >= 1),
            ("not passed", !r.report.passed),
        ],
    );
}

#[test]
fn criterion_03_evolute_oracles() {
    let (a, b) = (2.0f64, 1.0f64);
    let e = PlaneCurve::ellipse(a, b).unwrap();
    let worst = (0..1000)
        .map(|i| {
            let t = TAU * i as f64 / 1000.0;
            let p = evolute_point(&e, t).unwrap();
            let astroid = [
                (a * a - b * b) / a * t.cos().powi(3),
                (b * b - a * a) / b * t.sin().powi(3),
            ];
            (p[0] - astroid[0]).abs().max((p[1] - astroid[1]).abs())
        })
        .fold(0.0f64, f64::max);
    let mut totals = vec![evolute_signed_length(&e).unwrap().signed.abs()];
    for c in PlaneCurve::fourier_oval_batch(SEED, 20) {
        totals.push(evolute_signed_length(&c).unwrap().signed.abs());
    }
    let max_total = totals.iter().fold(0.0f64, |a, b| a.max(*b));
    let title = format!(
        "astroid deviation {worst:.2e} on 1000 samples; max |signed evolute length| {max_total:.2e} over ellipse + 20 Fourier ovals"
    );
    verdict(
        3,
        &title,
        &[
            ("astroid < 1e-9", worst < ASTROID_TOL),
            ("signed lengths < 1e-6", max_total < EVOLUTE_TOTAL_TOL),
        ],
    );
}

#[test]
fn criterion_04_taylor_theorems() {
    let cube = SmoothFunction::monomial(3);
    let opts = TaylorOptions {
        samples: 20,
        ..TaylorOptions::default()
    };
    let even = verify_disjoint_even(&cube, [-1.0, 1.0], 2, &opts).unwrap();
    let even_roots = even.pairs.iter().map(|p| p.roots).max().unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_rel = 0.0f64;
    for _ in 0..100 {
        let t = rng.random_range(-1.0..1.0);
        let x = rng.random_range(-3.0..3.0);
        let exact = taylor_velocity(&cube, t, 2, x).unwrap();
        let plus = taylor_poly(&cube, t + VELOCITY_STEP, 2).unwrap().eval(x);
        let minus = taylor_poly(&cube, t - VELOCITY_STEP, 2).unwrap().eval(x);
        let fd = (plus - minus) / (2.0 * VELOCITY_STEP);
        worst_rel = worst_rel.max((fd - exact).abs() / exact.abs().max(1.0));
    }

    let quartic = SmoothFunction::monomial(4);
    let odd = verify_disjoint_odd(&quartic, [-1.0, 1.0], 3, &opts).unwrap();
    let odd_roots = odd.pairs.iter().map(|p| p.roots).max().unwrap_or(0);
    let title = format!(
        "x^3, n=2: {} pairs, max real roots {even_roots}; velocity rel. error {worst_rel:.2e}; x^4, n=3: {} pairs, max roots in [b, b+100] {odd_roots}",
        even.pairs.len(),
        odd.pairs.len()
    );
    verdict(
        4,
        &title,
        &[
            ("even: 190 pairs root-free", even.pairs.len() == 190 && even_roots == 0 && even.passed),
            ("velocity identity < 1e-6", worst_rel < VELOCITY_REL_TOL),
            ("odd: root-free on [b, b+100]", odd.pairs.len() == 190 && odd_roots == 0 && odd.passed),
        ],
    );
}

#[test]
fn criterion_05_convexity_remark() {
    let f = SmoothFunction::monomial(5);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut second_roots = 0;
    let mut all_positive = true;
    for _ in 0..10 {
        let a = rng.random_range(-2.0..2.0);
        let b = rng.random_range(-2.0..2.0);
        let r = difference_higher_convexity(&f, a, b, 4).unwrap();
        let second = r.orders.iter().find(|o| o.order == 2).expect("order 2 judged");
        second_roots += second.real_roots;
        all_positive &= r.passed && r.orders.iter().all(|o| o.positive_on_grid);
    }
    let title = format!("x^5, n=4, 10 pairs: real roots of D'' total {second_roots}, even orders positive {all_positive}");
    verdict(
        5,
        &title,
        &[("D'' root-free", second_roots == 0), ("even orders positive", all_positive)],
    );
}

#[test]
fn criterion_06_conics() {
    let s = PlaneCurve::log_spiral(0.2, 0.0, TAU).unwrap();
    let r = verify_theorem5(&s, 40).unwrap();
    let sign_constant = r.sign_change_at.is_none() && {
        let s0 = r.sextactic[0].signum();
        r.sextactic.iter().all(|v| v.signum() == s0 && *v != 0.0)
    };
    let mut worst = 0.0f64;
    for (a, b) in [(2.0, 1.0), (3.0, 0.5), (1.0, 1.5)] {
        let e = PlaneCurve::ellipse(a, b).unwrap();
        let own = Conic::new([1.0 / (a * a), 0.0, 1.0 / (b * b), 0.0, 0.0, -1.0]).unwrap();
        for i in 0..8 {
            let k = osculating_conic(&e, 0.3 + 0.7 * i as f64).unwrap();
            let d = k
                .coeffs
                .iter()
                .zip(own.coeffs)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max)
                .min(k.coeffs.iter().zip(own.coeffs).map(|(x, y)| (x + y).abs()).fold(0.0f64, f64::max));
            worst = worst.max(d);
        }
    }
    let title = format!(
        "LogSpiral(0.2), 40 conics: sextactic sign constant {sign_constant}, max real intersections {}, {} pairs; ellipse self-osculation deviation {worst:.2e}",
        r.max_intersections,
        r.report.pairs().count()
    );
    verdict(
        6,
        &title,
        &[
            ("sextactic constant sign", sign_constant),
            ("0 intersections for all pairs", r.max_intersections == 0 && r.report.pairs().count() == 780),
            ("nested", r.report.passed),
            ("ellipse conic < 1e-9", worst < CONIC_TOL),
        ],
    );
}

/// Intersection oracle: graphs of `g1` and `g2` on the projective line meet
/// where `g1 v` and `g2 v` are parallel for `v = (cos s, sin s)`.
fn graphs_meet_on_grid(g1: &MoebiusMap, g2: &MoebiusMap) -> bool {
    let act = |g: &MoebiusMap, v: [f64; 2]| {
        let [a, b, c, d] = g.matrix();
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    };
    let cross = |s: f64| {
        let v = [s.cos(), s.sin()];
        let (p, q) = (act(g1, v), act(g2, v));
        p[0] * q[1] - p[1] * q[0]
    };
    let first = cross(0.0);
    (1..=ORACLE_GRID).any(|i| {
        let c = cross(PI * i as f64 / ORACLE_GRID as f64);
        c == 0.0 || c.signum() != first.signum()
    })
}

#[test]
fn criterion_07_moebius() {
    let r = verify_theorem6(&SmoothFunction::Tan, [0.1, 1.4], 30).unwrap();
    let all_disjoint = r.pairs.len() == 435 && r.pairs.iter().all(|p| p.disjoint);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = 0;
    let mut tested = 0;
    while tested < 100 {
        let mut draw = || {
            let m: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
            MoebiusMap::new(m[0], m[1], m[2], m[3])
        };
        let (Ok(g1), Ok(g2)) = (draw(), draw()) else { continue };
        let Ok(disjoint) = moebius_graphs_disjoint(&g1, &g2) else { continue };
        tested += 1;
        if disjoint != graphs_meet_on_grid(&g1, &g2) {
            agree += 1;
        }
    }

    let g = MoebiusMap::new(2.0, -1.0, 0.5, 3.0).unwrap();
    let s_moebius = (0..200)
        .map(|i| schwarzian(&g, -1.0 + 0.01 * i as f64).unwrap().abs())
        .fold(0.0f64, f64::max);
    let s_tan = (0..200)
        .map(|i| (schwarzian(&SmoothFunction::Tan, -1.5 + 0.015 * i as f64).unwrap() - 2.0).abs())
        .fold(0.0f64, f64::max);
    let title = format!(
        "tan on [0.1, 1.4], 30 maps: {} pairs all disjoint {all_disjoint}; grid oracle agreement {agree}/100; max |S(moebius)| {s_moebius:.1e}; max |S(tan) - 2| {s_tan:.1e}",
        r.pairs.len()
    );
    verdict(
        7,
        &title,
        &[
            ("theorem sweep passes", all_disjoint && r.passed),
            ("criterion agrees with grid", agree == 100),
            ("S(moebius) < 1e-10", s_moebius < SCHWARZIAN_TOL),
            ("S(tan) = 2 +- 1e-9", s_tan < SCHWARZIAN_TAN_TOL),
        ],
    );
}

#[test]
fn criterion_08_cubic_ovals() {
    let target = Cubic::new([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
    let arc = PlaneCurve::cubic_oval(target.coeffs, [-0.5, 0.0]).unwrap();
    let recovery = (0..12)
        .map(|i| {
            let k = osculating_cubic(&arc, 0.25 + 0.5 * i as f64).unwrap();
            k.distance_up_to_sign(&target)
        })
        .fold(0.0f64, f64::max);
    let p = spiral_oval_preset(DEFAULT_RESOLUTION).unwrap();
    let n = p.result.report.samples.len();
    let nested = p.result.report.pairs().filter(|q| q.2.is_nested()).count();
    let title = format!(
        "y^2 = x(x-1)(x+1) recovery {recovery:.2e}; spiral preset growth {} spacing {}: {}/{n} ovals, {nested}/{} pairs nested at resolution {DEFAULT_RESOLUTION}",
        p.growth,
        p.spacing,
        n - p.result.missing_ovals.len(),
        n * (n - 1) / 2
    );
    verdict(
        8,
        &title,
        &[
            ("recovery < 1e-7", recovery < CUBIC_TOL),
            ("every sample has an oval", p.result.missing_ovals.is_empty()),
            ("all pairs nested", nested == n * (n - 1) / 2 && p.result.report.passed),
        ],
    );
}

#[test]
fn criterion_09_counting_batches() {
    let start = Instant::now();
    let ovals = PlaneCurve::fourier_oval_batch(SEED, 100);
    let vertices: Vec<usize> = ovals
        .iter()
        .map(|c| find_vertices(c, DEFAULT_VERTEX_GRID).unwrap().len())
        .collect();
    let sextactic: Vec<usize> = ovals
        .iter()
        .map(|c| osculate::conics::sextactic_scan(c, osculate::conics::DEFAULT_SEXTACTIC_GRID).unwrap().count)
        .collect();
    let diffeos = CircleDiffeo::batch(SEED, 100);
    let zeros: Vec<(usize, bool)> = diffeos
        .iter()
        .map(|f| {
            let z = schwarzian_zero_count(f, 2048).unwrap();
            (z.count, z.degenerate)
        })
        .collect();
    let hermite: Vec<usize> = (1..=8)
        .map(|n| count_derivative_zeros(&SmoothFunction::Gaussian, n, [-6.0, 6.0], 2000).unwrap().count)
        .collect();
    let elapsed = start.elapsed();
    let ok = |v: &[usize], m: usize| v.iter().all(|c| *c >= m && c % 2 == 0);
    let min = |v: &[usize]| v.iter().copied().min().unwrap_or(0);
    let z_counts: Vec<usize> = zeros.iter().map(|z| z.0).collect();
    let title = format!(
        "100 Fourier ovals: min vertices {}, min sextactic {}; 100 circle diffeos: min Schwarzian zeros {}; Gaussian derivative zeros {hermite:?}; {:.2?}",
        min(&vertices),
        min(&sextactic),
        min(&z_counts),
        elapsed
    );
    verdict(
        9,
        &title,
        &[
            ("vertices >= 4 and even", ok(&vertices, 4)),
            ("sextactic >= 6 and even", ok(&sextactic, 6)),
            ("Schwarzian zeros >= 4 and even", ok(&z_counts, 4) && zeros.iter().all(|z| !z.1)),
            ("Hermite counts equal n", hermite == (1..=8).collect::<Vec<_>>()),
            ("runtime < 60 s", elapsed < CRITERION_9_BUDGET),
        ],
    );
}

fn cli(args: &[&str], dir: &Path) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_osculate"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (o.status.code().unwrap_or(-1), o.stdout)
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let seed = SEED.to_string();
    let mut runs: Vec<(String, bool, bool)> = Vec::new();
    let mut commands: Vec<Vec<String>> = Vec::new();
    for t in ["tait_kneser", "taylor_even", "taylor_odd", "conics", "moebius", "cubic_ovals"] {
        commands.push(vec!["verify".into(), t.into(), "--seed".into(), seed.clone()]);
    }
    for (k, n) in [("vertices", "20"), ("sextactic", "10"), ("schwarzian_zeros", "50"), ("derivative_zeros", "8")] {
        commands.push(vec!["scan".into(), k.into(), "--seed".into(), seed.clone(), "--samples".into(), n.into()]);
    }
    for args in &commands {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, o1) = cli(&a, d);
        let (c2, o2) = cli(&a, d);
        runs.push((args.join(" "), c1 == 0 && c2 == 0, !o1.is_empty() && o1 == o2));
    }
    let mut figures_ok = true;
    for p in FigurePreset::ALL {
        let mut bytes = Vec::new();
        for round in 0..2 {
            let file = d.join(format!("{}_{round}.svg", p.as_str()));
            let (code, _) = cli(&["figure", p.as_str(), "-o", file.to_str().unwrap()], d);
            figures_ok &= code == 0;
            bytes.push(std::fs::read(&file).unwrap_or_default());
        }
        let identical = !bytes[0].is_empty() && bytes[0] == bytes[1];
        runs.push((format!("figure {}", p.as_str()), figures_ok, identical));
    }
    // The gate: each figure's family passes its verification op.
    let gates = [
        verify_tait_kneser(&PlaneCurve::log_spiral(0.2, 0.0, 3.0 * PI).unwrap(), 40)
            .unwrap()
            .report
            .passed,
        evolute_signed_length(&PlaneCurve::ellipse(2.0, 1.0).unwrap()).unwrap().signed.abs() < EVOLUTE_TOTAL_TOL,
        verify_theorem5(&PlaneCurve::log_spiral(0.2, 0.0, TAU).unwrap(), 8).unwrap().report.passed,
        spiral_oval_preset(DEFAULT_RESOLUTION).unwrap().result.report.passed,
    ];
    let failing: Vec<&str> = runs.iter().filter(|r| !(r.1 && r.2)).map(|r| r.0.as_str()).collect();
    let title = format!(
        "{} command reruns byte-identical and exiting 0{}; figure gates pass {}",
        runs.len(),
        if failing.is_empty() { String::new() } else { format!(" except {failing:?}") },
        gates.iter().all(|g| *g)
    );
    verdict(
        10,
        &title,
        &[
            ("reruns identical", runs.iter().all(|r| r.2)),
            ("exit codes 0", runs.iter().all(|r| r.1)),
            ("figure gates", gates.iter().all(|g| *g)),
        ],
    );
}
