//! Acceptance suite: one line per criterion on stderr, written past the test
//! harness capture so that it shows in plain `cargo test` output.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use homop::bounds::{check_est3, check_j_bound, check_k2_bound, Verdict};
use homop::circle_ops::{k1_apply_quadrature, k1_multiplier, k1_rayleigh_quotient};
use homop::funcspace::{
    alpha_grid, e_k, holder_seminorm_estimate, Function1D, HolderWitness, PeriodicFn, PolarTensorSum, TensorSum2D,
};
use homop::plane_ops::{k_apply_est1_with, HilbertRoute, PlanePoint};
use homop::pvquad::PVQuadratureConfig;
use homop::verify::{
    grid3, radial_families, sharpness_input, shifted_gaussians, suite_decomposition_cusp, suite_decomposition_trig,
    suite_image_homogeneity, suite_kernel_homogeneity, suite_radial_null, suite_representations,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;

struct Line {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn emit(l: &Line) {
    let s = format!(
        "acceptance {:>2} {:<32} {}  {}  ({:.2?})\n",
        l.id,
        l.title,
        if l.pass { "PASS" } else { "FAIL" },
        l.detail,
        l.elapsed
    );
    let _ = std::io::stderr().write_all(s.as_bytes());
}

fn timed(id: u8, title: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (pass, detail) = f();
    let l = Line {
        id,
        title,
        pass,
        detail,
        elapsed: t.elapsed(),
    };
    emit(&l);
    l
}

fn cfg() -> PVQuadratureConfig {
    PVQuadratureConfig::default()
}

fn spectral_identity() -> (bool, String) {
    let t = Instant::now();
    let alphas = alpha_grid(64);
    let mut err: f64 = 0.0;
    for k in -16..=16i64 {
        let basis = move |t: f64| e_k(k, t);
        let vals = k1_apply_quadrature(&basis, &alphas, 2048).unwrap();
        for (&a, v) in alphas.iter().zip(&vals) {
            // multiplier error, independent of |e_k| = 1/√(2π)
            err = err.max(((v / e_k(k, a)) - k1_multiplier(k)).norm());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    (err <= 1e-6 && secs < 5.0, format!("max_err={err:.2e} tol=1e-6 runtime={secs:.2}s<5s"))
}

fn operator_norm() -> (bool, String) {
    let m = (-64..=64i64).map(|k| k1_multiplier(k).norm()).fold(0.0, f64::max);
    let q = k1_rayleigh_quotient(&PeriodicFn::basis(1), 2048).unwrap();
    (m == 2.0 && (q - 2.0).abs() <= 1e-6, format!("max|m_k|={m} rayleigh(e1)={q:.12} tol=1e-6"))
}

fn decomposition() -> (bool, String) {
    let trig = suite_decomposition_trig(20, 32, SEED, 2048, &cfg()).unwrap();
    let cusp = suite_decomposition_cusp(&[0.25, 0.5, 0.75], 1 << 14, &cfg()).unwrap();
    (
        trig.passed() && cusp.passed() && trig.tolerance == 1e-8 && cusp.tolerance == 1e-4,
        format!(
            "trig(20,deg<=32)={:.2e}<=1e-8 cusp(N=2^14)={:.2e}<=1e-4",
            trig.max_deviation, cusp.max_deviation
        ),
    )
}

fn sharpness() -> (bool, String) {
    let t = Instant::now();
    let f = sharpness_input();
    let mut worst: f64 = 0.0;
    for x2 in [1.0, 4.0, 16.0] {
        let exact = 2.0 / f64::sqrt(x2);
        let v = k_apply_est1_with(&f, PlanePoint::new(1.0, x2), HilbertRoute::Numeric, &cfg()).unwrap().value;
        worst = worst.max((v - exact).abs() / exact);
    }
    let secs = t.elapsed().as_secs_f64();
    (
        worst <= 1e-3 && secs < 30.0,
        format!("max_rel_err={worst:.2e} tol=1e-3 runtime={secs:.2}s<30s"),
    )
}

fn random_factor(r: &mut ChaCha8Rng) -> Function1D {
    let c = r.gen_range(-1.5..1.5);
    let w = r.gen_range(0.3..1.5);
    if r.gen_bool(0.5) {
        Function1D::gaussian(c, w).unwrap()
    } else {
        Function1D::bump(c, w).unwrap()
    }
}

fn riesz_pointwise() -> (bool, String) {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    let points: Vec<PlanePoint> = grid3()
        .into_iter()
        .enumerate()
        .map(|(i, p)| PlanePoint::new(if i % 2 == 0 { p.x1 } else { -p.x1 }, if i % 3 == 0 { -p.x2 } else { p.x2 }))
        .collect();
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    let mut n = 0;
    for _ in 0..10 {
        let f = TensorSum2D::simple(random_factor(&mut r), random_factor(&mut r));
        for rep in check_est3(&f, &points, 2.0, &cfg()).unwrap() {
            n += 1;
            worst = worst.max(rep.ratio());
            if rep.verdict != Verdict::Pass || rep.slack != 1.01 {
                fails += 1;
            }
        }
    }
    (fails == 0 && n == 90, format!("cases={n} max(lhs/rhs)={worst:.3} slack=1.01 failures={fails}"))
}

fn j_bound() -> (bool, String) {
    let alphas = alpha_grid(64);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for g in [0.25, 0.5, 0.75] {
        let phi = PeriodicFn::holder_cusp(g, 0.0).unwrap();
        let grid = holder_seminorm_estimate(&phi, g, 1024).unwrap();
        let analytic = HolderWitness::analytic(g, phi.analytic_holder_seminorm(g).unwrap()).unwrap();
        for w in [grid, analytic] {
            let rep = check_j_bound(&phi, &w, &alphas, &cfg()).unwrap();
            worst = worst.max(rep.ratio());
            ok &= rep.lhs <= rep.rhs * 1.05;
        }
    }
    (ok, format!("gamma={{0.25,0.5,0.75}} max(lhs/rhs)={worst:.3} slack=1.05"))
}

/// At most six odd frequencies, so that `Σ|c_k| <= √(2π)‖c‖₂`.
fn random_polar(r: &mut ChaCha8Rng) -> PolarTensorSum {
    let mut phi = PolarTensorSum::new();
    for _ in 0..r.gen_range(1..=3) {
        let radial = match r.gen_range(0..3) {
            0 => Function1D::exp(r.gen_range(0.5..3.0)).unwrap(),
            1 => Function1D::indicator(0.0, r.gen_range(0.2..2.0)).unwrap(),
            _ => Function1D::rayleigh(),
        };
        let mut pairs = Vec::new();
        let odd = r.gen_range(1..=6);
        while pairs.len() < odd {
            let k = 2 * r.gen_range(-8..8i64) + 1;
            if pairs.iter().all(|(j, _)| *j != k) {
                pairs.push((k, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))));
            }
        }
        for k in [0, 2, -4] {
            pairs.push((k, Complex64::new(r.gen_range(-1.0..1.0), 0.0)));
        }
        phi.push(radial, PeriodicFn::trig_poly(&pairs)).unwrap();
    }
    phi
}

fn k2_bound() -> (bool, String) {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    let alphas = alpha_grid(256);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..10 {
        let phi = random_polar(&mut r);
        let rep = check_k2_bound(&phi, &alphas, 2048, &cfg()).unwrap();
        worst = worst.max(rep.ratio());
        ok &= rep.verdict == Verdict::Pass && rep.slack == 1.01;
    }
    (ok, format!("cases=10 max(lhs/rhs)={worst:.3} slack=1.01"))
}

fn kernel_homogeneity() -> (bool, String) {
    let s = suite_kernel_homogeneity(1000, SEED).unwrap();
    let c = &s.controls[0];
    (
        s.passed() && s.cases == 1000 && c.failed_as_expected,
        format!(
            "cases={} max_rel_dev={:.2e}<=1e-12 det<0 control dev={:.2} (fails as predicted: {})",
            s.cases, s.max_deviation, c.max_deviation, c.failed_as_expected
        ),
    )
}

fn radial_null() -> (bool, String) {
    let s = suite_radial_null(&radial_families().unwrap(), 16, 2048, &cfg()).unwrap();
    (
        s.passed() && s.cases >= 5 * 256,
        format!("families=5 grid=16x16 max|calK|={:.2e}<=1e-8", s.max_deviation),
    )
}

fn representations() -> (bool, String) {
    let t = Instant::now();
    let s = suite_representations("representations", &[shifted_gaussians()], &grid3(), 1e-3, 2048, &cfg()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let inter = s.details["intertwining_residual"].as_f64().unwrap();
    (
        s.passed() && secs < 60.0,
        format!(
            "max_pairwise_or_intertwining={:.2e} intertwining={inter:.2e} tol=1e-3 runtime={secs:.2}s<60s",
            s.max_deviation
        ),
    )
}

fn image_homogeneity() -> (bool, String) {
    let s = suite_image_homogeneity(&grid3(), &[0.5, 2.0, 3.0], &cfg()).unwrap();
    (
        s.passed(),
        format!("lambda={{0.5,2,3}} cases={} skipped={} max_rel_dev={:.2e}<=1e-6", s.cases, s.skipped, s.max_deviation),
    )
}

#[test]
fn acceptance_criteria() {
    let lines = [
        timed(1, "spectral identity", spectral_identity),
        timed(2, "operator norm", operator_norm),
        timed(3, "decomposition K1 = H + J", decomposition),
        timed(4, "sharpness closed form", sharpness),
        timed(5, "Riesz-type pointwise bound", riesz_pointwise),
        timed(6, "J bound", j_bound),
        timed(7, "K2 tensor bound", k2_bound),
        timed(8, "kernel homogeneity", kernel_homogeneity),
        timed(9, "radial null", radial_null),
        timed(10, "representations + intertwining", representations),
        timed(11, "image homogeneity", image_homogeneity),
    ];
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn sharpness_closed_form_route_is_exact() {
    let f = sharpness_input();
    for x2 in [1.0, 4.0, 16.0] {
        let v = k_apply_est1_with(&f, PlanePoint::new(1.0, x2), HilbertRoute::Auto, &cfg()).unwrap().value;
        assert!((v - 2.0 / x2.sqrt()).abs() < 1e-12 * v.abs(), "{x2}: {v}");
    }
    // (Kf)(x₁, x₂) = 2 x₁⁻¹|x₁|^{1/2}|x₂|^{-1/2}
    let v = k_apply_est1_with(&f, PlanePoint::new(-4.0, 9.0), HilbertRoute::Auto, &cfg()).unwrap().value;
    assert!((v - 2.0 / -4.0 * 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn k2_bound_fails_beyond_six_odd_frequencies() {
    let m = 16;
    let pairs: Vec<_> = (-15..=15i64)
        .filter(|k| k % 2 != 0)
        .map(|k| (k, Complex64::new(0.0, k.signum() as f64 / (m as f64).sqrt())))
        .collect();
    let phi = PolarTensorSum::simple(Function1D::indicator(0.0, 1.0).unwrap(), PeriodicFn::trig_poly(&pairs)).unwrap();
    let rep = check_k2_bound(&phi, &[0.0], 2048, &cfg()).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!((rep.lhs / rep.rhs - (m as f64 / (2.0 * PI)).sqrt()).abs() < 1e-12);
}
