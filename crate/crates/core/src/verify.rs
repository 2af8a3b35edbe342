//! Property suites: kernel homogeneity and antisymmetry, the radial null
//! space, the spectral table, the circle decomposition, agreement of the
//! plane representations, and homogeneity of the image.
//!
//! Every suite is deterministic in its seed and configuration. Cases run in
//! parallel and are collected in input order before aggregation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circle_ops::{calk_apply, k1_apply_quadrature, k1_decomposition_check, k1_multiplier, Backend};
use crate::error::{Error, Result};
use crate::funcspace::{
    alpha_grid, e_k, holder_seminorm_estimate, Function1D, PeriodicFn, PolarTensorSum, TensorSum2D,
};
use crate::plane_ops::{
    intertwining_residual, k_apply, k_apply_est1, k_apply_stepanov, kernel_eval, Mat2, PlanePoint, Representation,
};
use crate::pvquad::{adaptive, PVQuadratureConfig, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteVerdict {
    Pass,
    Fail,
}

/// A check that is expected to fail; the suite passes only if it does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failed_as_expected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub skipped: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub verdict: SuiteVerdict,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub controls: Vec<NegativeControl>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, Value>,
}

impl SuiteResult {
    pub fn new(name: impl Into<String>, deviations: &[f64], tolerance: f64) -> Self {
        // f64::max drops NaN, which must never pass
        let max_deviation = if deviations.iter().any(|d| d.is_nan()) {
            f64::NAN
        } else {
            deviations.iter().copied().fold(0.0, f64::max)
        };
        let ok = max_deviation <= tolerance;
        SuiteResult {
            name: name.into(),
            cases: deviations.len(),
            skipped: 0,
            max_deviation,
            tolerance,
            verdict: if ok { SuiteVerdict::Pass } else { SuiteVerdict::Fail },
            controls: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    fn with_control(mut self, name: impl Into<String>, deviations: &[f64], tolerance: f64) -> Self {
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        self.controls.push(NegativeControl {
            name: name.into(),
            max_deviation,
            tolerance,
            failed_as_expected: max_deviation > tolerance,
        });
        self
    }

    fn with_detail(mut self, key: &str, v: Value) -> Self {
        self.details.insert(key.to_string(), v);
        self
    }

    /// Verdict pass and every negative control failed.
    pub fn passed(&self) -> bool {
        self.verdict == SuiteVerdict::Pass && self.controls.iter().all(|c| c.failed_as_expected)
    }
}

/// `|a − b| / (|b| + τ_abs)`.
pub fn hybrid_deviation(a: f64, b: f64, tau_abs: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / (b.abs() + tau_abs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Homogeneity,
    Antisymmetry,
    RadialNull,
    Spectral,
    Decomposition,
    Representations,
    ImageHomogeneity,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Homogeneity,
        Suite::Antisymmetry,
        Suite::RadialNull,
        Suite::Spectral,
        Suite::Decomposition,
        Suite::Representations,
        Suite::ImageHomogeneity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Homogeneity => "homogeneity",
            Suite::Antisymmetry => "antisymmetry",
            Suite::RadialNull => "radial-null",
            Suite::Spectral => "spectral",
            Suite::Decomposition => "decomposition",
            Suite::Representations => "representations",
            Suite::ImageHomogeneity => "image-homogeneity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse(s, "unknown suite"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random cases for the kernel suites.
    pub cases: usize,
    pub k_max: usize,
    /// Angular grid size for the circle quadratures.
    pub n: usize,
    pub quad: PVQuadratureConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            cases: 1000,
            k_max: 16,
            n: 2048,
            quad: PVQuadratureConfig::default(),
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    Ok(match suite {
        Suite::Homogeneity => vec![suite_kernel_homogeneity(cfg.cases, cfg.seed)?],
        Suite::Antisymmetry => vec![suite_antisymmetry(cfg.cases, cfg.seed, &cfg.quad)?],
        Suite::RadialNull => vec![suite_radial_null(&radial_families()?, 16, cfg.n, &cfg.quad)?],
        Suite::Spectral => vec![suite_spectral(cfg.k_max, cfg.n)?],
        Suite::Decomposition => vec![
            suite_decomposition_trig(20, 32, cfg.seed, cfg.n, &cfg.quad)?,
            suite_decomposition_cusp(&[0.25, 0.5, 0.75], 1 << 14, &cfg.quad)?,
        ],
        Suite::Representations => {
            let pts = grid3();
            vec![
                suite_representations("representations-gaussian", &[shifted_gaussians()], &pts, 1e-3, cfg.n, &cfg.quad)?,
                suite_representations("representations-bump", &[bumps()], &pts, 1e-4, cfg.n, &cfg.quad)?,
            ]
        }
        Suite::ImageHomogeneity => vec![suite_image_homogeneity(&grid3(), &[0.5, 2.0, 3.0], &cfg.quad)?],
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for s in Suite::ALL {
        out.extend(run(s, cfg)?);
    }
    Ok(out)
}

/// The nine points `{0.5, 1, 2}²`.
pub fn grid3() -> Vec<PlanePoint> {
    let v = [0.5, 1.0, 2.0];
    v.iter().flat_map(|&a| v.iter().map(move |&b| PlanePoint::new(a, b))).collect()
}

/// A Gaussian tensor with no symmetry that forces `Kf = 0`.
pub fn shifted_gaussians() -> TensorSum2D {
    TensorSum2D::simple(
        Function1D::gaussian(0.5, 0.7).expect("valid gaussian"),
        Function1D::gaussian(-0.8, 0.6).expect("valid gaussian"),
    )
}

fn bumps() -> TensorSum2D {
    TensorSum2D::simple(
        Function1D::bump(0.3, 1.0).expect("valid bump"),
        Function1D::bump(-0.5, 0.8).expect("valid bump"),
    )
}

/// `indicator(0,1) ⊗ sgn(y)|y|^{-1/2}`, for which `Kf(x₁,x₂) = 2 x₁⁻¹|x₁|^{1/2}|x₂|^{-1/2}`.
pub fn sharpness_input() -> TensorSum2D {
    TensorSum2D::simple(
        Function1D::indicator(0.0, 1.0).expect("valid indicator"),
        Function1D::power(0.5).expect("valid power"),
    )
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn det2(x: PlanePoint, y: PlanePoint) -> f64 {
    x.x1 * y.x2 - x.x2 * y.x1
}

fn well_separated(x: PlanePoint, y: PlanePoint) -> bool {
    det2(x, y).abs() > 0.1 * x.x1.hypot(x.x2) * y.x1.hypot(y.x2)
}

fn random_point(r: &mut ChaCha8Rng) -> PlanePoint {
    PlanePoint::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))
}

/// `rotation · diag(e^a, e^b) · rotation` with `|a|, |b| <= 2`.
fn random_gl2_plus(r: &mut ChaCha8Rng) -> Mat2 {
    let t1 = r.gen_range(-PI..PI);
    let t2 = r.gen_range(-PI..PI);
    let a = r.gen_range(-2.0..2.0f64);
    let b = r.gen_range(-2.0..2.0f64);
    Mat2::rotation(t1).mul(&Mat2::diag(a.exp(), b.exp())).mul(&Mat2::rotation(t2))
}

/// Random `(g, x, y)` with `x, y` and `gx, gy` both well away from collinear.
fn homogeneity_cases(n: usize, seed: u64) -> Vec<(Mat2, PlanePoint, PlanePoint)> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g = random_gl2_plus(&mut r);
        let x = random_point(&mut r);
        let y = random_point(&mut r);
        if well_separated(x, y) && well_separated(g.apply(x), g.apply(y)) {
            out.push((g, x, y));
        }
    }
    out
}

fn homogeneity_deviation(g: &Mat2, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let lhs = g.det().abs() * kernel_eval(g.apply(x), g.apply(y))?;
    let rhs = kernel_eval(x, y)?;
    Ok(((lhs - rhs) / rhs).abs())
}

/// `det g · K(gx, gy) = K(x, y)` on random `g ∈ GL⁺(2)`, relative tolerance
/// `10⁻¹²`. Control: `g` composed with a reflection, weighted by `|det g|`,
/// which the antisymmetric kernel answers with a sign flip.
pub fn suite_kernel_homogeneity(n_cases: usize, seed: u64) -> Result<SuiteResult> {
    let cases = homogeneity_cases(n_cases, seed);
    let devs: Vec<f64> = cases
        .par_iter()
        .map(|(g, x, y)| homogeneity_deviation(g, *x, *y))
        .collect::<Result<_>>()?;
    let flip = Mat2::diag(1.0, -1.0);
    let control: Vec<f64> = cases
        .par_iter()
        .map(|(g, x, y)| homogeneity_deviation(&g.mul(&flip), *x, *y))
        .collect::<Result<_>>()?;
    Ok(SuiteResult::new("homogeneity", &devs, 1e-12)
        .with_control("orientation-reversing", &control, 1e-12)
        .with_detail("seed", json!(seed)))
}

/// `K(y, x) = −K(x, y)` on random pairs, and on the operator level
/// `K(f∘σ)(σx) = −Kf(x)` with `σ` the coordinate swap.
pub fn suite_antisymmetry(n_cases: usize, seed: u64, cfg: &PVQuadratureConfig) -> Result<SuiteResult> {
    let mut r = rng(seed ^ 0xa5a5);
    let mut pairs = Vec::with_capacity(n_cases);
    while pairs.len() < n_cases {
        let x = random_point(&mut r);
        let y = random_point(&mut r);
        if well_separated(x, y) {
            pairs.push((x, y));
        }
    }
    let mut devs: Vec<f64> = pairs
        .par_iter()
        .map(|&(x, y)| Ok(hybrid_deviation(kernel_eval(y, x)?, -kernel_eval(x, y)?, 0.0)))
        .collect::<Result<_>>()?;
    let f = shifted_gaussians();
    let (f1, f2) = f.terms()[0].clone();
    let swapped = TensorSum2D::simple(f2, f1);
    let op: Vec<f64> = grid3()
        .par_iter()
        .map(|&x| {
            let a = k_apply_est1(&swapped, PlanePoint::new(x.x2, x.x1), cfg)?.value;
            let b = k_apply_est1(&f, x, cfg)?.value;
            Ok(hybrid_deviation(a, -b, 1e-10))
        })
        .collect::<Result<_>>()?;
    let n_op = op.len();
    devs.extend(op);
    Ok(SuiteResult::new("antisymmetry", &devs, 1e-12)
        .with_detail("kernel_cases", json!(n_cases))
        .with_detail("operator_cases", json!(n_op)))
}

/// Five radial profiles on the half-line.
pub fn radial_families() -> Result<Vec<Function1D>> {
    Ok(vec![
        Function1D::exp(1.0)?,
        Function1D::rayleigh(),
        Function1D::indicator(0.0, 1.0)?,
        Function1D::gaussian(0.0, 1.0)?,
        Function1D::bump(1.0, 0.5)?,
    ])
}

/// `|𝒦φ(r, α)| / max(1, |∫φ₁|)` on an `m × m` polar grid for `φ₁ ⊗ 1` and
/// `φ₁ ⊗ (1 + 0.1 cos 2θ)` by angular quadrature, tolerance `10⁻⁸`. Control:
/// `φ₁ ⊗ e₁`, which `𝒦` does not annihilate.
pub fn suite_radial_null(radials: &[Function1D], m: usize, n: usize, cfg: &PVQuadratureConfig) -> Result<SuiteResult> {
    let radii: Vec<f64> = (0..m).map(|j| 0.25 * 16f64.powf(j as f64 / (m.max(2) - 1) as f64)).collect();
    let alphas = alpha_grid(m);
    let half = Complex64::new(0.05, 0.0);
    let angulars = [
        PeriodicFn::constant(1.0),
        PeriodicFn::trig_poly(&[(0, Complex64::new((2.0 * PI).sqrt(), 0.0)), (2, half * (2.0 * PI).sqrt()), (-2, half * (2.0 * PI).sqrt())]),
    ];
    let grid_dev = |phi: &PolarTensorSum, scale: f64| -> Result<Vec<f64>> {
        let pts: Vec<(f64, f64)> = radii.iter().flat_map(|&r| alphas.iter().map(move |&a| (r, a))).collect();
        pts.par_iter()
            .map(|&(r, a)| Ok(calk_apply(phi, r, a, Backend::Quadrature, n, cfg)?.norm() / scale))
            .collect()
    };
    let mut devs = Vec::new();
    let mut control = Vec::new();
    for radial in radials {
        let mass = crate::pvquad::integrate_halfline(radial, radial.known_integral(), cfg)?.value;
        let scale = mass.abs().max(1.0);
        for ang in &angulars {
            devs.extend(grid_dev(&PolarTensorSum::simple(radial.clone(), ang.clone())?, scale)?);
        }
        control.extend(grid_dev(&PolarTensorSum::simple(radial.clone(), PeriodicFn::basis(1))?, scale)?);
    }
    Ok(SuiteResult::new("radial-null", &devs, 1e-8)
        .with_control("odd-frequency", &control, 1e-8)
        .with_detail("families", json!(radials.iter().map(|f| f.to_string()).collect::<Vec<_>>()))
        .with_detail("grid", json!([m, m])))
}

/// `∫₀^π sin(kt)/sin t dt`, equal to `sgn(k)·π` for odd `k` and 0 for even `k`.
pub fn sine_ratio_integral(k: i64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let f = |t: f64| (k as f64 * t).sin() / t.sin();
    adaptive(&f, &[0.0, 0.5 * PI, PI], 24, Tolerance::default()).value
}

/// Quadrature `𝒦₁e_k` against the multiplier `−2i·sgn(k)·[k odd]` for
/// `|k| <= K_max`, as a multiplier error on a 64-point grid, tolerance
/// `10⁻⁸`. The details carry the oracle table of `∫₀^π sin(kt)/sin t dt`.
pub fn suite_spectral(k_max: usize, n: usize) -> Result<SuiteResult> {
    if n < 2 * k_max + 2 {
        return Err(Error::Aliasing { k_max, n });
    }
    let alphas = alpha_grid(64);
    let km = k_max as i64;
    let ks: Vec<i64> = (-km..=km).collect();
    let devs: Vec<f64> = ks
        .par_iter()
        .map(|&k| {
            let basis = move |t: f64| e_k(k, t);
            let vals = k1_apply_quadrature(&basis, &alphas, n)?;
            let m = k1_multiplier(k);
            Ok(alphas
                .iter()
                .zip(&vals)
                .map(|(&a, v)| (v - m * e_k(k, a)).norm() * (2.0 * PI).sqrt())
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let table: Vec<Value> = (1..=km)
        .map(|k| {
            let v = sine_ratio_integral(k);
            let expected = if k % 2 != 0 { PI } else { 0.0 };
            json!({ "k": k, "integral": v, "expected": expected })
        })
        .collect();
    let oracle_dev = (1..=km)
        .map(|k| (sine_ratio_integral(k) - if k % 2 != 0 { PI } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let mut all = devs;
    all.push(oracle_dev);
    Ok(SuiteResult::new("spectral", &all, 1e-8)
        .with_detail("k_max", json!(k_max))
        .with_detail("n", json!(n))
        .with_detail("sine_ratio_integrals", Value::Array(table)))
}

/// A random trigonometric polynomial of degree in `1..=max_degree` with
/// coefficients uniform in the unit square.
pub fn random_trig_poly(r: &mut ChaCha8Rng, max_degree: i64) -> PeriodicFn {
    let d = r.gen_range(1..=max_degree);
    let pairs: Vec<(i64, Complex64)> = (-d..=d)
        .map(|k| (k, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))))
        .collect();
    PeriodicFn::trig_poly(&pairs)
}

/// `max |𝒦₁φ − ℋφ − 𝒥φ|` on random trigonometric polynomials, tolerance `10⁻⁸`.
pub fn suite_decomposition_trig(
    count: usize,
    max_degree: i64,
    seed: u64,
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<SuiteResult> {
    let mut r = rng(seed ^ 0x5eed);
    let polys: Vec<PeriodicFn> = (0..count).map(|_| random_trig_poly(&mut r, max_degree)).collect();
    let alphas = alpha_grid(32);
    let devs: Vec<f64> = polys
        .iter()
        .map(|phi| {
            let w = holder_seminorm_estimate(phi, 0.5, 512)?;
            k1_decomposition_check(phi, &w, &alphas, n, cfg)
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::new("decomposition-trig", &devs, 1e-8)
        .with_detail("max_degree", json!(max_degree))
        .with_detail("n", json!(n)))
}

/// The same residual on `|sin(t/2)|^γ`, tolerance `10⁻⁴`.
pub fn suite_decomposition_cusp(gammas: &[f64], n: usize, cfg: &PVQuadratureConfig) -> Result<SuiteResult> {
    let alphas = alpha_grid(32);
    let devs: Vec<f64> = gammas
        .iter()
        .map(|&g| {
            let phi = PeriodicFn::holder_cusp(g, 0.0)?;
            let w = holder_seminorm_estimate(&phi, g, 1024)?;
            k1_decomposition_check(&phi, &w, &alphas, n, cfg)
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::new("decomposition-cusp", &devs, 1e-4)
        .with_detail("gammas", json!(gammas))
        .with_detail("n", json!(n)))
}

/// Pairwise hybrid deviations among the three representations at every
/// point, plus the intertwining residual on the same points in polar form.
pub fn suite_representations(
    name: &str,
    fs: &[TensorSum2D],
    points: &[PlanePoint],
    tolerance: f64,
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<SuiteResult> {
    let mut devs = Vec::new();
    let mut inter = Vec::new();
    for f in fs {
        let rows: Vec<[f64; 3]> = points
            .par_iter()
            .map(|&x| {
                let mut v = [0.0; 3];
                for (slot, rep) in v.iter_mut().zip(Representation::ALL) {
                    *slot = k_apply(f, x, rep, cfg)?.value;
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let tau = 1e-10 * scale;
        for v in &rows {
            devs.push(hybrid_deviation(v[1], v[0], tau));
            devs.push(hybrid_deviation(v[2], v[0], tau));
            devs.push(hybrid_deviation(v[2], v[1], tau));
        }
        let samples: Vec<(f64, f64)> = points.iter().map(|x| (x.x1.hypot(x.x2), x.x2.atan2(x.x1))).collect();
        inter.push(intertwining_residual(f, &samples, n, cfg)?);
    }
    let max_inter = inter.iter().copied().fold(0.0, f64::max);
    devs.extend(inter);
    Ok(SuiteResult::new(name, &devs, tolerance)
        .with_detail("points", json!(points.len()))
        .with_detail("intertwining_residual", json!(max_inter)))
}

/// `|Kf(λx) − λ⁻¹Kf(x)| / |Kf(x)|` for the shifted Gaussians (tensor and
/// scaled forms) and the sharpness input, tolerance `10⁻⁶`. Points where
/// `|Kf(x)|` is below `10⁻¹²` times the largest value are skipped.
pub fn suite_image_homogeneity(points: &[PlanePoint], lambdas: &[f64], cfg: &PVQuadratureConfig) -> Result<SuiteResult> {
    if let Some(&l) = lambdas.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::param("lambda", format!("scales must be positive, got {l}")));
    }
    let g = shifted_gaussians();
    let s = sharpness_input();
    type Eval<'a> = Box<dyn Fn(PlanePoint) -> Result<f64> + Sync + 'a>;
    let evals: [(&str, Eval); 3] = [
        ("gaussian-est1", Box::new(|x| Ok(k_apply_est1(&g, x, cfg)?.value))),
        ("gaussian-stepanov", Box::new(|x| Ok(k_apply_stepanov(&g, x, cfg)?.value))),
        ("sharpness-est1", Box::new(|x| Ok(k_apply_est1(&s, x, cfg)?.value))),
    ];
    let mut devs = Vec::new();
    let mut skipped = 0;
    for (_, eval) in &evals {
        let rows: Vec<(f64, Vec<f64>)> = points
            .par_iter()
            .map(|&x| {
                let base = eval(x)?;
                let scaled = lambdas.iter().map(|&l| eval(x.scaled(l))).collect::<Result<Vec<_>>>()?;
                Ok((base, scaled))
            })
            .collect::<Result<_>>()?;
        let scale = rows.iter().fold(0.0f64, |m, r| m.max(r.0.abs()));
        for ((base, scaled), _) in rows.iter().zip(points) {
            if base.abs() <= 1e-12 * scale {
                skipped += 1;
                continue;
            }
            for (&l, v) in lambdas.iter().zip(scaled) {
                devs.push((v - base / l).abs() / base.abs());
            }
        }
    }
    let mut r = SuiteResult::new("image-homogeneity", &devs, 1e-6)
        .with_detail("lambdas", json!(lambdas))
        .with_detail("inputs", json!(evals.iter().map(|e| e.0).collect::<Vec<_>>()));
    r.skipped = skipped;
    Ok(r)
}
