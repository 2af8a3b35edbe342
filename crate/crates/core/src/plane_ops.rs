//! The planar operator `K f(x) = (1/π) ∫∫ f(y)/(x₁y₂ − x₂y₁) dy` in three
//! representations, its kernel, Radon slices, and the polar lift.
//!
//! With `H` the line Hilbert transform `(1/π) pv ∫ g(y)/(x − y) dy`:
//!
//! ```text
//! tensor form    K(f₁⊗f₂)(x) = −(1/x₁) ∫ f₁(y₁) (Hf₂)(x₂y₁/x₁) dy₁
//! scaled form    K f(x)      = sgn(x₁x₂) ∫ H[t₁ ↦ f(x₁t₁, x₂t₂)](t₂) dt₂
//! slice form     K f(x)      = −(1/x₁) (HS)(x₂/x₁),   S(ξ) = ∫ sgn(η) f(η, ξη) dη
//! ```
//!
//! The scaled form substitutes `yᵢ = xᵢtᵢ`, so `dy = |x₁x₂| dt` and the sign
//! of `x₁x₂` survives. The slice form substitutes `y₂ = ξy₁`, so
//! `dy₂ = |y₁| dξ` against a denominator `y₁(x₁ξ − x₂)`; the slices carry
//! `sgn(η)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circle_ops::calk_apply_direct;
use crate::error::{Error, Result};
use crate::funcspace::{Function1D, PlaneFunction, RealFunction, Support, TensorSum2D};
use crate::pvquad::{integrate_panels, integrate_singular, pv_line_hilbert, PVQuadratureConfig, QuadResult, QuadWarning, TailPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x1: f64,
    pub x2: f64,
}

impl PlanePoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        PlanePoint { x1, x2 }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        PlanePoint::new(r * theta.cos(), r * theta.sin())
    }

    pub fn scaled(self, l: f64) -> Self {
        PlanePoint::new(l * self.x1, l * self.x2)
    }

    fn off_axes(self, what: &str) -> Result<()> {
        if !(self.x1.is_finite() && self.x2.is_finite()) {
            return Err(Error::Domain(format!("{what}: non-finite point ({}, {})", self.x1, self.x2)));
        }
        if self.x1 == 0.0 || self.x2 == 0.0 {
            return Err(Error::Domain(format!(
                "{what} is only sampled off the coordinate axes, got ({}, {})",
                self.x1, self.x2
            )));
        }
        Ok(())
    }
}

/// A real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.a * p.x1 + self.b * p.x2, self.c * p.x1 + self.d * p.x2)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2 { a: c, b: -s, c: s, d: c }
    }

    pub fn diag(p: f64, q: f64) -> Self {
        Mat2 { a: p, b: 0.0, c: 0.0, d: q }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// An orientation-preserving linear map of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GL2Plus(Mat2);

impl GL2Plus {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.det();
        if !(det > 0.0 && det.is_finite()) {
            return Err(Error::param("g", format!("determinant must be positive, got {det}")));
        }
        Ok(GL2Plus(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        self.0.apply(p)
    }
}

/// `1/(π(x₁y₂ − x₂y₁))`.
pub fn kernel_eval(x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let d = x.x1 * y.x2 - x.x2 * y.x1;
    if d == 0.0 {
        return Err(Error::SingularKernel {
            x1: x.x1,
            x2: x.x2,
            y1: y.x1,
            y2: y.x2,
        });
    }
    Ok(1.0 / (PI * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HilbertRoute {
    /// Closed-form transform when the descriptor has one, quadrature otherwise.
    #[default]
    Auto,
    /// Always `pv_line_hilbert`.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    Est1,
    Stepanov,
    Radon,
}

impl Representation {
    pub const ALL: [Representation; 3] = [Representation::Est1, Representation::Stepanov, Representation::Radon];

    pub fn name(&self) -> &'static str {
        match self {
            Representation::Est1 => "est1",
            Representation::Stepanov => "stepanov",
            Representation::Radon => "radon",
        }
    }
}

fn hilbert_at(f2: &Function1D, z: f64, route: HilbertRoute, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    if route == HilbertRoute::Auto {
        if let Some(v) = f2.known_hilbert(z) {
            return Ok(QuadResult { value: v, warnings: vec![] });
        }
    }
    pv_line_hilbert(f2, z, cfg)
}

/// `∫ h(y)` over the support of `f`, panelled at `f`'s breakpoints and at
/// `extra`, with `|y - c|^{-s}` singularities at the `(c, s)` in `singular`.
fn integrate_against(
    f: &Function1D,
    h: &(dyn Fn(f64) -> f64 + Sync),
    extra: &[f64],
    singular: &[(f64, f64)],
    cfg: &PVQuadratureConfig,
) -> Result<QuadResult<f64>> {
    let (lo, hi, tail) = match f.support() {
        Support::PowerType { .. } => {
            return Err(Error::Divergent(format!("outer factor {f} is not integrable")));
        }
        s => match s.core() {
            Some((lo, hi)) => (lo, hi, None),
            None => {
                let Support::Decaying { beta, lo, hi } = s else { unreachable!() };
                let t = cfg.radius.max(2.0 * lo.abs().max(hi.abs()));
                (-t, t, Some(beta))
            }
        },
    };
    if hi <= lo {
        return Ok(QuadResult { value: 0.0, warnings: vec![] });
    }
    let mut breaks = vec![lo, hi];
    breaks.extend(f.breakpoints());
    breaks.extend_from_slice(extra);
    if tail.is_some() {
        let mut t = 2.0;
        while t < hi {
            breaks.extend([t, -t]);
            t *= 2.0;
        }
    }
    breaks.retain(|&b| b >= lo && b <= hi);
    let mut r = integrate_singular(h, &breaks, singular, cfg)?;
    if let Some(beta) = tail {
        match cfg.tail {
            TailPolicy::Ignore => r.merge_warnings(&[QuadWarning::SlowTail]),
            TailPolicy::PowerExtrapolate { beta: b } => {
                let b = b.unwrap_or(beta);
                if b <= 1.0 {
                    return Err(Error::Divergent(format!("outer integrand decays like |y|^-{b}")));
                }
                r.value += (h(lo) + h(hi)) * hi / (b - 1.0);
            }
        }
    }
    Ok(r)
}

/// `K f(x)` by the tensor form.
pub fn k_apply_est1(f: &TensorSum2D, x: PlanePoint, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    k_apply_est1_with(f, x, HilbertRoute::Auto, cfg)
}

pub fn k_apply_est1_with(
    f: &TensorSum2D,
    x: PlanePoint,
    route: HilbertRoute,
    cfg: &PVQuadratureConfig,
) -> Result<QuadResult<f64>> {
    x.off_axes("the tensor form")?;
    cfg.validate()?;
    let ratio = x.x2 / x.x1;
    let mut total = QuadResult { value: 0.0, warnings: vec![] };
    for (f1, f2) in f.terms() {
        // features of Hf₂ at z = c sit at y₁ = c/ratio
        let extra: Vec<f64> = f2.breakpoints().iter().map(|c| c / ratio).collect();
        // Hf₂ ~ |z|^{-s} near 0 for the power function
        let singular: Vec<(f64, f64)> = match f2.support() {
            Support::PowerType { s } => vec![(0.0, s)],
            _ => vec![],
        };
        let failure = std::sync::Mutex::new(None);
        let h = |y1: f64| {
            let v1 = f1.eval(y1);
            if v1 == 0.0 {
                return 0.0;
            }
            match hilbert_at(f2, ratio * y1, route, cfg) {
                Ok(r) => v1 * r.value,
                Err(e) => {
                    failure.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(e);
                    0.0
                }
            }
        };
        let r = integrate_against(f1, &h, &extra, &singular, cfg)?;
        if let Some(e) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
            return Err(e);
        }
        total.value += r.value;
        total.merge_warnings(&r.warnings);
    }
    total.value *= -1.0 / x.x1;
    Ok(total)
}

/// `t₁ ↦ f(x₁t₁, y₂)` as a line function.
struct Row<'a, F: ?Sized> {
    f: &'a F,
    x1: f64,
    y2: f64,
    half_width: f64,
}

impl<F: PlaneFunction + ?Sized> RealFunction for Row<'_, F> {
    fn eval(&self, t: f64) -> f64 {
        self.f.eval(self.x1 * t, self.y2)
    }
    fn support(&self) -> Support {
        Support::Decaying {
            beta: f64::INFINITY,
            lo: -self.half_width,
            hi: self.half_width,
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.f.breakpoints(0).iter().map(|c| c / self.x1).collect()
    }
}

fn finite_extent(f: &(impl PlaneFunction + ?Sized)) -> Result<f64> {
    let e = f.extent();
    if !(e.is_finite() && e >= 0.0) {
        return Err(Error::Divergent(
            "this representation needs a function with finite (or rapidly decaying) extent".into(),
        ));
    }
    Ok(e)
}

/// `K f(x)` by the scaled double-PV form.
pub fn k_apply_stepanov(f: &(impl PlaneFunction + ?Sized), x: PlanePoint, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    x.off_axes("the scaled form")?;
    cfg.validate()?;
    let e = finite_extent(f)?;
    let (w1, w2) = (e / x.x1.abs(), e / x.x2.abs());
    if w1 == 0.0 || w2 == 0.0 {
        return Ok(QuadResult { value: 0.0, warnings: vec![] });
    }
    let failure = std::sync::Mutex::new(None);
    let h = |t2: f64| {
        let row = Row {
            f,
            x1: x.x1,
            y2: x.x2 * t2,
            half_width: w1,
        };
        match pv_line_hilbert(&row, t2, cfg) {
            Ok(r) => r.value,
            Err(err) => {
                failure.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(err);
                0.0
            }
        }
    };
    let mut breaks = vec![-w2, w2];
    breaks.extend(f.breakpoints(1).iter().map(|c| c / x.x2));
    breaks.extend(f.breakpoints(0).iter().map(|c| c / x.x1));
    breaks.retain(|&b| b >= -w2 && b <= w2);
    let mut r = integrate_panels(&h, &breaks, cfg);
    if let Some(err) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(err);
    }
    r.value *= (x.x1 * x.x2).signum();
    Ok(r)
}

#[derive(Clone, Copy)]
enum SliceWeight {
    Plain,
    Signed,
}

fn slice(f: &(impl PlaneFunction + ?Sized), xi: f64, weight: SliceWeight, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    if !xi.is_finite() {
        return Err(Error::param("xi", format!("slope must be finite, got {xi}")));
    }
    let e = finite_extent(f)?;
    let w = e / xi.abs().max(1.0);
    if w == 0.0 {
        return Ok(QuadResult { value: 0.0, warnings: vec![] });
    }
    let g = |eta: f64| {
        let v = f.eval(eta, xi * eta);
        match weight {
            SliceWeight::Plain => v,
            SliceWeight::Signed => eta.signum() * v,
        }
    };
    let mut breaks = vec![-w, 0.0, w];
    breaks.extend(f.breakpoints(0));
    if xi != 0.0 {
        breaks.extend(f.breakpoints(1).iter().map(|c| c / xi));
    }
    breaks.retain(|&b| b >= -w && b <= w);
    Ok(integrate_panels(&g, &breaks, cfg))
}

/// `∫ f(η, ξη) dη`, the line integral through the origin with slope `ξ` in
/// parameter form.
pub fn radon_slice(f: &(impl PlaneFunction + ?Sized), xi: f64, cfg: &PVQuadratureConfig) -> Result<f64> {
    Ok(slice(f, xi, SliceWeight::Plain, cfg)?.value)
}

/// `√(1+ξ²) ∫ f(η, ξη) dη`, the same line integral against arc length.
pub fn radon_slice_length(f: &(impl PlaneFunction + ?Sized), xi: f64, cfg: &PVQuadratureConfig) -> Result<f64> {
    Ok(radon_slice(f, xi, cfg)? * (1.0 + xi * xi).sqrt())
}

/// `∫ sgn(η) f(η, ξη) dη`, the slice entering the slice form of `K`.
pub fn radon_slice_signed(f: &(impl PlaneFunction + ?Sized), xi: f64, cfg: &PVQuadratureConfig) -> Result<f64> {
    Ok(slice(f, xi, SliceWeight::Signed, cfg)?.value)
}

/// The signed slice profile as a line function. It decays like `1/ξ`.
struct SliceProfile<'a, F: ?Sized> {
    f: &'a F,
    cfg: PVQuadratureConfig,
    features: Vec<f64>,
    failure: std::sync::Mutex<Option<Error>>,
}

impl<F: PlaneFunction + ?Sized> RealFunction for SliceProfile<'_, F> {
    fn eval(&self, xi: f64) -> f64 {
        match slice(self.f, xi, SliceWeight::Signed, &self.cfg) {
            Ok(r) => r.value,
            Err(e) => {
                self.failure.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(e);
                0.0
            }
        }
    }
    fn support(&self) -> Support {
        Support::Decaying {
            beta: 1.0,
            lo: -1.0,
            hi: 1.0,
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.features.clone()
    }
}

/// `K f(x)` by the slice form, `−(1/x₁)(HS)(x₂/x₁)`.
pub fn k_apply_radon(f: &(impl PlaneFunction + ?Sized), x: PlanePoint, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    x.off_axes("the slice form")?;
    cfg.validate()?;
    finite_extent(f)?;
    // slopes of the lines through feature points
    let b0 = f.breakpoints(0);
    let b1 = f.breakpoints(1);
    let mut features: Vec<f64> = b0
        .iter()
        .filter(|&&a| a != 0.0)
        .flat_map(|a| b1.iter().map(move |b| b / a))
        .filter(|s| s.is_finite())
        .collect();
    features.sort_by(f64::total_cmp);
    features.dedup();
    let profile = SliceProfile {
        f,
        cfg: *cfg,
        features,
        failure: std::sync::Mutex::new(None),
    };
    let mut r = pv_line_hilbert(&profile, x.x2 / x.x1, cfg)?;
    if let Some(e) = profile.failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(e);
    }
    r.value *= -1.0 / x.x1;
    Ok(r)
}

/// `K f(x)` by the named representation.
pub fn k_apply(f: &TensorSum2D, x: PlanePoint, rep: Representation, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    match rep {
        Representation::Est1 => k_apply_est1(f, x, cfg),
        Representation::Stepanov => k_apply_stepanov(f, x, cfg),
        Representation::Radon => k_apply_radon(f, x, cfg),
    }
}

/// `(Sf)(ρ, θ) = f(ρ cos θ, ρ sin θ)`.
pub struct PolarLift<'a, F: ?Sized> {
    f: &'a F,
}

pub fn polar_lift<F: PlaneFunction + ?Sized>(f: &F) -> PolarLift<'_, F> {
    PolarLift { f }
}

impl<F: PlaneFunction + ?Sized> PolarLift<'_, F> {
    pub fn eval(&self, rho: f64, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.f.eval(rho * c, rho * s)
    }

    /// `𝒦(Sf)(r, α)` by direct polar quadrature with `n` angular nodes.
    pub fn calk(&self, r: f64, alpha: f64, n: usize, cfg: &PVQuadratureConfig) -> Result<f64> {
        let e = finite_extent(self.f)?;
        let rho_max = e * std::f64::consts::SQRT_2;
        let b0 = self.f.breakpoints(0);
        let b1 = self.f.breakpoints(1);
        let mut radii: Vec<f64> = b0.iter().flat_map(|a| b1.iter().map(move |b| a.hypot(*b))).collect();
        let mut t = 0.25;
        while t < rho_max {
            radii.push(t);
            t *= 2.0;
        }
        calk_apply_direct(&|rho: f64, th: f64| self.eval(rho, th), rho_max, &radii, r, alpha, n, cfg)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / (b.abs() + 1e-12)
}

/// `max |S(Kf)(ρ,θ) − 𝒦(Sf)(ρ,θ)| / (|𝒦(Sf)(ρ,θ)| + 10⁻¹²)` over `samples`,
/// with `Kf` by the tensor form and `𝒦(Sf)` by direct polar quadrature.
pub fn intertwining_residual(f: &TensorSum2D, samples: &[(f64, f64)], n: usize, cfg: &PVQuadratureConfig) -> Result<f64> {
    residual_with(f, samples, n, cfg, |x| k_apply_est1(f, x, cfg))
}

/// As [`intertwining_residual`], with `Kf` by the scaled form, for plane
/// functions that are not tensor sums.
pub fn intertwining_residual_plane(
    f: &(impl PlaneFunction + ?Sized),
    samples: &[(f64, f64)],
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<f64> {
    residual_with(f, samples, n, cfg, |x| k_apply_stepanov(f, x, cfg))
}

fn residual_with<F: PlaneFunction + ?Sized>(
    f: &F,
    samples: &[(f64, f64)],
    n: usize,
    cfg: &PVQuadratureConfig,
    planar: impl Fn(PlanePoint) -> Result<QuadResult<f64>> + Sync,
) -> Result<f64> {
    use rayon::prelude::*;
    let lift = polar_lift(f);
    let devs: Vec<f64> = samples
        .par_iter()
        .map(|&(rho, theta)| {
            let lhs = planar(PlanePoint::polar(rho, theta))?.value;
            let rhs = lift.calk(rho, theta, n, cfg)?;
            Ok(relative(lhs, rhs))
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::PlaneFn;
    use proptest::prelude::*;

    fn cfg() -> PVQuadratureConfig {
        PVQuadratureConfig::default()
    }

    fn gg() -> TensorSum2D {
        TensorSum2D::simple(Function1D::gaussian(0.5, 0.7).unwrap(), Function1D::gaussian(-0.8, 0.6).unwrap())
    }

    fn p(a: f64, b: f64) -> PlanePoint {
        PlanePoint::new(a, b)
    }

    #[test]
    fn kernel_values() {
        assert_eq!(kernel_eval(p(1.0, 0.0), p(0.0, 1.0)).unwrap(), 1.0 / PI);
        assert_eq!(kernel_eval(p(0.0, 1.0), p(1.0, 0.0)).unwrap(), -1.0 / PI);
        let k = kernel_eval(p(2.0, 0.0), p(0.0, 2.0)).unwrap();
        assert!((k - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!((4.0 * k - 1.0 / PI).abs() < 1e-15);
        assert!(matches!(kernel_eval(p(1.0, 2.0), p(2.0, 4.0)), Err(Error::SingularKernel { .. })));
    }

    #[test]
    fn orientation_reversal_flips_sign() {
        let m = Mat2::diag(1.0, -1.0);
        let (x, y) = (p(0.3, 1.2), p(-0.7, 0.4));
        let k = kernel_eval(x, y).unwrap();
        let km = kernel_eval(m.apply(x), m.apply(y)).unwrap();
        assert_eq!(km, -k / m.det().abs());
        assert!(GL2Plus::new(m).is_err());
    }

    #[test]
    fn sharpness_closed_form_numeric_route() {
        let f = TensorSum2D::simple(Function1D::indicator(0.0, 1.0).unwrap(), Function1D::power(0.5).unwrap());
        let r = k_apply_est1_with(&f, p(1.0, 4.0), HilbertRoute::Numeric, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        let a = k_apply_est1(&f, p(1.0, 4.0), &cfg()).unwrap();
        assert!((a.value - 1.0).abs() < 1e-9, "{}", a.value);
    }

    #[test]
    fn est1_domain() {
        assert!(matches!(k_apply_est1(&gg(), p(0.0, 1.0), &cfg()), Err(Error::Domain(_))));
        assert!(matches!(k_apply_est1(&gg(), p(1.0, 0.0), &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn est1_parity_under_even_f2() {
        let f = TensorSum2D::simple(Function1D::gaussian(0.5, 0.7).unwrap(), Function1D::gaussian(0.0, 0.6).unwrap());
        let a = k_apply_est1(&f, p(1.0, 0.8), &cfg()).unwrap().value;
        let b = k_apply_est1(&f, p(1.0, -0.8), &cfg()).unwrap().value;
        assert!(a.abs() > 1e-3);
        assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn representations_agree_on_shifted_gaussians() {
        let f = gg();
        for x in [p(1.0, 1.0), p(0.5, 2.0), p(-1.0, 0.7), p(1.3, -0.6)] {
            let e = k_apply_est1(&f, x, &cfg()).unwrap().value;
            let s = k_apply_stepanov(&f, x, &cfg()).unwrap().value;
            let r = k_apply_radon(&f, x, &cfg()).unwrap().value;
            assert!(relative(s, e) < 1e-6, "{x:?}: stepanov {s} vs {e}");
            assert!(relative(r, e) < 1e-6, "{x:?}: radon {r} vs {e}");
        }
    }

    #[test]
    fn representations_agree_on_bumps() {
        let f = TensorSum2D::simple(Function1D::bump(0.3, 1.0).unwrap(), Function1D::bump(-0.5, 0.8).unwrap());
        for x in [p(1.0, 1.0), p(2.0, 0.5)] {
            let e = k_apply_est1(&f, x, &cfg()).unwrap().value;
            let s = k_apply_stepanov(&f, x, &cfg()).unwrap().value;
            let r = k_apply_radon(&f, x, &cfg()).unwrap().value;
            assert!(relative(s, e) < 1e-4 && relative(r, e) < 1e-4, "{e} {s} {r}");
        }
    }

    #[test]
    fn stepanov_symmetric_function_on_diagonal() {
        let f = PlaneFn::new(|a: f64, b: f64| (-(a - 0.3).powi(2) - (b - 0.3).powi(2) - a * b).exp(), 12.0);
        let v = k_apply_stepanov(&f, p(0.7, 0.7), &cfg()).unwrap().value;
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn zero_function_gives_zero() {
        let z = TensorSum2D::simple(Function1D::gaussian(0.0, 1.0).unwrap().scaled(0.0), Function1D::gaussian(1.0, 1.0).unwrap());
        for rep in Representation::ALL {
            assert_eq!(k_apply(&z, p(1.0, 2.0), rep, &cfg()).unwrap().value, 0.0, "{rep:?}");
        }
    }

    #[test]
    fn slices() {
        let radial = PlaneFn::new(|a: f64, b: f64| (-(a * a + b * b)).exp(), 7.0);
        for xi in [0.0, 0.5, -2.0, 10.0] {
            let s = radon_slice(&radial, xi, &cfg()).unwrap();
            assert!((s - (PI / (1.0 + xi * xi)).sqrt()).abs() < 1e-10, "{xi}: {s}");
            let l = radon_slice_length(&radial, xi, &cfg()).unwrap();
            assert!((l - PI.sqrt()).abs() < 1e-10);
        }
        let axis = TensorSum2D::simple(Function1D::bump(0.0, 1.0).unwrap(), Function1D::gaussian(0.0, 1.0).unwrap());
        let direct = crate::pvquad::integrate_line(&Function1D::bump(0.0, 1.0).unwrap(), None, &cfg()).unwrap().value;
        assert!((radon_slice(&axis, 0.0, &cfg()).unwrap() - direct).abs() < 1e-12);
        // odd under y -> -y, so every line through the origin sees an odd profile
        let odd = PlaneFn::new(|a: f64, b: f64| (a + 0.5 * b) * (-(a * a + 2.0 * b * b - a * b)).exp(), 8.0);
        for xi in [0.0, 0.7, -3.0] {
            assert!(radon_slice(&odd, xi, &cfg()).unwrap().abs() < 1e-14);
        }
        // odd in the first argument alone: only the horizontal slice vanishes
        let odd1 = PlaneFn::new(|a: f64, b: f64| a * (-(a * a + (b - 1.0).powi(2))).exp(), 8.0);
        assert!(radon_slice(&odd1, 0.0, &cfg()).unwrap().abs() < 1e-14);
        assert!(radon_slice(&odd1, 0.7, &cfg()).unwrap().abs() > 1e-3);
        let even = PlaneFn::new(|a: f64, b: f64| (-(a * a + 2.0 * b * b + a * b)).exp(), 8.0);
        assert!(radon_slice_signed(&even, 0.7, &cfg()).unwrap().abs() < 1e-14);
        assert!(k_apply_radon(&even, p(1.0, 0.5), &cfg()).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn lift_is_composition() {
        let f = gg();
        let lift = polar_lift(&f);
        for (r, t) in [(0.5, 0.3), (2.0, -2.0), (1.0, 3.0)] {
            assert_eq!(lift.eval(r, t), f.eval(r * t.cos(), r * t.sin()));
        }
        let y1 = PlaneFn::new(|a: f64, _b: f64| a, f64::INFINITY);
        assert_eq!(polar_lift(&y1).eval(2.0, 0.5), 2.0 * 0.5f64.cos());
    }

    #[test]
    fn intertwining_on_gaussians() {
        let samples = [(1.0, 0.7), (0.6, 2.2), (1.8, -0.4), (1.2, -2.5)];
        let r = intertwining_residual(&gg(), &samples, 2048, &cfg()).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn radial_function_is_annihilated() {
        let radial = PlaneFn::new(|a: f64, b: f64| (-(a * a + b * b)).exp(), 7.0);
        for x in [p(1.0, 1.0), p(-0.5, 2.0)] {
            assert!(k_apply_stepanov(&radial, x, &cfg()).unwrap().value.abs() < 1e-10);
        }
        assert!(polar_lift(&radial).calk(1.0, 0.4, 512, &cfg()).unwrap().abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kernel_is_antisymmetric(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
            let (x, y) = (p(a, b), p(c, d));
            if let Ok(k) = kernel_eval(x, y) {
                prop_assert_eq!(k, -kernel_eval(y, x).unwrap());
            }
        }

        #[test]
        fn kernel_is_homogeneous(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, s in -1.5f64..1.5, u in -1.5f64..1.5,
                                 a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
            let g = GL2Plus::new(Mat2::rotation(t1).mul(&Mat2::diag(s.exp(), u.exp())).mul(&Mat2::rotation(t2))).unwrap();
            let (x, y) = (p(a, b), p(c, d));
            prop_assume!((a * d - b * c).abs() > 0.1 * a.hypot(b) * c.hypot(d));
            let lhs = g.det() * kernel_eval(g.apply(x), g.apply(y)).unwrap();
            let rhs = kernel_eval(x, y).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }
}
