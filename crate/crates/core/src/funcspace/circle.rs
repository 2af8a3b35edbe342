//! 2π-periodic functions: sampled grids, Fourier spectra in the orthonormal
//! basis `e_k(t) = (2π)^{-1/2} e^{ikt}`, and evaluable periodic families.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(2π)^{-1/2}`
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// The orthonormal exponential `e_k(t)`.
pub fn e_k(k: i64, t: f64) -> Complex64 {
    Complex64::from_polar(INV_SQRT_2PI, k as f64 * t)
}

/// Half-offset nodes `α_j = -π + (j + 1/2)·2π/n`. Neither `0` nor `±π` is
/// ever a node when `n` is even.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|j| -PI + (j as f64 + 0.5) * h).collect()
}

/// Reduces `t` to `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::param("n", format!("grid size must be even and >= 8, got {n}")));
    }
    Ok(())
}

/// Samples of a periodic function on the half-offset grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleFunction {
    values: Vec<Complex64>,
}

impl CircleFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_grid(values.len())?;
        Ok(CircleFunction { values })
    }

    pub fn sample(f: &(impl Periodic + ?Sized), n: usize) -> Result<Self> {
        check_grid(n)?;
        Ok(CircleFunction {
            values: alpha_grid(n).into_iter().map(|t| f.eval(t)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nodes(&self) -> Vec<f64> {
        alpha_grid(self.values.len())
    }

    /// Value at an index taken modulo `N`.
    pub fn at(&self, j: i64) -> Complex64 {
        self.values[j.rem_euclid(self.values.len() as i64) as usize]
    }
}

/// Fourier coefficients `c_k`, `-K_max <= k <= K_max`, such that
/// `φ = Σ c_k e_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    k_max: usize,
    coeffs: Vec<Complex64>,
}

impl FourierSpectrum {
    pub fn zeros(k_max: usize) -> Self {
        FourierSpectrum {
            k_max,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * k_max + 1],
        }
    }

    pub fn new(k_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * k_max + 1 {
            return Err(Error::param(
                "coeffs",
                format!("expected {} coefficients for K_max = {k_max}, got {}", 2 * k_max + 1, coeffs.len()),
            ));
        }
        Ok(FourierSpectrum { k_max, coeffs })
    }

    /// Builds a spectrum from sparse `(k, c_k)` pairs; repeated frequencies add.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        let k_max = pairs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut s = FourierSpectrum::zeros(k_max);
        for &(k, c) in pairs {
            s.coeffs[(k + k_max as i64) as usize] += c;
        }
        s
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.k_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.k_max as i64) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k0 = self.k_max as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - k0, c))
    }

    /// Applies a Fourier multiplier `c_k -> m(k) c_k`.
    pub fn map_multiplier(&self, m: impl Fn(i64) -> Complex64) -> Self {
        FourierSpectrum {
            k_max: self.k_max,
            coeffs: self.iter().map(|(k, c)| m(k) * c).collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map_multiplier(|_| a)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        // e^{ikt} by recurrence from e^{-iK t}
        let step = Complex64::from_polar(1.0, t);
        let mut w = Complex64::from_polar(1.0, -(self.k_max as f64) * t);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            acc += c * w;
            w *= step;
        }
        acc * INV_SQRT_2PI
    }

    /// `L^2(-π, π)` norm; the basis is orthonormal.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &FourierSpectrum) -> f64 {
        let k = self.k_max.max(other.k_max) as i64;
        (-k..=k).map(|k| (self.get(k) - other.get(k)).norm()).fold(0.0, f64::max)
    }
}

/// Fourier analysis on the half-offset grid:
/// `c_k = (√(2π)/N) Σ_j φ(α_j) e^{-ikα_j}`.
pub fn analyze(phi: &CircleFunction, k_max: usize) -> Result<FourierSpectrum> {
    let n = phi.len();
    if n < 2 * k_max + 2 {
        return Err(Error::Aliasing { k_max, n });
    }
    let nodes = phi.nodes();
    let scale = (2.0 * PI).sqrt() / n as f64;
    let coeffs = (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            let s: Complex64 = nodes
                .iter()
                .zip(phi.values())
                .map(|(&a, &v)| v * Complex64::from_polar(1.0, -(k as f64) * a))
                .sum();
            s * scale
        })
        .collect();
    Ok(FourierSpectrum { k_max, coeffs })
}

/// Evaluates `Σ c_k e_k` on the half-offset grid of `n` nodes.
pub fn synthesize(spec: &FourierSpectrum, n: usize) -> Result<CircleFunction> {
    check_grid(n)?;
    if n < 2 * spec.k_max + 2 {
        return Err(Error::Aliasing { k_max: spec.k_max, n });
    }
    CircleFunction::new(alpha_grid(n).into_iter().map(|t| spec.eval(t)).collect())
}

/// Pointwise access to a 2π-periodic function.
pub trait Periodic: Sync {
    fn eval(&self, t: f64) -> Complex64;
    /// Points in `(-π, π]` where the function fails to be smooth.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
    /// Exact Fourier spectrum for band-limited functions.
    fn spectrum(&self) -> Option<FourierSpectrum> {
        None
    }
}

type SharedPeriodic = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Periodic function families.
#[derive(Clone)]
pub enum PeriodicFn {
    TrigPoly(FourierSpectrum),
    /// `|sin((t - shift)/2)|^gamma`: Hölder of order `gamma`, cusp at `shift`.
    HolderCusp { gamma: f64, shift: f64 },
    /// Trigonometric interpolant of a sampled function.
    Sampled(FourierSpectrum),
    Custom { name: String, f: SharedPeriodic, kinks: Vec<f64> },
}

impl fmt::Debug for PeriodicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PeriodicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicFn::TrigPoly(s) => {
                write!(f, "trigpoly:")?;
                let mut first = true;
                for (k, c) in s.iter().filter(|(_, c)| c.norm() != 0.0) {
                    if !first {
                        write!(f, ",")?;
                    }
                    first = false;
                    write!(f, "k={k}:{}:{}", c.re, c.im)?;
                }
                Ok(())
            }
            PeriodicFn::HolderCusp { gamma, shift } => write!(f, "holder-cusp:{gamma},{shift}"),
            PeriodicFn::Sampled(s) => write!(f, "sampled:K={}", s.k_max()),
            PeriodicFn::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl PeriodicFn {
    pub fn trig_poly(pairs: &[(i64, Complex64)]) -> Self {
        PeriodicFn::TrigPoly(FourierSpectrum::from_pairs(pairs))
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> Self {
        Self::trig_poly(&[(0, Complex64::new(c * (2.0 * PI).sqrt(), 0.0))])
    }

    /// The basis function `e_k`.
    pub fn basis(k: i64) -> Self {
        Self::trig_poly(&[(k, Complex64::new(1.0, 0.0))])
    }

    pub fn holder_cusp(gamma: f64, shift: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !shift.is_finite() {
            return Err(Error::param("shift", "must be finite"));
        }
        Ok(PeriodicFn::HolderCusp {
            gamma,
            shift: wrap_angle(shift),
        })
    }

    /// Band-limited interpolant of grid samples (Nyquist mode dropped).
    pub fn from_samples(phi: &CircleFunction) -> Result<Self> {
        Ok(PeriodicFn::Sampled(analyze(phi, phi.len() / 2 - 1)?))
    }

    pub fn custom<F>(name: impl Into<String>, f: F, kinks: Vec<f64>) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        PeriodicFn::Custom {
            name: name.into(),
            f: Arc::new(f),
            kinks,
        }
    }

    /// Exact `Λ_γ` seminorm where it is known in closed form.
    pub fn analytic_holder_seminorm(&self, gamma: f64) -> Option<f64> {
        match self {
            PeriodicFn::TrigPoly(s) | PeriodicFn::Sampled(s) if s.iter().all(|(k, c)| k == 0 || c.norm() == 0.0) => {
                Some(0.0)
            }
            // |a^γ - b^γ| <= |a - b|^γ and ||sin u| - |sin v|| <= |sin(u - v)|
            // bound the ratio by 2^{-γ}; the pair (shift, shift + h) attains it
            // as h -> 0.
            PeriodicFn::HolderCusp { gamma: g, .. } if *g == gamma => Some(2f64.powf(-gamma)),
            _ => None,
        }
    }

    /// `L^2(-π, π)` norm: exact for band-limited functions, 4096-node
    /// midpoint rule otherwise.
    pub fn l2_norm(&self) -> f64 {
        match self {
            PeriodicFn::TrigPoly(s) | PeriodicFn::Sampled(s) => s.l2_norm(),
            _ => {
                let n = 4096;
                let h = 2.0 * PI / n as f64;
                (alpha_grid(n).iter().map(|&t| self.eval(t).norm_sqr()).sum::<f64>() * h).sqrt()
            }
        }
    }

    /// `max |φ(t) - φ(-t)|` over a 1024-node grid.
    pub fn evenness_defect(&self) -> f64 {
        alpha_grid(1024)
            .iter()
            .map(|&t| (self.eval(t) - self.eval(-t)).norm())
            .fold(0.0, f64::max)
    }
}

impl Periodic for PeriodicFn {
    fn eval(&self, t: f64) -> Complex64 {
        match self {
            PeriodicFn::TrigPoly(s) | PeriodicFn::Sampled(s) => s.eval(t),
            PeriodicFn::HolderCusp { gamma, shift } => {
                Complex64::new((0.5 * (t - shift)).sin().abs().powf(*gamma), 0.0)
            }
            PeriodicFn::Custom { f, .. } => f(t),
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            PeriodicFn::HolderCusp { shift, .. } => vec![*shift],
            PeriodicFn::Custom { kinks, .. } => kinks.clone(),
            _ => Vec::new(),
        }
    }

    fn spectrum(&self) -> Option<FourierSpectrum> {
        match self {
            PeriodicFn::TrigPoly(s) | PeriodicFn::Sampled(s) => Some(s.clone()),
            _ => None,
        }
    }
}

impl<F> Periodic for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn eval(&self, t: f64) -> Complex64 {
        self(t)
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("Hölder exponent must lie in (0, 1), got {gamma}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_avoids_kernel_singularities() {
        for n in [8, 64, 2048] {
            for a in alpha_grid(n) {
                assert!(a != 0.0 && a.abs() < PI);
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(CircleFunction::new(vec![c(0.0, 0.0); 6]).is_err());
        assert!(CircleFunction::new(vec![c(0.0, 0.0); 9]).is_err());
        assert!(CircleFunction::new(vec![c(0.0, 0.0); 8]).is_ok());
    }

    #[test]
    fn index_arithmetic_wraps() {
        let f = CircleFunction::new((0..8).map(|j| c(j as f64, 0.0)).collect()).unwrap();
        assert_eq!(f.at(-1), c(7.0, 0.0));
        assert_eq!(f.at(8), c(0.0, 0.0));
    }

    #[test]
    fn analyze_constant() {
        let phi = CircleFunction::new(vec![c(INV_SQRT_2PI, 0.0); 16]).unwrap();
        let s = analyze(&phi, 3).unwrap();
        assert!((s.get(0) - c(1.0, 0.0)).norm() < 1e-14);
        for k in [-3, -2, -1, 1, 2, 3] {
            assert!(s.get(k).norm() < 1e-15);
        }
    }

    #[test]
    fn analyze_basis_function() {
        let phi = CircleFunction::sample(&PeriodicFn::basis(3), 32).unwrap();
        let s = analyze(&phi, 8).unwrap();
        for (k, ck) in s.iter() {
            let want = if k == 3 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((ck - want).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn analyze_two_modes() {
        let phi = CircleFunction::sample(&|t: f64| e_k(2, t) + e_k(-5, t) * 0.5, 32).unwrap();
        let s = analyze(&phi, 6).unwrap();
        assert!((s.get(2) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((s.get(-5) - c(0.5, 0.0)).norm() < 1e-12);
        assert!(s.get(5).norm() < 1e-12);
    }

    #[test]
    fn aliasing_is_rejected() {
        let phi = CircleFunction::new(vec![c(1.0, 0.0); 16]).unwrap();
        assert!(matches!(analyze(&phi, 8), Err(Error::Aliasing { k_max: 8, n: 16 })));
        assert!(analyze(&phi, 7).is_ok());
    }

    #[test]
    fn synthesize_cosine() {
        let s = FourierSpectrum::from_pairs(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let phi = synthesize(&s, 16).unwrap();
        for (a, v) in phi.nodes().iter().zip(phi.values()) {
            assert!((v - c(2.0 * INV_SQRT_2PI * a.cos(), 0.0)).norm() < 1e-15);
        }
        let one = synthesize(&FourierSpectrum::from_pairs(&[(0, c(1.0, 0.0))]), 8).unwrap();
        assert!(one.values().iter().all(|v| (v - c(INV_SQRT_2PI, 0.0)).norm() < 1e-16));
    }

    #[test]
    fn sampled_interpolant_reproduces_band_limited_function() {
        let p = PeriodicFn::trig_poly(&[(1, c(0.3, -0.1)), (-4, c(1.0, 0.5))]);
        let q = PeriodicFn::from_samples(&CircleFunction::sample(&p, 16).unwrap()).unwrap();
        for t in [-3.0, -0.2, 0.0, 1.7, 3.1] {
            assert!((p.eval(t) - q.eval(t)).norm() < 1e-13);
        }
    }

    #[test]
    fn cusp_seminorm_is_known() {
        let p = PeriodicFn::holder_cusp(0.5, 0.0).unwrap();
        assert_eq!(p.analytic_holder_seminorm(0.5), Some(2f64.powf(-0.5)));
        assert_eq!(p.analytic_holder_seminorm(0.25), None);
        assert_eq!(PeriodicFn::constant(3.0).analytic_holder_seminorm(0.3), Some(0.0));
        assert!(p.evenness_defect() < 1e-15);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(re in prop::collection::vec(-1.0f64..1.0, 33),
                                  im in prop::collection::vec(-1.0f64..1.0, 33)) {
            let coeffs: Vec<_> = re.iter().zip(&im).map(|(&a, &b)| c(a, b)).collect();
            let s = FourierSpectrum::new(16, coeffs).unwrap();
            let back = analyze(&synthesize(&s, 64).unwrap(), 16).unwrap();
            let scale = s.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
            prop_assert!(s.max_abs_diff(&back) <= 1e-12 * scale.max(1e-300));
        }
    }
}
