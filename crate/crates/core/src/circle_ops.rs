//! Circle operators: `𝒦₁`, the conjugate function `ℋ`, the remainder
//! `𝒥 = 𝒦₁ − ℋ`, and the polar operators `𝒦₂` and `𝒦`.
//!
//! Conventions, with `φ` 2π-periodic:
//!
//! ```text
//! 𝒦₁φ(α) = (1/π)  pv ∫ φ(α−t) / sin t      dt
//! ℋφ(α)  = (1/2π) pv ∫ φ(α−t) / tan(t/2)   dt
//! 𝒥φ(α)  = (1/2π) pv ∫ φ(α−t) · tan(t/2)   dt
//! 𝒦₂φ(α) = (1/π) ∫₀^∞ dρ pv ∫ φ(ρ,θ) / sin(θ−α) dθ
//! 𝒦φ(r,α) = 𝒦₂φ(α) / r
//! ```
//!
//! All angular integrals run over `(−π, π)`. Since `1/sin t = (cot(t/2) +
//! tan(t/2))/2`, `𝒦₁ = ℋ + 𝒥`. On a simple tensor `φ₁ ⊗ φ₂`,
//! `𝒦₂φ = −(∫φ₁)·𝒦₁φ₂`: the substitution `θ = α + t` turns `sin(θ−α)` into
//! `sin t` while `𝒦₁` integrates against `φ(α−t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{wrap_angle, FourierSpectrum, HolderWitness, Periodic, PolarTensorSum};
use crate::pvquad::{adaptive, integrate_halfline, pv_circle, PVQuadratureConfig, QuadScalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Fourier multipliers on an exact spectrum.
    #[default]
    Spectral,
    /// Principal-value quadrature on the half-offset grid.
    Quadrature,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn sgn(k: i64) -> f64 {
    k.signum() as f64
}

/// Multiplier of `𝒦₁`: `−2i·sgn k` on odd `k`, zero on even `k`.
pub fn k1_multiplier(k: i64) -> Complex64 {
    if k % 2 != 0 {
        -2.0 * i() * sgn(k)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Multiplier of `ℋ`: `−i·sgn k`.
pub fn hilbert_multiplier(k: i64) -> Complex64 {
    -i() * sgn(k)
}

/// Multiplier of `𝒥`: `−i·sgn k` on odd `k`, `+i·sgn k` on even `k`.
pub fn j_multiplier(k: i64) -> Complex64 {
    k1_multiplier(k) - hilbert_multiplier(k)
}

pub fn k1_apply_spectral(spec: &FourierSpectrum) -> FourierSpectrum {
    spec.map_multiplier(k1_multiplier)
}

pub fn hilbert_circle_spectral(spec: &FourierSpectrum) -> FourierSpectrum {
    spec.map_multiplier(hilbert_multiplier)
}

pub fn j_apply_spectral(spec: &FourierSpectrum) -> FourierSpectrum {
    spec.map_multiplier(j_multiplier)
}

fn for_each_alpha<T: Send>(alphas: &[f64], f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    alphas.par_iter().map(|&a| f(a)).collect()
}

/// `𝒦₁φ` at each `α` by `pv_circle` with `n` nodes.
pub fn k1_apply_quadrature(phi: &(impl Periodic + ?Sized), alphas: &[f64], n: usize) -> Result<Vec<Complex64>> {
    for_each_alpha(alphas, |a| Ok(pv_circle(&|t: f64| phi.eval(a - t) / t.sin(), n)? / PI))
}

/// `ℋφ` at each `α` by `pv_circle` with `n` nodes.
pub fn hilbert_circle_quadrature(phi: &(impl Periodic + ?Sized), alphas: &[f64], n: usize) -> Result<Vec<Complex64>> {
    for_each_alpha(alphas, |a| {
        Ok(pv_circle(&|t: f64| phi.eval(a - t) / (0.5 * t).tan(), n)? / (2.0 * PI))
    })
}

fn eval_spectrum(spec: &FourierSpectrum, alphas: &[f64]) -> Vec<Complex64> {
    alphas.iter().map(|&a| spec.eval(a)).collect()
}

fn spectrum_of(phi: &(impl Periodic + ?Sized)) -> Result<FourierSpectrum> {
    phi.spectrum()
        .ok_or_else(|| Error::Precondition("the spectral backend needs a band-limited function".into()))
}

pub fn k1_apply(phi: &(impl Periodic + ?Sized), alphas: &[f64], backend: Backend, n: usize) -> Result<Vec<Complex64>> {
    match backend {
        Backend::Spectral => Ok(eval_spectrum(&k1_apply_spectral(&spectrum_of(phi)?), alphas)),
        Backend::Quadrature => k1_apply_quadrature(phi, alphas, n),
    }
}

pub fn hilbert_circle(phi: &(impl Periodic + ?Sized), alphas: &[f64], backend: Backend, n: usize) -> Result<Vec<Complex64>> {
    match backend {
        Backend::Spectral => Ok(eval_spectrum(&hilbert_circle_spectral(&spectrum_of(phi)?), alphas)),
        Backend::Quadrature => hilbert_circle_quadrature(phi, alphas, n),
    }
}

/// Breakpoints in `(−π, π)` for an adaptive `t`-integral against `φ(α−t)`:
/// the kinks of `φ`, geometrically graded, plus grading toward `±π` when the
/// integrand is singular there.
fn angular_breaks(phi: &(impl Periodic + ?Sized), alpha: f64, grade_ends: bool) -> Vec<f64> {
    let mut b = vec![-PI, 0.0, PI];
    let grade = |c: f64, b: &mut Vec<f64>| {
        let mut e = 0.5;
        for _ in 0..40 {
            for x in [c - e, c + e] {
                if x > -PI && x < PI {
                    b.push(x);
                }
            }
            e *= 0.5;
        }
    };
    for k in phi.kinks() {
        let t0 = wrap_angle(alpha - k);
        if t0 > -PI && t0 < PI {
            b.push(t0);
        }
        grade(t0, &mut b);
        // the kink also sits at the other end of the periodic interval
        if t0 == PI {
            grade(-PI, &mut b);
        }
    }
    if grade_ends {
        grade(PI, &mut b);
        grade(-PI, &mut b);
    }
    b
}

/// `𝒥φ` at each `α` by the regularised split
///
/// ```text
/// (1/2π) [ ∫_0^π (φ(α−t) − φ(α−π)) tan(t/2) dt + ∫_{−π}^0 (φ(α−t) − φ(α+π)) tan(t/2) dt ]
/// ```
///
/// each part absolutely convergent for Hölder `φ`. The witness certifies
/// that; its seminorm also sets the absolute tolerance.
pub fn j_apply(
    phi: &(impl Periodic + ?Sized),
    witness: Option<&HolderWitness>,
    alphas: &[f64],
    cfg: &PVQuadratureConfig,
) -> Result<Vec<Complex64>> {
    let w = witness.ok_or(Error::MissingWitness)?;
    cfg.validate()?;
    let smooth = phi.spectrum().is_some();
    let tol = Tolerance {
        abs: 1e-13 * (1.0 + w.seminorm),
        ..Tolerance::default()
    };
    for_each_alpha(alphas, |a| {
        let lo = phi.eval(a + PI);
        let hi = phi.eval(a - PI);
        let f = |t: f64| {
            let base = if t >= 0.0 { hi } else { lo };
            (phi.eval(a - t) - base) * (0.5 * t).tan()
        };
        let breaks = angular_breaks(phi, a, !smooth);
        let r = adaptive(&f, &breaks, cfg.nodes, tol);
        Ok(r.value * (1.0 / (2.0 * PI)))
    })
}

pub fn j_apply_with(
    phi: &(impl Periodic + ?Sized),
    witness: Option<&HolderWitness>,
    alphas: &[f64],
    backend: Backend,
    cfg: &PVQuadratureConfig,
) -> Result<Vec<Complex64>> {
    match backend {
        Backend::Spectral => {
            witness.ok_or(Error::MissingWitness)?;
            Ok(eval_spectrum(&j_apply_spectral(&spectrum_of(phi)?), alphas))
        }
        Backend::Quadrature => j_apply(phi, witness, alphas, cfg),
    }
}

/// `max_α |𝒦₁φ − ℋφ − 𝒥φ|`, the first two by `pv_circle` with `n` nodes and
/// `𝒥` by its regularised adaptive quadrature.
pub fn k1_decomposition_check(
    phi: &(impl Periodic + ?Sized),
    witness: &HolderWitness,
    alphas: &[f64],
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<f64> {
    let k = k1_apply_quadrature(phi, alphas, n)?;
    let h = hilbert_circle_quadrature(phi, alphas, n)?;
    let j = j_apply(phi, Some(witness), alphas, cfg)?;
    Ok(k.iter()
        .zip(&h)
        .zip(&j)
        .map(|((k, h), j)| (k - h - j).norm())
        .fold(0.0, f64::max))
}

/// `‖𝒦₁φ‖₂ / ‖φ‖₂` with both norms taken by the midpoint rule on the
/// `n`-node half-offset grid.
pub fn k1_rayleigh_quotient(phi: &(impl Periodic + ?Sized), n: usize) -> Result<f64> {
    let nodes = crate::funcspace::alpha_grid(n);
    let out = k1_apply_quadrature(phi, &nodes, n)?;
    let num: f64 = out.iter().map(|v| v.norm_sqr()).sum();
    let den: f64 = nodes.iter().map(|&a| phi.eval(a).norm_sqr()).sum();
    if den == 0.0 {
        return Err(Error::Precondition("Rayleigh quotient of the zero function".into()));
    }
    Ok((num / den).sqrt())
}

/// `(1/π) pv ∫ ψ(θ)/sin(θ − α) dθ`, the angular factor of `𝒦₂`.
fn angular_theta_form(psi: &(impl Periodic + ?Sized), alpha: f64, n: usize) -> Result<Complex64> {
    Ok(pv_circle(&|t: f64| psi.eval(alpha + t) / t.sin(), n)? / PI)
}

/// `𝒦₂φ(α)` on a polar tensor sum: `Σ (∫₀^∞ φ₁ᵢ) · (1/π) pv ∫ φ₂ᵢ(θ)/sin(θ−α) dθ`.
pub fn k2_apply(
    phi: &PolarTensorSum,
    alphas: &[f64],
    backend: Backend,
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::new(0.0, 0.0); alphas.len()];
    for (radial, angular) in phi.terms() {
        let mass = integrate_halfline(radial, radial.known_integral(), cfg)?.value;
        let vals = match backend {
            Backend::Spectral => {
                let spec = spectrum_of(angular)?.map_multiplier(|k| -k1_multiplier(k));
                eval_spectrum(&spec, alphas)
            }
            Backend::Quadrature => for_each_alpha(alphas, |a| angular_theta_form(angular, a, n))?,
        };
        for (o, v) in out.iter_mut().zip(vals) {
            *o += v * mass;
        }
    }
    Ok(out)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("r = {r}: the polar operator lives on r > 0")))
    }
}

/// `𝒦φ(r, α) = 𝒦₂φ(α)/r`.
pub fn calk_apply(
    phi: &PolarTensorSum,
    r: f64,
    alpha: f64,
    backend: Backend,
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<Complex64> {
    check_radius(r)?;
    Ok(k2_apply(phi, &[alpha], backend, n, cfg)?[0] / r)
}

/// `𝒦φ(r, α)` for a general polar function `φ(ρ, θ)` vanishing for
/// `ρ > rho_max`: the angular PV integral by `pv_circle` with `n` nodes at
/// each radial node, then an adaptive radial integral.
pub fn calk_apply_direct<T: QuadScalar>(
    phi: &(impl Fn(f64, f64) -> T + Sync + ?Sized),
    rho_max: f64,
    rho_breaks: &[f64],
    r: f64,
    alpha: f64,
    n: usize,
    cfg: &PVQuadratureConfig,
) -> Result<T> {
    check_radius(r)?;
    cfg.validate()?;
    if n < 8 || n % 2 != 0 {
        return Err(Error::param("n", format!("grid size must be even and >= 8, got {n}")));
    }
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(Error::Divergent(format!("radial extent {rho_max} is not a finite positive number")));
    }
    let angular = |rho: f64| {
        pv_circle(&|t: f64| phi(rho, alpha + t) * (1.0 / t.sin()), n).unwrap_or_else(|_| T::zero()) * (1.0 / PI)
    };
    let mut breaks = vec![0.0, rho_max];
    breaks.extend(rho_breaks.iter().copied().filter(|&b| b > 0.0 && b < rho_max));
    let res = crate::pvquad::integrate_panels(&angular, &breaks, cfg);
    Ok(res.value * (1.0 / r))
}
