//! Finite sums of simple tensors, Cartesian and polar.

use num_complex::Complex64;

use super::circle::{Periodic, PeriodicFn};
use super::line::{Function1D, RealFunction, Support};
use crate::error::{Error, Result};
use crate::pvquad::{lp_norm, PVQuadratureConfig};

/// A real function on the plane, with enough metadata for the plane-operator
/// quadratures to truncate and panel their integrals.
pub trait PlaneFunction: Sync {
    fn eval(&self, y1: f64, y2: f64) -> f64;
    /// Half-width of a box centred at the origin outside which the function
    /// is zero or negligible; infinite for slowly decaying functions.
    fn extent(&self) -> f64;
    /// Coordinates along `axis` (0 or 1) where the function is non-smooth or
    /// concentrated, for product-structured functions.
    fn breakpoints(&self, _axis: usize) -> Vec<f64> {
        Vec::new()
    }
}

/// A closure with an explicit extent.
pub struct PlaneFn<F> {
    f: F,
    extent: f64,
}

impl<F: Fn(f64, f64) -> f64 + Sync> PlaneFn<F> {
    pub fn new(f: F, extent: f64) -> Self {
        PlaneFn { f, extent }
    }
}

impl<F: Fn(f64, f64) -> f64 + Sync> PlaneFunction for PlaneFn<F> {
    fn eval(&self, y1: f64, y2: f64) -> f64 {
        (self.f)(y1, y2)
    }
    fn extent(&self) -> f64 {
        self.extent
    }
}

/// An `L^q ⊗ L^p` upper bound for the projective norm, supplied by the
/// caller instead of computed from the terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveBound {
    pub q: f64,
    pub p: f64,
    pub value: f64,
}

/// `f(y1, y2) = Σ f_i(y1) g_i(y2)`.
#[derive(Debug, Clone, Default)]
pub struct TensorSum2D {
    terms: Vec<(Function1D, Function1D)>,
    supplied: Option<ProjectiveBound>,
}

impl TensorSum2D {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn simple(f: Function1D, g: Function1D) -> Self {
        TensorSum2D {
            terms: vec![(f, g)],
            supplied: None,
        }
    }

    pub fn push(&mut self, f: Function1D, g: Function1D) -> &mut Self {
        self.terms.push((f, g));
        self.supplied = None;
        self
    }

    pub fn terms(&self) -> &[(Function1D, Function1D)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_supplied_bound(mut self, bound: ProjectiveBound) -> Result<Self> {
        if !(bound.value >= 0.0) {
            return Err(Error::param("projective_bound", "must be >= 0"));
        }
        self.supplied = Some(bound);
        Ok(self)
    }

    pub fn scaled(&self, c: f64) -> Self {
        TensorSum2D {
            terms: self.terms.iter().map(|(f, g)| (f.clone().scaled(c), g.clone())).collect(),
            supplied: None,
        }
    }

    /// `Σ ‖f_i‖_q ‖g_i‖_p` for this representation, which bounds the
    /// projective norm from above. A supplied bound for the same `(q, p)`
    /// takes precedence.
    pub fn projective_bound(&self, q: f64, p: f64, cfg: &PVQuadratureConfig) -> Result<f64> {
        if let Some(b) = self.supplied {
            if b.q == q && b.p == p {
                return Ok(b.value);
            }
        }
        let mut total = 0.0;
        for (f, g) in &self.terms {
            let nf = lp_norm(f, q, cfg)?;
            if nf == 0.0 {
                continue;
            }
            let ng = lp_norm(g, p, cfg)?;
            if ng == 0.0 {
                continue;
            }
            total += nf * ng;
        }
        Ok(total)
    }
}

fn reach(s: Support) -> f64 {
    match s.core() {
        Some((a, b)) => a.abs().max(b.abs()),
        None => f64::INFINITY,
    }
}

impl PlaneFunction for TensorSum2D {
    fn eval(&self, y1: f64, y2: f64) -> f64 {
        self.terms.iter().map(|(f, g)| f.eval(y1) * g.eval(y2)).sum()
    }

    fn extent(&self) -> f64 {
        self.terms
            .iter()
            .map(|(f, g)| reach(f.support()).max(reach(g.support())))
            .fold(0.0, f64::max)
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|(f, g)| if axis == 0 { f.breakpoints() } else { g.breakpoints() })
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// `φ(ρ, θ) = Σ φ1_i(ρ) φ2_i(θ)` on `ρ > 0`, `θ` periodic.
#[derive(Debug, Clone, Default)]
pub struct PolarTensorSum {
    terms: Vec<(Function1D, PeriodicFn)>,
}

impl PolarTensorSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn simple(radial: Function1D, angular: PeriodicFn) -> Result<Self> {
        let mut s = PolarTensorSum::new();
        s.push(radial, angular)?;
        Ok(s)
    }

    /// Adds a term; rejects radial factors whose `∫_0^∞ |φ1|` cannot be
    /// finite under their decay metadata.
    pub fn push(&mut self, radial: Function1D, angular: PeriodicFn) -> Result<&mut Self> {
        match radial.support() {
            Support::PowerType { .. } => {
                return Err(Error::Divergent(format!("radial factor {radial} is not integrable on (0, ∞)")));
            }
            Support::Decaying { beta, .. } if beta <= 1.0 => {
                return Err(Error::Divergent(format!(
                    "radial factor {radial} decays like ρ^-{beta}, not integrable on (0, ∞)"
                )));
            }
            _ => {}
        }
        self.terms.push((radial, angular));
        Ok(self)
    }

    pub fn terms(&self) -> &[(Function1D, PeriodicFn)] {
        &self.terms
    }

    pub fn eval(&self, rho: f64, theta: f64) -> Complex64 {
        self.terms.iter().map(|(r, a)| a.eval(theta) * r.eval(rho)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(c: f64, s: f64) -> Function1D {
        Function1D::gaussian(c, s).unwrap()
    }

    #[test]
    fn evaluation_matches_termwise_sum() {
        let mut f = TensorSum2D::new();
        f.push(gauss(0.0, 1.0), gauss(1.0, 0.5));
        f.push(Function1D::bump(0.0, 2.0).unwrap(), gauss(-1.0, 1.0));
        let (y1, y2) = (0.3, -0.4);
        let want: f64 = f.terms().iter().map(|(a, b)| a.eval(y1) * b.eval(y2)).sum();
        assert_eq!(f.eval(y1, y2), want);
    }

    #[test]
    fn bilinear_in_each_factor() {
        let f = TensorSum2D::simple(gauss(0.2, 1.0), gauss(-0.5, 0.8));
        let g = f.scaled(-2.5);
        for (y1, y2) in [(0.0, 0.0), (1.0, -1.0), (0.7, 2.0)] {
            assert!((g.eval(y1, y2) + 2.5 * f.eval(y1, y2)).abs() < 1e-15);
        }
    }

    #[test]
    fn projective_bound_zero_iff_zero_factors() {
        let cfg = PVQuadratureConfig::default();
        let f = TensorSum2D::simple(gauss(0.0, 1.0), gauss(0.0, 1.0).scaled(0.0));
        assert_eq!(f.projective_bound(2.0, 2.0, &cfg).unwrap(), 0.0);
        let g = TensorSum2D::simple(gauss(0.0, 1.0), gauss(0.0, 1.0));
        let b = g.projective_bound(2.0, 2.0, &cfg).unwrap();
        // ‖e^{-y²/2}‖_2² = √π
        assert!((b - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn supplied_bound_takes_precedence() {
        let cfg = PVQuadratureConfig::default();
        let f = TensorSum2D::simple(gauss(0.0, 1.0), gauss(0.0, 1.0))
            .with_supplied_bound(ProjectiveBound { q: 2.0, p: 2.0, value: 9.0 })
            .unwrap();
        assert_eq!(f.projective_bound(2.0, 2.0, &cfg).unwrap(), 9.0);
        assert!(f.projective_bound(1.5, 3.0, &cfg).unwrap() < 9.0);
    }

    #[test]
    fn polar_rejects_nonintegrable_radial_factor() {
        let r = PolarTensorSum::simple(Function1D::power(0.5).unwrap(), PeriodicFn::basis(1));
        assert!(matches!(r, Err(Error::Divergent(_))));
        assert!(PolarTensorSum::simple(Function1D::exp(1.0).unwrap(), PeriodicFn::basis(1)).is_ok());
    }
}
