//! Real-line and half-line function descriptors.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Where a function lives and how fast it decays; quadratures pick their
/// truncation and panelling from this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Zero outside `[a, b]`.
    Compact { a: f64, b: f64 },
    /// `|f(t)| <= C |t|^{-beta}` outside `[lo, hi]`. `beta = inf` means the
    /// function is negligible (below 1e-20 relative) outside the core.
    Decaying { beta: f64, lo: f64, hi: f64 },
    /// `sgn(t) |t|^{-s}` with `0 < s < 1`: singular at 0, slow tail.
    PowerType { s: f64 },
}

impl Support {
    pub fn is_rapid(&self) -> bool {
        match self {
            Support::Compact { .. } => true,
            Support::Decaying { beta, .. } => beta.is_infinite(),
            Support::PowerType { .. } => false,
        }
    }

    /// Interval outside of which the function is zero or negligible, if any.
    pub fn core(&self) -> Option<(f64, f64)> {
        match *self {
            Support::Compact { a, b } => Some((a, b)),
            Support::Decaying { beta, lo, hi } if beta.is_infinite() => Some((lo, hi)),
            _ => None,
        }
    }

    /// Exponent of the algebraic tail, `None` for rapid decay.
    pub fn tail_exponent(&self) -> Option<f64> {
        match *self {
            Support::Compact { .. } => None,
            Support::Decaying { beta, .. } => beta.is_finite().then_some(beta),
            Support::PowerType { s } => Some(s),
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            Support::Compact { a, .. } => a,
            Support::Decaying { beta, lo, .. } if beta.is_infinite() => lo,
            _ => f64::NEG_INFINITY,
        }
    }
}

/// Pointwise evaluation contract shared by every real function the
/// quadratures consume.
pub trait RealFunction: Sync {
    fn eval(&self, t: f64) -> f64;
    fn support(&self) -> Support;
    /// Points where the function is singular, non-smooth, or concentrated.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

type Shared1D = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied function with explicit metadata.
#[derive(Clone)]
pub struct CustomFn {
    name: String,
    f: Shared1D,
    support: Support,
    breakpoints: Vec<f64>,
    known_integral: Option<f64>,
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFn")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish()
    }
}

/// A named real function family with its decay metadata and the integrals and
/// norms that are known in closed form.
#[derive(Debug, Clone)]
pub enum Function1D {
    /// `exp(-(t - center)^2 / (2 sigma^2))`
    Gaussian { center: f64, sigma: f64 },
    /// `exp(1 - 1/(1 - u^2))` with `u = (t - center)/radius`, zero for `|u| >= 1`.
    Bump { center: f64, radius: f64 },
    /// Indicator of `[a, b]`.
    Indicator { a: f64, b: f64 },
    /// `sgn(t) |t|^{-s}`, `0 < s < 1`.
    Power { s: f64 },
    /// `exp(-rate t)` on `t >= 0`, zero on the negative axis.
    Exp { rate: f64 },
    /// `t exp(-t^2)` on `t >= 0`.
    Rayleigh,
    Scaled { factor: f64, inner: Box<Function1D> },
    Custom(CustomFn),
}

impl Function1D {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        finite("center", center)?;
        positive("sigma", sigma)?;
        Ok(Function1D::Gaussian { center, sigma })
    }

    pub fn bump(center: f64, radius: f64) -> Result<Self> {
        finite("center", center)?;
        positive("radius", radius)?;
        Ok(Function1D::Bump { center, radius })
    }

    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        finite("a", a)?;
        finite("b", b)?;
        if a >= b {
            return Err(Error::param("indicator", format!("need a < b, got [{a}, {b}]")));
        }
        Ok(Function1D::Indicator { a, b })
    }

    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::param("s", format!("power exponent must lie in (0, 1), got {s}")));
        }
        Ok(Function1D::Power { s })
    }

    pub fn exp(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Function1D::Exp { rate })
    }

    pub fn rayleigh() -> Self {
        Function1D::Rayleigh
    }

    pub fn custom<F>(name: impl Into<String>, f: F, support: Support) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Function1D::Custom(CustomFn {
            name: name.into(),
            f: Arc::new(f),
            support,
            breakpoints: Vec::new(),
            known_integral: None,
        })
    }

    /// Attaches breakpoints and an exact integral to a custom function. No-op
    /// for the built-in families.
    pub fn with_metadata(mut self, breakpoints: Vec<f64>, known_integral: Option<f64>) -> Self {
        if let Function1D::Custom(c) = &mut self {
            c.breakpoints = breakpoints;
            c.known_integral = known_integral;
        }
        self
    }

    pub fn scaled(self, factor: f64) -> Self {
        match self {
            Function1D::Scaled { factor: f0, inner } => Function1D::Scaled {
                factor: f0 * factor,
                inner,
            },
            other => Function1D::Scaled {
                factor,
                inner: Box::new(other),
            },
        }
    }

    /// Exact value of the integral over the function's whole domain.
    pub fn known_integral(&self) -> Option<f64> {
        match self {
            Function1D::Gaussian { sigma, .. } => Some(sigma * (2.0 * PI).sqrt()),
            Function1D::Indicator { a, b } => Some(b - a),
            Function1D::Exp { rate } => Some(1.0 / rate),
            Function1D::Rayleigh => Some(0.5),
            Function1D::Bump { .. } | Function1D::Power { .. } => None,
            Function1D::Scaled { factor, inner } => inner.known_integral().map(|v| factor * v),
            Function1D::Custom(c) => c.known_integral,
        }
    }

    /// Closed-form `L^p` norm, where one exists. The global power function
    /// lies in no `L^p`, reported as infinity.
    pub fn known_lp_norm(&self, p: f64) -> Option<f64> {
        if !(p >= 1.0) {
            return None;
        }
        match self {
            Function1D::Gaussian { sigma, .. } => Some((sigma * (2.0 * PI / p).sqrt()).powf(1.0 / p)),
            Function1D::Indicator { a, b } => Some((b - a).powf(1.0 / p)),
            Function1D::Exp { rate } => Some((p * rate).powf(-1.0 / p)),
            Function1D::Rayleigh if p == 1.0 => Some(0.5),
            Function1D::Rayleigh if p == 2.0 => Some((PI.sqrt() / (8.0 * 2f64.sqrt())).sqrt()),
            Function1D::Power { .. } => Some(f64::INFINITY),
            Function1D::Scaled { factor, inner } => inner.known_lp_norm(p).map(|v| factor.abs() * v),
            _ => None,
        }
    }

    /// Exact Hilbert transform `(1/pi) pv ∫ f(y)/(x - y) dy`, where one is
    /// tabulated.
    pub fn known_hilbert(&self, x: f64) -> Option<f64> {
        match self {
            // H[sgn|y|^{-s}](x) = -cot(pi s / 2) |x|^{-s}
            Function1D::Power { s } => Some(-(PI * s / 2.0).tan().recip() * x.abs().powf(-s)),
            Function1D::Scaled { factor, inner } => inner.known_hilbert(x).map(|v| factor * v),
            _ => None,
        }
    }

    pub fn is_power_type(&self) -> bool {
        matches!(self.support(), Support::PowerType { .. })
    }
}

impl RealFunction for Function1D {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Function1D::Gaussian { center, sigma } => {
                let u = (t - center) / sigma;
                (-0.5 * u * u).exp()
            }
            Function1D::Bump { center, radius } => {
                let u = (t - center) / radius;
                if u.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
            Function1D::Indicator { a, b } => {
                if (*a..=*b).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            Function1D::Power { s } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.signum() * t.abs().powf(-s)
                }
            }
            Function1D::Exp { rate } => {
                if t >= 0.0 {
                    (-rate * t).exp()
                } else {
                    0.0
                }
            }
            Function1D::Rayleigh => {
                if t >= 0.0 {
                    t * (-t * t).exp()
                } else {
                    0.0
                }
            }
            Function1D::Scaled { factor, inner } => factor * inner.eval(t),
            Function1D::Custom(c) => (c.f)(t),
        }
    }

    fn support(&self) -> Support {
        match *self {
            Function1D::Gaussian { center, sigma } => Support::Decaying {
                beta: f64::INFINITY,
                lo: center - 12.0 * sigma,
                hi: center + 12.0 * sigma,
            },
            Function1D::Bump { center, radius } => Support::Compact {
                a: center - radius,
                b: center + radius,
            },
            Function1D::Indicator { a, b } => Support::Compact { a, b },
            Function1D::Power { s } => Support::PowerType { s },
            Function1D::Exp { rate } => Support::Decaying {
                beta: f64::INFINITY,
                lo: 0.0,
                hi: 50.0 / rate,
            },
            Function1D::Rayleigh => Support::Decaying {
                beta: f64::INFINITY,
                lo: 0.0,
                hi: 8.0,
            },
            Function1D::Scaled { ref inner, .. } => inner.support(),
            Function1D::Custom(ref c) => c.support,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Function1D::Gaussian { center, sigma } => [-4.0, -1.0, 0.0, 1.0, 4.0].map(|k| center + k * sigma).to_vec(),
            Function1D::Bump { center, radius } => vec![center - radius, *center, center + radius],
            Function1D::Indicator { a, b } => vec![*a, *b],
            Function1D::Power { .. } | Function1D::Exp { .. } | Function1D::Rayleigh => vec![0.0],
            Function1D::Scaled { inner, .. } => inner.breakpoints(),
            Function1D::Custom(c) => c.breakpoints.clone(),
        }
    }
}

impl fmt::Display for Function1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function1D::Gaussian { center, sigma } => write!(f, "gaussian:{center},{sigma}"),
            Function1D::Bump { center, radius } => write!(f, "bump:{center},{radius}"),
            Function1D::Indicator { a, b } => write!(f, "indicator:{a},{b}"),
            Function1D::Power { s } => write!(f, "power:{s}"),
            Function1D::Exp { rate } => write!(f, "exp:{rate}"),
            Function1D::Rayleigh => write!(f, "rayleigh"),
            Function1D::Scaled { factor, inner } => write!(f, "{factor}*{inner}"),
            Function1D::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite, got {v}")))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}
