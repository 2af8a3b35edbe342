//! Principal-value quadrature on the circle and the line.

mod gauss;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use gauss::{adaptive, Adaptive, GaussRule, QuadScalar, Tolerance};

use crate::error::{Error, Result};
use crate::funcspace::{RealFunction, Support};

/// What to do with the part of an unbounded integral beyond the truncation
/// radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailPolicy {
    Ignore,
    /// Assume `F(t) ~ F(T) (t/T)^{-beta}` beyond `T` and add
    /// `F(T) T / (beta - 1)`. `beta: None` takes the exponent from the
    /// integrand's decay metadata.
    PowerExtrapolate { beta: Option<f64> },
}

impl fmt::Display for TailPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailPolicy::Ignore => write!(f, "ignore"),
            TailPolicy::PowerExtrapolate { beta: None } => write!(f, "power-extrapolate"),
            TailPolicy::PowerExtrapolate { beta: Some(b) } => write!(f, "power-extrapolate:{b}"),
        }
    }
}

impl std::str::FromStr for TailPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ignore" => Ok(TailPolicy::Ignore),
            "power-extrapolate" => Ok(TailPolicy::PowerExtrapolate { beta: None }),
            other => {
                let b = other
                    .strip_prefix("power-extrapolate:")
                    .ok_or_else(|| Error::parse(s, "expected `ignore` or `power-extrapolate[:beta]`"))?;
                let beta: f64 = b.parse().map_err(|_| Error::parse(s, "beta is not a number"))?;
                if !(beta > 0.0) {
                    return Err(Error::param("tail_policy", format!("beta must be > 0, got {beta}")));
                }
                Ok(TailPolicy::PowerExtrapolate { beta: Some(beta) })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PVQuadratureConfig {
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Truncation radius for integrands with algebraic decay.
    pub radius: f64,
    /// Truncation radius for power-type integrands.
    pub power_radius: f64,
    pub tail: TailPolicy,
    /// Geometric panel grading toward power singularities and log-spaced
    /// panels toward infinity.
    pub log_spacing: bool,
}

impl Default for PVQuadratureConfig {
    fn default() -> Self {
        PVQuadratureConfig {
            nodes: 24,
            radius: 1e3,
            power_radius: 1e4,
            tail: TailPolicy::PowerExtrapolate { beta: None },
            log_spacing: true,
        }
    }
}

impl PVQuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::param("N", format!("need at least 8 nodes per panel, got {}", self.nodes)));
        }
        for (name, r) in [("R", self.radius), ("R_power", self.power_radius)] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::param(name, format!("must be positive and finite, got {r}")));
            }
        }
        if let TailPolicy::PowerExtrapolate { beta: Some(b) } = self.tail {
            if !(b > 0.0) {
                return Err(Error::param("tail_policy", format!("beta must be > 0, got {b}")));
            }
        }
        Ok(())
    }

    pub fn to_kv(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("N".to_string(), self.nodes.to_string()),
            ("R".to_string(), self.radius.to_string()),
            ("R_power".to_string(), self.power_radius.to_string()),
            ("tail_policy".to_string(), self.tail.to_string()),
            ("log_spacing".to_string(), self.log_spacing.to_string()),
        ])
    }

    /// Reads a flat key-value map; missing keys keep their defaults.
    pub fn from_kv<'a>(kv: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut cfg = PVQuadratureConfig::default();
        for (k, v) in kv {
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::parse(v, format!("`{k}` expects a number")));
            match k.trim() {
                "N" => cfg.nodes = v.trim().parse().map_err(|_| Error::parse(v, "`N` expects an integer"))?,
                "R" => cfg.radius = num(v)?,
                "R_power" => cfg.power_radius = num(v)?,
                "tail_policy" => cfg.tail = v.parse()?,
                "log_spacing" => {
                    cfg.log_spacing = v.trim().parse().map_err(|_| Error::parse(v, "`log_spacing` expects true or false"))?
                }
                other => return Err(Error::parse(other, "unknown quadrature key")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn tol(&self) -> Tolerance {
        Tolerance::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadWarning {
    /// The tail beyond the truncation radius was dropped although the
    /// integrand decays slowly.
    SlowTail,
    /// The adaptive integrator hit its panel limit.
    NotConverged,
    /// A symmetric neighbourhood of a non-integrable singularity was excluded.
    ExcisedSingularity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub warnings: Vec<QuadWarning>,
}

impl<T> QuadResult<T> {
    fn new(value: T) -> Self {
        QuadResult {
            value,
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, w: QuadWarning) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn merge_warnings(&mut self, other: &[QuadWarning]) {
        for &w in other {
            self.warn(w);
        }
    }
}

/// `pv ∫_{-π}^{π} F(t) dt` by the midpoint rule on the half-offset grid, with
/// the nodes `t` and `-t` summed in pairs so that odd parts cancel exactly,
/// which includes the poles at `0` and `±π`.
pub fn pv_circle<T: QuadScalar>(f: &(impl Fn(f64) -> T + ?Sized), n: usize) -> Result<T> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::param("n", format!("grid size must be even and >= 8, got {n}")));
    }
    let h = 2.0 * PI / n as f64;
    let mut acc = T::zero();
    for j in 0..n / 2 {
        let t = (j as f64 + 0.5) * h;
        acc += f(t) + f(-t);
    }
    Ok(acc * h)
}

/// Adaptive integral of `f` over `[breaks[0], breaks[last]]`.
pub fn integrate_panels<T: QuadScalar>(
    f: &(impl Fn(f64) -> T + ?Sized),
    breaks: &[f64],
    cfg: &PVQuadratureConfig,
) -> QuadResult<T> {
    let r = adaptive(f, breaks, cfg.nodes, cfg.tol());
    let mut out = QuadResult::new(r.value);
    if !r.converged {
        out.warn(QuadWarning::NotConverged);
    }
    out
}

/// `2, 4, 8, ...` below `t_max`.
fn log_breaks(t_max: f64, out: &mut Vec<f64>) {
    let mut t = 2.0;
    while t < t_max {
        out.push(t);
        t *= 2.0;
    }
}

/// `∫ f` over `[breaks[0], breaks[last]]` where `f` has algebraic
/// singularities `|t - c|^{-s}` at the given `(c, s)`. The two panels next to
/// each `c` are mapped by `t = c ± u^m`, `m = 1/(1 - s)`, which turns the
/// singular factor into a bounded one.
pub fn integrate_singular<T: QuadScalar>(
    f: &(impl Fn(f64) -> T + ?Sized),
    breaks: &[f64],
    singular: &[(f64, f64)],
    cfg: &PVQuadratureConfig,
) -> Result<QuadResult<T>> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = QuadResult::new(T::zero());
    let (Some(&lo), Some(&hi)) = (pts.first(), pts.last()) else {
        return Ok(out);
    };
    let mut windows: Vec<(f64, f64, f64)> = Vec::new();
    for &(c, s) in singular {
        if !(s > -1.0 && s < 1.0) {
            return Err(Error::param("s", format!("singularity exponent must lie in (-1, 1), got {s}")));
        }
        if c < lo || c > hi {
            continue;
        }
        let mut delta = f64::INFINITY;
        for &b in pts.iter().chain(singular.iter().map(|(c, _)| c)) {
            let d = (b - c).abs();
            if d > 0.0 {
                delta = delta.min(0.5 * d);
            }
        }
        if !delta.is_finite() {
            delta = (hi - lo).max(1.0);
        }
        windows.push((c, s, delta));
        pts.extend([c, c - delta, c + delta]);
    }
    pts.retain(|&b| b >= lo && b <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut plain: Vec<f64> = Vec::new();
    let flush = |plain: &mut Vec<f64>, out: &mut QuadResult<T>| {
        if plain.len() >= 2 {
            let r = integrate_panels(f, plain, cfg);
            out.value += r.value;
            out.merge_warnings(&r.warnings);
        }
        plain.clear();
    };
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mapped = windows.iter().find_map(|&(c, s, _)| {
            if a == c {
                Some((c, s, 1.0, b - a))
            } else if b == c {
                Some((c, s, -1.0, b - a))
            } else {
                None
            }
        });
        match mapped {
            Some((c, s, dir, width)) => {
                flush(&mut plain, &mut out);
                let m = 1.0 / (1.0 - s.max(0.0));
                let g = |u: f64| f(c + dir * u.powf(m)) * (m * u.powf(m - 1.0));
                let r = integrate_panels(&g, &[0.0, width.powf(1.0 / m)], cfg);
                out.value += r.value;
                out.merge_warnings(&r.warnings);
            }
            None => {
                if plain.last() != Some(&a) {
                    flush(&mut plain, &mut out);
                    plain.push(a);
                }
                plain.push(b);
            }
        }
    }
    flush(&mut plain, &mut out);
    Ok(out)
}

fn tail_exponent(policy: TailPolicy, natural: f64) -> Result<f64> {
    let beta = match policy {
        TailPolicy::PowerExtrapolate { beta: Some(b) } => b,
        _ => natural,
    };
    if beta <= 1.0 {
        return Err(Error::Divergent(format!("tail exponent {beta} <= 1")));
    }
    Ok(beta)
}

/// Line Hilbert transform `(1/π) pv ∫ g(y)/(x - y) dy`, computed as
/// `(1/π) ∫_0^∞ (g(x - t) - g(x + t))/t dt`.
pub fn pv_line_hilbert(g: &(impl RealFunction + ?Sized), x: f64, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::param("x", format!("must be finite, got {x}")));
    }
    let support = g.support();
    let mut result = QuadResult::new(0.0);
    let mut lower = 0.0;
    let (t_max, tail_beta) = match support {
        Support::PowerType { s } => {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::param("s", format!("power exponent must lie in (0, 1), got {s}")));
            }
            if x == 0.0 {
                lower = 1.0 / cfg.power_radius;
                result.warn(QuadWarning::ExcisedSingularity);
            }
            // the tail model's relative error is O((x/T)^2)
            (cfg.power_radius.max(1e3 * x.abs()), Some(1.0 + s))
        }
        _ => match support.core() {
            Some((lo, hi)) => ((x - lo).abs().max((x - hi).abs()), None),
            None => {
                let Support::Decaying { beta, lo, hi } = support else { unreachable!() };
                let reach = (x - lo).abs().max((x - hi).abs());
                (cfg.radius.max(2.0 * reach), Some(beta + 1.0))
            }
        },
    };
    if t_max <= lower {
        return Ok(result);
    }
    let f = |t: f64| (g.eval(x - t) - g.eval(x + t)) / t;

    let mut breaks = vec![lower, t_max];
    if t_max > 1.0 {
        breaks.push(1.0);
    }
    let mut singular = Vec::new();
    let mut features = g.breakpoints();
    if let Some((lo, hi)) = support.core() {
        features.extend([lo, hi]);
    }
    for c in features {
        let d = (x - c).abs();
        if d > lower && d < t_max {
            breaks.push(d);
            if let (Support::PowerType { s }, true) = (support, cfg.log_spacing) {
                if c == 0.0 {
                    singular.push((d, s));
                }
                // the t^{-1-s} profile away from the singularity spans many scales
                let mut t = 2.0 * d;
                while t < t_max {
                    breaks.push(t);
                    t *= 2.0;
                }
            }
        }
    }
    if cfg.log_spacing || tail_beta.is_some() {
        log_breaks(t_max, &mut breaks);
    }
    breaks.retain(|&b| b >= lower && b <= t_max);

    let body = integrate_singular(&f, &breaks, &singular, cfg)?;
    result.merge_warnings(&body.warnings);
    let mut total = body.value;
    if let Some(natural) = tail_beta {
        match cfg.tail {
            TailPolicy::Ignore => result.warn(QuadWarning::SlowTail),
            policy => {
                let beta = tail_exponent(policy, natural)?;
                total += f(t_max) * t_max / (beta - 1.0);
            }
        }
    }
    result.value = total / PI;
    Ok(result)
}

/// `∫ h(f(t)) dt` over the whole domain of `f`, or over `t >= 0` when
/// `halfline` is set. `decay_power` multiplies the declared tail exponent
/// (`p` for `|f|^p`).
fn integrate_descriptor(
    f: &(impl RealFunction + ?Sized),
    h: &dyn Fn(f64) -> f64,
    halfline: bool,
    decay_power: f64,
    cfg: &PVQuadratureConfig,
) -> Result<QuadResult<f64>> {
    cfg.validate()?;
    let support = f.support();
    let (mut a, b, tail_beta) = match support {
        Support::PowerType { .. } => {
            return Err(Error::Divergent("power-type function is not integrable".into()));
        }
        Support::Compact { a, b } => (a, b, None),
        Support::Decaying { beta, lo, hi } if beta.is_infinite() => (lo, hi, None),
        Support::Decaying { beta, lo, hi } => {
            let r = cfg.radius.max(2.0 * lo.abs().max(hi.abs()));
            (-r, r, Some(beta * decay_power))
        }
    };
    let mut result = QuadResult::new(0.0);
    if halfline {
        a = a.max(0.0);
    }
    if b <= a {
        return Ok(result);
    }
    let g = |t: f64| h(f.eval(t));
    let mut breaks = vec![a, b];
    breaks.extend(f.breakpoints().into_iter().filter(|&c| c > a && c < b));
    if tail_beta.is_some() || cfg.log_spacing {
        let mut pos = Vec::new();
        log_breaks(b, &mut pos);
        breaks.extend(pos.iter().copied());
        if !halfline {
            breaks.extend(pos.iter().map(|t| -t).filter(|&t| t > a));
        }
    }
    let body = integrate_panels(&g, &breaks, cfg);
    result.merge_warnings(&body.warnings);
    let mut total = body.value;
    if let Some(natural) = tail_beta {
        match cfg.tail {
            TailPolicy::Ignore => {
                if natural <= 1.0 {
                    result.warn(QuadWarning::SlowTail);
                }
            }
            policy => {
                let beta = tail_exponent(policy, natural)?;
                let mut edge = g(b);
                if !halfline {
                    edge += g(a);
                }
                total += edge * b / (beta - 1.0);
            }
        }
    }
    result.value = total;
    Ok(result)
}

/// `∫_0^∞ φ(ρ) dρ`. A known exact integral is returned verbatim when the
/// function lives on the half-line.
pub fn integrate_halfline(phi: &(impl RealFunction + ?Sized), known: Option<f64>, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    if let Support::PowerType { .. } = phi.support() {
        return Err(Error::Divergent("power-type function is not integrable on (0, ∞)".into()));
    }
    if let Some(v) = known {
        if phi.support().lower() >= 0.0 {
            return Ok(QuadResult::new(v));
        }
    }
    integrate_descriptor(phi, &|v| v, true, 1.0, cfg)
}

/// `∫_ℝ f`.
pub fn integrate_line(f: &(impl RealFunction + ?Sized), known: Option<f64>, cfg: &PVQuadratureConfig) -> Result<QuadResult<f64>> {
    if let Some(v) = known {
        return Ok(QuadResult::new(v));
    }
    integrate_descriptor(f, &|v| v, false, 1.0, cfg)
}

/// `‖f‖_p`, closed form when known, quadrature otherwise.
pub fn lp_norm(f: &crate::funcspace::Function1D, p: f64, cfg: &PVQuadratureConfig) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::param("p", format!("need p >= 1, got {p}")));
    }
    if let Some(v) = f.known_lp_norm(p) {
        return Ok(v);
    }
    if p.is_infinite() {
        return Err(Error::param("p", "sup norms are not computed by quadrature"));
    }
    let r = integrate_descriptor(f, &|v: f64| v.abs().powf(p), false, p, cfg)?;
    Ok(r.value.powf(1.0 / p))
}

/// `∫_0^∞ |φ|`.
pub fn l1_norm_halfline(phi: &crate::funcspace::Function1D, cfg: &PVQuadratureConfig) -> Result<f64> {
    if phi.support().lower() >= 0.0 {
        if let Some(v) = phi.known_lp_norm(1.0) {
            return Ok(v);
        }
    }
    Ok(integrate_descriptor(phi, &|v: f64| v.abs(), true, 1.0, cfg)?.value)
}
