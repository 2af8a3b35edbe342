//! Gauss-Legendre rules and a globally adaptive panel integrator.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::ops::{Add, AddAssign, Mul, Sub};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

/// Values a quadrature can accumulate.
pub trait QuadScalar: Copy + Send + Sync + Add<Output = Self> + AddAssign + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// `n`-point Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Shared instance for `n` nodes.
    pub fn cached(n: usize) -> &'static GaussRule {
        static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
        let mut map = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
        map.entry(n).or_insert_with(|| Box::leak(Box::new(GaussRule::new(n))))
    }

    pub fn integrate<T: QuadScalar>(&self, f: &(impl Fn(f64) -> T + ?Sized), a: f64, b: f64) -> (T, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = T::zero();
        let mut abs = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(c + h * x);
            abs += w * v.magnitude();
            acc += v * w;
        }
        (acc * h, abs * h.abs())
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-11,
            max_panels: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Adaptive<T> {
    pub value: T,
    /// `∫|f|` as seen by the fine rule.
    pub abs_integral: f64,
    pub error: f64,
    pub converged: bool,
    pub panels: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    abs: f64,
    err: f64,
}

struct ByError(f64, usize);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

fn panel<T: QuadScalar>(f: &(impl Fn(f64) -> T + ?Sized), fine: &GaussRule, coarse: &GaussRule, a: f64, b: f64) -> Panel<T> {
    let (v, abs) = fine.integrate(f, a, b);
    let (c, _) = coarse.integrate(f, a, b);
    Panel {
        a,
        b,
        value: v,
        abs,
        err: (v - c).magnitude(),
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per pair of consecutive breakpoints and repeatedly bisecting the panel with
/// the largest error estimate `|G_n - G_{n/2}|`.
///
/// The result is summed in panel order, so it depends only on the inputs.
pub fn adaptive<T: QuadScalar>(f: &(impl Fn(f64) -> T + ?Sized), breaks: &[f64], n: usize, tol: Tolerance) -> Adaptive<T> {
    let fine = GaussRule::cached(n);
    let coarse = GaussRule::cached((n / 2).max(2));
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut panels: Vec<Panel<T>> = pts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| panel(f, fine, coarse, w[0], w[1]))
        .collect();
    let mut heap: BinaryHeap<ByError> = panels.iter().enumerate().map(|(i, p)| ByError(p.err, i)).collect();
    let mut converged = true;
    loop {
        let (value, abs, err) = totals(&panels);
        let target = tol.abs.max(tol.rel * value.magnitude()).max(1e-14 * abs);
        if err <= target {
            break;
        }
        if panels.len() >= tol.max_panels {
            converged = false;
            break;
        }
        let Some(ByError(_, i)) = heap.pop() else { break };
        let (a, b) = (panels[i].a, panels[i].b);
        let m = 0.5 * (a + b);
        if !(m > a && m < b) || (b - a) <= 1e-15 * m.abs().max(1e-300) {
            // cannot split further; freeze this panel
            converged = false;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        panels[i] = panel(f, fine, coarse, a, m);
        heap.push(ByError(panels[i].err, i));
        panels.push(panel(f, fine, coarse, m, b));
        heap.push(ByError(panels[panels.len() - 1].err, panels.len() - 1));
    }
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, abs_integral, error) = totals(&panels);
    Adaptive {
        value,
        abs_integral,
        error,
        converged,
        panels: panels.len(),
    }
}

fn totals<T: QuadScalar>(panels: &[Panel<T>]) -> (T, f64, f64) {
    let mut v = T::zero();
    let mut abs = 0.0;
    let mut err = 0.0;
    for p in panels {
        v += p.value;
        abs += p.abs;
        err += p.err;
    }
    (v, abs, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [2, 7, 12, 24, 48] {
            let r = GaussRule::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussRule::new(6);
        for d in 0..12 {
            let (v, _) = r.integrate(&|x: f64| x.powi(d), 0.0, 1.0);
            assert!((v - 1.0 / (d as f64 + 1.0)).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn adaptive_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = adaptive(&|x: f64| x.powf(-0.5), &[0.0, 1.0], 24, Tolerance::default());
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn adaptive_is_deterministic_and_complex() {
        let f = |x: f64| Complex64::from_polar(1.0, 3.0 * x);
        let a = adaptive(&f, &[0.0, 2.0], 24, Tolerance::default());
        let b = adaptive(&f, &[0.0, 2.0], 24, Tolerance::default());
        assert_eq!(a.value, b.value);
        let want = (Complex64::from_polar(1.0, 6.0) - 1.0) / Complex64::new(0.0, 3.0);
        assert!((a.value - want).norm() < 1e-13);
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let r = adaptive(&|_x: f64| 0.0, &[0.0, 1.0, 5.0], 24, Tolerance::default());
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
        assert_eq!(r.panels, 2);
    }
}
