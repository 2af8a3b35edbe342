use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::circle::{check_gamma, Periodic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    GridEstimated { points: usize },
}

/// A value for the `Λ_γ` seminorm `sup |φ(s) - φ(t)| / d(s, t)^γ`, with `d`
/// the periodic distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderWitness {
    pub gamma: f64,
    pub seminorm: f64,
    pub provenance: Provenance,
}

impl HolderWitness {
    pub fn analytic(gamma: f64, seminorm: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(seminorm >= 0.0 && seminorm.is_finite()) {
            return Err(Error::param("seminorm", format!("must be finite and >= 0, got {seminorm}")));
        }
        Ok(HolderWitness {
            gamma,
            seminorm,
            provenance: Provenance::Analytic,
        })
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.provenance, Provenance::Analytic)
    }
}

/// Lower bound for the `Λ_γ` seminorm from all pairs of the uniform grid
/// `t_j = -π + 2πj/n`, `j = 0..n`.
///
/// Grids with `n | n'` are nested, so the estimate never decreases when `n`
/// is multiplied by an integer.
pub fn holder_seminorm_estimate(phi: &(impl Periodic + ?Sized), gamma: f64, n: usize) -> Result<HolderWitness> {
    check_gamma(gamma)?;
    if n < 2 {
        return Err(Error::param("n", format!("need at least 2 grid points, got {n}")));
    }
    let h = 2.0 * PI / n as f64;
    let values: Vec<_> = (0..n).map(|j| phi.eval(-PI + j as f64 * h)).collect();
    // d(s,t)^γ depends only on the index offset
    let inv_dpow: Vec<f64> = (0..n)
        .map(|m| {
            let d = m.min(n - m) as f64 * h;
            if m == 0 {
                0.0
            } else {
                d.powf(-gamma)
            }
        })
        .collect();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (values[i] - values[j]).norm() * inv_dpow[j - i];
            if r > best {
                best = r;
            }
        }
    }
    Ok(HolderWitness {
        gamma,
        seminorm: best,
        provenance: Provenance::GridEstimated { points: n },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::PeriodicFn;
    use num_complex::Complex64;

    #[test]
    fn constant_has_zero_seminorm() {
        let w = holder_seminorm_estimate(&PeriodicFn::constant(2.5), 0.5, 256).unwrap();
        assert_eq!(w.seminorm, 0.0);
    }

    #[test]
    fn gamma_out_of_range() {
        let phi = PeriodicFn::constant(1.0);
        for g in [0.0, 1.0, -0.5, 2.0] {
            assert!(holder_seminorm_estimate(&phi, g, 64).is_err());
        }
        assert!(holder_seminorm_estimate(&phi, 0.5, 1).is_err());
    }

    /// Dense oracle for cos: |cos s - cos t| <= 2 sin(d/2), so the seminorm is
    /// at most max_d 2 sin(d/2)/d^γ, and pairs near t = -π/2 nearly attain it.
    #[test]
    fn cosine_estimate_near_lipschitz() {
        let cos = |t: f64| Complex64::new(t.cos(), 0.0);
        let w = holder_seminorm_estimate(&cos, 0.99, 2048).unwrap();
        assert!(w.seminorm >= 0.9, "{}", w.seminorm);
        let upper = (1..=100_000)
            .map(|i| {
                let d = PI * i as f64 / 100_000.0;
                2.0 * (d / 2.0).sin() / d.powf(0.99)
            })
            .fold(0.0, f64::max);
        assert!(w.seminorm >= 0.99 * upper, "{} vs {upper}", w.seminorm);
        assert!(w.seminorm <= upper + 1e-12);
    }

    #[test]
    fn cusp_estimate_converges_from_below() {
        for gamma in [0.25, 0.5, 0.75] {
            let phi = PeriodicFn::holder_cusp(gamma, 0.0).unwrap();
            let exact = phi.analytic_holder_seminorm(gamma).unwrap();
            let mut prev = 0.0;
            for n in [64, 128, 256, 512, 1024] {
                let w = holder_seminorm_estimate(&phi, gamma, n).unwrap();
                assert!(w.seminorm <= exact, "n = {n}: {} > {exact}", w.seminorm);
                assert!(w.seminorm >= prev);
                prev = w.seminorm;
            }
            assert!(exact - prev < 1e-4 * exact, "gamma = {gamma}: {prev} vs {exact}");
        }
    }
}
