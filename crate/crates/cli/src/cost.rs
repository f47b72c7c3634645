//! Growth model for unique-class counts.
//!
//! Class counts grow like `sqrt(D) * gamma^D` with
//! `gamma = 2^(3/4 * H(1/3)) ~ 1.61185`, far below the `3^D` path count. The
//! model fits the single constant in front by taking the worst observed ratio,
//! so the fitted bound dominates every sample by construction and extrapolates
//! to held-out depths.

use serde::Serialize;

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    debug_assert!(0.0 < x && x < 1.0);
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Base of the class-count growth curve.
pub fn gamma() -> f64 {
    2f64.powf(0.75 * binary_entropy(1.0 / 3.0))
}

/// Per-shift decay factor `1 / gamma`.
pub fn rho() -> f64 {
    1.0 / gamma()
}

#[derive(Debug, Clone, Serialize)]
pub struct CostModel {
    pub gamma: f64,
    pub rho: f64,
    pub fitted_c: f64,
    /// `(depth, measured item count)` pairs used for the fit.
    pub samples: Vec<(usize, f64)>,
}

impl CostModel {
    /// `fitted_c = max over samples of measured / (sqrt(D) * gamma^D)`.
    pub fn fit(samples: Vec<(usize, f64)>) -> Self {
        let g = gamma();
        let fitted_c = samples
            .iter()
            .filter(|(d, _)| *d > 0)
            .map(|&(d, ops)| ops / ((d as f64).sqrt() * g.powi(d as i32)))
            .fold(0.0f64, f64::max);
        CostModel {
            gamma: g,
            rho: rho(),
            fitted_c,
            samples,
        }
    }

    pub fn bound(&self, depth: usize) -> f64 {
        self.fitted_c * (depth as f64).sqrt() * self.gamma.powi(depth as i32)
    }

    pub fn within_bound(&self, depth: usize, measured: f64) -> bool {
        measured <= self.bound(depth)
    }
}
