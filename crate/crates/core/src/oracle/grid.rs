//! Uniform radial grids and the log-magnitude window rule that places them.

use crate::analytic::AnsatzSolution;
use crate::error::{CoreError, Result};
use crate::potential::PotentialParams;

/// Default drop of the envelope at the window edges, in natural-log units.
/// exp(-40) ~ 4e-18 leaves tail contributions far below every tolerance
/// used here.
pub const WINDOW_LOG_DROP: f64 = 40.0;

/// Default interior point count of the eigensolver grid.
pub const DEFAULT_GRID_N: usize = 4000;

/// Uniform grid on [r_min, r_max] with `n` interior points and Dirichlet ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "require 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 16 {
            return Err(CoreError::InvalidInput(format!(
                "require at least 16 interior points, got {n}"
            )));
        }
        Ok(Self { r_min, r_max, n })
    }

    /// Window from the hard-wall rule: sqrt(c) r_min^-2 / 2 >= 46 and
    /// sqrt(a) r_max^2 / 2 >= 46, so the eigenfunction is below ~1e-20 at
    /// both walls.
    pub fn for_params(params: &PotentialParams, n: usize) -> Result<Self> {
        let r_min = (params.sqrt_c() / 92.0).sqrt();
        let r_max = (92.0 / params.sqrt_a()).sqrt();
        Self::new(r_min, r_max, n)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n as f64 + 1.0)
    }

    /// i-th interior point, i in 0..n.
    pub fn point(&self, i: usize) -> f64 {
        self.r_min + (i as f64 + 1.0) * self.spacing()
    }

    /// Grid with halved spacing on the same window (n -> 2n + 1).
    pub fn refined(&self) -> Self {
        Self {
            r_min: self.r_min,
            r_max: self.r_max,
            n: 2 * self.n + 1,
        }
    }
}

/// Natural log of the envelope of R^2: the polynomial part is replaced by
/// |alpha| + |beta| r^2 + |gamma| r^-2 so interior nodes do not dent it.
fn log_sq_envelope(sol: &AnsatzSolution, r: f64) -> f64 {
    let r2 = r * r;
    let p = sol.alpha.abs() + sol.beta.abs() * r2 + sol.gamma.abs() / r2;
    2.0 * sol.kappa * r.ln() - (sol.params.sqrt_a() * r2 + sol.params.sqrt_c() / r2)
        + 2.0 * p.ln()
}

/// Radius where the exponential factor of R^2 peaks:
/// sqrt(a) r^4 - kappa r^2 - sqrt(c) = 0.
pub(crate) fn envelope_peak(sol: &AnsatzSolution) -> f64 {
    let sqrt_a = sol.params.sqrt_a();
    let k = sol.kappa;
    let r2 = (k + (k * k + 4.0 * sol.params.sqrt_ac()).sqrt()) / (2.0 * sqrt_a);
    r2.max(f64::MIN_POSITIVE).sqrt()
}

/// Window [r_lo, r_hi] outside which the envelope of R^2 has dropped by at
/// least `log_drop` natural-log units below its peak.
pub fn integration_window(sol: &AnsatzSolution, log_drop: f64) -> (f64, f64) {
    let peak = envelope_peak(sol);
    let target = log_sq_envelope(sol, peak) - log_drop;

    let mut lo = peak;
    while log_sq_envelope(sol, lo) > target {
        lo *= 0.8;
    }
    let mut hi = peak;
    while log_sq_envelope(sol, hi) > target {
        hi *= 1.25;
    }
    (lo, hi)
}

/// `count` log-spaced samples on [lo, hi], strictly increasing.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            let t = i as f64 / (count as f64 - 1.0);
            (ln_lo + t * (ln_hi - ln_lo)).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{solve_same_qn, AnsatzSolution};
    use crate::potential::ProblemSpec;

    fn eq18_ground() -> AnsatzSolution {
        let spec = ProblemSpec::three_d(0);
        let params = solve_same_qn(1.0, &spec).unwrap();
        AnsatzSolution::ground(params, spec, 1e-9).unwrap()
    }

    #[test]
    fn grid_validates_window_and_size() {
        assert!(RadialGrid::new(0.1, 5.0, 100).is_ok());
        assert!(RadialGrid::new(0.0, 5.0, 100).is_err());
        assert!(RadialGrid::new(5.0, 0.1, 100).is_err());
        assert!(RadialGrid::new(0.1, 5.0, 8).is_err());
    }

    #[test]
    fn refined_grid_halves_spacing_exactly() {
        let g = RadialGrid::new(0.15, 7.0, 4000).unwrap();
        let f = g.refined();
        assert_eq!(f.n(), 8001);
        assert!((f.spacing() - 0.5 * g.spacing()).abs() < 1e-18);
    }

    #[test]
    fn default_window_rule_matches_exponent_thresholds() {
        let params = solve_same_qn(1.0, &ProblemSpec::three_d(0)).unwrap();
        let g = RadialGrid::for_params(&params, 4000).unwrap();
        assert!((params.sqrt_c() / (g.r_min() * g.r_min()) / 2.0 - 46.0).abs() < 1e-9);
        assert!((params.sqrt_a() * g.r_max() * g.r_max() / 2.0 - 46.0).abs() < 1e-9);
    }

    #[test]
    fn window_edges_are_deeply_suppressed() {
        let sol = eq18_ground();
        let (lo, hi) = integration_window(&sol, WINDOW_LOG_DROP);
        let peak = envelope_peak(&sol);
        assert!(lo < peak && peak < hi);
        let v_lo = sol.eval(lo).unwrap().abs();
        let v_peak = sol.eval(peak).unwrap().abs();
        assert!(v_lo < v_peak * 1e-8);
    }

    #[test]
    fn log_spacing_is_strictly_increasing() {
        let xs = log_spaced(0.3, 4.0, 64);
        assert_eq!(xs.len(), 64);
        assert!((xs[0] - 0.3).abs() < 1e-12);
        assert!((xs[63] - 4.0).abs() < 1e-12);
        for w in xs.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
