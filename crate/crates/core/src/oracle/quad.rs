//! Adaptive quadrature for the normalization integral, with a second
//! independent route used as a cross-check oracle.

use crate::analytic::AnsatzSolution;
use crate::error::{CoreError, Result};
use crate::oracle::grid::{integration_window, WINDOW_LOG_DROP};

/// Gauss-Legendre panel rule of a fixed order on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights from Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 2, "panel rule needs at least two nodes");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Chebyshev-based initial guess for the i-th root
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Self {
            order,
            nodes,
            weights,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Integral of f over [a, b] by a single panel.
    pub fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integral value with an accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Adaptive bisection with a fixed-order rule per panel. A panel is accepted
/// when splitting it changes the estimate by less than its share of the
/// absolute budget `abs_tol`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rule: &GaussLegendre,
) -> Result<QuadResult> {
    assert!(b > a && abs_tol > 0.0);
    let full = b - a;
    let min_width = full * 2f64.powi(-52);
    let mut stack = vec![(a, b, rule.panel(f, a, b))];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut panels = 0usize;

    while let Some((lo, hi, whole)) = stack.pop() {
        if !whole.is_finite() {
            return Err(CoreError::NonIntegrable(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let left = rule.panel(f, lo, mid);
        let right = rule.panel(f, mid, hi);
        let split = left + right;
        let discrepancy = (split - whole).abs();
        if discrepancy <= abs_tol * (hi - lo) / full || (hi - lo) < min_width {
            if (hi - lo) < min_width && discrepancy > abs_tol {
                return Err(CoreError::NonIntegrable(format!(
                    "panel [{lo}, {hi}] failed to converge (discrepancy {discrepancy:.3e})"
                )));
            }
            value += split;
            error += discrepancy;
            panels += 1;
        } else {
            stack.push((lo, mid, left));
            stack.push((mid, hi, right));
        }
    }
    Ok(QuadResult {
        value,
        error_estimate: error,
        panels,
    })
}

/// Independent second route: a fixed-order composite rule with panel-count
/// doubling until two successive estimates agree to `rel_tol`.
pub fn doubling_integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    rule: &GaussLegendre,
) -> Result<QuadResult> {
    assert!(b > a && rel_tol > 0.0);
    let mut panels = 8usize;
    let mut prev = composite(f, a, b, panels, rule);
    for _ in 0..24 {
        panels *= 2;
        let next = composite(f, a, b, panels, rule);
        if !next.is_finite() {
            return Err(CoreError::NonIntegrable(
                "non-finite integrand in composite pass".into(),
            ));
        }
        let delta = (next - prev).abs();
        if delta <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(QuadResult {
                value: next,
                error_estimate: delta,
                panels,
            });
        }
        prev = next;
    }
    Err(CoreError::NonIntegrable(
        "composite doubling did not stabilize".into(),
    ))
}

fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, rule: &GaussLegendre) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        sum += rule.panel(f, lo, lo + h);
    }
    sum
}

/// Orders of the primary rule and of the independent cross-check rule.
pub const PRIMARY_RULE_ORDER: usize = 7;
pub const CROSS_CHECK_RULE_ORDER: usize = 15;

/// Normalization integral I = integral of R_unnormalized^2 dr over the
/// window where the integrand has dropped 40 natural-log units below its
/// peak (the `norm` field of `sol` is ignored).
pub fn norm_integral(sol: &AnsatzSolution, tol: f64) -> Result<QuadResult> {
    norm_integral_with(sol, tol, &GaussLegendre::new(PRIMARY_RULE_ORDER))
}

/// Same integral through an arbitrary panel rule; the cross-check oracle
/// calls this with a different order.
pub fn norm_integral_with(
    sol: &AnsatzSolution,
    tol: f64,
    rule: &GaussLegendre,
) -> Result<QuadResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CoreError::InvalidInput(format!(
            "require tol > 0, got {tol}"
        )));
    }
    let unnorm = AnsatzSolution {
        norm: None,
        ..sol.clone()
    };
    let (lo, hi) = integration_window(&unnorm, WINDOW_LOG_DROP);
    let f = |r: f64| {
        let v = unnorm.eval_unchecked(r);
        v * v
    };
    // coarse pass fixes the absolute budget for the adaptive pass
    let rough = composite(&f, lo, hi, 64, rule);
    if !rough.is_finite() || rough <= 0.0 {
        return Err(CoreError::NonIntegrable(format!(
            "normalization integrand did not produce a positive finite integral (rough = {rough})"
        )));
    }
    let result = adaptive_integrate(&f, lo, hi, tol * rough, rule)?;
    if result.error_estimate > tol * result.value.max(f64::MIN_POSITIVE) * 4.0 {
        return Err(CoreError::NonIntegrable(format!(
            "error estimate {:.3e} exceeds budget for I = {:.6e}",
            result.error_estimate, result.value
        )));
    }
    Ok(result)
}

/// Normalization factor N = 1 / sqrt(I) per the normalization condition,
/// with absolute error estimate below tol * I.
pub fn normalize(sol: &AnsatzSolution, tol: f64) -> Result<f64> {
    let integral = norm_integral(sol, tol)?;
    Ok(1.0 / integral.value.sqrt())
}
