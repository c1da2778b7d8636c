//! The closed-form ansatz R(r) = N r^kappa (alpha + beta r^2 + gamma r^-2)
//! exp[-(sqrt(a) r^2 + sqrt(c) r^-2)/2] and everything derived from it.

use crate::analytic::constraints::{
    cross_denominators, cross_constraint_residual, excited_constraint_residual_same,
    ground_constraint_residual,
};
use crate::error::{CoreError, Result};
use crate::potential::{PotentialParams, ProblemSpec, QnRole, StateLabel};

/// Exponent underflow gate: below this log-magnitude the radial value is
/// flushed to exactly zero instead of risking 0 * inf forms.
const LOG_UNDERFLOW: f64 = -740.0;

/// Exponent and energy of the given state, from the closed forms
///
///   kappa0 = (b + 3 sqrt(c)) / (2 sqrt(c)),  E0 = sqrt(a/c) (b + 4 sqrt(c)),
///   kappa1 = (b + 7 sqrt(c)) / (2 sqrt(c)),  E1 = sqrt(a/c) (b + 12 sqrt(c)).
///
/// The formulas are identical in two and three dimensions.
pub fn kappa_and_energy(params: &PotentialParams, state: StateLabel) -> (f64, f64) {
    let s = params.sqrt_c();
    let sqrt_a = params.sqrt_a();
    match state {
        StateLabel::Ground => {
            let kappa = (params.b() + 3.0 * s) / (2.0 * s);
            let energy = sqrt_a * (params.b() + 4.0 * s) / s;
            (kappa, energy)
        }
        StateLabel::FirstExcited => {
            let kappa = (params.b() + 7.0 * s) / (2.0 * s);
            let energy = sqrt_a * (params.b() + 12.0 * s) / s;
            (kappa, energy)
        }
    }
}

/// First-excited polynomial coefficients (alpha, beta, gamma).
///
/// Same quantum number: (0, 1, -sqrt(c/a)), normalized to beta = 1.
/// Cross quantum numbers: alpha = 1,
///   beta  = 4 sqrt(a) / [D - 4 (b + 6 sqrt(c))/sqrt(c)],
///   gamma = 4 sqrt(c) / D,  with D = ell'(ell'+1) - ell(ell+1).
///
/// Refuses parameter sets whose applicable constraint residuals exceed
/// `tol`, since coefficients computed off the constraint manifold do not
/// solve the radial equation.
pub fn excited_coefficients(
    params: &PotentialParams,
    spec: &ProblemSpec,
    tol: f64,
) -> Result<(f64, f64, f64)> {
    let ground = ground_constraint_residual(params, spec);
    if ground.abs() > tol {
        return Err(CoreError::ConstraintViolated(format!(
            "ground-state constraint residual {ground:.3e} exceeds tolerance {tol:.1e}"
        )));
    }
    match spec.ell_prime() {
        None => {
            let same = excited_constraint_residual_same(params);
            if same.abs() > tol {
                return Err(CoreError::ConstraintViolated(format!(
                    "excited-state constraint residual b + 6 sqrt(c) = {same:.6} exceeds tolerance {tol:.1e}"
                )));
            }
            Ok((0.0, 1.0, -params.sqrt_c() / params.sqrt_a()))
        }
        Some(lp) => {
            let cross = cross_constraint_residual(params, spec.ell(), lp)?;
            if cross.abs() > tol {
                return Err(CoreError::ConstraintViolated(format!(
                    "cross-qn constraint residual {cross:.3e} exceeds tolerance {tol:.1e}"
                )));
            }
            let (delta, beta_denom) = cross_denominators(params, spec.ell(), lp)?;
            let beta = 4.0 * params.sqrt_a() / beta_denom;
            let gamma = 4.0 * params.sqrt_c() / delta;
            Ok((1.0, beta, gamma))
        }
    }
}

/// The coefficient formulas without the constraint validation, for building
/// candidates off the manifold (they will fail verification, which is the
/// point). Errors only on degenerate denominators.
pub fn excited_coefficients_unchecked(
    params: &PotentialParams,
    spec: &ProblemSpec,
) -> Result<(f64, f64, f64)> {
    match spec.ell_prime() {
        None => Ok((0.0, 1.0, -params.sqrt_c() / params.sqrt_a())),
        Some(lp) => {
            let (delta, beta_denom) = cross_denominators(params, spec.ell(), lp)?;
            Ok((1.0, 4.0 * params.sqrt_a() / beta_denom, 4.0 * params.sqrt_c() / delta))
        }
    }
}

/// A closed-form candidate solution of the radial equation.
#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub state: StateLabel,
    pub kappa: f64,
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Normalization factor; `None` means unnormalized (N = 1).
    pub norm: Option<f64>,
    pub params: PotentialParams,
    pub spec: ProblemSpec,
}

impl AnsatzSolution {
    /// Ground-state solution, alpha normalized to 1. Requires the
    /// ground-state constraint to hold within `tol`.
    pub fn ground(params: PotentialParams, spec: ProblemSpec, tol: f64) -> Result<Self> {
        let residual = ground_constraint_residual(&params, &spec);
        if residual.abs() > tol {
            return Err(CoreError::ConstraintViolated(format!(
                "ground-state constraint residual {residual:.3e} exceeds tolerance {tol:.1e}"
            )));
        }
        let (kappa, energy) = kappa_and_energy(&params, StateLabel::Ground);
        Ok(Self {
            state: StateLabel::Ground,
            kappa,
            energy,
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.0,
            norm: None,
            params,
            spec,
        })
    }

    /// First-excited solution. Requires every applicable constraint to hold
    /// within `tol`.
    pub fn first_excited(params: PotentialParams, spec: ProblemSpec, tol: f64) -> Result<Self> {
        let (alpha, beta, gamma) = excited_coefficients(&params, &spec, tol)?;
        let (kappa, energy) = kappa_and_energy(&params, StateLabel::FirstExcited);
        Ok(Self {
            state: StateLabel::FirstExcited,
            kappa,
            energy,
            alpha,
            beta,
            gamma,
            norm: None,
            params,
            spec,
        })
    }

    /// Unvalidated candidate, for probing published coefficient sets that may
    /// not actually solve the equation.
    #[allow(clippy::too_many_arguments)]
    pub fn candidate(
        state: StateLabel,
        kappa: f64,
        energy: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        params: PotentialParams,
        spec: ProblemSpec,
    ) -> Self {
        Self {
            state,
            kappa,
            energy,
            alpha,
            beta,
            gamma,
            norm: None,
            params,
            spec,
        }
    }

    pub fn with_norm(mut self, norm: f64) -> Self {
        self.norm = Some(norm);
        self
    }

    /// The quantum-number role this state reads from the spec.
    pub fn qn_role(&self) -> QnRole {
        match self.state {
            StateLabel::Ground => QnRole::GroundQn,
            StateLabel::FirstExcited => QnRole::ExcitedQn,
        }
    }

    /// Centrifugal coefficient of this state's own sector.
    pub fn own_centrifugal(&self) -> f64 {
        self.spec.centrifugal_coefficient(self.qn_role())
    }

    /// Spec restricted to this state's own sector.
    pub fn own_sector(&self) -> ProblemSpec {
        self.spec.resolved_for(self.qn_role())
    }

    fn norm_factor(&self) -> f64 {
        self.norm.unwrap_or(1.0)
    }

    /// Polynomial part alpha + beta r^2 + gamma r^-2.
    fn poly(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.alpha + self.beta * r2 + self.gamma / r2
    }

    /// Log of the envelope factor r^kappa exp[-(sqrt(a) r^2 + sqrt(c) r^-2)/2].
    fn log_envelope(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.kappa * r.ln() - 0.5 * (self.params.sqrt_a() * r2 + self.params.sqrt_c() / r2)
    }

    /// R(r). Underflow of the exponential evaluates to exactly 0.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(CoreError::DomainError(format!(
                "radial evaluation requires r > 0, got {r}"
            )));
        }
        Ok(self.eval_unchecked(r))
    }

    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        let p = self.poly(r);
        if p == 0.0 {
            return 0.0;
        }
        let log_env = self.log_envelope(r);
        if log_env + p.abs().ln() < LOG_UNDERFLOW {
            return 0.0;
        }
        self.norm_factor() * p * log_env.exp()
    }

    /// Closed-form d^2 R / dr^2, evaluated as the power-series bracket in r
    /// times the shared envelope. Underflow evaluates to exactly 0.
    pub fn second_derivative(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(CoreError::DomainError(format!(
                "radial evaluation requires r > 0, got {r}"
            )));
        }
        Ok(self.second_derivative_unchecked(r))
    }

    pub(crate) fn second_derivative_unchecked(&self, r: f64) -> f64 {
        let bracket = second_derivative_bracket(
            self.params.a(),
            self.params.sqrt_a(),
            self.params.c(),
            self.params.sqrt_c(),
            self.kappa,
            self.alpha,
            self.beta,
            self.gamma,
            r,
        );
        if bracket == 0.0 {
            return 0.0;
        }
        let log_env = self.log_envelope(r);
        if log_env + bracket.abs().ln() < LOG_UNDERFLOW {
            return 0.0;
        }
        self.norm_factor() * bracket * log_env.exp()
    }

    /// Positive radii where the polynomial part vanishes, ascending. The
    /// quadratic beta x^2 + alpha x + gamma = 0 in x = r^2 supplies them.
    pub fn node_positions(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = Vec::new();
        if self.beta != 0.0 {
            let disc = self.alpha * self.alpha - 4.0 * self.beta * self.gamma;
            if disc == 0.0 {
                xs.push(-self.alpha / (2.0 * self.beta));
            } else if disc > 0.0 {
                let sq = disc.sqrt();
                if self.alpha == 0.0 {
                    let x = (-self.gamma / self.beta).abs().sqrt();
                    // roots +/- x; only the positive one is geometric
                    if -self.gamma / self.beta > 0.0 {
                        xs.push(x);
                    }
                } else {
                    // stable quadratic: avoid cancellation in the small root
                    let q = -0.5 * (self.alpha + self.alpha.signum() * sq);
                    xs.push(q / self.beta);
                    xs.push(self.gamma / q);
                }
            }
        } else if self.alpha != 0.0 && self.gamma != 0.0 {
            xs.push(-self.gamma / self.alpha);
        }
        let mut roots: Vec<f64> = xs
            .into_iter()
            .filter(|x| x.is_finite() && *x > 0.0)
            .map(|x| x.sqrt())
            .collect();
        roots.sort_by(|u, v| u.partial_cmp(v).unwrap());
        roots.dedup_by(|u, v| (*u - *v).abs() <= 1e-14 * v.abs());
        roots
    }

    /// Left-minus-right residuals of the five coefficient-matching equations
    /// (powers r^2, r^0, r^-2, r^-4, r^-6 of the substituted ansatz), using
    /// this state's own centrifugal coefficient. All five vanish exactly when
    /// the ansatz solves the radial equation.
    pub fn coefficient_match_residuals(&self) -> [f64; 5] {
        let l = self.own_centrifugal();
        let sqrt_a = self.params.sqrt_a();
        let sqrt_c = self.params.sqrt_c();
        let sqrt_ac = self.params.sqrt_ac();
        let b = self.params.b();
        let (k, e) = (self.kappa, self.energy);
        let (alpha, beta, gamma) = (self.alpha, self.beta, self.gamma);

        let res_a = beta * (e - sqrt_a * (2.0 * k + 5.0));
        let res_b = alpha * (e - sqrt_a * (2.0 * k + 1.0))
            - beta * (l + 2.0 * sqrt_ac - k * k - 3.0 * k - 2.0);
        let res_c = alpha * (l + 2.0 * sqrt_ac - k * k + k)
            - beta * (-b + sqrt_c * (2.0 * k + 1.0))
            - gamma * (e - sqrt_a * (2.0 * k - 3.0));
        let res_d = alpha * (b - sqrt_c * (2.0 * k - 3.0))
            + gamma * (l + 2.0 * sqrt_ac - k * k + 5.0 * k - 6.0);
        let res_e = gamma * (b - sqrt_c * (2.0 * k - 7.0));
        [res_a, res_b, res_c, res_d, res_e]
    }
}

/// The bracket of the closed-form second derivative: coefficients of
/// r^4, r^2, ..., r^-8 multiplying r^kappa exp[-(sqrt(a) r^2 + sqrt(c) r^-2)/2].
#[allow(clippy::too_many_arguments)]
pub(crate) fn second_derivative_bracket(
    a: f64,
    sqrt_a: f64,
    c: f64,
    sqrt_c: f64,
    kappa: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    r: f64,
) -> f64 {
    let sqrt_ac = sqrt_a * sqrt_c;
    let k = kappa;
    let c4 = a * beta;
    let c2 = a * alpha - beta * sqrt_a * (2.0 * k + 5.0);
    let c0 = -alpha * sqrt_a * (2.0 * k + 1.0) + beta * (2.0 + 3.0 * k + k * k - 2.0 * sqrt_ac)
        + gamma * a;
    let cm2 = alpha * (k * k - k - 2.0 * sqrt_ac) + beta * sqrt_c * (2.0 * k + 1.0)
        - gamma * sqrt_a * (2.0 * k - 3.0);
    let cm4 =
        alpha * sqrt_c * (2.0 * k - 3.0) + beta * c + gamma * (6.0 - 5.0 * k - 2.0 * sqrt_ac + k * k);
    let cm6 = alpha * c + gamma * sqrt_c * (2.0 * k - 7.0);
    let cm8 = gamma * c;

    // Horner in r^2 over r^-8 (c4 r^12 + ... + cm8) / r^8
    let x = r * r;
    let poly = (((((c4 * x + c2) * x + c0) * x + cm2) * x + cm4) * x + cm6) * x + cm8;
    poly / (x * x * x * x)
}
