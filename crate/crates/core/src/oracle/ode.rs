//! Residual of a candidate solution in the radial equation itself:
//! R'' + [E - V(r) - L/r^2] R, with R'' from the closed form.

use crate::analytic::AnsatzSolution;
use crate::error::{CoreError, Result};

/// Raw and scale-relative residual at one radius.
#[derive(Debug, Clone, Copy)]
pub struct OdeResidual {
    pub raw: f64,
    /// raw / max(|R''|, |E R|, tiny).
    pub relative: f64,
}

pub fn ode_residual(sol: &AnsatzSolution, r: f64) -> Result<OdeResidual> {
    if r.is_nan() || r <= 0.0 {
        return Err(CoreError::DomainError(format!(
            "ODE residual requires r > 0, got {r}"
        )));
    }
    let second = sol.second_derivative_unchecked(r);
    let value = sol.eval_unchecked(r);
    let centrifugal = sol.own_centrifugal();
    let raw = second + (sol.energy - sol.params.potential(r) - centrifugal / (r * r)) * value;
    let scale = second
        .abs()
        .max((sol.energy * value).abs())
        .max(1e-300);
    Ok(OdeResidual {
        raw,
        relative: raw / scale,
    })
}

/// Largest relative residual over the given radii.
pub fn max_relative_residual(sol: &AnsatzSolution, radii: &[f64]) -> Result<f64> {
    let mut max = 0.0f64;
    for &r in radii {
        max = max.max(ode_residual(sol, r)?.relative.abs());
    }
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{kappa_and_energy, solve_same_qn, AnsatzSolution};
    use crate::potential::{PotentialParams, ProblemSpec, StateLabel};

    #[test]
    fn exact_ground_state_residual_is_machine_level() {
        let spec = ProblemSpec::three_d(0);
        let params = solve_same_qn(1.0, &spec).unwrap();
        let sol = AnsatzSolution::ground(params, spec, 1e-9).unwrap();
        for &r in &[0.5, 1.0, 2.0, 3.0] {
            let res = ode_residual(&sol, r).unwrap();
            assert!(res.relative.abs() < 1e-12, "r = {r}: {}", res.relative);
        }
    }

    #[test]
    fn published_cross_qn_rounding_stays_below_1e3_relative() {
        let params = PotentialParams::new(1.0, -4.2011, 0.75878).unwrap();
        let spec = ProblemSpec::three_d_cross(0, 1).unwrap();
        let ground = AnsatzSolution::ground(params, spec, 1e-4).unwrap();
        let excited = AnsatzSolution::first_excited(params, spec, 1e-4).unwrap();
        for sol in [&ground, &excited] {
            for &r in &[0.5, 1.0, 2.0, 3.0] {
                let res = ode_residual(sol, r).unwrap();
                assert!(res.relative.abs() < 1e-3, "r = {r}: {}", res.relative);
            }
        }
    }

    #[test]
    fn historical_excited_candidate_fails_the_equation() {
        let params = PotentialParams::new(1.0, 0.04082, 0.18).unwrap();
        let spec = ProblemSpec::three_d(0);
        let (kappa1, _) = kappa_and_energy(&params, StateLabel::FirstExcited);
        let sol = AnsatzSolution::candidate(
            StateLabel::FirstExcited,
            kappa1,
            12.09621,
            1.0,
            -0.1787,
            0.8485,
            params,
            spec,
        );
        let res = ode_residual(&sol, 1.0).unwrap();
        assert!(res.relative.abs() > 1e-2, "relative {}", res.relative);
    }

    #[test]
    fn residual_rejects_nonpositive_radius() {
        let spec = ProblemSpec::three_d(0);
        let params = solve_same_qn(1.0, &spec).unwrap();
        let sol = AnsatzSolution::ground(params, spec, 1e-9).unwrap();
        assert!(ode_residual(&sol, 0.0).is_err());
        assert!(ode_residual(&sol, -2.0).is_err());
    }
}
