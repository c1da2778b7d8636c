//! Couplings and quantum-number bookkeeping for the potential
//! V(r) = a r^2 + b r^-4 + c r^-6 (units with hbar = 2m = 1).

use crate::error::{CoreError, Result};

/// Couplings (a, b, c). Requires a > 0 and c > 0; b may have either sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    a: f64,
    b: f64,
    c: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(CoreError::InvalidInput(format!(
                "couplings must be finite, got a={a}, b={b}, c={c}"
            )));
        }
        if a <= 0.0 || c <= 0.0 {
            return Err(CoreError::InvalidInput(format!(
                "require a > 0 and c > 0, got a={a}, c={c}"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Positive root of a.
    pub fn sqrt_a(&self) -> f64 {
        self.a.sqrt()
    }

    /// Positive root of c.
    pub fn sqrt_c(&self) -> f64 {
        self.c.sqrt()
    }

    /// Positive root of the product a*c.
    pub fn sqrt_ac(&self) -> f64 {
        (self.a * self.c).sqrt()
    }

    /// V(r) = a r^2 + b r^-4 + c r^-6.
    pub fn potential(&self, r: f64) -> f64 {
        let r2 = r * r;
        let inv_r2 = 1.0 / r2;
        let inv_r4 = inv_r2 * inv_r2;
        self.a * r2 + self.b * inv_r4 + self.c * inv_r4 * inv_r2
    }
}

/// Spatial dimension of the problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    TwoD,
    ThreeD,
}

impl Dimension {
    pub fn as_u32(&self) -> u32 {
        match self {
            Dimension::TwoD => 2,
            Dimension::ThreeD => 3,
        }
    }
}

/// Which state's angular quantum number to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnRole {
    GroundQn,
    ExcitedQn,
}

/// Bound state label; the ansatz covers only these two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    Ground,
    FirstExcited,
}

impl StateLabel {
    pub fn name(&self) -> &'static str {
        match self {
            StateLabel::Ground => "ground",
            StateLabel::FirstExcited => "excited",
        }
    }
}

/// Dimension plus angular quantum numbers. In 3-D `ell` is the ground-state
/// angular momentum and `ell_prime`, when present, the excited-state one.
/// In 2-D `ell` holds the magnetic quantum number m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    dimension: Dimension,
    ell: u32,
    ell_prime: Option<u32>,
}

impl ProblemSpec {
    pub fn new(dimension: Dimension, ell: u32, ell_prime: Option<u32>) -> Result<Self> {
        if let Some(lp) = ell_prime {
            if dimension != Dimension::ThreeD {
                return Err(CoreError::InvalidInput(
                    "a distinct excited-state quantum number is only defined in 3-D".into(),
                ));
            }
            if lp == ell {
                return Err(CoreError::InvalidInput(
                    "ell_prime must differ from ell; omit it for the same-ell case".into(),
                ));
            }
        }
        Ok(Self {
            dimension,
            ell,
            ell_prime,
        })
    }

    pub fn three_d(ell: u32) -> Self {
        Self {
            dimension: Dimension::ThreeD,
            ell,
            ell_prime: None,
        }
    }

    pub fn three_d_cross(ell: u32, ell_prime: u32) -> Result<Self> {
        Self::new(Dimension::ThreeD, ell, Some(ell_prime))
    }

    pub fn two_d(m: u32) -> Self {
        Self {
            dimension: Dimension::TwoD,
            ell: m,
            ell_prime: None,
        }
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Ground-state angular quantum number (ell in 3-D, m in 2-D).
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn ell_prime(&self) -> Option<u32> {
        self.ell_prime
    }

    /// True when ground and excited states share the quantum number.
    pub fn is_same_qn(&self) -> bool {
        self.ell_prime.is_none()
    }

    /// The state's own quantum number; the excited role falls back to `ell`
    /// when no distinct `ell_prime` is set.
    pub fn quantum_number(&self, role: QnRole) -> u32 {
        match role {
            QnRole::GroundQn => self.ell,
            QnRole::ExcitedQn => self.ell_prime.unwrap_or(self.ell),
        }
    }

    /// Coefficient of the r^-2 effective-potential term:
    /// ell(ell+1) in 3-D, m^2 - 1/4 in 2-D.
    pub fn centrifugal_coefficient(&self, role: QnRole) -> f64 {
        let q = self.quantum_number(role) as f64;
        match self.dimension {
            Dimension::ThreeD => q * (q + 1.0),
            Dimension::TwoD => q * q - 0.25,
        }
    }

    /// Spec carrying only the given state's quantum number, e.g. for picking
    /// the eigensolver sector of that state.
    pub fn resolved_for(&self, role: QnRole) -> ProblemSpec {
        ProblemSpec {
            dimension: self.dimension,
            ell: self.quantum_number(role),
            ell_prime: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_nonpositive_a_or_c() {
        assert!(PotentialParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PotentialParams::new(1.0, 1.0, -2.0).is_err());
        assert!(PotentialParams::new(1.0, f64::NAN, 1.0).is_err());
        // b of either sign is fine
        assert!(PotentialParams::new(1.0, -11.25, 3.515625).is_ok());
        assert!(PotentialParams::new(1.0, 0.04082, 0.18).is_ok());
    }

    #[test]
    fn centrifugal_matches_both_dimensions() {
        let s0 = ProblemSpec::three_d(0);
        let s1 = ProblemSpec::three_d(1);
        let m0 = ProblemSpec::two_d(0);
        assert_eq!(s0.centrifugal_coefficient(QnRole::GroundQn), 0.0);
        assert_eq!(s1.centrifugal_coefficient(QnRole::GroundQn), 2.0);
        assert_eq!(m0.centrifugal_coefficient(QnRole::GroundQn), -0.25);
    }

    #[test]
    fn excited_role_falls_back_to_ell_without_ell_prime() {
        let s = ProblemSpec::three_d(1);
        assert_eq!(s.centrifugal_coefficient(QnRole::ExcitedQn), 2.0);
        let cross = ProblemSpec::three_d_cross(0, 1).unwrap();
        assert_eq!(cross.centrifugal_coefficient(QnRole::ExcitedQn), 2.0);
        assert_eq!(cross.centrifugal_coefficient(QnRole::GroundQn), 0.0);
    }

    #[test]
    fn spec_rejects_cross_qn_outside_three_d() {
        assert!(ProblemSpec::new(Dimension::TwoD, 0, Some(1)).is_err());
        assert!(ProblemSpec::new(Dimension::ThreeD, 1, Some(1)).is_err());
        assert!(ProblemSpec::new(Dimension::ThreeD, 0, Some(1)).is_ok());
    }

    #[test]
    fn potential_evaluates_all_three_terms() {
        let p = PotentialParams::new(1.0, 0.04082, 0.18).unwrap();
        let v = p.potential(1.0);
        assert!((v - (1.0 + 0.04082 + 0.18)).abs() < 1e-15);
    }
}
