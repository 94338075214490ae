//! Complete elliptic integrals of the first and second kind.
//!
//! All functions take the *modulus* κ, not the parameter m = κ²:
//!
//! ```text
//! K(κ) = ∫₀¹ dx / √((1 − x²)(1 − κ²x²))
//! E(κ) = ∫₀¹ √((1 − κ²x²)/(1 − x²)) dx
//! ```
//!
//! Both are evaluated with the arithmetic–geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

/// A modulus κ ∈ [0, 1] of a complete elliptic integral.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(kappa: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&kappa) {
            Ok(Self(kappa))
        } else {
            Err(Error::Domain(format!("elliptic modulus {kappa} not in [0, 1]")))
        }
    }

    pub fn kappa(self) -> f64 {
        self.0
    }

    /// The complementary modulus κ' = √(1 − κ²).
    pub fn complement(self) -> Self {
        // (1 - κ)(1 + κ) keeps relative accuracy when κ is close to 1.
        Self(((1.0 - self.0) * (1.0 + self.0)).sqrt())
    }
}

fn agm_converged(a: f64, b: f64) -> bool {
    (a - b).abs() <= 4.0 * f64::EPSILON * a
}

/// Arithmetic–geometric mean of two positive numbers.
///
/// Iterates until `|aₙ − bₙ| ≤ 4 ulp(aₙ)`.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("agm needs positive finite inputs, got ({a}, {b})")));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..MAX_AGM_STEPS {
        if agm_converged(a, b) {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(a)
}

/// Complete elliptic integral of the first kind `K(κ)`.
pub fn ellip_k(m: EllipticModulus) -> Result<f64> {
    if m.kappa() >= 1.0 {
        return Err(Error::Divergence("K(κ) diverges at κ = 1".into()));
    }
    Ok(FRAC_PI_2 / agm(1.0, m.complement().kappa())?)
}

/// Complete elliptic integral of the second kind `E(κ)`.
///
/// Uses `E = K · (1 − Σₙ 2ⁿ⁻¹ cₙ²)` where `c₀ = κ` and `cₙ₊₁ = (aₙ − bₙ)/2`
/// run alongside the AGM of `(1, κ')`.
pub fn ellip_e(m: EllipticModulus) -> f64 {
    let kappa = m.kappa();
    if kappa == 1.0 {
        return 1.0;
    }
    let mut a = 1.0;
    let mut b = m.complement().kappa();
    let mut sum = 0.5 * kappa * kappa;
    let mut weight = 0.5;
    for _ in 0..MAX_AGM_STEPS {
        if agm_converged(a, b) {
            break;
        }
        let c = 0.5 * (a - b);
        weight *= 2.0;
        sum += weight * c * c;
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    FRAC_PI_2 / a * (1.0 - sum)
}
