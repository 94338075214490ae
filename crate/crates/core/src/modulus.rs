//! Conformal modulus of the quadrilateral with corners `−k, −1, 1, k`.
//!
//! The upper half-plane with these four marked boundary points is
//! conformally a rectangle of width `W` and height `H`; the modulus is
//! `H/W`. In closed form, with `κ₁ = 1/k`,
//!
//! ```text
//! K(k) = K(√(1 − κ₁²)) / (2·K(κ₁))
//! ```
//!
//! and [`modulus_oracle`] computes the same ratio from the defining
//! Schwarz–Christoffel side integrals by quadrature.

use serde::Serialize;

use crate::elliptic::agm;
use crate::quadrature::{integrate_singular, EndpointExponents};
use crate::{Error, Result};

/// A corner parameter together with the modulus it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusPair {
    pub k: f64,
    /// Height/width ratio of the image rectangle.
    pub modulus: f64,
    /// The reciprocal, i.e. the modulus with the other corner marked.
    pub reciprocal: f64,
}

impl ModulusPair {
    pub fn from_k(k: f64) -> Result<Self> {
        let modulus = modulus_of_k(k)?;
        Ok(Self { k, modulus, reciprocal: 1.0 / modulus })
    }

    pub fn from_modulus(modulus: f64) -> Result<Self> {
        let k = k_of_modulus(modulus)?;
        Ok(Self { k, modulus, reciprocal: 1.0 / modulus })
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("corner parameter k = {k} must satisfy k > 1")))
    }
}

/// Modulus as a function of `k > 1`, from complete elliptic integrals.
pub fn modulus_of_k(k: f64) -> Result<f64> {
    check_k(k)?;
    modulus_of_offset(k - 1.0)
}

// The modulus in terms of t = k − 1, written with AGMs so that the
// complementary modulus √(t(2+t))/(1+t) keeps full accuracy as t → 0.
fn modulus_of_offset(t: f64) -> Result<f64> {
    let kappa = 1.0 / (1.0 + t);
    let kappa_prime = (t * (2.0 + t)).sqrt() / (1.0 + t);
    // K(κ') / (2K(κ)) = agm(1, κ') / (2·agm(1, κ))
    Ok(agm(1.0, kappa_prime)? / (2.0 * agm(1.0, kappa)?))
}

/// Modulus from the rectangle side lengths
/// `W = 2∫₀¹ dt/√((1−t²)(k²−t²))` and `H = ∫₁ᵏ dt/√((t²−1)(k²−t²))`.
pub fn modulus_oracle(k: f64, tol: f64) -> Result<f64> {
    check_k(k)?;
    let half_width = integrate_singular(
        |t| 1.0 / ((1.0 + t) * (k - t) * (k + t)).sqrt(),
        0.0,
        1.0,
        EndpointExponents::new(0.0, -0.5)?,
        tol,
    )?;
    let height =
        integrate_singular(|t| 1.0 / ((t + 1.0) * (k + t)).sqrt(), 1.0, k, EndpointExponents::new(-0.5, -0.5)?, tol)?;
    Ok(height.value / (2.0 * half_width.value))
}

/// Inverse of [`modulus_of_k`]: the unique `k > 1` with the given modulus.
pub fn k_of_modulus(modulus: f64) -> Result<f64> {
    if !(modulus > 0.0 && modulus.is_finite()) {
        return Err(Error::Domain(format!("modulus {modulus} must be positive")));
    }
    // Bracket in t = k − 1 so that moduli near 0 (k → 1⁺) stay resolvable.
    let eval = modulus_of_offset;
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
    while eval(hi)? < modulus {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Bracket(format!("no k found for modulus {modulus}")));
        }
    }
    // Bisect in log t near 0, then linearly; 200 steps exhaust f64.
    for _ in 0..200 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let m = eval(mid)?;
        if (m - modulus).abs() <= 1e-15 * modulus {
            return Ok(1.0 + mid);
        }
        if m < modulus {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(1.0 + 0.5 * (lo + hi))
}
