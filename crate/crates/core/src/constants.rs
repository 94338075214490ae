//! Critical constants of the (3/2, 1/2, 3/2, 1/2) family.
//!
//! The degenerate quadrilateral at the end of the first family has
//! complementary modulus `κ'_crit`, the root of `K(κ') = 2E(κ')`. From it:
//!
//! - `κ_crit = √(1 − κ'_crit²)` and `k_crit = (1 + κ_crit)/(1 − κ_crit)`,
//! - `K_crit`, the conformal modulus at `k_crit`,
//! - the "One-Ninth" constant `Λ = exp(−π K(κ_crit)/K(κ'_crit))`,
//! - `b₁ = K(κ'_crit)/K(κ_crit)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::elliptic::{ellip_e, ellip_k, EllipticModulus};
use crate::modulus::modulus_of_k;

/// All the critical constants, computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalConstants {
    pub kappa_prime_crit: f64,
    pub kappa_crit: f64,
    pub k_crit: f64,
    pub modulus_crit: f64,
    pub lambda: f64,
    pub b1: f64,
}

impl CriticalConstants {
    fn compute() -> Self {
        let kappa_prime_crit = kappa_prime_crit(0.0);
        let kappa_crit = complement(kappa_prime_crit);
        let k_crit = k_from_kappa(kappa_crit);
        let modulus_crit = modulus_of_k(k_crit).expect("k_crit > 1");
        let ratio = k_of(kappa_prime_crit) / k_of(kappa_crit);
        Self { kappa_prime_crit, kappa_crit, k_crit, modulus_crit, lambda: (-PI / ratio).exp(), b1: ratio }
    }

    /// The process-wide cached record.
    pub fn get() -> &'static Self {
        static CACHE: OnceLock<CriticalConstants> = OnceLock::new();
        CACHE.get_or_init(Self::compute)
    }
}

fn complement(kappa: f64) -> f64 {
    ((1.0 - kappa) * (1.0 + kappa)).sqrt()
}

fn k_of(kappa: f64) -> f64 {
    ellip_k(EllipticModulus::new(kappa).expect("modulus in [0,1)")).expect("modulus below 1")
}

/// `K(κ') − 2E(κ')`, negative below the critical modulus and positive above.
pub fn critical_defect(kappa_prime: f64) -> f64 {
    let m = EllipticModulus::new(kappa_prime).expect("modulus in [0,1)");
    ellip_k(m).expect("modulus below 1") - 2.0 * ellip_e(m)
}

/// Root of `K(κ') = 2E(κ')` on `(0, 1)` by bisection to `tol`
/// (`tol = 0` bisects to machine resolution).
pub fn kappa_prime_crit(tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.5, 0.99);
    debug_assert!(critical_defect(lo) < 0.0 && critical_defect(hi) > 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if critical_defect(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn k_from_kappa(kappa: f64) -> f64 {
    (1.0 + kappa) / (1.0 - kappa)
}

/// `k_crit = (1 + κ)/(1 − κ)` with `κ = √(1 − κ'_crit²)`.
pub fn derive_k_crit() -> f64 {
    CriticalConstants::get().k_crit
}

pub fn k_crit() -> f64 {
    CriticalConstants::get().k_crit
}

/// `Λ = exp(−π K(√(1−c²))/K(c))` with `c = κ'_crit`.
pub fn one_ninth_lambda() -> f64 {
    CriticalConstants::get().lambda
}

pub fn b1() -> f64 {
    CriticalConstants::get().b1
}

/// Partial sum `Σ_{n<terms} (2n+1)² (−x)^{n(n+1)}`.
///
/// Every exponent `n(n+1)` is even, so the sum is positive on `(0, 1)`.
pub fn halphen_series(x: f64, terms: usize) -> f64 {
    (0..terms)
        .map(|n| {
            let odd = (2 * n + 1) as f64;
            odd * odd * (-x).powi((n * (n + 1)) as i32)
        })
        .sum()
}

/// Partial sum with alternating signs, `Σ_{n<terms} (−1)ⁿ (2n+1)² x^{n(n+1)}`.
pub fn halphen_series_alternating(x: f64, terms: usize) -> f64 {
    (0..terms)
        .map(|n| {
            let odd = (2 * n + 1) as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * odd * odd * x.powi((n * (n + 1)) as i32)
        })
        .sum()
}
