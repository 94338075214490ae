//! Accessory parameter of the Schwarz–Christoffel integral.
//!
//! With corners at `−k, −1, 1, k` the logarithm of the developing map is
//!
//! ```text
//! L(z) = ∫ₖᶻ g(c, ζ) dζ / (ζ − c),
//! g(c, ζ) = (c + k/c)/(ζ + k/c) · √[(1−c)(k+c)(1+ζ)(k−ζ) / ((1+c)(k−c)(1−ζ)(k+ζ))]
//! ```
//!
//! The residue condition forces the second pole to sit at `d = −k/c`, and
//! the remaining free constant `c` is fixed by `F(k, c) = 0`, where `F` is
//! the real part of the integral over `(−1, 1)` with the logarithmic
//! singularity at `ζ = c` split off:
//!
//! ```text
//! F(k, c) = ∫₋₁¹ (g(c,ζ) − 1) dζ/(ζ − c) + log((1 − c)/(1 + c)).
//! ```
//!
//! First-family quadrilaterals have `1 < k < k_crit` and `c ∈ (0, 1)`;
//! second-family ones have `k > k_crit`, `c ∈ (1, k)` and are fixed by
//! [`family2_integral`]` = −π`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::k_crit;
use crate::developing::DevelopingMap;
use crate::modulus::modulus_of_k;
use crate::quadrature::{integrate_singular_offsets, Abscissa, EndpointExponents, DEFAULT_TOL};
use crate::{Error, Result};

/// Which of the two continuous families a quadrilateral belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    First,
    Second,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::First => "first",
            Family::Second => "second",
        })
    }
}

/// Corner parameter `k` with its family tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadParam {
    k: f64,
    family: Family,
}

impl QuadParam {
    pub fn new(k: f64, family: Family) -> Result<Self> {
        let kc = k_crit();
        let ok = match family {
            Family::First => k > 1.0 && k < kc,
            Family::Second => k > kc && k.is_finite(),
        };
        if ok {
            Ok(Self { k, family })
        } else {
            Err(Error::Domain(match family {
                Family::First => format!("first family needs 1 < k < k_crit = {kc:.6}, got {k}"),
                Family::Second => format!("second family needs k > k_crit = {kc:.6}, got {k}"),
            }))
        }
    }

    /// Picks the family from the side of `k_crit` on which `k` lies.
    pub fn classify(k: f64) -> Result<Self> {
        if k > k_crit() {
            Self::new(k, Family::Second)
        } else {
            Self::new(k, Family::First)
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn family(&self) -> Family {
        self.family
    }
}

/// Tolerances used by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Absolute tolerance of every quadrature.
    pub quad_tol: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub root_tol: f64,
    /// Largest acceptable value of the defining functional at the root.
    pub residual_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { quad_tol: DEFAULT_TOL, root_tol: 1e-12, residual_tol: 1e-9 }
    }
}

/// A solved quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccessorySolution {
    #[serde(flatten)]
    pub param: QuadParam,
    /// The accessory parameter (position of the pole with residue ±1, or ±i).
    pub c: f64,
    /// The partner pole `d = −k/c`.
    pub d: f64,
    /// Positive amplitude in front of the Schwarz–Christoffel integral.
    pub amplitude: f64,
    /// Angle parameter in `(0, 1)`.
    pub alpha: f64,
    /// `min(α, 1 − α)`, the representative invariant under `α ↦ 1 − α`.
    pub alpha_orbit: f64,
    /// Set for the second family, where the representative of the dihedral
    /// orbit of `α` is not determined by `Im L(1)` alone.
    pub alpha_ambiguous: bool,
    /// Conformal modulus of the corner configuration `(−k, −1, 1, k)`.
    pub modulus: f64,
    pub reciprocal_modulus: f64,
    /// The defining functional evaluated at `c`.
    pub residual: f64,
}

impl AccessorySolution {
    pub fn k(&self) -> f64 {
        self.param.k
    }

    pub fn family(&self) -> Family {
        self.param.family
    }
}

/// `h(x) = (1+x)(k−x) / ((1−x)(k+x))`; the residue condition reads `h(c) = h(d)`.
pub fn bethe_h(k: f64, x: f64) -> Result<f64> {
    if x == 1.0 || x == -k {
        return Err(Error::Domain(format!("h has a pole at x = {x} (k = {k})")));
    }
    Ok((1.0 + x) * (k - x) / ((1.0 - x) * (k + x)))
}

fn check_first_family_c(k: f64, c: f64) -> Result<()> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::Domain(format!("k = {k} must exceed 1")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c = {c} must lie in (0, 1)")));
    }
    Ok(())
}

// (1−c)(k+c) / ((1+c)(k−c)): the constant under the square root of g.
fn root_constant(k: f64, c: f64) -> f64 {
    (1.0 - c) * (k + c) / ((1.0 + c) * (k - c))
}

/// The weight `g(c, ζ)` on the real slice `−1 ≤ ζ < 1`, positive branch.
pub fn g_weight(k: f64, c: f64, zeta: f64) -> Result<f64> {
    check_first_family_c(k, c)?;
    if zeta == 1.0 {
        return Err(Error::SingularPoint("g(c, ζ) is singular at ζ = 1".into()));
    }
    if !(-1.0..1.0).contains(&zeta) {
        return Err(Error::Domain(format!("ζ = {zeta} must lie in [-1, 1)")));
    }
    Ok(g_real(k, c, zeta, 1.0 + zeta, 1.0 - zeta))
}

fn g_real(k: f64, c: f64, zeta: f64, one_plus: f64, one_minus: f64) -> f64 {
    let q = k / c;
    (c + q) / (zeta + q) * (root_constant(k, c) * one_plus * (k - zeta) / (one_minus * (k + zeta))).sqrt()
}

/// `∂g/∂ζ` at `ζ = c` by a central difference.
fn g_slope_at_c(k: f64, c: f64) -> f64 {
    let h = 1e-3 * (1.0 - c).min(1.0 + c);
    let plus = g_real(k, c, c + h, (1.0 + c) + h, (1.0 - c) - h);
    let minus = g_real(k, c, c - h, (1.0 + c) - h, (1.0 - c) + h);
    (plus - minus) / (2.0 * h)
}

/// Below this distance from `c`, relative to the distance from `c` to the
/// nearer endpoint, `(g − 1)/(ζ − c)` is replaced by its limit.
const REMOVABLE_GUARD: f64 = 1e-6;

/// The regularized functional `F(k, c)` whose zero in `c` fixes the
/// first-family accessory parameter.
///
/// The integral is split at `c`, so that `ζ − c` and `1 ∓ ζ` are available
/// exactly as distances to the ends of each piece.
pub fn big_f(k: f64, c: f64, tol: f64) -> Result<f64> {
    check_first_family_c(k, c)?;
    let q = k / c;
    let rc = root_constant(k, c);
    let slope = g_slope_at_c(k, c);
    let guard = REMOVABLE_GUARD * (1.0 - c).min(1.0 + c);
    // (g − 1)/(ζ − c) · √((1−ζ)/(1+ζ))
    let reduced = |zeta: f64, one_plus: f64, one_minus: f64, dz: f64| -> f64 {
        let inv_weight = (one_minus / one_plus).sqrt();
        if dz.abs() < guard {
            return slope * inv_weight;
        }
        let smooth = (c + q) / (zeta + q) * (rc * (k - zeta) / (k + zeta)).sqrt();
        (smooth - inv_weight) / dz
    };
    let left = integrate_singular_offsets(
        |pt: Abscissa| reduced(pt.x, pt.from_a, (1.0 - c) + pt.to_b, -pt.to_b) / ((1.0 - c) + pt.to_b).sqrt(),
        -1.0,
        c,
        EndpointExponents::new(0.5, 0.0)?,
        0.5 * tol,
    )?;
    let right = integrate_singular_offsets(
        |pt: Abscissa| {
            let one_plus = (1.0 + c) + pt.from_a;
            reduced(pt.x, one_plus, pt.to_b, pt.from_a) * one_plus.sqrt()
        },
        c,
        1.0,
        EndpointExponents::new(0.0, -0.5)?,
        0.5 * tol,
    )?;
    let log_part = (-c).ln_1p() - c.ln_1p();
    Ok(left.value + right.value + log_part)
}

/// `F₁(k, c) = √((1+c)(k−c)/((1−c)(k+c))) · F(k, c)`, strictly decreasing in `c`.
pub fn f1_scaled(k: f64, c: f64, tol: f64) -> Result<f64> {
    Ok(big_f(k, c, tol)? / root_constant(k, c).sqrt())
}

/// First-family amplitude `A = (c + k/c)·√((1−c)(k+c)/((1+c)(k−c)))`.
pub fn amp_a(k: f64, c: f64) -> Result<f64> {
    check_first_family_c(k, c)?;
    Ok((c + k / c) * root_constant(k, c).sqrt())
}

fn check_second_family_c(k: f64, c: f64) -> Result<()> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::Domain(format!("k = {k} must exceed 1")));
    }
    if !(c > 1.0 && c < k) {
        return Err(Error::Domain(format!("c = {c} must lie in (1, {k})")));
    }
    Ok(())
}

/// Second-family amplitude `A' = (c − d)·√((c−1)(k+c)/((c+1)(k−c)))` with `d = −k/c`.
pub fn amp_a_second(k: f64, c: f64) -> Result<f64> {
    check_second_family_c(k, c)?;
    Ok((c + k / c) * (-root_constant(k, c)).sqrt())
}

/// `∫₋₁¹ (c²+k)/(cx+k) · √[(c−1)(k+c)(1+x)(k−x) / ((c+1)(k−c)(1−x)(k+x))] dx/(x−c)`
/// for `1 < c < k`. The second-family parameter makes this equal to `−π`.
///
/// `tol` is taken relative to the size of the prefactor `√((c−1)(k+c)/((c+1)(k−c)))`
/// once that exceeds 1, which it does as `c → k`.
pub fn family2_integral(k: f64, c: f64, tol: f64) -> Result<f64> {
    check_second_family_c(k, c)?;
    let rc = (c - 1.0) * (k + c) / ((c + 1.0) * (k - c));
    let lead = c * c + k;
    let integrand = |pt: Abscissa| -> f64 {
        let x = pt.x;
        // x − c without cancellation near x = 1.
        let dx = -((c - 1.0) + pt.to_b);
        lead / (c * x + k) * (rc * (k - x) / (k + x)).sqrt() / dx
    };
    let exps = EndpointExponents::new(0.5, -0.5)?;
    let scaled_tol = tol * rc.sqrt().max(1.0);
    Ok(integrate_singular_offsets(integrand, -1.0, 1.0, exps, scaled_tol)?.value)
}

// First-family search window for c.
const C_LOW: f64 = 1e-9;
const C_HIGH: f64 = 1.0 - 1e-7;

/// Bracket `[lo, hi] ⊂ (0, 1)` on which `F(k, ·)` changes sign from + to −.
///
/// Fails with [`Error::Bracket`] when no sign change is visible, which is
/// what happens for `k` beyond `k_crit`.
pub fn bracket_family1(k: f64, opts: &SolverOptions) -> Result<(f64, f64)> {
    let f_lo = big_f(k, C_LOW, opts.quad_tol)?;
    let f_hi = big_f(k, C_HIGH, opts.quad_tol)?;
    if f_lo > 0.0 && f_hi < 0.0 {
        Ok((C_LOW, C_HIGH))
    } else {
        Err(Error::Bracket(format!(
            "F({k}, ·) has no sign change on ({C_LOW}, {C_HIGH}): F = {f_lo:.3e} .. {f_hi:.3e}"
        )))
    }
}

fn bisect(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    f_lo_positive: bool,
    tol: f64,
) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid)? > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn finish(param: QuadParam, c: f64, amplitude: f64, residual: f64, opts: &SolverOptions) -> Result<AccessorySolution> {
    if !(residual.abs() <= opts.residual_tol) {
        return Err(Error::Accuracy { best: c, err_est: residual.abs(), panels: 0 });
    }
    let map = DevelopingMap::new(param.k, c, param.family)?;
    let alpha = map.alpha(opts.quad_tol)?;
    let modulus = modulus_of_k(param.k)?;
    Ok(AccessorySolution {
        param,
        c,
        d: -param.k / c,
        amplitude,
        alpha: alpha.alpha,
        alpha_orbit: alpha.orbit,
        alpha_ambiguous: param.family == Family::Second,
        modulus,
        reciprocal_modulus: 1.0 / modulus,
        residual,
    })
}

/// Solves `F(k, c) = 0` for the unique `c ∈ (0, 1)`, `1 < k < k_crit`.
pub fn solve_family1(k: f64, opts: &SolverOptions) -> Result<AccessorySolution> {
    let param = QuadParam::new(k, Family::First)?;
    let (lo, hi) = bracket_family1(k, opts)?;
    let c = bisect(|c| big_f(k, c, opts.quad_tol), lo, hi, true, opts.root_tol)?;
    let residual = big_f(k, c, opts.quad_tol)?;
    finish(param, c, amp_a(k, c)?, residual, opts)
}

const FAMILY2_SCAN_POINTS: usize = 64;
const FAMILY2_EDGE: f64 = 1e-6;

/// Sign changes of `family2_integral(k, ·) + π` on a geometric grid in
/// `(1 + 1e−6, k − 1e−6)`, as brackets.
pub fn scan_family2(k: f64, opts: &SolverOptions) -> Result<Vec<(f64, f64)>> {
    let span = (k - 1.0) - 2.0 * FAMILY2_EDGE;
    if !(span > 0.0) {
        return Err(Error::Domain(format!("k = {k} leaves no room for c in (1, k)")));
    }
    let (lo, hi) = (FAMILY2_EDGE, k - 1.0 - FAMILY2_EDGE);
    let ratio = (hi / lo).powf(1.0 / (FAMILY2_SCAN_POINTS - 1) as f64);
    let mut grid: Vec<f64> = (0..FAMILY2_SCAN_POINTS).map(|i| 1.0 + lo * ratio.powi(i as i32)).collect();
    *grid.last_mut().expect("nonempty grid") = 1.0 + hi;
    let values =
        grid.iter().map(|&c| family2_integral(k, c, opts.quad_tol).map(|v| v + PI)).collect::<Result<Vec<_>>>()?;
    Ok(grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| (v[0] > 0.0) != (v[1] > 0.0))
        .map(|(c, _)| (c[0], c[1]))
        .collect())
}

/// Solves `family2_integral(k, c) = −π` for `c ∈ (1, k)`, `k > k_crit`.
pub fn solve_family2(k: f64, opts: &SolverOptions) -> Result<AccessorySolution> {
    let param = QuadParam::new(k, Family::Second)?;
    let brackets = scan_family2(k, opts)?;
    let (lo, hi) = match brackets.as_slice() {
        [one] => *one,
        [] => return Err(Error::Bracket(format!("no root of the second-family condition for k = {k}"))),
        many => {
            return Err(Error::Bracket(format!(
                "{} sign changes of the second-family condition for k = {k}: {many:?}",
                many.len()
            )))
        }
    };
    let phi = |c: f64| family2_integral(k, c, opts.quad_tol).map(|v| v + PI);
    let lo_positive = phi(lo)? > 0.0;
    let c = bisect(phi, lo, hi, lo_positive, opts.root_tol)?;
    let residual = phi(c)?;
    finish(param, c, amp_a_second(k, c)?, residual, opts)
}

/// Dispatches on the side of `k_crit`.
pub fn solve(k: f64, opts: &SolverOptions) -> Result<AccessorySolution> {
    match QuadParam::classify(k)?.family() {
        Family::First => solve_family1(k, opts),
        Family::Second => solve_family2(k, opts),
    }
}
