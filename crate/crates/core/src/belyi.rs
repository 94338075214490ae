//! Algebraic developing maps for rational `α`.
//!
//! When the monodromy is a finite dihedral group, `f = g⁻¹ ∘ h` where
//! `g(z) = −¼(z^q + z^{−q} − 2)` is the dihedral invariant and `h` is a
//! rational function ramified only over `0, 1, ∞` (a Belyi function).
//! This module carries the three known examples in double-double
//! precision, computes their ramification portraits, and reads the corner
//! configuration of `f` off the portrait.

use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::accessory::{solve_family1, SolverOptions};
use crate::modulus::k_of_modulus;
use crate::poly::{cabs, cdd, dd, roots, to_c64, CDd, Dd, Poly};
use crate::{Error, Result};

/// `g(z) = −¼(z^q + z^{−q} − 2)`.
pub fn dihedral_invariant(q: u32, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularPoint("the dihedral invariant has a pole at z = 0".into()));
    }
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    let zq = z.powi(q as i32);
    Ok(-0.25 * (zq + zq.inv() - 2.0))
}

/// A rational function `N/D` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    name: String,
    num: Poly,
    den: Poly,
    /// Order `q` of the dihedral group this map is paired with.
    q: u32,
    /// Named parameters: exact expression and decimal value.
    provenance: Vec<(String, String, String)>,
}

impl RationalMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dihedral_order(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    /// `(parameter, exact expression, value)` triples.
    pub fn provenance(&self) -> &[(String, String, String)] {
        &self.provenance
    }

    /// Numerator and denominator coefficients, constant term first, rounded to `f64`.
    pub fn coefficients_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let f = |p: &Poly| p.coeffs().iter().map(|c| c.hi()).collect();
        (f(&self.num), f(&self.den))
    }

    fn eval_dd(&self, z: CDd) -> CDd {
        self.num.eval(z) / self.den.eval(z)
    }

    /// `h(z)`; poles give an infinite value.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        to_c64(self.eval_dd(cdd(z)))
    }

    /// `h′(z)` and `h″(z)`.
    fn derivatives(&self, z: CDd) -> (CDd, CDd) {
        let (n, d) = (&self.num, &self.den);
        let (n1, d1) = (n.derivative(), d.derivative());
        let (n2, d2) = (n1.derivative(), d1.derivative());
        let (nv, dv, n1v, d1v, n2v, d2v) = (n.eval(z), d.eval(z), n1.eval(z), d1.eval(z), n2.eval(z), d2.eval(z));
        let w = n1v * dv - nv * d1v;
        let first = w / (dv * dv);
        let second = (n2v * dv - nv * d2v) / (dv * dv) - w * d1v * dd(2.0) / (dv * dv * dv);
        (first, second)
    }
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpherePoint {
    Finite { re: f64, im: f64 },
    Infinity,
}

impl SpherePoint {
    fn finite(z: Complex64) -> Self {
        SpherePoint::Finite { re: z.re, im: z.im }
    }

    /// The real coordinate, if the point is on the extended real line.
    pub fn real(&self) -> Option<f64> {
        match *self {
            SpherePoint::Finite { re, im } if im.abs() <= REAL_TOL * re.abs().max(1.0) => Some(re),
            SpherePoint::Finite { .. } => None,
            SpherePoint::Infinity => Some(f64::INFINITY),
        }
    }
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpherePoint::Finite { re, im } => write!(f, "{re}{im:+}i"),
            SpherePoint::Infinity => f.write_str("∞"),
        }
    }
}

const REAL_TOL: f64 = 1e-12;

/// One of the three allowed critical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalValue {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "inf")]
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitEntry {
    pub point: SpherePoint,
    pub local_degree: usize,
    pub value: CriticalValue,
}

/// Full fibres of a Belyi map over `0`, `1` and `∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamificationPortrait {
    pub degree: usize,
    pub entries: Vec<PortraitEntry>,
    /// Largest distance of a critical value from `{0, 1, ∞}`.
    pub max_critical_value_defect: f64,
    /// Smallest normalized `|N|` at a root of `D`; zero would mean a common factor.
    pub coprimality: f64,
}

impl RamificationPortrait {
    pub fn fibre(&self, value: CriticalValue) -> impl Iterator<Item = &PortraitEntry> {
        self.entries.iter().filter(move |e| e.value == value)
    }

    pub fn fibre_sum(&self, value: CriticalValue) -> usize {
        self.fibre(value).map(|e| e.local_degree).sum()
    }

    /// `Σ (e − 1)` over all entries.
    pub fn ramification_total(&self) -> usize {
        self.entries.iter().map(|e| e.local_degree - 1).sum()
    }

    /// Riemann–Hurwitz and the three fibre sums.
    pub fn invariants_hold(&self) -> bool {
        self.ramification_total() == 2 * self.degree - 2
            && [CriticalValue::Zero, CriticalValue::One, CriticalValue::Infinity]
                .iter()
                .all(|&v| self.fibre_sum(v) == self.degree)
    }

    /// The entry at a finite point within `tol`.
    pub fn find(&self, z: Complex64, tol: f64) -> Option<&PortraitEntry> {
        self.entries.iter().find(|e| match e.point {
            SpherePoint::Finite { re, im } => (Complex64::new(re, im) - z).norm() <= tol,
            SpherePoint::Infinity => false,
        })
    }

    pub fn at_infinity(&self) -> Option<&PortraitEntry> {
        self.entries.iter().find(|e| e.point == SpherePoint::Infinity)
    }
}

const COPRIME_TOL: f64 = 1e-12;
const MATCH_TOL: f64 = 1e-8;

/// Checks that `map` is ramified only over `0, 1, ∞` and returns its portrait.
pub fn verify_belyi(map: &RationalMap, tol: f64) -> Result<RamificationPortrait> {
    let (num, den) = (&map.num, &map.den);
    let degree = map.degree();
    let poles = roots(den)?;
    // a common factor would show up as a zero of N at a root of D
    let coprimality =
        poles.iter().map(|r| (cabs(num.eval(r.z)) / num.eval_abs(r.z)).hi()).fold(f64::INFINITY, f64::min);
    if coprimality <= COPRIME_TOL {
        return Err(Error::Contract(format!("{}: numerator and denominator share a root", map.name)));
    }
    let zeros = roots(num)?;
    let ones = roots(&num.sub(den))?;
    let finite = |rs: Vec<crate::poly::Root>, value| {
        rs.into_iter().map(move |r| PortraitEntry {
            point: SpherePoint::finite(to_c64(r.z)),
            local_degree: r.multiplicity,
            value,
        })
    };
    let mut entries: Vec<PortraitEntry> = finite(zeros, CriticalValue::Zero)
        .chain(finite(ones, CriticalValue::One))
        .chain(finite(poles, CriticalValue::Infinity))
        .collect();
    let (dn, dd_) = (num.degree(), den.degree());
    let at_infinity = if dn < dd_ {
        Some((dd_ - dn, CriticalValue::Zero))
    } else if dn > dd_ {
        Some((dn - dd_, CriticalValue::Infinity))
    } else {
        let ratio = num.leading() / den.leading();
        if (ratio - 1.0).abs() <= dd(tol) {
            Some((dn - num.sub(den).trimmed().degree(), CriticalValue::One))
        } else {
            None
        }
    };
    if let Some((local_degree, value)) = at_infinity {
        entries.push(PortraitEntry { point: SpherePoint::Infinity, local_degree, value });
    }

    // Every finite critical point must be a listed fibre point of the right degree.
    let crit = num.derivative().mul(den).sub(&num.mul(&den.derivative())).trimmed();
    let mut defect: f64 = 0.0;
    if !crit.is_zero() {
        for r in roots(&crit)? {
            let z = r.z;
            let nv = num.eval(z);
            let dv = den.eval(z);
            let den_rel = (cabs(dv) / den.eval_abs(z)).hi();
            let (value, dist) = if den_rel <= tol {
                (CriticalValue::Infinity, den_rel)
            } else {
                let h = nv / dv;
                let d0 = cabs(h).hi();
                let d1 = cabs(h - Complex::new(dd(1.0), dd(0.0))).hi();
                if d0 <= d1 {
                    (CriticalValue::Zero, d0)
                } else {
                    (CriticalValue::One, d1)
                }
            };
            let point = to_c64(z);
            if dist > tol {
                let value = to_c64(nv / dv);
                return Err(Error::BelyiViolation {
                    point: format!("{:.15e}{:+.15e}i", point.re, point.im),
                    value: format!("{:.15e}{:+.15e}i", value.re, value.im),
                });
            }
            defect = defect.max(dist);
            let listed = entries.iter().any(|e| {
                e.value == value
                    && e.local_degree == r.multiplicity + 1
                    && matches!(e.point, SpherePoint::Finite { re, im }
                        if (Complex64::new(re, im) - point).norm() <= MATCH_TOL * point.norm().max(1.0))
            });
            if !listed {
                return Err(Error::BelyiViolation {
                    point: format!("{:.15e}{:+.15e}i", point.re, point.im),
                    value: format!("critical of order {} not matching its fibre", r.multiplicity),
                });
            }
        }
    }
    let portrait = RamificationPortrait { degree, entries, max_critical_value_defect: defect, coprimality };
    if !portrait.invariants_hold() {
        return Err(Error::BelyiViolation {
            point: "portrait".into(),
            value: format!(
                "Riemann–Hurwitz total {} for degree {}; fibre sums {}, {}, {}",
                portrait.ramification_total(),
                degree,
                portrait.fibre_sum(CriticalValue::Zero),
                portrait.fibre_sum(CriticalValue::One),
                portrait.fibre_sum(CriticalValue::Infinity)
            ),
        });
    }
    Ok(portrait)
}

/// Which printing of the second example's parameter `t` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TVariant {
    /// `t = (ε²+ε+3)/2 + ½√(8ε²+10ε+13)`, the partner of `y`.
    Corrected,
    /// `t = (ε²+ε+3)/2 + √(8ε²+10ε+13)`.
    Printed,
}

/// The exact parameters of the second example in `ℚ(ε, √D)`, `ε = 2^{1/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Params {
    pub a: Dd,
    pub x: Dd,
    pub y: Dd,
    pub t: Dd,
    pub s: Dd,
    pub w: Dd,
}

impl Example2Params {
    pub fn new(variant: TVariant) -> Self {
        let e = dd(2.0).cbrt();
        let e2 = e * e;
        let root = (e2 * 8.0 + e * 10.0 + 13.0).sqrt();
        let centre = (e2 + e + 3.0) / 2.0;
        let t = match variant {
            TVariant::Corrected => centre + root / 2.0,
            TVariant::Printed => centre + root,
        };
        Self {
            a: e2 * 1.25 + e * 1.5 + 3.0,
            x: -e2 / 10.0 - e * 0.3 + 0.6,
            y: centre - root / 2.0,
            t,
            s: e2 * 8.25 + e * 10.5 + 13.0,
            w: e2 * 1.5 + e * 1.5 + 3.0,
        }
    }
}

/// Decimal scientific notation with 32 significant digits.
fn fmt_dd(x: Dd) -> String {
    const DIGITS: usize = 32;
    if x == dd(0.0) {
        return "0".into();
    }
    let sign = if x < dd(0.0) { "-" } else { "" };
    let x = x.abs();
    let mut exp = x.hi().log10().floor() as i32;
    let mut y = x / dd(10.0).powi(exp);
    if y >= dd(10.0) {
        y /= 10.0;
        exp += 1;
    } else if y < dd(1.0) {
        y *= 10.0;
        exp -= 1;
    }
    let mut digits = String::with_capacity(DIGITS + 1);
    for i in 0..DIGITS {
        let d = y.hi().floor().clamp(0.0, 9.0);
        digits.push(char::from(b'0' + d as u8));
        if i == 0 {
            digits.push('.');
        }
        y = (y - d) * 10.0;
    }
    format!("{sign}{digits}e{exp}")
}

/// One of the three worked examples; `n ∈ {1, 2, 3}`.
pub fn example_map(n: u32) -> Result<RationalMap> {
    match n {
        1 => Ok(example1()),
        2 => Ok(example2(TVariant::Corrected)),
        3 => Ok(example3()),
        _ => Err(Error::Domain(format!("there is no example {n}; choose 1, 2 or 3"))),
    }
}

/// The second example built with either printing of `t`.
pub fn example2(variant: TVariant) -> RationalMap {
    let p = Example2Params::new(variant);
    let num = Poly::linear(p.x).pow(2).mul(&Poly::linear(p.a)).scale(p.s);
    let den = Poly::linear(p.y).pow(3).mul(&Poly::linear(p.t).pow(3));
    let t_expr = match variant {
        TVariant::Corrected => "(ε²+ε+3)/2 + √(8ε²+10ε+13)/2",
        TVariant::Printed => "(ε²+ε+3)/2 + √(8ε²+10ε+13)",
    };
    let provenance = [
        ("ε", "2^(1/3)", dd(2.0).cbrt()),
        ("a", "5/4 ε² + 3/2 ε + 3", p.a),
        ("x", "-1/10 ε² - 3/10 ε + 3/5", p.x),
        ("y", "(ε²+ε+3)/2 - √(8ε²+10ε+13)/2", p.y),
        ("t", t_expr, p.t),
        ("s", "33/4 ε² + 21/2 ε + 13", p.s),
        ("w", "3/2 ε² + 3/2 ε + 3", p.w),
    ]
    .into_iter()
    .map(|(k, e, v)| (k.to_string(), e.to_string(), fmt_dd(v)))
    .collect();
    let name = match variant {
        TVariant::Corrected => "example 2",
        TVariant::Printed => "example 2 (printed t)",
    };
    RationalMap { name: name.into(), num, den, q: 3, provenance }
}

fn example1() -> RationalMap {
    // −(z+2)(z−2)³ / (3(z²+2z−2)²)
    let num = Poly::from_i64(&[2, 1]).mul(&Poly::from_i64(&[-2, 1]).pow(3)).scale(dd(-1.0));
    let den = Poly::from_i64(&[-2, 2, 1]).pow(2).scale(dd(3.0));
    let provenance = vec![("h".to_string(), "-(z+2)(z-2)^3 / (3(z^2+2z-2)^2)".to_string(), "exact".to_string())];
    RationalMap { name: "example 1".into(), num, den, q: 2, provenance }
}

fn example3() -> RationalMap {
    // 64(135+78√3)(z−1)³ / ((z−4−2√3)³(3z+2√3)³)
    let r3 = dd(3.0).sqrt();
    let lead = (r3 * 78.0 + 135.0) * 64.0;
    let num = Poly::linear(dd(1.0)).pow(3).scale(lead);
    let den = Poly::linear(r3 * 2.0 + 4.0).pow(3).mul(&Poly::new(vec![r3 * 2.0, dd(3.0)]).pow(3));
    let provenance = vec![
        ("√3".to_string(), "3^(1/2)".to_string(), fmt_dd(r3)),
        ("lead".to_string(), "64(135+78√3)".to_string(), fmt_dd(lead)),
    ];
    RationalMap { name: "example 3".into(), num, den, q: 3, provenance }
}

/// Integer polynomial product, constant term first.
fn int_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_pow(a: &[i64], n: u32) -> Vec<i64> {
    (0..n).fold(vec![1], |acc, _| int_mul(&acc, a))
}

/// `−(z+2)(z−2)³ − 3(z²+2z−2)² = −4(z−1)(z+1)³` coefficientwise in integers,
/// i.e. the 1-points of the first example.
pub fn example1_identity() -> (Vec<i64>, Vec<i64>) {
    let n = int_mul(&[-2, -1], &int_pow(&[-2, 1], 3));
    let d = int_mul(&[3], &int_pow(&[-2, 2, 1], 2));
    let lhs: Vec<i64> = n.iter().zip(&d).map(|(a, b)| a - b).collect();
    let rhs = int_mul(&[4, -4], &int_pow(&[1, 1], 3));
    (lhs, rhs)
}

/// Residuals of the defining conditions of the second example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Example2Conditions {
    pub variant: TVariant,
    /// `h(0) − 1`, `h(1) − 1`, `h(w) − 1`.
    pub values: [f64; 3],
    /// `h′(1)`, `h″(1)`, `h′(w)`.
    pub derivatives: [f64; 3],
    pub max_residual: f64,
}

pub fn example2_conditions(variant: TVariant) -> Example2Conditions {
    let map = example2(variant);
    let p = Example2Params::new(variant);
    let real = |x: Dd| Complex::new(x, dd(0.0));
    let one = real(dd(1.0));
    let value = |x: Dd| (map.eval_dd(real(x)) - one).re.hi();
    let values = [value(dd(0.0)), value(dd(1.0)), value(p.w)];
    let (d1, d2) = map.derivatives(one);
    let (dw, _) = map.derivatives(real(p.w));
    let derivatives = [d1.re.hi(), d2.re.hi(), dw.re.hi()];
    let max_residual = values.iter().chain(&derivatives).fold(0.0_f64, |m, v| m.max(v.abs()));
    Example2Conditions { variant, values, derivatives, max_residual }
}

/// Real corners of `f = g⁻¹ ∘ h`, with angles in half-turns.
///
/// A fibre point of local degree `e` over a value where `g` has local
/// degree `e_g` (2 over `0` and `1`, `q` over `∞`) is a corner of angle
/// `e/e_g` unless that is 1.
pub fn corners(portrait: &RamificationPortrait, q: u32) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = portrait
        .entries
        .iter()
        .filter_map(|e| {
            let eg = match e.value {
                CriticalValue::Zero | CriticalValue::One => 2.0,
                CriticalValue::Infinity => q as f64,
            };
            let angle = e.local_degree as f64 / eg;
            match e.point.real() {
                Some(x) if angle != 1.0 => Some((x, angle)),
                _ => None,
            }
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `k` of the configuration `(−k, −1, 1, k)` conformally equivalent to four
/// corners listed in order along the extended real line, starting at a
/// corner of angle 1/2.
pub fn k_from_corners(corners: &[(f64, f64)]) -> Result<f64> {
    if corners.len() != 4 {
        return Err(Error::Contract(format!("expected four corners, found {}", corners.len())));
    }
    let start =
        corners.iter().position(|c| c.1 == 0.5).ok_or_else(|| Error::Contract("no corner of angle 1/2".into()))?;
    let z: Vec<(f64, f64)> = (0..4).map(|i| corners[(start + i) % 4]).collect();
    let pattern: Vec<f64> = z.iter().map(|c| c.1).collect();
    if pattern != [0.5, 1.5, 0.5, 1.5] {
        return Err(Error::Contract(format!("corner angles {pattern:?} are not 1/2, 3/2, 1/2, 3/2")));
    }
    let cr = cross_ratio([z[0].0, z[1].0, z[2].0, z[3].0]);
    // (−k, −1, 1, k) has cross ratio (k+1)²/(4k)
    let b = 2.0 * cr - 1.0;
    if !(b > 1.0) {
        return Err(Error::Contract(format!("cross ratio {cr} does not come from a rectangle")));
    }
    Ok(b + (b * b - 1.0).sqrt())
}

/// `(z₃−z₁)(z₄−z₂) / ((z₃−z₂)(z₄−z₁))`, with `∞` allowed in any slot.
fn cross_ratio(z: [f64; 4]) -> f64 {
    let diff = |i: usize, j: usize| -> Option<f64> {
        if z[i].is_infinite() || z[j].is_infinite() {
            None
        } else {
            Some(z[i] - z[j])
        }
    };
    let factors = |p: [(usize, usize); 2]| p.iter().filter_map(|&(i, j)| diff(i, j)).product::<f64>();
    factors([(2, 0), (3, 1)]) / factors([(2, 1), (3, 0)])
}

/// Stated modulus and `α` of each example.
pub fn example_data(n: u32) -> Result<(f64, f64)> {
    match n {
        1 => Ok((0.63963, 0.5)),
        2 => Ok((0.67957, 1.0 / 3.0)),
        3 => Ok((0.57735, 2.0 / 3.0)),
        _ => Err(Error::Domain(format!("there is no example {n}; choose 1, 2 or 3"))),
    }
}

/// The numerical solver and the algebraic map describing the same quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleConsistency {
    pub example: u32,
    pub stated_modulus: f64,
    pub stated_alpha: f64,
    /// `k_of_modulus(stated_modulus)`.
    pub k_from_modulus: f64,
    /// `k` from the cross ratio of the corners of `g⁻¹ ∘ h`.
    pub k_from_corners: f64,
    pub solved_c: f64,
    pub solved_alpha: f64,
    pub solved_alpha_orbit: f64,
    /// `|orbit(α_solved) − orbit(α_stated)|`.
    pub alpha_error: f64,
}

pub fn example_consistency(n: u32) -> Result<ExampleConsistency> {
    let (stated_modulus, stated_alpha) = example_data(n)?;
    let map = example_map(n)?;
    let portrait = verify_belyi(&map, 1e-10)?;
    let k_from_corners = k_from_corners(&corners(&portrait, map.q))?;
    let k_from_modulus = k_of_modulus(stated_modulus)?;
    let sol = solve_family1(k_from_modulus, &SolverOptions::default())?;
    let orbit = |a: f64| a.min(1.0 - a);
    Ok(ExampleConsistency {
        example: n,
        stated_modulus,
        stated_alpha,
        k_from_modulus,
        k_from_corners,
        solved_c: sol.c,
        solved_alpha: sol.alpha,
        solved_alpha_orbit: sol.alpha_orbit,
        alpha_error: (sol.alpha_orbit - orbit(stated_alpha)).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dihedral_invariant_values() {
        for q in 1..6 {
            assert_abs_diff_eq!(dihedral_invariant(q, c(1.0, 0.0)).unwrap().norm(), 0.0);
        }
        let v = dihedral_invariant(2, c(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        let v = dihedral_invariant(3, Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
        assert!(matches!(dihedral_invariant(2, c(0.0, 0.0)), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn dihedral_invariant_symmetry_and_reality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [2u32, 3, 5] {
            let rot = Complex64::from_polar(1.0, 2.0 * PI / q as f64);
            for _ in 0..50 {
                let z = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..2.0 * PI));
                let g = dihedral_invariant(q, z).unwrap();
                assert!((g - dihedral_invariant(q, z.inv()).unwrap()).norm() <= 1e-12 * g.norm().max(1.0));
                assert!((g - dihedral_invariant(q, rot * z).unwrap()).norm() <= 1e-12 * g.norm().max(1.0));
                let r = rng.gen_range(0.3..3.0);
                let theta = rng.gen_range(0.0..2.0 * PI);
                for w in [c(r, 0.0), Complex64::from_polar(1.0, theta), Complex64::from_polar(r, PI / q as f64)] {
                    let g = dihedral_invariant(q, w).unwrap();
                    assert!(g.im.abs() <= 1e-12 * g.norm().max(1.0), "q = {q}, w = {w}");
                }
            }
        }
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(fmt_dd(dd(0.0)), "0");
        assert_eq!(fmt_dd(dd(-2.5)), "-2.5000000000000000000000000000000e0");
        assert_eq!(fmt_dd(dd(2.0).sqrt()), "1.4142135623730950488016887242096e0");
        assert_eq!(fmt_dd(dd(1.0) / 3.0 / 1000.0), "3.3333333333333333333333333333333e-4");
    }

    #[test]
    fn example_values() {
        assert_abs_diff_eq!(example_map(1).unwrap().eval(c(-1.0, 0.0)).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(example_map(3).unwrap().eval(c(0.0, 0.0)).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(example_map(2).unwrap().eval(c(0.0, 0.0)).re, 1.0, epsilon = 1e-10);
        assert!(example_map(4).is_err());
    }

    #[test]
    fn example1_identity_in_integers() {
        let (lhs, rhs) = example1_identity();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, vec![4, 8, 0, -8, -4]);
    }

    #[test]
    fn example1_portrait() {
        let p = verify_belyi(&example_map(1).unwrap(), 1e-10).unwrap();
        assert_eq!(p.degree, 4);
        let r3 = 3f64.sqrt();
        let at = |x: f64| p.find(c(x, 0.0), 1e-9).map(|e| (e.local_degree, e.value));
        assert_eq!(at(-1.0), Some((3, CriticalValue::One)));
        assert_eq!(at(2.0), Some((3, CriticalValue::Zero)));
        assert_eq!(at(-1.0 + r3), Some((2, CriticalValue::Infinity)));
        assert_eq!(at(-1.0 - r3), Some((2, CriticalValue::Infinity)));
        assert_eq!(at(1.0), Some((1, CriticalValue::One)));
        assert_eq!(at(-2.0), Some((1, CriticalValue::Zero)));
        assert!(p.at_infinity().is_none());
        assert_eq!(p.ramification_total(), 6);
    }

    #[test]
    fn example2_portrait() {
        let p = verify_belyi(&example_map(2).unwrap(), 1e-10).unwrap();
        let e = Example2Params::new(TVariant::Corrected);
        assert_eq!(p.degree, 6);
        let at = |x: Dd| p.find(c(x.hi(), 0.0), 1e-9).map(|e| (e.local_degree, e.value));
        assert_eq!(at(e.a), Some((1, CriticalValue::Zero)));
        assert_eq!(at(e.x), Some((2, CriticalValue::Zero)));
        assert_eq!(at(dd(0.0)), Some((1, CriticalValue::One)));
        assert_eq!(at(e.w), Some((2, CriticalValue::One)));
        assert_eq!(at(dd(1.0)), Some((3, CriticalValue::One)));
        assert_eq!(at(e.y), Some((3, CriticalValue::Infinity)));
        assert_eq!(at(e.t), Some((3, CriticalValue::Infinity)));
        let inf = p.at_infinity().unwrap();
        assert_eq!((inf.local_degree, inf.value), (3, CriticalValue::Zero));
    }

    #[test]
    fn example3_portrait() {
        let p = verify_belyi(&example_map(3).unwrap(), 1e-10).unwrap();
        assert_eq!(p.degree, 6);
        let r3 = 3f64.sqrt();
        let at = |x: f64| p.find(c(x, 0.0), 1e-9).map(|e| (e.local_degree, e.value));
        assert_eq!(at(0.0), Some((1, CriticalValue::One)));
        assert_eq!(at(8.0 + 4.0 * r3), Some((1, CriticalValue::One)));
        assert_eq!(at(1.0), Some((3, CriticalValue::Zero)));
        assert_eq!(at(4.0 + 2.0 * r3), Some((3, CriticalValue::Infinity)));
        assert_eq!(at(-2.0 * r3 / 3.0), Some((3, CriticalValue::Infinity)));
        let doubles: Vec<_> = p
            .fibre(CriticalValue::One)
            .filter(|e| e.local_degree == 2)
            .map(|e| match e.point {
                SpherePoint::Finite { re, im } => c(re, im),
                SpherePoint::Infinity => panic!("∞ is a zero"),
            })
            .collect();
        assert_eq!(doubles.len(), 2);
        assert!(doubles[0].im.abs() > 1e-3);
        assert_abs_diff_eq!((doubles[0] - doubles[1].conj()).norm(), 0.0, epsilon = 1e-9);
        let inf = p.at_infinity().unwrap();
        assert_eq!((inf.local_degree, inf.value), (3, CriticalValue::Zero));
    }

    #[test]
    fn example2_conditions_corrected_and_printed() {
        let good = example2_conditions(TVariant::Corrected);
        assert!(good.max_residual <= 1e-10, "{good:?}");
        let bad = example2_conditions(TVariant::Printed);
        assert!(bad.values[0].abs() > 0.1, "{bad:?}");
    }

    #[test]
    fn printed_variant_is_not_belyi() {
        assert!(matches!(verify_belyi(&example2(TVariant::Printed), 1e-10), Err(Error::BelyiViolation { .. })));
    }

    #[test]
    fn non_belyi_map_is_rejected() {
        // z³ − 3z has critical values ±2
        let map = RationalMap {
            name: "cubic".into(),
            num: Poly::from_i64(&[0, -3, 0, 1]),
            den: Poly::from_i64(&[1]),
            q: 2,
            provenance: Vec::new(),
        };
        assert!(matches!(verify_belyi(&map, 1e-10), Err(Error::BelyiViolation { .. })));
    }

    #[test]
    fn common_factor_is_rejected() {
        let map = RationalMap {
            name: "reducible".into(),
            num: Poly::from_i64(&[-1, 0, 1]),
            den: Poly::from_i64(&[1, 1]),
            q: 2,
            provenance: Vec::new(),
        };
        assert!(matches!(verify_belyi(&map, 1e-10), Err(Error::Contract(_))));
    }

    #[test]
    fn corners_give_the_corner_parameter() {
        let p = verify_belyi(&example_map(1).unwrap(), 1e-10).unwrap();
        let cs = corners(&p, 2);
        assert_eq!(cs.iter().map(|c| c.1).collect::<Vec<_>>(), vec![0.5, 1.5, 0.5, 1.5]);
        assert_abs_diff_eq!(k_from_corners(&cs).unwrap(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(cross_ratio([0.0, 1.0, 3.0, f64::INFINITY]), 1.5);
        assert_abs_diff_eq!(cross_ratio([-2.0, -1.0, 1.0, 2.0]), 9.0 / 8.0);
    }

    #[test]
    fn consistency_of_all_examples() {
        for n in 1..=3 {
            let r = example_consistency(n).unwrap();
            assert!(r.alpha_error < 1e-3, "{r:?}");
            assert!((r.k_from_corners - r.k_from_modulus).abs() < 1e-3, "{r:?}");
        }
        let r = example_consistency(1).unwrap();
        assert_abs_diff_eq!(r.k_from_modulus, 2.0, epsilon = 1e-3);
        assert_abs_diff_eq!(r.solved_alpha, 0.5, epsilon = 1e-4);
    }
}
