//! Real polynomials in double-double precision and their complex roots.
//!
//! Roots are first located in `f64` by the Aberth–Ehrlich iteration. Roots
//! of multiplicity `m` split into a cluster of `m` nearby approximations; each
//! cluster is collapsed to its mean and polished by Newton's method on the
//! `(m−1)`-th derivative, where the root is simple, in double-double.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::{Error, Result};

pub(crate) type Dd = TwoFloat;
pub(crate) type CDd = Complex<TwoFloat>;

pub(crate) fn dd(x: f64) -> Dd {
    TwoFloat::from(x)
}

pub(crate) fn cdd(z: Complex64) -> CDd {
    Complex::new(dd(z.re), dd(z.im))
}

pub(crate) fn to_c64(z: CDd) -> Complex64 {
    Complex64::new(z.re.hi(), z.im.hi())
}

pub(crate) fn cabs(z: CDd) -> Dd {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Coefficients below this fraction of the largest one count as zero when
/// trimming the leading end.
const TRIM_RELATIVE: f64 = 1e-26;

/// A polynomial with real double-double coefficients, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    coeffs: Vec<Dd>,
}

impl Poly {
    pub fn new(coeffs: Vec<Dd>) -> Self {
        let mut p = Self { coeffs };
        while p.coeffs.len() > 1 && p.coeffs.last().is_some_and(|c| *c == dd(0.0)) {
            p.coeffs.pop();
        }
        if p.coeffs.is_empty() {
            p.coeffs.push(dd(0.0));
        }
        p
    }

    pub fn constant(c: Dd) -> Self {
        Self::new(vec![c])
    }

    /// `z − r`.
    pub fn linear(r: Dd) -> Self {
        Self::new(vec![-r, dd(1.0)])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| dd(c as f64)).collect())
    }

    pub fn coeffs(&self) -> &[Dd] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == dd(0.0)
    }

    pub fn leading(&self) -> Dd {
        *self.coeffs.last().expect("nonempty")
    }

    /// Drops leading coefficients that are negligible against the largest.
    pub fn trimmed(&self) -> Self {
        let scale = self.coeffs.iter().map(|c| c.abs()).fold(dd(0.0), |a, b| if b > a { b } else { a });
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= scale * TRIM_RELATIVE) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    pub fn eval(&self, z: CDd) -> CDd {
        self.coeffs.iter().rev().fold(Complex::new(dd(0.0), dd(0.0)), |acc, &c| acc * z + Complex::new(c, dd(0.0)))
    }

    /// `Σ |cᵢ| |z|ⁱ`, the natural scale for `|p(z)|`.
    pub fn eval_abs(&self, z: CDd) -> Dd {
        let r = cabs(z);
        self.coeffs.iter().rev().fold(dd(0.0), |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(dd(0.0));
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * (i as f64)).collect())
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![dd(0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(dd(1.0)), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: Dd) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or(dd(0.0));
        Self::new((0..n).map(|i| at(self, i) + at(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(dd(-1.0)))
    }
}

/// Eigenvalues closer than this (relative to their size, at least 1) are
/// treated as one multiple root.
const CLUSTER_RADIUS: f64 = 1e-3;
const NEWTON_STEPS: usize = 60;

/// A root and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub z: CDd,
    pub multiplicity: usize,
}

const ABERTH_MAX_ITERATIONS: usize = 2000;

/// Approximate roots in `f64` by the Aberth–Ehrlich simultaneous iteration.
fn approximate_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.leading();
    let monic: Vec<f64> = p.coeffs().iter().map(|&c| (c / lead).hi()).collect();
    let dmonic: Vec<f64> = monic.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect();
    let horner = |c: &[f64], z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    // Cauchy bound on the root moduli
    let radius = 1.0 + monic[..n].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..ABERTH_MAX_ITERATIONS {
        let mut converged = true;
        for i in 0..n {
            let pv = horner(&monic, z[i]);
            if pv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / horner(&dmonic, z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() > 1e-15 * z[i].norm().max(1e-300) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    if z.iter().any(|w| !w.is_finite()) {
        return Err(Error::Accuracy { best: f64::NAN, err_est: f64::INFINITY, panels: ABERTH_MAX_ITERATIONS });
    }
    Ok(z)
}

fn cluster(points: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    'outer: for &z in points {
        for g in groups.iter_mut() {
            if g.iter().any(|&w| (z - w).norm() <= CLUSTER_RADIUS * z.norm().max(w.norm()).max(1.0)) {
                g.push(z);
                continue 'outer;
            }
        }
        groups.push(vec![z]);
    }
    // merge groups that became connected through later members
    let mut merged = true;
    while merged {
        merged = false;
        'scan: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let close = groups[i].iter().any(|&a| {
                    groups[j].iter().any(|&b| (a - b).norm() <= CLUSTER_RADIUS * a.norm().max(b.norm()).max(1.0))
                });
                if close {
                    let g = groups.remove(j);
                    groups[i].extend(g);
                    merged = true;
                    break 'scan;
                }
            }
        }
    }
    groups
}

fn newton(p: &Poly, dp: &Poly, mut z: CDd) -> CDd {
    for _ in 0..NEWTON_STEPS {
        let d = dp.eval(z);
        if d.re == dd(0.0) && d.im == dd(0.0) {
            break;
        }
        let step = p.eval(z) / d;
        z -= step;
        if cabs(step) <= cabs(z).max(dd(1.0)) * 1e-31 {
            break;
        }
    }
    z
}

/// All complex roots with multiplicities, summing to the degree.
pub(crate) fn roots(p: &Poly) -> Result<Vec<Root>> {
    let p = p.trimmed();
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has no isolated roots".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let eig = approximate_roots(&p)?;
    let mut out = Vec::new();
    for group in cluster(&eig) {
        let m = group.len();
        let mean = group.iter().sum::<Complex64>() / m as f64;
        let target = p.nth_derivative(m - 1);
        let slope = target.derivative();
        let z = newton(&target, &slope, cdd(mean));
        let moved = to_c64(z) - mean;
        if moved.norm() > CLUSTER_RADIUS * mean.norm().max(1.0) {
            return Err(Error::Accuracy { best: mean.norm(), err_est: moved.norm(), panels: 0 });
        }
        out.push(Root { z, multiplicity: m });
    }
    out.sort_by(|a, b| a.z.re.hi().total_cmp(&b.z.re.hi()).then(a.z.im.hi().total_cmp(&b.z.im.hi())));
    Ok(out)
}
