//! The developing map `f = exp(L)` of a solved quadrilateral.
//!
//! `L(z) = A ∫ₖᶻ φ(ζ) dζ` with
//!
//! ```text
//! φ(ζ) = 1/((ζ − c)(ζ − d)) · √(ζ+1)·√(ζ−k) / (√(ζ−1)·√(ζ+k))
//! ```
//!
//! where every square root is the branch that is analytic in the upper
//! half-plane and continuous onto the real axis from above. The base
//! point `k` is a corner, so `L(k) = 0` and `f(k) = 1`.
//!
//! Paths from `k` stay in the closed upper half-plane: along the real axis
//! with small semicircles over singular points, or up, across and down
//! for interior points.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::accessory::{amp_a, amp_a_second, AccessorySolution, Family};
use crate::quadrature::{integrate_path_anchored, ComplexPath, PathPoint, DEFAULT_TOL};
use crate::{Error, Result};

/// Detour radius as a fraction of the smallest gap between singular points.
const DETOUR_FRACTION: f64 = 0.02;

/// Principal square root, except that the negative real axis is
/// approached from above regardless of the sign of a zero imaginary part.
fn sqrt_uhp(w: Complex64) -> Complex64 {
    if w.im == 0.0 {
        if w.re >= 0.0 {
            Complex64::new(w.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-w.re).sqrt())
        }
    } else {
        w.sqrt()
    }
}

/// A Schwarz–Christoffel logarithm with its poles fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevelopingMap {
    k: f64,
    c: f64,
    d: f64,
    family: Family,
    amplitude: f64,
}

/// `Im L(1)/π` and the angle parameter derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEstimate {
    /// `Im L(1)/π` as computed.
    pub raw: f64,
    /// `raw` reduced into `[0, 1)`.
    pub alpha: f64,
    /// `min(α, 1 − α)`.
    pub orbit: f64,
}

impl DevelopingMap {
    /// The map for corner parameter `k` and pole `c`, with `d = −k/c`.
    pub fn new(k: f64, c: f64, family: Family) -> Result<Self> {
        let amplitude = match family {
            Family::First => amp_a(k, c)?,
            Family::Second => amp_a_second(k, c)?,
        };
        Ok(Self { k, c, d: -k / c, family, amplitude })
    }

    pub fn from_solution(sol: &AccessorySolution) -> Result<Self> {
        Self::new(sol.k(), sol.c, sol.family())
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `A·φ(z)`, the derivative of `L`.
    pub fn integrand(&self, z: Complex64) -> Complex64 {
        self.integrand_at(PathPoint { anchor: z, offset: Complex64::new(0.0, 0.0) })
    }

    fn integrand_at(&self, p: PathPoint) -> Complex64 {
        let k = self.k;
        let at = |s: f64| p.minus(Complex64::new(s, 0.0));
        let root = sqrt_uhp(at(-1.0)) * sqrt_uhp(at(k)) / (sqrt_uhp(at(1.0)) * sqrt_uhp(at(-k)));
        self.amplitude * root / (at(self.c) * at(self.d))
    }

    /// Every real point where the integrand is singular or branches.
    pub fn singular_points(&self) -> [f64; 6] {
        let mut pts = [self.d, -self.k, -1.0, self.c, 1.0, self.k];
        pts.sort_by(f64::total_cmp);
        pts
    }

    fn min_gap(&self) -> f64 {
        self.singular_points().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    fn is_pole(&self, x: f64) -> bool {
        x == self.c || x == self.d
    }

    fn path_to(&self, z: Complex64, allow_corner: bool) -> Result<ComplexPath> {
        let singular: Vec<f64> = self
            .singular_points()
            .into_iter()
            .filter(|&s| s != self.k && !(allow_corner && z.im == 0.0 && z.re == s && !self.is_pole(s)))
            .collect();
        let mut radius = DETOUR_FRACTION * self.min_gap();
        let base = Complex64::new(self.k, 0.0);
        let vertices = if z.im == 0.0 {
            vec![base, z]
        } else {
            let clearance = singular.iter().map(|&s| (z - s).norm()).fold(f64::INFINITY, f64::min);
            radius = radius.min(0.5 * clearance);
            let height = z.im.max(1.0);
            vec![base, Complex64::new(self.k, height), Complex64::new(z.re, height), z]
        };
        ComplexPath::new(vertices, singular)?.with_detour_radius(radius)
    }

    fn eval_path(&self, z: Complex64, allow_corner: bool, tol: f64) -> Result<Complex64> {
        if z == Complex64::new(self.k, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let path = self.path_to(z, allow_corner)?;
        integrate_path_anchored(|p| self.integrand_at(p), &path, tol)
    }

    fn check_point(&self, z: Complex64) -> Result<()> {
        if !(z.im >= 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("z = {z} is not in the closed upper half-plane")));
        }
        Ok(())
    }

    /// `L(z)` for `z` in the closed upper half-plane away from the
    /// singular points.
    pub fn eval(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        self.check_point(z)?;
        if z.im == 0.0 && z.re != self.k && self.singular_points().contains(&z.re) {
            return Err(Error::SingularPoint(format!("L is singular at z = {}", z.re)));
        }
        self.eval_path(z, false, tol)
    }

    /// `L` at a corner `−k`, `−1`, `1` or `k`, where it is finite.
    pub fn eval_corner(&self, corner: f64, tol: f64) -> Result<Complex64> {
        let corners = [-self.k, -1.0, 1.0, self.k];
        if !corners.contains(&corner) {
            return Err(Error::Domain(format!("{corner} is not a corner of this map")));
        }
        self.eval_path(Complex64::new(corner, 0.0), true, tol)
    }

    /// `f(z) = exp(L(z))`.
    pub fn developing_map(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        Ok(self.eval(z, tol)?.exp())
    }

    /// The angle parameter read off from `Im L(1)`.
    pub fn alpha(&self, tol: f64) -> Result<AlphaEstimate> {
        let raw = self.eval_corner(1.0, tol)?.im / PI;
        let alpha = raw.rem_euclid(1.0);
        Ok(AlphaEstimate { raw, alpha, orbit: alpha.min(1.0 - alpha) })
    }
}

/// `L(z)` for a solved quadrilateral.
pub fn l_eval(sol: &AccessorySolution, z: Complex64, tol: f64) -> Result<Complex64> {
    DevelopingMap::from_solution(sol)?.eval(z, tol)
}

/// The angle parameter of a solved quadrilateral.
pub fn extract_alpha(sol: &AccessorySolution) -> Result<AlphaEstimate> {
    DevelopingMap::from_solution(sol)?.alpha(DEFAULT_TOL)
}

/// The three circles the boundary is expected to land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Circle {
    RealLine,
    UnitCircle,
    /// The line through 0 at angle `πα`.
    AlphaLine,
}

const CIRCLES: [Circle; 3] = [Circle::RealLine, Circle::UnitCircle, Circle::AlphaLine];

/// Spherical distances of `w = exp(L)` from the three circles.
///
/// Each distance is half the chordal distance between `w` and its mirror
/// image in the circle; for `L = log r + iθ` these are
/// `|sin θ|/cosh log r`, `|tanh log r|` and `|sin(θ − πα)|/cosh log r`.
pub fn circle_distances(l: Complex64, alpha: f64) -> [f64; 3] {
    let ch = l.re.cosh();
    [l.im.sin().abs() / ch, l.re.tanh().abs(), (l.im - PI * alpha).sin().abs() / ch]
}

/// Boundary samples of one side and the circle they best fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideReport {
    pub name: String,
    /// Largest distance of the side's image from each circle.
    pub max_distance: [f64; 3],
    pub circle: Circle,
    /// Sampled `f` values, in order along the side.
    #[serde(skip)]
    pub images: Vec<Complex64>,
}

/// Where the boundary of the upper half-plane lands under `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryImageReport {
    pub k: f64,
    pub c: f64,
    pub alpha: f64,
    pub samples_per_side: usize,
    /// Sides in order `(−k,−1)`, `(−1,1)`, `(1,k)`, `(k,∞)∪(−∞,−k)`.
    pub sides: Vec<SideReport>,
    /// Indices of the sides assigned to the unit circle.
    pub unit_circle_sides: Vec<usize>,
    /// The unit-circle sides are the two opposite ones.
    pub unit_pair_opposite: bool,
    /// For each pair of circles, the largest distance of a boundary sample
    /// from their union; all three positive means no two circles suffice.
    pub two_circle_margins: [f64; 3],
    pub two_circle_witness: bool,
    /// Largest distance of any side from its assigned circle.
    pub max_defect: f64,
}

/// Margin above which a two-circle margin counts as a witness.
pub const TWO_CIRCLE_MARGIN: f64 = 1e-2;

fn side_points(k: f64, side: usize, n: usize) -> Vec<f64> {
    let t = |i: usize| (i as f64 + 0.5) / n as f64;
    match side {
        0 => (0..n).map(|i| -k + (k - 1.0) * t(i)).collect(),
        1 => (0..n).map(|i| -1.0 + 2.0 * t(i)).collect(),
        2 => (0..n).map(|i| 1.0 + (k - 1.0) * t(i)).collect(),
        // x = ±1/u with u ∈ (0, 1/k), through ∞ from +∞ to −∞
        _ => {
            let half = n.div_ceil(2);
            let u = |i: usize| (i as f64 + 0.5) / (half as f64 * k);
            let right = (0..half).rev().map(|i| 1.0 / u(i));
            let left = (0..n - half).map(|i| -1.0 / u(i));
            right.chain(left).collect()
        }
    }
}

const SIDE_NAMES: [&str; 4] = ["(-k,-1)", "(-1,1)", "(1,k)", "(k,inf)+(-inf,-k)"];

/// Samples every side of the quadrilateral and measures how far its image
/// lies from the real line, the unit circle and the line at angle `πα`.
pub fn boundary_check(sol: &AccessorySolution, samples: usize, tol: f64) -> Result<BoundaryImageReport> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample per side".into()));
    }
    if sol.family() != Family::First {
        return Err(Error::Domain(
            "boundary images are only defined for the first family: the second-family logarithm has residue i at c"
                .into(),
        ));
    }
    let map = DevelopingMap::from_solution(sol)?;
    let alpha = sol.alpha;
    let c = sol.c;
    let mut sides = Vec::with_capacity(4);
    let mut margins = [0.0_f64; 3];
    for (side, name) in SIDE_NAMES.iter().enumerate() {
        let mut max_distance = [0.0_f64; 3];
        let mut images = Vec::with_capacity(samples);
        for x in side_points(sol.k(), side, samples) {
            // stay off the removable-looking pole at c
            let x = if (x - c).abs() < 1e-9 { x + 2e-9 } else { x };
            let l = map.eval(Complex64::new(x, 0.0), tol)?;
            let dist = circle_distances(l, alpha);
            for i in 0..3 {
                max_distance[i] = max_distance[i].max(dist[i]);
            }
            for (m, (i, j)) in margins.iter_mut().zip([(0, 1), (0, 2), (1, 2)]) {
                *m = m.max(dist[i].min(dist[j]));
            }
            images.push(l.exp());
        }
        let best = (0..3).min_by(|&a, &b| max_distance[a].total_cmp(&max_distance[b])).expect("three circles");
        sides.push(SideReport { name: (*name).to_string(), max_distance, circle: CIRCLES[best], images });
    }
    let unit_circle_sides: Vec<usize> =
        sides.iter().enumerate().filter(|(_, s)| s.circle == Circle::UnitCircle).map(|(i, _)| i).collect();
    let unit_pair_opposite = matches!(unit_circle_sides.as_slice(), [a, b] if b - a == 2);
    let max_defect = sides
        .iter()
        .map(|s| s.max_distance[CIRCLES.iter().position(|&c| c == s.circle).expect("known circle")])
        .fold(0.0, f64::max);
    Ok(BoundaryImageReport {
        k: sol.k(),
        c,
        alpha,
        samples_per_side: samples,
        sides,
        unit_circle_sides,
        unit_pair_opposite,
        two_circle_margins: margins,
        two_circle_witness: margins.iter().all(|&m| m > TWO_CIRCLE_MARGIN),
        max_defect,
    })
}
