//! Adaptive Gauss–Kronrod quadrature.
//!
//! Two entry points matter for the rest of the crate:
//!
//! - [`integrate_singular`] integrates `f(x)·(x−a)^p·(b−x)^q` over `(a, b)`.
//!   Each half of the interval is pulled back through `x = a + h·u²`
//!   (mirrored at `b`), which turns half-integer endpoint powers into
//!   smooth integrands before the adaptive 21-point Kronrod rule runs.
//! - [`integrate_path`] integrates an analytic function along a polyline in
//!   the closed upper half-plane, replacing the stretch of any real segment
//!   that crosses a listed singularity by a small semicircle above it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum number of panels an adaptive run may create.
pub const PANEL_BUDGET: usize = 2000;

// 21-point Kronrod abscissae (nonnegative half) and weights; the odd
// entries double as the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_980_222,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Values the adaptive engine can sum: real or complex.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// An integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub err_est: f64,
    pub panels: usize,
}

/// Exponents of the algebraic endpoint factors `(x−a)^p (b−x)^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointExponents {
    p: f64,
    q: f64,
}

impl EndpointExponents {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p > -1.0 && q > -1.0 {
            Ok(Self { p, q })
        } else {
            Err(Error::Domain(format!("endpoint exponents ({p}, {q}) must exceed -1")))
        }
    }

    pub const fn smooth() -> Self {
        Self { p: 0.0, q: 0.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// A sample point handed to integrands by [`integrate_singular_offsets`]:
/// the abscissa together with its distances to both endpoints, computed
/// without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn kronrod21<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut resabs = fc.magnitude() * WGK[10];
    let mut values = [(T::default(), T::default()); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for (j, &(f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).magnitude() + (f2 - mean).magnitude());
    }
    let scale = half.abs();
    let err = rescale_error(((kronrod - gauss) * half).magnitude(), resabs * scale, resasc * scale);
    (kronrod * half, err)
}

/// Globally adaptive Kronrod integration over the union of `intervals`.
///
/// The worst panel is bisected until the summed error estimate drops
/// below `tol` (or below the roundoff floor of the running total).
pub fn adaptive<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    intervals: &[(f64, f64)],
    tol: f64,
) -> Result<QuadResult<T>> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel<T>> = Vec::new();
    for &(a, b) in intervals {
        let (value, err) = kronrod21(&mut f, a, b);
        if !value.magnitude().is_finite() {
            return Err(Error::Divergence(format!("integrand is not finite on [{a}, {b}]")));
        }
        heap.push(Panel { a, b, value, err });
    }
    let mut panels = heap.len();
    let mut total = heap.iter().fold(T::default(), |v, p: &Panel<T>| v + p.value);
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    loop {
        let floor = 50.0 * f64::EPSILON * total.magnitude();
        if err <= tol.max(floor) {
            return Ok(QuadResult { value: sum_in_order(heap, done), err_est: err, panels });
        }
        let worst = match heap.pop() {
            Some(p) if panels < PANEL_BUDGET => p,
            _ => return Err(Error::Accuracy { best: total.magnitude(), err_est: err, panels }),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Nothing left to gain from this panel; freeze it.
            done.push(worst);
            continue;
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        if !(v1 + v2).magnitude().is_finite() {
            return Err(Error::Divergence(format!("integrand is not finite on [{}, {}]", worst.a, worst.b)));
        }
        total = total - worst.value + v1 + v2;
        err = (err - worst.err + e1 + e2).max(0.0);
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        panels += 1;
    }
}

// Left-to-right summation so the result does not depend on heap layout.
fn sum_in_order<T: QuadValue>(heap: BinaryHeap<Panel<T>>, done: Vec<Panel<T>>) -> T {
    let mut all: Vec<Panel<T>> = heap.into_vec();
    all.extend(done);
    all.sort_by(|p, q| p.a.total_cmp(&q.a));
    all.iter().fold(T::default(), |acc, p| acc + p.value)
}

/// Plain adaptive integration of a smooth function over `[a, b]`.
pub fn integrate<T: QuadValue>(f: impl FnMut(f64) -> T, a: f64, b: f64, tol: f64) -> Result<QuadResult<T>> {
    adaptive(f, &[(a, b)], tol)
}

/// Like [`integrate_singular`], but the integrand receives the abscissa
/// together with its exact distances to both endpoints, and the result may
/// be complex.
pub fn integrate_singular_offsets<T: QuadValue>(
    mut f: impl FnMut(Abscissa) -> T,
    a: f64,
    b: f64,
    exps: EndpointExponents,
    tol: f64,
) -> Result<QuadResult<T>> {
    if !(a < b) {
        return Err(Error::Domain(format!("integration interval ({a}, {b}) is empty")));
    }
    let h = 0.5 * (b - a);
    let (p, q) = (exps.p, exps.q);
    let left_scale = 2.0 * h.powf(p + 1.0);
    let right_scale = 2.0 * h.powf(q + 1.0);
    // s ∈ [0, 1]: x = a + h s²;  s ∈ [1, 2]: x = b − h (2 − s)².
    let g = |s: f64| -> T {
        if s <= 1.0 {
            let from_a = h * s * s;
            let to_b = h * (2.0 - s * s);
            let weight = left_scale * s.powf(2.0 * p + 1.0) * to_b.powf(q);
            f(Abscissa { x: a + from_a, from_a, to_b }) * weight
        } else {
            let u = 2.0 - s;
            let to_b = h * u * u;
            let from_a = h * (2.0 - u * u);
            let weight = right_scale * u.powf(2.0 * q + 1.0) * from_a.powf(p);
            f(Abscissa { x: b - to_b, from_a, to_b }) * weight
        }
    };
    adaptive(g, &[(0.0, 1.0), (1.0, 2.0)], tol)
}

/// Integrates `f(x)·(x−a)^p·(b−x)^q` over `(a, b)`.
///
/// `f` should be smooth on the closed interval. For half-integer `p`, `q`
/// the substituted integrand is smooth and the error is at most
/// `max(tol, err_est)`.
pub fn integrate_singular(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    exps: EndpointExponents,
    tol: f64,
) -> Result<QuadResult<f64>> {
    integrate_singular_offsets(|pt| f(pt.x), a, b, exps, tol)
}

/// Integrates `f(z(t))·z'(t)` over `t ∈ [t0, t1]` for an arbitrary smooth curve.
pub fn integrate_curve(
    mut f: impl FnMut(Complex64) -> Complex64,
    z: impl Fn(f64) -> Complex64,
    dz: impl Fn(f64) -> Complex64,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Complex64> {
    Ok(integrate(|t| f(z(t)) * dz(t), t0, t1, tol)?.value)
}

/// One smooth piece of a [`ComplexPath`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// `center + radius·e^{iθ}` for θ from `start` to `end`.
    Arc {
        center: f64,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl PathPiece {
    pub fn start_point(&self) -> Complex64 {
        match *self {
            PathPiece::Segment { from, .. } => from,
            PathPiece::Arc { center, radius, start, .. } => center + Complex64::from_polar(radius, start),
        }
    }

    pub fn end_point(&self) -> Complex64 {
        match *self {
            PathPiece::Segment { to, .. } => to,
            PathPiece::Arc { center, radius, end, .. } => center + Complex64::from_polar(radius, end),
        }
    }
}

/// A polyline in the closed upper half-plane that arcs over listed real
/// singularities.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    vertices: Vec<Complex64>,
    singularities: Vec<f64>,
    detour_radius: f64,
}

impl ComplexPath {
    /// Builds a path with the default detour radius
    /// `min(0.05, half the smallest gap between singularities)`.
    pub fn new(vertices: Vec<Complex64>, mut singularities: Vec<f64>) -> Result<Self> {
        singularities.sort_by(f64::total_cmp);
        singularities.dedup();
        let min_gap = singularities.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let path = Self { vertices, singularities, detour_radius: 0.05_f64.min(0.5 * min_gap) };
        path.validate()?;
        Ok(path)
    }

    pub fn with_detour_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Contract(format!("detour radius {radius} must be positive")));
        }
        self.detour_radius = radius;
        self.validate()?;
        Ok(self)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    pub fn detour_radius(&self) -> f64 {
        self.detour_radius
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.len() < 2 {
            return Err(Error::Contract("a path needs at least two vertices".into()));
        }
        if let Some(v) = self.vertices.iter().find(|v| !(v.im >= 0.0) || !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Contract(format!("vertex {v} is not in the closed upper half-plane")));
        }
        for v in &self.vertices {
            if v.im == 0.0 && self.singularities.contains(&v.re) {
                return Err(Error::Contract(format!("vertex {v} sits on a singularity")));
            }
        }
        self.pieces().map(|_| ())
    }

    /// Resolves the path into straight segments and detour arcs.
    pub fn pieces(&self) -> Result<Vec<PathPiece>> {
        let r = self.detour_radius;
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let (z0, z1) = (w[0], w[1]);
            if z0 == z1 {
                continue;
            }
            if z0.im == 0.0 && z1.im == 0.0 {
                let (x0, x1) = (z0.re, z1.re);
                let rightward = x1 > x0;
                let mut crossed: Vec<f64> =
                    self.singularities.iter().copied().filter(|&s| (s - x0) * (s - x1) < 0.0).collect();
                if !rightward {
                    crossed.reverse();
                }
                let mut cursor = x0;
                for s in crossed {
                    let radius = r.min(0.5 * (s - x0).abs()).min(0.5 * (s - x1).abs());
                    let (before, after, start, end) =
                        if rightward { (s - radius, s + radius, PI, 0.0) } else { (s + radius, s - radius, 0.0, PI) };
                    if before != cursor {
                        out.push(PathPiece::Segment { from: cursor.into(), to: before.into() });
                    }
                    out.push(PathPiece::Arc { center: s, radius, start, end });
                    cursor = after;
                }
                if cursor != x1 {
                    out.push(PathPiece::Segment { from: cursor.into(), to: x1.into() });
                }
            } else {
                for &s in &self.singularities {
                    let d = distance_to_segment(Complex64::new(s, 0.0), z0, z1);
                    if d < r {
                        return Err(Error::Contract(format!(
                            "segment {z0} → {z1} passes within {d:.3e} of singularity {s}"
                        )));
                    }
                }
                out.push(PathPiece::Segment { from: z0, to: z1 });
            }
        }
        Ok(out)
    }
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// A point on a path, written as a nearby anchor (a segment endpoint or an
/// arc centre) plus an exactly known offset, so that integrands can form
/// differences with the anchor without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub anchor: Complex64,
    pub offset: Complex64,
}

impl PathPoint {
    pub fn z(&self) -> Complex64 {
        self.anchor + self.offset
    }

    /// `z − w`, accurate when `w` equals the anchor.
    pub fn minus(&self, w: Complex64) -> Complex64 {
        (self.anchor - w) + self.offset
    }
}

/// Integrates a single path piece.
pub fn integrate_piece(mut f: impl FnMut(Complex64) -> Complex64, piece: &PathPiece, tol: f64) -> Result<Complex64> {
    integrate_piece_anchored(|p| f(p.z()), piece, tol)
}

/// Like [`integrate_piece`], with the integrand receiving a [`PathPoint`].
pub fn integrate_piece_anchored(
    mut f: impl FnMut(PathPoint) -> Complex64,
    piece: &PathPiece,
    tol: f64,
) -> Result<Complex64> {
    match *piece {
        PathPiece::Segment { from, to } => {
            let dz = to - from;
            // Endpoints may be integrable branch points, so both ends get
            // the quadratic pull-back.
            let r = integrate_singular_offsets(
                |t: Abscissa| {
                    let p = if t.from_a <= t.to_b {
                        PathPoint { anchor: from, offset: dz * t.from_a }
                    } else {
                        PathPoint { anchor: to, offset: -dz * t.to_b }
                    };
                    f(p) * dz
                },
                0.0,
                1.0,
                EndpointExponents::smooth(),
                tol,
            )?;
            Ok(r.value)
        }
        PathPiece::Arc { center, radius, start, end } => {
            let anchor = Complex64::new(center, 0.0);
            let r = integrate(
                |t: f64| {
                    let offset = Complex64::from_polar(radius, t);
                    f(PathPoint { anchor, offset }) * Complex64::i() * offset
                },
                start,
                end,
                tol,
            )?;
            Ok(r.value)
        }
    }
}

/// Contour integral of `f` along `path`.
pub fn integrate_path(mut f: impl FnMut(Complex64) -> Complex64, path: &ComplexPath, tol: f64) -> Result<Complex64> {
    integrate_path_anchored(|p| f(p.z()), path, tol)
}

/// Like [`integrate_path`], with the integrand receiving a [`PathPoint`].
pub fn integrate_path_anchored(
    mut f: impl FnMut(PathPoint) -> Complex64,
    path: &ComplexPath,
    tol: f64,
) -> Result<Complex64> {
    let pieces = path.pieces()?;
    let piece_tol = tol / pieces.len().max(1) as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for piece in &pieces {
        total += integrate_piece_anchored(&mut f, piece, piece_tol)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Γ by Lanczos (g = 7, n = 9), independent of the quadrature code.
    fn gamma(x: f64) -> f64 {
        #[allow(clippy::excessive_precision)]
        const G: [f64; 9] = [
            0.999_999_999_999_809_93,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_13,
            -176.615_029_162_140_59,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_571_6e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if x < 0.5 {
            return PI / ((PI * x).sin() * gamma(1.0 - x));
        }
        let x = x - 1.0;
        let t = x + 7.5;
        let s = G[1..].iter().enumerate().fold(G[0], |acc, (i, g)| acc + g / (x + i as f64 + 1.0));
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
    }

    fn beta(a: f64, b: f64) -> f64 {
        gamma(a) * gamma(b) / gamma(a + b)
    }

    #[test]
    fn arcsine_integral() {
        let e = EndpointExponents::new(-0.5, -0.5).unwrap();
        let r = integrate_singular(|_| 1.0, -1.0, 1.0, e, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.value, PI, epsilon = 1e-12);
    }

    #[test]
    fn odd_part_vanishes() {
        let e = EndpointExponents::new(-0.5, -0.5).unwrap();
        let r = integrate_singular(|x| 1.0 + x, -1.0, 1.0, e, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.value, PI, epsilon = 1e-12);
    }

    #[test]
    fn complete_k_at_one_half() {
        let e = EndpointExponents::new(0.0, -0.5).unwrap();
        let r = integrate_singular(|x| 1.0 / ((1.0 + x) * (1.0 - 0.25 * x * x)).sqrt(), 0.0, 1.0, e, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.6857503548, epsilon = 1e-9);
    }

    #[test]
    fn beta_closed_forms() {
        for &p in &[-0.5, 0.5] {
            for &q in &[-0.5, 0.5] {
                let e = EndpointExponents::new(p, q).unwrap();
                let r = integrate_singular(|_| 1.0, -1.0, 1.0, e, DEFAULT_TOL).unwrap();
                let exact = 2f64.powf(p + q + 1.0) * beta(p + 1.0, q + 1.0);
                assert_abs_diff_eq!(r.value, exact, epsilon = DEFAULT_TOL);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EndpointExponents::new(-1.0, 0.0).is_err());
        assert!(integrate_singular(|_| 1.0, 1.0, 1.0, EndpointExponents::smooth(), 1e-10).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        // about 1.6·10⁵ periods cannot be resolved with the panel budget
        let r = integrate(|x: f64| (1e6 * x).sin(), 0.0, 1.0, 1e-12);
        match r {
            Err(Error::Accuracy { best, err_est, panels }) => {
                assert!(best.is_finite() && err_est > 1e-12 && panels >= PANEL_BUDGET);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_integrable_is_divergence() {
        // 1/x on (0,1) after the pull-back is 2/s: not integrable.
        let r = integrate_singular(|x| 1.0 / x, 0.0, 1.0, EndpointExponents::smooth(), 1e-12);
        assert!(matches!(r, Err(Error::Divergence(_)) | Err(Error::Accuracy { .. })), "{r:?}");
    }

    #[test]
    fn split_is_additive() {
        let e = EndpointExponents::new(0.5, -0.5).unwrap();
        let f = |x: f64| (2.0 + x).cos();
        let whole = integrate_singular(f, -1.0, 1.0, e, DEFAULT_TOL).unwrap().value;
        // Split at 0.3: (x+1)^½ stays singular on the left, (1−x)^−½ on the right.
        let left = integrate_singular(
            |x| f(x) * (1.0 - x).powf(-0.5),
            -1.0,
            0.3,
            EndpointExponents::new(0.5, 0.0).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap()
        .value;
        let right = integrate_singular(
            |x| f(x) * (1.0 + x).sqrt(),
            0.3,
            1.0,
            EndpointExponents::new(0.0, -0.5).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap()
        .value;
        assert_abs_diff_eq!(whole, left + right, epsilon = 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn constant_integrand_on_paths() {
        let path = ComplexPath::new(vec![c(2.0, 0.0), c(-3.0, 0.0), c(-3.0, 2.0)], vec![-1.0, 0.5, 1.0]).unwrap();
        let v = integrate_path(|_| c(1.0, 0.0), &path, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(v.re, -3.0 - 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn half_residue_over_origin() {
        let piece = PathPiece::Arc { center: 0.0, radius: 0.3, start: 0.0, end: PI };
        let v = integrate_piece(|z| 1.0 / z, &piece, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = DEFAULT_TOL);
        assert_abs_diff_eq!(v.im, PI, epsilon = DEFAULT_TOL);
        // The same thing through a real path that detours over 0.
        let path = ComplexPath::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![0.0]).unwrap();
        let v = integrate_path(|z| 1.0 / z, &path, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(v.im, PI, epsilon = DEFAULT_TOL);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = DEFAULT_TOL);
    }

    #[test]
    fn log_difference_matches_closed_form() {
        let (z0, z1, pole) = (c(1.0, 0.5), c(-1.0, 0.5), 0.3);
        let path = ComplexPath::new(vec![z0, z1], vec![pole]).unwrap();
        let v = integrate_path(|z| 1.0 / (z - pole), &path, DEFAULT_TOL).unwrap();
        let exact = ((z1 - pole) / (z0 - pole)).ln();
        assert_abs_diff_eq!(v.re, exact.re, epsilon = DEFAULT_TOL);
        assert_abs_diff_eq!(v.im, exact.im, epsilon = DEFAULT_TOL);
    }

    #[test]
    fn path_contracts() {
        assert!(matches!(ComplexPath::new(vec![c(0.0, 0.0), c(1.0, -0.1)], vec![]), Err(Error::Contract(_))));
        assert!(matches!(ComplexPath::new(vec![c(-1.0, 0.01), c(1.0, 0.01)], vec![0.0]), Err(Error::Contract(_))));
        assert!(matches!(ComplexPath::new(vec![c(0.5, 0.0), c(1.0, 1.0)], vec![0.5]), Err(Error::Contract(_))));
        let p = ComplexPath::new(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![0.0, 0.04]).unwrap();
        assert_abs_diff_eq!(p.detour_radius(), 0.02);
        assert!(p.with_detour_radius(-1.0).is_err());
    }

    #[test]
    fn detour_pieces_are_continuous() {
        let path =
            ComplexPath::new(vec![c(3.0, 0.0), c(-3.0, 0.0), c(-3.0, 1.0), c(2.0, 1.0)], vec![-2.0, -1.0, 0.5, 1.0])
                .unwrap();
        let pieces = path.pieces().unwrap();
        for w in pieces.windows(2) {
            assert!((w[0].end_point() - w[1].start_point()).norm() < 1e-14);
        }
        for p in &pieces {
            if let PathPiece::Arc { radius, .. } = p {
                assert!(*radius <= path.detour_radius());
            }
        }
    }

    #[test]
    fn path_independence_for_entire_function() {
        let f = |z: Complex64| (z * z).exp();
        let (a, b) = (c(2.0, 0.0), c(-1.5, 0.7));
        let p1 = ComplexPath::new(vec![a, b], vec![]).unwrap();
        let p2 = ComplexPath::new(vec![a, c(2.0, 2.0), c(-1.5, 2.0), b], vec![]).unwrap();
        let v1 = integrate_path(f, &p1, DEFAULT_TOL).unwrap();
        let v2 = integrate_path(f, &p2, DEFAULT_TOL).unwrap();
        assert!((v1 - v2).norm() <= 2.0 * DEFAULT_TOL, "{v1} vs {v2}");
    }
}
