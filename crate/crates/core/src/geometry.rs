//! Planar geometry: points, the sampling square, axis-aligned rectangles and
//! the rigid "strip frame" in which a vertex pair `u`, `v` sits at `(0, 0)`
//! and `(t, 0)`.
//!
//! Geometric comparisons use the absolute tolerance [`GEOM_TOL`]. Edge
//! membership elsewhere in the crate compares squared distances exactly and
//! never goes through a square root.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance for geometric containment tests, in square units.
pub const GEOM_TOL: f64 = 1e-9;

/// Multiple of the strip width trimmed from each end of a fitted strip.
pub const INNER_MARGIN_FACTOR: f64 = 1.01;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Squared Euclidean distance. This is the quantity every edge test uses.
#[inline]
pub fn dist_sq(p: Point, q: Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

#[inline]
pub fn euclid_dist(p: Point, q: Point) -> f64 {
    dist_sq(p, q).sqrt()
}

/// The square `[-√n/2, √n/2]²` of area `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Square {
    area: f64,
}

impl Square {
    pub fn new(area: f64) -> Result<Self> {
        if !(area.is_finite() && area > 0.0) {
            return Err(invalid("n", format!("square area must be positive, got {area}")));
        }
        Ok(Square { area })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn half_side(&self) -> f64 {
        self.area.sqrt() / 2.0
    }

    pub fn side(&self) -> f64 {
        self.area.sqrt()
    }

    /// Exact membership test.
    pub fn contains(&self, p: Point) -> bool {
        let h = self.half_side();
        p.x.abs() <= h && p.y.abs() <= h
    }

    pub fn contains_with_tol(&self, p: Point, tol: f64) -> bool {
        let h = self.half_side() + tol;
        p.x.abs() <= h && p.y.abs() <= h
    }

    pub fn center(&self) -> Point {
        Point::ORIGIN
    }

    /// Corners in the order bottom-left, bottom-right, top-left, top-right.
    pub fn corners(&self) -> [Point; 4] {
        let h = self.half_side();
        [
            Point::new(-h, -h),
            Point::new(h, -h),
            Point::new(-h, h),
            Point::new(h, h),
        ]
    }

    pub(crate) fn check(&self, name: &'static str, p: Point) -> Result<()> {
        if !p.is_finite() {
            return Err(invalid(name, "coordinates must be finite"));
        }
        if !self.contains_with_tol(p, GEOM_TOL) {
            return Err(Error::OutOfDomain {
                x: p.x,
                y: p.y,
                n: self.area,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rectangle {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min <= x_max && y_min <= y_max) {
            return Err(invalid(
                "rectangle",
                format!("degenerate bounds [{x_min}, {x_max}] x [{y_min}, {y_max}]"),
            ));
        }
        Ok(Rectangle {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_min, self.y_min),
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_min, self.y_max),
            Point::new(self.x_max, self.y_max),
        ]
    }

    /// True iff the open x-intervals overlap.
    pub fn x_overlaps(&self, other: &Rectangle) -> bool {
        self.x_min < other.x_max && other.x_min < self.x_max
    }
}

/// Width `ρ = r − α²/r` of a rectangle `[s, s+ρ] × [0, α]` whose points are
/// pairwise within distance `r`.
pub fn rect_connectivity_width(r: f64, alpha: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid("r", format!("radius must be positive, got {r}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(invalid("alpha", format!("must be non-negative, got {alpha}")));
    }
    if alpha > r {
        return Err(invalid("alpha", format!("{alpha} exceeds the radius {r}")));
    }
    Ok(r - alpha * alpha / r)
}

/// `t ≥ kr − 2α²/(kr)`: when it holds every `u`–`v` path with at most `k`
/// edges stays within `|y| ≤ α` of the axis through `u = (0,0)`, `v = (t,0)`.
pub fn strip_precondition(t: f64, k: u32, r: f64, alpha: f64) -> bool {
    let kr = f64::from(k) * r;
    t >= kr - 2.0 * alpha * alpha / kr
}

/// Which side of the directed segment `u → v` a one-sided strip occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StripSide {
    /// `R⁺`, to the left of `u → v`.
    Left,
    /// `R⁻`, to the right of `u → v`.
    Right,
}

impl StripSide {
    fn sign(self) -> f64 {
        match self {
            StripSide::Left => 1.0,
            StripSide::Right => -1.0,
        }
    }

    pub fn other(self) -> StripSide {
        match self {
            StripSide::Left => StripSide::Right,
            StripSide::Right => StripSide::Left,
        }
    }
}

/// A rigid placement of the strip frame: strip coordinates `(s, w)` map to
/// `origin + s·e₁ + w·e₂` where `e₁` points from `u` to `v` and `e₂` is the
/// unit normal towards `side`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripPlacement {
    /// Angle of `u → v` against the horizontal axis, in `(-π, π]`.
    pub angle: f64,
    pub side: StripSide,
    pub origin: Point,
    /// `t = d_E(u, v)`.
    pub length: f64,
    pub alpha: f64,
    pub inner_margin: f64,
    #[serde(skip)]
    axis: Point,
}

impl StripPlacement {
    /// Frame for the pair `u`, `v` with the strip on the left and no trimming.
    /// Two-sided strips (`|w| ≤ α`) use this directly.
    pub fn between(u: Point, v: Point, alpha: f64) -> Result<Self> {
        Self::with_side(u, v, alpha, StripSide::Left, 0.0)
    }

    fn with_side(u: Point, v: Point, alpha: f64, side: StripSide, margin: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) {
            return Err(invalid("u/v", "coordinates must be finite"));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(invalid("alpha", format!("must be non-negative, got {alpha}")));
        }
        let d = v - u;
        let length = d.norm();
        if length == 0.0 {
            return Err(invalid("u/v", "endpoints coincide"));
        }
        Ok(StripPlacement {
            angle: d.y.atan2(d.x),
            side,
            origin: u,
            length,
            alpha,
            inner_margin: margin,
            axis: d.scale(1.0 / length),
        })
    }

    pub fn axis(&self) -> Point {
        self.axis
    }

    pub fn normal(&self) -> Point {
        self.axis.perp().scale(self.side.sign())
    }

    pub fn to_strip_frame(&self, p: Point) -> Point {
        let d = p - self.origin;
        Point::new(d.dot(self.axis), d.dot(self.normal()))
    }

    pub fn from_strip_frame(&self, p: Point) -> Point {
        self.origin + self.axis.scale(p.x) + self.normal().scale(p.y)
    }

    /// `[m, t − m] × [0, α]` in strip coordinates, `m` the inner margin.
    pub fn inner_rectangle(&self) -> Rectangle {
        Rectangle {
            x_min: self.inner_margin,
            x_max: (self.length - self.inner_margin).max(self.inner_margin),
            y_min: 0.0,
            y_max: self.alpha,
        }
    }

    pub fn inner_corners(&self) -> [Point; 4] {
        self.inner_rectangle()
            .corners()
            .map(|c| self.from_strip_frame(c))
    }

    /// Four-corner containment of the mapped inner rectangle. The square and
    /// the rectangle are both convex, so this decides full containment.
    pub fn inner_fits(&self, square: &Square) -> bool {
        self.inner_corners()
            .iter()
            .all(|&c| square.contains_with_tol(c, GEOM_TOL))
    }
}

/// An element of the symmetry group of the square: optional reflections of
/// each axis followed by an optional swap of the axes.
#[derive(Clone, Copy, Debug, Default)]
struct Symmetry {
    flip_x: bool,
    flip_y: bool,
    swap: bool,
}

impl Symmetry {
    fn apply(self, p: Point) -> Point {
        let x = if self.flip_x { -p.x } else { p.x };
        let y = if self.flip_y { -p.y } else { p.y };
        if self.swap {
            Point::new(y, x)
        } else {
            Point::new(x, y)
        }
    }

    fn invert(self, p: Point) -> Point {
        let (x, y) = if self.swap { (p.y, p.x) } else { (p.x, p.y) };
        Point::new(
            if self.flip_x { -x } else { x },
            if self.flip_y { -y } else { y },
        )
    }

    /// The symmetry taking `v − u` into the sector `0 ≤ y ≤ x`.
    fn canonicalizing(d: Point) -> Symmetry {
        let flip_x = d.x < 0.0;
        let flip_y = d.y < 0.0;
        let (ax, ay) = (d.x.abs(), d.y.abs());
        Symmetry {
            flip_x,
            flip_y,
            swap: ay > ax,
        }
    }
}

/// Extend the segment `u → v` in both directions to the boundary of the square.
fn extend_to_boundary(u: Point, v: Point, half: f64) -> (Point, Point) {
    let d = v - u;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (p, dp) in [(u.x, d.x), (u.y, d.y)] {
        if dp != 0.0 {
            let a = (-half - p) / dp;
            let b = (half - p) / dp;
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    let lo = lo.min(0.0);
    let hi = hi.max(1.0);
    (u + d.scale(lo), u + d.scale(hi))
}

/// Side choice for a canonical pair (`x_u < x_v`, `y_u ≤ y_v`, angle in
/// `[0, π/4]`) by the safe-triangle rule. A corner triangle is safe when its
/// side parallel to `uv` is at most `1.01α`; `T_u⁺` and `T_v⁻` always are.
fn canonical_side(u: Point, v: Point, alpha: f64, half: f64) -> Option<StripSide> {
    let d = v - u;
    let tan = d.y / d.x;
    // |t_v⁺| = |t_u⁻| = α / tan β
    let long_triangles_safe = tan > 0.0 && alpha <= INNER_MARGIN_FACTOR * alpha * tan;
    let (eu, ev) = extend_to_boundary(u, v, half);
    if long_triangles_safe || ev.y <= half - alpha {
        Some(StripSide::Left)
    } else if eu.y >= -half + alpha {
        Some(StripSide::Right)
    } else {
        None
    }
}

/// Place the one-sided strip of width `α` along `u → v` so that its inner
/// rectangle `[1.01α, t − 1.01α] × [0, α]` lies inside the square of area `n`.
pub fn fit_strip(u: Point, v: Point, alpha: f64, n: f64) -> Result<StripPlacement> {
    let square = Square::new(n)?;
    square.check("u", u)?;
    square.check("v", v)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let t = euclid_dist(u, v);
    let margin = INNER_MARGIN_FACTOR * alpha;
    if !(2.0 * margin < t) {
        return Err(invalid(
            "alpha",
            format!("strip margin 2·{margin} is not below the pair distance {t}"),
        ));
    }

    let sym = Symmetry::canonicalizing(v - u);
    let (cu, cv) = (sym.apply(u), sym.apply(v));
    let preferred = canonical_side(cu, cv, alpha, square.half_side()).map(|side| {
        // Carry the canonical normal back and read off its orientation.
        let axis = (cv - cu).scale(1.0 / t);
        let normal = axis.perp().scale(side.sign());
        let world_axis = sym.invert(axis);
        let world_normal = sym.invert(normal);
        if world_axis.cross(world_normal) > 0.0 {
            StripSide::Left
        } else {
            StripSide::Right
        }
    });

    let order = match preferred {
        Some(side) => [side, side.other()],
        None => [StripSide::Left, StripSide::Right],
    };
    for side in order {
        let placement = StripPlacement::with_side(u, v, alpha, side, margin)?;
        if placement.inner_fits(&square) {
            return Ok(placement);
        }
    }
    Err(Error::Infeasible(format!(
        "no side of ({}, {}) -> ({}, {}) admits a {alpha}-wide strip inside the square of area {n}",
        u.x, u.y, v.x, v.y
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Double-double arithmetic, used only as an extended-precision oracle.
    mod dd {
        #[derive(Clone, Copy)]
        pub struct Dd(pub f64, pub f64);

        fn two_sum(a: f64, b: f64) -> Dd {
            let s = a + b;
            let bb = s - a;
            let e = (a - (s - bb)) + (b - bb);
            Dd(s, e)
        }

        fn two_prod(a: f64, b: f64) -> Dd {
            let p = a * b;
            Dd(p, a.mul_add(b, -p))
        }

        pub fn sub(a: f64, b: f64) -> Dd {
            two_sum(a, -b)
        }

        pub fn add(a: Dd, b: Dd) -> Dd {
            let s = two_sum(a.0, b.0);
            let e = s.1 + a.1 + b.1;
            two_sum(s.0, e)
        }

        pub fn sq(a: Dd) -> Dd {
            let p = two_prod(a.0, a.0);
            let e = p.1 + 2.0 * a.0 * a.1;
            two_sum(p.0, e)
        }

        pub fn sqrt(a: Dd) -> f64 {
            if a.0 <= 0.0 {
                return 0.0;
            }
            // One Newton step from the double estimate.
            let x = a.0.sqrt();
            let xx = two_prod(x, x);
            let resid = (a.0 - xx.0 - xx.1) + a.1;
            x + resid / (2.0 * x)
        }
    }

    #[test]
    fn pythagorean_triple() {
        assert_eq!(euclid_dist(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        let p = Point::new(1.25, -7.5);
        assert_eq!(euclid_dist(p, p), 0.0);
    }

    #[test]
    fn distance_matches_extended_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let p = Point::new(rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0));
            let q = Point::new(rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0));
            let exact = dd::sqrt(dd::add(dd::sq(dd::sub(p.x, q.x)), dd::sq(dd::sub(p.y, q.y))));
            let got = euclid_dist(p, q);
            assert!((got - exact).abs() <= 1e-12 * exact, "{got} vs {exact}");
            assert_eq!(got, euclid_dist(q, p));
        }
    }

    #[test]
    fn connectivity_width_examples() {
        assert_eq!(rect_connectivity_width(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(rect_connectivity_width(10.0, 5.0).unwrap(), 7.5);
        assert_eq!(rect_connectivity_width(1.0, 1.0).unwrap(), 0.0);
        assert!(rect_connectivity_width(1.0, 1.5).is_err());
        assert!(rect_connectivity_width(0.0, 0.0).is_err());
        assert!(rect_connectivity_width(-1.0, 0.0).is_err());
    }

    #[test]
    fn strip_precondition_examples() {
        assert!(strip_precondition(10.0, 2, 5.0, 1.0));
        assert!(!strip_precondition(9.0, 2, 5.0, 1.0));
        for alpha in [1e-6, 0.3, 2.0, 40.0] {
            assert!(strip_precondition(12.0, 3, 4.0, alpha));
        }
    }

    #[test]
    fn horizontal_pair_takes_left_side() {
        let u = Point::new(-10.0, 0.0);
        let v = Point::new(10.0, 0.0);
        let p = fit_strip(u, v, 1.0, 1e4).unwrap();
        assert_eq!(p.angle, 0.0);
        assert_eq!(p.side, StripSide::Left);
        assert!(p.inner_fits(&Square::new(1e4).unwrap()));
        let inner = p.inner_rectangle();
        assert!((inner.x_min - 1.01).abs() < 1e-12 && (inner.x_max - 18.99).abs() < 1e-12);
    }

    #[test]
    fn pair_near_top_edge_goes_below() {
        let u = Point::new(-10.0, 49.0);
        let v = Point::new(10.0, 49.0);
        let p = fit_strip(u, v, 2.0, 1e4).unwrap();
        assert_eq!(p.side, StripSide::Right);
        for c in p.inner_corners() {
            assert!(c.y <= 49.0 + 1e-12 && c.y >= 47.0 - 1e-12);
            assert!(c.x.abs() <= 50.0 && c.y.abs() <= 50.0);
        }
    }

    #[test]
    fn diagonal_pair_fits() {
        let sq = Square::new(1e4).unwrap();
        let u = Point::new(-50.0, -50.0);
        let v = Point::new(50.0, 50.0);
        let p = fit_strip(u, v, 0.5, 1e4).unwrap();
        assert!((p.angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(p.inner_fits(&sq));
        // Reverse direction and the anti-diagonal exercise the reflections.
        for (a, b) in [(v, u), (Point::new(-50.0, 50.0), Point::new(50.0, -50.0))] {
            let p = fit_strip(a, b, 0.5, 1e4).unwrap();
            assert!(p.inner_fits(&sq));
        }
    }

    #[test]
    fn fit_strip_rejects_bad_input() {
        let u = Point::new(0.0, 0.0);
        assert!(fit_strip(u, Point::new(1.0, 0.0), 0.5, 100.0).is_err());
        assert!(fit_strip(u, Point::new(60.0, 0.0), 0.5, 100.0).is_err());
        assert!(fit_strip(u, u, 0.1, 100.0).is_err());
        assert!(fit_strip(u, Point::new(1.0, 0.0), -0.1, 100.0).is_err());
    }

    #[test]
    fn frame_sends_pair_to_axis() {
        let u = Point::new(3.0, -2.0);
        let v = Point::new(-4.0, 7.5);
        for side in [StripSide::Left, StripSide::Right] {
            let p = StripPlacement::with_side(u, v, 1.0, side, 0.0).unwrap();
            let fu = p.to_strip_frame(u);
            let fv = p.to_strip_frame(v);
            assert!(fu.norm() < 1e-12);
            assert!((fv.x - euclid_dist(u, v)).abs() < 1e-12 && fv.y.abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_extremal_corner_pair() {
        for (r, alpha) in [(1.0, 0.0), (1.0, 0.5), (3.0, 2.9), (260.0, 40.0)] {
            let rho = rect_connectivity_width(r, alpha).unwrap();
            let d = euclid_dist(Point::new(0.0, alpha), Point::new(rho, 0.0));
            assert!(d <= r + GEOM_TOL);
        }
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1e3..1e3f64
    }

    proptest! {
        #[test]
        fn frame_transforms_are_inverse_isometries(
            ux in coord(), uy in coord(), vx in coord(), vy in coord(),
            px in coord(), py in coord(), qx in coord(), qy in coord(),
            right in any::<bool>(),
        ) {
            let u = Point::new(ux, uy);
            let v = Point::new(vx, vy);
            prop_assume!(euclid_dist(u, v) > 1e-6);
            let side = if right { StripSide::Right } else { StripSide::Left };
            let pl = StripPlacement::with_side(u, v, 1.0, side, 0.0).unwrap();
            let p = Point::new(px, py);
            let q = Point::new(qx, qy);
            let back = pl.from_strip_frame(pl.to_strip_frame(p));
            prop_assert!((back - p).norm() <= 1e-9);
            let d0 = euclid_dist(p, q);
            let d1 = euclid_dist(pl.to_strip_frame(p), pl.to_strip_frame(q));
            prop_assert!((d0 - d1).abs() <= 1e-9);
        }

        #[test]
        fn rectangle_points_are_pairwise_close(
            r in 1e-3..1e3f64, frac in 0.0..=1.0f64,
            a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64, d in 0.0..=1.0f64,
        ) {
            let alpha = frac * r;
            let rho = rect_connectivity_width(r, alpha).unwrap();
            let p = Point::new(a * rho, b * alpha);
            let q = Point::new(c * rho, d * alpha);
            prop_assert!(euclid_dist(p, q) <= r + GEOM_TOL);
        }

        #[test]
        fn fitted_inner_rectangle_is_inside(
            ux in -50.0..50.0f64, uy in -50.0..50.0f64,
            vx in -50.0..50.0f64, vy in -50.0..50.0f64,
            alpha in 0.01..5.0f64,
        ) {
            let u = Point::new(ux, uy);
            let v = Point::new(vx, vy);
            prop_assume!(euclid_dist(u, v) > 2.0 * INNER_MARGIN_FACTOR * alpha);
            let sq = Square::new(1e4).unwrap();
            // With α well below the half side the safe-triangle argument always succeeds.
            let p = fit_strip(u, v, alpha, 1e4).unwrap();
            prop_assert!(p.inner_fits(&sq));
            prop_assert!(p.to_strip_frame(u).norm() < 1e-9);
        }

        #[test]
        fn wide_strips_still_fit(
            ux in -0.5..0.5f64, uy in -0.5..0.5f64,
            vx in -0.5..0.5f64, vy in -0.5..0.5f64,
            frac in 0.01..0.99f64,
        ) {
            let u = Point::new(ux, uy);
            let v = Point::new(vx, vy);
            let t = euclid_dist(u, v);
            prop_assume!(t > 1e-3);
            let alpha = frac * t / (2.0 * INNER_MARGIN_FACTOR);
            let p = fit_strip(u, v, alpha, 1.0).unwrap();
            prop_assert!(p.inner_fits(&Square::new(1.0).unwrap()));
        }
    }
}
