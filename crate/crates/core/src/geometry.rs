//! Planar primitives used by every fold computation.
//!
//! All comparisons go through the single tolerance [`EPS`]. Faces are always
//! convex (the paper starts convex and is only ever cut by straight lines), so
//! splitting and clipping work on convex polygons.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Global tolerance in paper units.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn approx_eq(self, o: Point) -> bool {
        self.dist(o) <= EPS
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The line `a·x + b·y = c`, normalized so that `a² + b² = 1` and the first
/// non-zero of `(a, b)` is positive.
///
/// The canonical direction of a line is `(b, -a)`; a point is on the left of
/// the line when `a·x + b·y - c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Line, GeometryError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = a.hypot(b);
        if n <= EPS {
            return Err(GeometryError::Degenerate("line normal is zero"));
        }
        let (mut a, mut b, mut c) = (a / n, b / n, c / n);
        let flip = if a.abs() > EPS { a < 0.0 } else { b < 0.0 };
        if flip {
            a = -a;
            b = -b;
            c = -c;
        }
        // normalize negative zeros so equal lines print identically
        Ok(Line { a: a + 0.0, b: b + 0.0, c: c + 0.0 })
    }

    pub fn through(p: Point, q: Point) -> Result<Line, GeometryError> {
        if p.dist(q) <= EPS {
            return Err(GeometryError::Degenerate("line through coincident points"));
        }
        let d = q - p;
        Line::new(-d.y, d.x, -d.y * p.x + d.x * p.y)
    }

    pub fn normal(&self) -> Point {
        Point::new(self.a, self.b)
    }

    pub fn direction(&self) -> Point {
        Point::new(self.b, -self.a)
    }

    /// Signed distance; positive on the left of the canonical direction.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y - self.c
    }

    pub fn contains(&self, p: Point) -> bool {
        self.signed_distance(p).abs() <= EPS
    }

    /// Foot of the perpendicular from `p`.
    pub fn project(&self, p: Point) -> Point {
        p - self.normal() * self.signed_distance(p)
    }

    /// A point on the line (the foot from the origin).
    pub fn anchor(&self) -> Point {
        self.normal() * self.c
    }

    pub fn approx_eq(&self, o: &Line) -> bool {
        (self.a - o.a).abs() <= EPS && (self.b - o.b).abs() <= EPS && (self.c - o.c).abs() <= EPS
    }

    pub fn is_parallel(&self, o: &Line) -> bool {
        self.normal().cross(o.normal()).abs() <= EPS
    }

    /// Total order on `(a, b, c)` used to sort rule solutions.
    pub fn canonical_cmp(&self, o: &Line) -> Ordering {
        self.a
            .total_cmp(&o.a)
            .then(self.b.total_cmp(&o.b))
            .then(self.c.total_cmp(&o.c))
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

/// A directed fold line. Faces to the right of the ray move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Point,
    pub through: Point,
}

impl Ray {
    pub fn new(origin: Point, through: Point) -> Result<Ray, GeometryError> {
        if !(origin.is_finite() && through.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if origin.dist(through) <= EPS {
            return Err(GeometryError::Degenerate("ray origin and through point coincide"));
        }
        Ok(Ray { origin, through })
    }

    /// `Rev[Ray[X, Y]] = Ray[Y, X]`.
    pub fn rev(&self) -> Ray {
        Ray { origin: self.through, through: self.origin }
    }

    pub fn direction(&self) -> Point {
        let d = self.through - self.origin;
        d * (1.0 / d.norm())
    }

    pub fn line(&self) -> Line {
        Line::through(self.origin, self.through).expect("ray endpoints are distinct")
    }

    /// Signed distance of `p` from the ray's line, positive on the left.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.direction().cross(p - self.origin)
    }

    /// A ray along `line`, oriented so that its left side is the line's
    /// positive side.
    pub fn along(line: &Line) -> Ray {
        let o = line.anchor();
        Ray { origin: o, through: o + line.direction() }
    }

    pub fn reflect(&self, l: &Line) -> Ray {
        Ray { origin: reflect(self.origin, l), through: reflect(self.through, l) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    On,
}

/// Which side of the ray `p` lies on.
pub fn side(r: &Ray, p: Point) -> Side {
    let d = r.signed_distance(p);
    if d < -EPS {
        Side::Right
    } else if d > EPS {
        Side::Left
    } else {
        Side::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        midpoint(self.a, self.b)
    }

    pub fn at(&self, t: f64) -> Point {
        self.a + (self.b - self.a) * t
    }

    /// Same endpoints, in either order.
    pub fn approx_eq(&self, o: &Segment) -> bool {
        (self.a.approx_eq(o.a) && self.b.approx_eq(o.b))
            || (self.a.approx_eq(o.b) && self.b.approx_eq(o.a))
    }

    pub fn lies_on(&self, l: &Line) -> bool {
        l.contains(self.a) && l.contains(self.b)
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.at(t))
    }
}

/// A simple, counter-clockwise polygon with strictly positive area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates and canonicalizes: drops repeated vertices, merges collinear
    /// runs and orients counter-clockwise.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, GeometryError> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut vs = cleanup(vertices);
        if vs.len() < 3 {
            return Err(GeometryError::InvalidPolygon("fewer than three distinct vertices"));
        }
        let a = signed_area(&vs);
        if a.abs() <= EPS {
            return Err(GeometryError::InvalidPolygon("zero area"));
        }
        if a < 0.0 {
            vs.reverse();
        }
        if !is_simple(&vs) {
            return Err(GeometryError::InvalidPolygon("self-intersecting"));
        }
        Ok(Polygon { vertices: vs })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let (p, q, r) = (self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]);
            (q - p).cross(r - q) >= -EPS
        })
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let w = p.cross(q);
            a2 += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Point-in-polygon for convex polygons, boundary included.
    pub fn contains(&self, p: Point) -> bool {
        self.edges().all(|e| (e.b - e.a).cross(p - e.a) / e.length() >= -EPS)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.edges().any(|e| e.distance_to(p) <= EPS)
    }

    /// True when the whole segment lies on this polygon's boundary.
    pub fn has_boundary_segment(&self, s: &Segment) -> bool {
        self.edges().any(|e| e.distance_to(s.a) <= EPS && e.distance_to(s.b) <= EPS)
    }

    pub fn transformed(&self, t: &Isometry) -> Polygon {
        let mut vs: Vec<Point> = self.vertices.iter().map(|&p| t.apply(p)).collect();
        if t.is_reflection() {
            vs.reverse();
        }
        Polygon { vertices: vs }
    }

    pub fn reflect(&self, l: &Line) -> Polygon {
        self.transformed(&Isometry::reflection(l))
    }

    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Approximate equality as point sets of vertices (rotation-invariant).
    pub fn approx_eq(&self, o: &Polygon) -> bool {
        self.vertices.len() == o.vertices.len()
            && self.vertices.iter().all(|p| o.vertices.iter().any(|q| p.approx_eq(*q)))
    }
}

fn signed_area(vs: &[Point]) -> f64 {
    let n = vs.len();
    (0..n).map(|i| vs[i].cross(vs[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Removes near-duplicate consecutive vertices and merges collinear runs.
fn cleanup(mut vs: Vec<Point>) -> Vec<Point> {
    loop {
        let n = vs.len();
        if n < 3 {
            return vs;
        }
        let mut changed = false;
        let mut out: Vec<Point> = Vec::with_capacity(n);
        for p in vs.iter().copied() {
            if out.last().is_some_and(|q: &Point| q.approx_eq(p)) {
                changed = true;
                continue;
            }
            out.push(p);
        }
        while out.len() > 1 && out[0].approx_eq(*out.last().unwrap()) {
            out.pop();
            changed = true;
        }
        let n = out.len();
        if n >= 3 {
            let mut keep = vec![true; n];
            for i in 0..n {
                let (p, q, r) = (out[(i + n - 1) % n], out[i], out[(i + 1) % n]);
                let base = p.dist(r);
                if base > EPS {
                    let h = (r - p).cross(q - p).abs() / base;
                    let t = (q - p).dot(r - p) / (base * base);
                    if h <= EPS && (0.0..=1.0).contains(&t) {
                        keep[i] = false;
                        break;
                    }
                }
            }
            if keep.iter().any(|k| !k) {
                out = out.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect();
                changed = true;
            }
        }
        vs = out;
        if !changed {
            return vs;
        }
    }
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS))
        && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
}

fn is_simple(vs: &[Point]) -> bool {
    let n = vs.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Mirror image of `p` across `l`.
pub fn reflect(p: Point, l: &Line) -> Point {
    p - l.normal() * (2.0 * l.signed_distance(p))
}

pub fn midpoint(p: Point, q: Point) -> Point {
    Point::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
}

pub fn line_through(p: Point, q: Point) -> Result<Line, GeometryError> {
    Line::through(p, q)
}

pub fn perpendicular_bisector(p: Point, q: Point) -> Result<Line, GeometryError> {
    if p.dist(q) <= EPS {
        return Err(GeometryError::Degenerate("bisector of coincident points"));
    }
    let d = q - p;
    let m = midpoint(p, q);
    Line::new(d.x, d.y, d.dot(m))
}

/// Intersection point, or `None` for parallel lines.
pub fn intersect(l1: &Line, l2: &Line) -> Option<Point> {
    let det = l1.a * l2.b - l1.b * l2.a;
    if det.abs() <= EPS {
        return None;
    }
    Some(Point::new((l1.c * l2.b - l1.b * l2.c) / det, (l1.a * l2.c - l1.c * l2.a) / det))
}

pub fn area(poly: &Polygon) -> f64 {
    poly.area()
}

/// Result of cutting a polygon by a line. `left` is the part on the positive
/// side of the line's canonical direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub left: Option<Polygon>,
    pub right: Option<Polygon>,
    pub seam: Option<Segment>,
}

/// Cuts a convex polygon by a line. Vertices on the line go to both parts.
pub fn split_polygon(poly: &Polygon, l: &Line) -> Split {
    let d: Vec<f64> = poly.vertices.iter().map(|&p| l.signed_distance(p)).collect();
    let has_left = d.iter().any(|&x| x > EPS);
    let has_right = d.iter().any(|&x| x < -EPS);
    if !has_right {
        return Split { left: Some(poly.clone()), right: None, seam: None };
    }
    if !has_left {
        return Split { left: None, right: Some(poly.clone()), seam: None };
    }
    let left = clip_raw(&poly.vertices, &d, true);
    let right = clip_raw(&poly.vertices, &d, false);
    let on_line: Vec<Point> = left.iter().copied().filter(|&p| l.signed_distance(p).abs() <= EPS).collect();
    let left = Polygon::new(left).ok();
    let right = Polygon::new(right).ok();
    let seam = match (&left, &right) {
        (Some(_), Some(_)) => seam_of(&on_line, l),
        _ => None,
    };
    match (left, right) {
        (Some(lp), Some(rp)) => Split { left: Some(lp), right: Some(rp), seam },
        // one side collapsed below tolerance: treat as uncut
        (Some(_), None) | (None, None) => Split { left: Some(poly.clone()), right: None, seam: None },
        (None, Some(_)) => Split { left: None, right: Some(poly.clone()), seam: None },
    }
}

fn seam_of(pts: &[Point], l: &Line) -> Option<Segment> {
    let dir = l.direction();
    let lo = pts.iter().copied().min_by(|p, q| p.dot(dir).total_cmp(&q.dot(dir)))?;
    let hi = pts.iter().copied().max_by(|p, q| p.dot(dir).total_cmp(&q.dot(dir)))?;
    (lo.dist(hi) > EPS).then(|| Segment::new(lo, hi))
}

/// Sutherland-Hodgman against one half-plane; `d` are signed distances.
fn clip_raw(vs: &[Point], d: &[f64], keep_left: bool) -> Vec<Point> {
    let n = vs.len();
    let inside = |x: f64| if keep_left { x >= -EPS } else { x <= EPS };
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q, dp, dq) = (vs[i], vs[j], d[i], d[j]);
        if inside(dp) {
            out.push(p);
        }
        let strictly_crosses = (dp > EPS && dq < -EPS) || (dp < -EPS && dq > EPS);
        if strictly_crosses {
            let t = dp / (dp - dq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Intersection of two convex polygons, if it has positive area.
pub fn clip_convex(subject: &Polygon, clip: &Polygon) -> Option<Polygon> {
    let mut vs = subject.vertices.clone();
    for e in clip.edges() {
        if vs.len() < 3 {
            return None;
        }
        let line = Line::through(e.a, e.b).ok()?;
        // interior of a CCW polygon is on the left of each edge; the canonical
        // direction of `line` may be reversed relative to the edge.
        let same = line.direction().dot(e.b - e.a) > 0.0;
        let d: Vec<f64> = vs.iter().map(|&p| line.signed_distance(p)).collect();
        vs = clip_raw(&vs, &d, same);
    }
    Polygon::new(vs).ok()
}

/// Area of the interior overlap of two convex polygons.
pub fn overlap_area(a: &Polygon, b: &Polygon) -> f64 {
    let (alo, ahi) = a.bounds();
    let (blo, bhi) = b.bounds();
    if alo.x >= bhi.x - EPS || blo.x >= ahi.x - EPS || alo.y >= bhi.y - EPS || blo.y >= ahi.y - EPS {
        return 0.0;
    }
    clip_convex(a, b).map_or(0.0, |p| p.area())
}

/// `pieces \ hole` as a list of convex pieces.
pub fn subtract_convex(pieces: Vec<Polygon>, hole: &Polygon) -> Vec<Polygon> {
    let mut out = Vec::new();
    for piece in pieces {
        if overlap_area(&piece, hole) <= EPS * EPS {
            out.push(piece);
            continue;
        }
        let mut rest = Some(piece);
        for e in hole.edges() {
            let Some(cur) = rest.take() else { break };
            let Ok(line) = Line::through(e.a, e.b) else {
                rest = Some(cur);
                continue;
            };
            let split = split_polygon(&cur, &line);
            let same = line.direction().dot(e.b - e.a) > 0.0;
            let (inside, outside) = if same { (split.left, split.right) } else { (split.right, split.left) };
            if let Some(o) = outside {
                out.push(o);
            }
            rest = inside;
        }
    }
    out
}

/// A rigid motion of the plane: `p ↦ m·p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub m: [[f64; 2]; 2],
    pub t: Point,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { m: [[1.0, 0.0], [0.0, 1.0]], t: Point::new(0.0, 0.0) };

    pub fn reflection(l: &Line) -> Isometry {
        let (a, b) = (l.a, l.b);
        Isometry {
            m: [[1.0 - 2.0 * a * a, -2.0 * a * b], [-2.0 * a * b, 1.0 - 2.0 * b * b]],
            t: Point::new(2.0 * l.c * a, 2.0 * l.c * b),
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let m = &self.m;
        let o = &other.m;
        Isometry {
            m: [
                [m[0][0] * o[0][0] + m[0][1] * o[1][0], m[0][0] * o[0][1] + m[0][1] * o[1][1]],
                [m[1][0] * o[0][0] + m[1][1] * o[1][0], m[1][0] * o[0][1] + m[1][1] * o[1][1]],
            ],
            t: self.apply(other.t),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let m = &self.m;
        let mt = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
        let t = Point::new(-(mt[0][0] * self.t.x + mt[0][1] * self.t.y), -(mt[1][0] * self.t.x + mt[1][1] * self.t.y));
        Isometry { m: mt, t }
    }

    pub fn is_reflection(&self) -> bool {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0] < 0.0
    }

    pub fn apply_segment(&self, s: &Segment) -> Segment {
        Segment::new(self.apply(s.a), self.apply(s.b))
    }
}
