//! Huzita-Justin fold-line constructors O1 to O7.
//!
//! Every constructor returns all fold lines satisfying its incidences, sorted
//! by `(a, b, c)`. Each candidate is re-checked by reflecting the defining
//! points before it is returned.

use thiserror::Error;

use crate::geometry::{self, GeometryError, Line, Point, EPS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

/// Lines whose coefficients agree this closely are the same solution.
const DEDUP: f64 = 1e-7;

fn finish(mut lines: Vec<Line>, ok: impl Fn(&Line) -> bool) -> Vec<Line> {
    lines.retain(|l| ok(l));
    lines.sort_by(|a, b| a.canonical_cmp(b));
    lines.dedup_by(|a, b| (a.a - b.a).abs() < DEDUP && (a.b - b.b).abs() < DEDUP && (a.c - b.c).abs() < DEDUP);
    lines
}

/// O1: the line through `p` and `q`.
pub fn o1(p: Point, q: Point) -> Result<Vec<Line>, RuleError> {
    Ok(vec![geometry::line_through(p, q)?])
}

/// O2: the fold placing `p` onto `q`.
pub fn o2(p: Point, q: Point) -> Result<Vec<Line>, RuleError> {
    Ok(vec![geometry::perpendicular_bisector(p, q)?])
}

/// O3: the folds placing `l` onto `m`; one for parallel lines, two otherwise.
pub fn o3(l: &Line, m: &Line) -> Result<Vec<Line>, RuleError> {
    if l.approx_eq(m) {
        return Err(RuleError::Degenerate("identical lines"));
    }
    if l.is_parallel(m) {
        // canonical normals of parallel lines agree in sign
        return Ok(vec![Line::new(l.a, l.b, (l.c + m.c) / 2.0)?]);
    }
    let mut out = Vec::with_capacity(2);
    for s in [1.0, -1.0] {
        out.push(Line::new(l.a + s * m.a, l.b + s * m.b, l.c + s * m.c)?);
    }
    Ok(finish(out, |b| {
        let p = geometry::intersect(l, m).expect("lines intersect");
        b.contains(p) && {
            let q = geometry::reflect(p + l.direction(), b);
            m.contains(q)
        }
    }))
}

/// O4: the fold through `p` perpendicular to `l`.
pub fn o4(p: Point, l: &Line) -> Result<Vec<Line>, RuleError> {
    let d = l.direction();
    Ok(vec![Line::new(d.x, d.y, d.dot(p))?])
}

/// O5: folds through `q` placing `p` onto `m`.
pub fn o5(p: Point, m: &Line, q: Point) -> Result<Vec<Line>, RuleError> {
    if p.dist(q) <= EPS {
        return Err(RuleError::Degenerate("p and q coincide"));
    }
    if m.contains(p) {
        return Err(RuleError::Degenerate("p lies on m"));
    }
    let r = p.dist(q);
    let d = m.signed_distance(q);
    if d.abs() > r + EPS {
        return Ok(Vec::new());
    }
    let foot = m.project(q);
    let h = (r * r - d * d).max(0.0).sqrt();
    let dir = m.direction();
    let mut out = Vec::new();
    for img in [foot + dir * h, foot - dir * h] {
        out.push(geometry::perpendicular_bisector(p, img)?);
    }
    Ok(finish(out, |l| l.contains(q) && m.contains(geometry::reflect(p, l))))
}

/// Polynomial with coefficients in increasing degree.
type Poly = Vec<f64>;

fn poly_mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[f64], b: &[f64]) -> Poly {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).collect()
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(p: &[f64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

/// Drops leading coefficients that are negligible next to the largest one.
fn trim(mut p: Poly) -> Poly {
    let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    while p.len() > 1 && p.last().is_some_and(|c| c.abs() <= 1e-12 * scale) {
        p.pop();
    }
    p
}

/// Real roots of a polynomial, ascending. Splits the axis at the roots of the
/// derivative so every piece is monotone, then bisects and Newton-polishes.
/// Touching roots (double roots at a critical point) are reported once.
pub fn real_roots(p: &[f64]) -> Vec<f64> {
    let p = trim(p.to_vec());
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-p[0] / p[1]];
    }
    let lead = p[deg];
    let bound = 1.0 + p[..deg].iter().fold(0.0f64, |m, c| m.max((c / lead).abs()));
    let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let crit: Vec<f64> = real_roots(&derivative(&p)).into_iter().filter(|x| x.abs() < bound).collect();
    let mut knots = vec![-bound];
    knots.extend(&crit);
    knots.push(bound);

    let mut roots = Vec::new();
    for &c in &crit {
        if eval(&p, c).abs() <= 1e-12 * scale {
            roots.push(c);
        }
    }
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval(&p, lo), eval(&p, hi));
        if flo.abs() <= 1e-12 * scale || fhi.abs() <= 1e-12 * scale || flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(&p, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(polish(&p, 0.5 * (lo + hi)));
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < DEDUP);
    roots
}

fn polish(p: &[f64], mut x: f64) -> f64 {
    let dp = derivative(p);
    for _ in 0..4 {
        let d = eval(&dp, x);
        if d == 0.0 {
            break;
        }
        let step = eval(p, x) / d;
        if !step.is_finite() || step.abs() > 1e-6 * (1.0 + x.abs()) {
            break;
        }
        x -= step;
    }
    x
}

/// The cubic whose roots parameterize O6 solutions: the image of `p` is
/// `m.anchor() + t · m.direction()`, and the fold is the bisector of `p` and
/// that image. Exposed for testing.
pub fn o6_polynomial(p: Point, m: &Line, q: Point, n: &Line) -> [f64; 4] {
    let a = m.anchor();
    let u = m.direction();
    let w0 = a - p;
    let nn = n.normal();
    let k = nn.dot(q) - n.c;
    // |w|^2
    let w2 = [w0.dot(w0), 2.0 * w0.dot(u), 1.0];
    // 2 q·w - |p'|^2 + |p|^2
    let s = [
        2.0 * q.dot(w0) - a.dot(a) + p.dot(p),
        2.0 * q.dot(u) - 2.0 * a.dot(u),
        -1.0,
    ];
    let nw = [nn.dot(w0), nn.dot(u)];
    let lhs: Poly = w2.iter().map(|c| k * c).collect();
    let f = poly_sub(&lhs, &poly_mul(&s, &nw));
    let mut out = [0.0; 4];
    out[..f.len()].copy_from_slice(&f);
    out
}

/// O6: folds placing `p` onto `m` and `q` onto `n` at once.
pub fn o6(p: Point, m: &Line, q: Point, n: &Line) -> Result<Vec<Line>, RuleError> {
    if m.contains(p) {
        return Err(RuleError::Degenerate("p lies on m"));
    }
    if n.contains(q) {
        return Err(RuleError::Degenerate("q lies on n"));
    }
    if p.dist(q) <= EPS && m.approx_eq(n) {
        return Err(RuleError::Degenerate("identical point-line pairs"));
    }
    let f = o6_polynomial(p, m, q, n);
    let scale = f.iter().fold(0.0f64, |s, c| s.max(c.abs()));
    if scale <= EPS {
        return Err(RuleError::Degenerate("every fold placing p on m also places q on n"));
    }
    let a = m.anchor();
    let u = m.direction();
    let mut out = Vec::new();
    for t in real_roots(&f) {
        let img = a + u * t;
        if let Ok(l) = geometry::perpendicular_bisector(p, img) {
            out.push(l);
        }
    }
    Ok(finish(out, |l| m.contains(geometry::reflect(p, l)) && n.contains(geometry::reflect(q, l))))
}

/// O7: the fold perpendicular to `n` placing `p` onto `m`.
pub fn o7(p: Point, m: &Line, n: &Line) -> Result<Vec<Line>, RuleError> {
    // the fold's normal is n's direction, so p slides along it
    let d = n.direction();
    let denom = m.normal().dot(d);
    if denom.abs() <= EPS {
        if m.contains(p) {
            return Err(RuleError::Degenerate("p lies on m and m is perpendicular to n"));
        }
        return Ok(Vec::new());
    }
    let s = (m.c - m.normal().dot(p)) / denom;
    let mid = p + d * (s / 2.0);
    let l = Line::new(d.x, d.y, d.dot(mid))?;
    Ok(finish(vec![l], |l| m.contains(geometry::reflect(p, l)) && l.normal().cross(d).abs() <= EPS))
}
