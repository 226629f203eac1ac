//! Text exports: SVG of the folded state, DOT graphs, and an exploded 3D pose.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Point;
use crate::num::{fmt12, round12};
use crate::origami::{AbstractOrigami, CreaseKind, FaceId, Graph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("superposition relation is cyclic")]
    Cyclic,
    #[error("layer gap must be positive, got {0}")]
    BadGap(f64),
}

/// Faces ordered bottom-up by the superposition relation; ties go to the
/// smaller id.
pub fn paint_order(ao: &AbstractOrigami) -> Result<Vec<FaceId>, RenderError> {
    let mut below: BTreeMap<FaceId, usize> = ao.face_ids().into_iter().map(|f| (f, 0)).collect();
    for p in ao.superposition() {
        *below.get_mut(&p.upper).expect("pair over existing faces") += 1;
    }
    let mut ready: BTreeSet<FaceId> = below.iter().filter(|(_, &n)| n == 0).map(|(&f, _)| f).collect();
    let mut out = Vec::with_capacity(below.len());
    while let Some(f) = ready.pop_first() {
        out.push(f);
        for p in ao.superposition().iter().filter(|p| p.lower == f) {
            let n = below.get_mut(&p.upper).unwrap();
            *n -= 1;
            if *n == 0 {
                ready.insert(p.upper);
            }
        }
    }
    if out.len() == below.len() {
        Ok(out)
    } else {
        Err(RenderError::Cyclic)
    }
}

fn svg_point(p: Point) -> String {
    format!("{},{}", fmt12(p.x), fmt12(-p.y))
}

/// SVG 1.1 of the current planar state. Valley creases are dashed, mountain
/// creases solid; the y axis points up as in paper coordinates.
pub fn to_svg(ao: &AbstractOrigami) -> Result<String, RenderError> {
    let order = paint_order(ao)?;
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for f in ao.faces() {
        let (a, b) = f.polygon.bounds();
        lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let (px, py) = (0.05 * w, 0.05 * h);
    let stroke = 0.005 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        fmt12(lo.x - px),
        fmt12(-hi.y - py),
        fmt12(w + 2.0 * px),
        fmt12(h + 2.0 * py)
    );
    for id in order {
        let face = ao.face(id).expect("ordered faces exist");
        let pts: Vec<String> = face.polygon.vertices().iter().map(|&p| svg_point(p)).collect();
        let _ = writeln!(
            s,
            r##"  <polygon id="face-{id}" points="{}" fill="#f2e6c9" fill-opacity="0.8" stroke="#444444" stroke-width="{}"/>"##,
            pts.join(" "),
            fmt12(stroke)
        );
    }
    for e in ao.adjacency() {
        let dash = match e.kind {
            CreaseKind::Valley => format!(r#" stroke-dasharray="{} {}""#, fmt12(4.0 * stroke), fmt12(3.0 * stroke)),
            CreaseKind::Mountain => String::new(),
        };
        let _ = writeln!(
            s,
            r##"  <line class="{}" data-faces="{} {}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#b03030" stroke-width="{}"{dash}/>"##,
            e.kind,
            e.a,
            e.b,
            fmt12(e.crease.a.x),
            fmt12(-e.crease.a.y),
            fmt12(e.crease.b.x),
            fmt12(-e.crease.b.y),
            fmt12(stroke)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotKind {
    Adjacency,
    Superposition,
}

/// Graphviz text: undirected for adjacency, `upper -> lower` for
/// superposition.
pub fn to_dot(graph: &Graph, kind: DotKind) -> String {
    let (head, arrow) = match kind {
        DotKind::Adjacency => ("graph adjacency", "--"),
        DotKind::Superposition => ("digraph superposition", "->"),
    };
    let mut s = format!("{head} {{\n");
    for n in &graph.nodes {
        let _ = writeln!(s, "  {n};");
    }
    for (a, b) in &graph.edges {
        let _ = writeln!(s, "  {a} {arrow} {b};");
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face3D {
    pub id: FaceId,
    pub vertices3d: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pose3D {
    pub faces: Vec<Face3D>,
    pub gap: f64,
    /// Layer index of every face: the longest downward path in the
    /// superposition graph.
    pub depth: BTreeMap<FaceId, usize>,
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl Pose3D {
    pub fn face(&self, id: FaceId) -> Option<&Face3D> {
        self.faces.iter().find(|f| f.id == id)
    }

    /// Unit normal following the vertex winding (Newell's method).
    pub fn normal(&self, id: FaceId) -> Option<[f64; 3]> {
        let vs = &self.face(id)?.vertices3d;
        let mut n = [0.0; 3];
        for i in 0..vs.len() {
            let c = cross(vs[i], vs[(i + 1) % vs.len()]);
            n = [n[0] + c[0], n[1] + c[1], n[2] + c[2]];
        }
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        Some([n[0] / len, n[1] / len, n[2] / len])
    }

    /// Dihedral angle between two faces: π for coplanar same-facing faces,
    /// π/2 for a face standing upright on the other.
    pub fn dihedral(&self, a: FaceId, b: FaceId) -> Option<f64> {
        let (na, nb) = (self.normal(a)?, self.normal(b)?);
        let dot = (na[0] * nb[0] + na[1] * nb[1] + na[2] * nb[2]).clamp(-1.0, 1.0);
        Some(PI - dot.acos())
    }

    /// Distinct z coordinates over all vertices, rounded to 12 significant digits.
    pub fn z_levels(&self) -> Vec<f64> {
        let mut zs: Vec<f64> = self.faces.iter().flat_map(|f| f.vertices3d.iter().map(|v| round12(v[2]))).collect();
        zs.sort_by(f64::total_cmp);
        zs.dedup();
        zs
    }
}

/// Lifts every face to `z = depth · gap`. In a posed origami the faces moved
/// by the partial fold are then rotated about the fold line by the fold angle,
/// toward +z for a valley fold and toward −z for a mountain fold.
pub fn pose3d(ao: &AbstractOrigami, gap: f64) -> Result<Pose3D, RenderError> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(RenderError::BadGap(gap));
    }
    let order = paint_order(ao)?;
    let mut depth: BTreeMap<FaceId, usize> = BTreeMap::new();
    for id in &order {
        let d = ao
            .superposition()
            .iter()
            .filter(|p| p.upper == *id)
            .map(|p| depth[&p.lower] + 1)
            .max()
            .unwrap_or(0);
        depth.insert(*id, d);
    }
    let mut faces = Vec::new();
    for face in ao.faces() {
        let z = depth[&face.id] as f64 * gap;
        let mut vs: Vec<[f64; 3]> = face.polygon.vertices().iter().map(|p| [p.x, p.y, z]).collect();
        if let Some(pose) = ao.pose().filter(|p| p.moved.contains(&face.id)) {
            let sign = match pose.kind {
                CreaseKind::Valley => 1.0,
                CreaseKind::Mountain => -1.0,
            };
            let d = pose.ray.direction();
            // unit vector from the fold line toward the moving (right) side
            let n = Point::new(d.y, -d.x);
            let (c, s) = (pose.angle.cos(), pose.angle.sin());
            for (v, p) in vs.iter_mut().zip(face.polygon.vertices()) {
                let dist = (*p - pose.ray.origin).dot(n);
                let foot = *p - n * dist;
                let q = foot + n * (dist * c);
                *v = [q.x, q.y, z + sign * dist * s];
            }
        }
        faces.push(Face3D { id: face.id, vertices3d: vs });
    }
    Ok(Pose3D { faces, gap, depth })
}

/// `{"faces":[{"id":n,"vertices3d":[[x,y,z],…]}]}` with 12 significant digits.
pub fn export_3d(pose: &Pose3D) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        faces: &'a [Face3D],
    }
    let rounded: Vec<Face3D> = pose
        .faces
        .iter()
        .map(|f| Face3D {
            id: f.id,
            vertices3d: f.vertices3d.iter().map(|v| [round12(v[0]), round12(v[1]), round12(v[2])]).collect(),
        })
        .collect();
    serde_json::to_string(&Out { faces: &rounded }).expect("plain data serializes")
}

