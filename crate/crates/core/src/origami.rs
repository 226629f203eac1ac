//! The abstract origami `(faces, adjacency, superposition)`, its cut register,
//! graph views of both relations and the construction trace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::engine::FoldRecord;
use crate::geometry::{self, GeometryError, Isometry, Point, Polygon, Ray, Segment, EPS};
use crate::num::round12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrigamiError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("paper must be convex")]
    NonConvexPaper,
    #[error("face {0} does not exist")]
    UnknownFace(FaceId),
    #[error("faces {0} and {1} are not adjacent")]
    NotAdjacent(FaceId, FaceId),
    #[error("edge {0}-{1} is already in the cut register")]
    AlreadyCut(FaceId, FaceId),
    #[error("cannot glue {a}-{b}: separated boundaries are {gap:.3e} apart")]
    GlueMismatch { a: FaceId, b: FaceId, gap: f64 },
    #[error("origami is posed; only rendering is allowed")]
    Posed,
}

/// Face number. Folding face `n` replaces it with `2n` (stationary part) and
/// `2n + 1` (moving part).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FaceId(pub u64);

impl FaceId {
    pub const ROOT: FaceId = FaceId(1);

    pub fn children(self) -> (FaceId, FaceId) {
        (FaceId(2 * self.0), FaceId(2 * self.0 + 1))
    }

    pub fn parent(self) -> Option<FaceId> {
        (self.0 > 1).then_some(FaceId(self.0 / 2))
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CreaseKind {
    Mountain,
    Valley,
}

impl CreaseKind {
    pub fn flipped(self) -> CreaseKind {
        match self {
            CreaseKind::Mountain => CreaseKind::Valley,
            CreaseKind::Valley => CreaseKind::Mountain,
        }
    }
}

impl fmt::Display for CreaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CreaseKind::Mountain => "mountain",
            CreaseKind::Valley => "valley",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: FaceId,
    /// Current (folded) planar coordinates.
    pub polygon: Polygon,
    /// Maps unfolded sheet coordinates to current coordinates.
    pub transform: Isometry,
    pub vertex_names: BTreeMap<usize, String>,
}

impl Face {
    /// The face as drawn on the unfolded sheet.
    pub fn sheet_polygon(&self) -> Polygon {
        self.polygon.transformed(&self.transform.inverse())
    }

    /// Applies a rigid motion, keeping vertex names attached.
    pub(crate) fn moved_by(&self, t: &Isometry) -> Face {
        let polygon = self.polygon.transformed(t);
        let vertex_names = self
            .vertex_names
            .iter()
            .filter_map(|(&i, name)| {
                let p = t.apply(self.polygon.vertices()[i]);
                polygon.vertices().iter().position(|q| q.approx_eq(p)).map(|j| (j, name.clone()))
            })
            .collect();
        Face { id: self.id, polygon, transform: t.compose(&self.transform), vertex_names }
    }

    /// A piece of this face after splitting, inheriting surviving names.
    pub(crate) fn piece(&self, id: FaceId, polygon: Polygon) -> Face {
        let vertex_names = self
            .vertex_names
            .iter()
            .filter_map(|(&i, name)| {
                let p = self.polygon.vertices()[i];
                polygon.vertices().iter().position(|q| q.approx_eq(p)).map(|j| (j, name.clone()))
            })
            .collect();
        Face { id, polygon, transform: self.transform, vertex_names }
    }
}

/// Unordered pair key; the smaller id comes first.
pub fn edge_key(a: FaceId, b: FaceId) -> (FaceId, FaceId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyEdge {
    pub a: FaceId,
    pub b: FaceId,
    /// Shared boundary in current coordinates.
    pub crease: Segment,
    /// The same crease on the unfolded sheet.
    pub sheet: Segment,
    pub kind: CreaseKind,
}

impl AdjacencyEdge {
    pub fn key(&self) -> (FaceId, FaceId) {
        edge_key(self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperpositionPair {
    pub upper: FaceId,
    pub lower: FaceId,
}

/// A fold with angle below π. The moved faces keep their unrotated polygons;
/// rendering rotates them about the ray.
#[derive(Debug, Clone, PartialEq)]
pub struct PosedFold {
    pub ray: Ray,
    pub moved: BTreeSet<FaceId>,
    pub angle: f64,
    pub kind: CreaseKind,
}

/// Plain graph over face ids; undirected edges are stored with the smaller id
/// first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub directed: bool,
    pub nodes: BTreeSet<FaceId>,
    pub edges: BTreeSet<(FaceId, FaceId)>,
}

impl Graph {
    pub fn has_edge(&self, a: FaceId, b: FaceId) -> bool {
        if self.directed {
            self.edges.contains(&(a, b))
        } else {
            self.edges.contains(&edge_key(a, b))
        }
    }

    /// Kahn's algorithm; undirected graphs are trivially reported acyclic.
    pub fn is_acyclic(&self) -> bool {
        if !self.directed {
            return true;
        }
        let mut indeg: BTreeMap<FaceId, usize> = self.nodes.iter().map(|&n| (n, 0)).collect();
        for &(_, to) in &self.edges {
            *indeg.entry(to).or_default() += 1;
        }
        let mut ready: Vec<FaceId> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
        let mut seen = 0;
        while let Some(n) = ready.pop() {
            seen += 1;
            for &(from, to) in self.edges.range((n, FaceId(0))..) {
                if from != n {
                    break;
                }
                let d = indeg.get_mut(&to).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(to);
                }
            }
        }
        seen == indeg.len()
    }
}

/// Labeled equality: same face ids and same edges.
pub fn graph_equal(g1: &Graph, g2: &Graph) -> bool {
    g1 == g2
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbstractOrigami {
    pub(crate) faces: BTreeMap<FaceId, Face>,
    pub(crate) adjacency: BTreeMap<(FaceId, FaceId), AdjacencyEdge>,
    pub(crate) superposition: BTreeSet<SuperpositionPair>,
    pub(crate) cut_register: Vec<AdjacencyEdge>,
    pub(crate) posed: bool,
    pub(crate) crease_angles: BTreeMap<(FaceId, FaceId), f64>,
    /// Bottom-to-top linear extension of the layering; `superposition` is its
    /// immediate-cover relation restricted to overlapping faces.
    pub(crate) layer_order: Vec<FaceId>,
    pub(crate) pose: Option<PosedFold>,
    pub(crate) last_fold: Option<FoldRecord>,
}

pub const DEFAULT_CORNERS: [Point; 4] =
    [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];

impl AbstractOrigami {
    /// The initial origami `({1}, ∅, ∅)`. Defaults to the unit square.
    pub fn init_square(corner_names: [&str; 4], coords: Option<[Point; 4]>) -> Result<Self, OrigamiError> {
        let coords = coords.unwrap_or(DEFAULT_CORNERS);
        for i in 0..4 {
            for j in i + 1..4 {
                if coords[i].dist(coords[j]) <= EPS {
                    return Err(GeometryError::Degenerate("repeated paper corner").into());
                }
            }
        }
        let poly = Polygon::new(coords.to_vec())?;
        if poly.vertices().len() != 4 {
            return Err(GeometryError::Degenerate("paper corners are collinear").into());
        }
        let mut ao = Self::from_polygon(poly)?;
        let face = ao.faces.get_mut(&FaceId::ROOT).unwrap();
        for (name, p) in corner_names.iter().zip(coords) {
            if let Some(i) = face.polygon.vertices().iter().position(|q| q.approx_eq(p)) {
                face.vertex_names.insert(i, name.to_string());
            }
        }
        Ok(ao)
    }

    /// Single-face origami on an arbitrary convex sheet.
    pub fn from_polygon(poly: Polygon) -> Result<Self, OrigamiError> {
        if !poly.is_convex() {
            return Err(OrigamiError::NonConvexPaper);
        }
        let face = Face { id: FaceId::ROOT, polygon: poly, transform: Isometry::IDENTITY, vertex_names: BTreeMap::new() };
        Ok(AbstractOrigami {
            faces: BTreeMap::from([(FaceId::ROOT, face)]),
            adjacency: BTreeMap::new(),
            superposition: BTreeSet::new(),
            cut_register: Vec::new(),
            posed: false,
            crease_angles: BTreeMap::new(),
            layer_order: vec![FaceId::ROOT],
            pose: None,
            last_fold: None,
        })
    }

    pub fn face_ids(&self) -> BTreeSet<FaceId> {
        self.faces.keys().copied().collect()
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.values()
    }

    pub fn face(&self, id: FaceId) -> Option<&Face> {
        self.faces.get(&id)
    }

    pub fn adjacency(&self) -> impl Iterator<Item = &AdjacencyEdge> {
        self.adjacency.values()
    }

    pub fn edge(&self, a: FaceId, b: FaceId) -> Option<&AdjacencyEdge> {
        self.adjacency.get(&edge_key(a, b))
    }

    pub fn superposition(&self) -> &BTreeSet<SuperpositionPair> {
        &self.superposition
    }

    pub fn cut_register(&self) -> &[AdjacencyEdge] {
        &self.cut_register
    }

    pub fn is_posed(&self) -> bool {
        self.posed
    }

    pub fn pose(&self) -> Option<&PosedFold> {
        self.pose.as_ref()
    }

    pub fn crease_angles(&self) -> &BTreeMap<(FaceId, FaceId), f64> {
        &self.crease_angles
    }

    pub fn layer_order(&self) -> &[FaceId] {
        &self.layer_order
    }

    pub fn last_fold(&self) -> Option<&FoldRecord> {
        self.last_fold.as_ref()
    }

    pub fn total_area(&self) -> f64 {
        self.faces.values().map(|f| f.polygon.area()).sum()
    }

    /// Replaces the superposition relation wholesale. Intended for building
    /// fixtures by hand; the engine derives the relation from the layering.
    pub fn with_superposition(mut self, pairs: impl IntoIterator<Item = SuperpositionPair>) -> Self {
        self.superposition = pairs.into_iter().collect();
        self
    }

    pub fn adjacency_graph(&self) -> Graph {
        Graph { directed: false, nodes: self.face_ids(), edges: self.adjacency.keys().copied().collect() }
    }

    pub fn superposition_graph(&self) -> Graph {
        Graph {
            directed: true,
            nodes: self.face_ids(),
            edges: self.superposition.iter().map(|p| (p.upper, p.lower)).collect(),
        }
    }

    pub fn check_superposition_acyclic(&self) -> bool {
        self.superposition_graph().is_acyclic()
    }

    /// Removes the adjacency edge between the pair and records it in the cut
    /// register.
    pub fn cut_edge(&self, below: FaceId, above: FaceId) -> Result<Self, OrigamiError> {
        if self.posed {
            return Err(OrigamiError::Posed);
        }
        for id in [below, above] {
            if !self.faces.contains_key(&id) {
                return Err(OrigamiError::UnknownFace(id));
            }
        }
        let key = edge_key(below, above);
        if self.cut_register.iter().any(|e| e.key() == key) {
            return Err(OrigamiError::AlreadyCut(key.0, key.1));
        }
        let mut next = self.clone();
        let edge = next.adjacency.remove(&key).ok_or(OrigamiError::NotAdjacent(below, above))?;
        next.crease_angles.remove(&key);
        next.cut_register.push(edge);
        next.last_fold = None;
        Ok(next)
    }

    /// Re-attaches every registered edge after checking that both faces'
    /// copies of the separated boundary coincide again.
    pub fn glue_edges(&self) -> Result<Self, OrigamiError> {
        if self.posed {
            return Err(OrigamiError::Posed);
        }
        let mut next = self.clone();
        next.last_fold = None;
        let register = std::mem::take(&mut next.cut_register);
        // LIFO: the most recent cut is re-attached first
        for edge in register.into_iter().rev() {
            let fa = next.faces.get(&edge.a).ok_or(OrigamiError::UnknownFace(edge.a))?;
            let fb = next.faces.get(&edge.b).ok_or(OrigamiError::UnknownFace(edge.b))?;
            let sa = fa.transform.apply_segment(&edge.sheet);
            let sb = fb.transform.apply_segment(&edge.sheet);
            let gap = sa.a.dist(sb.a).max(sa.b.dist(sb.b));
            if gap > EPS {
                return Err(OrigamiError::GlueMismatch { a: edge.a, b: edge.b, gap });
            }
            let glued = AdjacencyEdge { crease: sa, ..edge };
            next.adjacency.insert(glued.key(), glued);
        }
        Ok(next)
    }

    /// Derives the immediate-cover superposition relation from the layering:
    /// `u ≻ v` when `u` is above `v` and some part of their overlap is not
    /// covered by any face in between.
    pub(crate) fn recompute_superposition(&mut self) {
        let order = &self.layer_order;
        let mut pairs = BTreeSet::new();
        for i in 0..order.len() {
            let lower = &self.faces[&order[i]].polygon;
            for j in i + 1..order.len() {
                let upper = &self.faces[&order[j]].polygon;
                let Some(overlap) = geometry::clip_convex(lower, upper) else { continue };
                if overlap.area() <= EPS {
                    continue;
                }
                let mut visible = vec![overlap];
                for k in &order[i + 1..j] {
                    visible = geometry::subtract_convex(visible, &self.faces[k].polygon);
                    if visible.is_empty() {
                        break;
                    }
                }
                if visible.iter().map(Polygon::area).sum::<f64>() > EPS {
                    pairs.insert(SuperpositionPair { upper: order[j], lower: order[i] });
                }
            }
        }
        self.superposition = pairs;
    }

    /// JSON state dump with stable key order and 12 significant digits.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct FaceOut {
            id: FaceId,
            polygon: Vec<[f64; 2]>,
        }
        #[derive(Serialize)]
        struct Dump {
            faces: Vec<FaceOut>,
            adjacency: Vec<(FaceId, FaceId, CreaseKind)>,
            superposition: Vec<(FaceId, FaceId)>,
            cut_register: Vec<(FaceId, FaceId, CreaseKind)>,
            posed: bool,
        }
        let dump = Dump {
            faces: self
                .faces
                .values()
                .map(|f| FaceOut {
                    id: f.id,
                    polygon: f.polygon.vertices().iter().map(|p| [round12(p.x), round12(p.y)]).collect(),
                })
                .collect(),
            adjacency: self.adjacency.values().map(|e| (e.a, e.b, e.kind)).collect(),
            superposition: self.superposition.iter().map(|p| (p.upper, p.lower)).collect(),
            cut_register: self.cut_register.iter().map(|e| (e.a, e.b, e.kind)).collect(),
            posed: self.posed,
        };
        serde_json::to_string(&dump).expect("plain data serializes")
    }
}

/// One rewriting step of a construction.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub label: String,
    /// 1-based source line of the statement that produced the step.
    pub line: Option<usize>,
    pub snapshot: AbstractOrigami,
}

/// The rewriting sequence `O1 ↬ O2 ↬ … ↬ On`. Step `k` (1-based) is `Ok`.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    steps: Vec<TraceStep>,
}

impl ConstructionTrace {
    pub fn new(initial: AbstractOrigami, label: impl Into<String>) -> Self {
        ConstructionTrace { steps: vec![TraceStep { label: label.into(), line: None, snapshot: initial }] }
    }

    pub fn push(&mut self, label: impl Into<String>, line: Option<usize>, snapshot: AbstractOrigami) {
        self.steps.push(TraceStep { label: label.into(), line, snapshot });
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Snapshot `O_k`, 1-based.
    pub fn snapshot(&self, k: usize) -> Option<&AbstractOrigami> {
        k.checked_sub(1).and_then(|i| self.steps.get(i)).map(|s| &s.snapshot)
    }

    pub fn last(&self) -> &AbstractOrigami {
        &self.steps.last().expect("trace is never empty").snapshot
    }
}
