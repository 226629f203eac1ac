//! Single-line mountain and valley folds on layered paper, unfold, and the
//! point-to-point fold.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use thiserror::Error;

use crate::geometry::{self, GeometryError, Isometry, Line, Point, Polygon, Ray, Segment, EPS};
use crate::origami::{edge_key, AbstractOrigami, AdjacencyEdge, CreaseKind, FaceId, OrigamiError, PosedFold};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error("fold angle {0} is outside (0, pi]")]
    BadAngle(f64),
    #[error("fold line moves no face")]
    NothingMoves,
    #[error("face {0} is attached to the moving stack but lies across or left of the fold line")]
    Tear(FaceId),
    #[error("face {0} is sandwiched inside the moving stack")]
    Jam(FaceId),
    #[error("fold would make the superposition relation cyclic")]
    Cycle,
    #[error("nothing to unfold: the last operation was not a flat fold")]
    NothingToUnfold,
}

impl From<GeometryError> for EngineError {
    fn from(e: GeometryError) -> Self {
        EngineError::Origami(OrigamiError::Geometry(e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldSpec {
    pub kind: CreaseKind,
    pub ray: Ray,
    pub targets: Option<BTreeSet<FaceId>>,
    pub angle: f64,
    pub insert_face: Option<FaceId>,
}

impl FoldSpec {
    pub fn new(kind: CreaseKind, ray: Ray) -> Self {
        FoldSpec { kind, ray, targets: None, angle: PI, insert_face: None }
    }

    pub fn valley(ray: Ray) -> Self {
        Self::new(CreaseKind::Valley, ray)
    }

    pub fn mountain(ray: Ray) -> Self {
        Self::new(CreaseKind::Mountain, ray)
    }

    pub fn targets(mut self, faces: impl IntoIterator<Item = FaceId>) -> Self {
        self.targets = Some(faces.into_iter().collect());
        self
    }

    pub fn angle(mut self, angle: f64) -> Self {
        self.angle = angle;
        self
    }

    pub fn insert(mut self, face: FaceId) -> Self {
        self.insert_face = Some(face);
        self
    }

    fn is_flat(&self) -> bool {
        (self.angle - PI).abs() <= EPS
    }
}

/// What a flat fold did, enough to undo it.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldRecord {
    pub line: Line,
    pub moved: BTreeSet<FaceId>,
    pub splits: BTreeMap<FaceId, (FaceId, FaceId)>,
    /// Layer order right after splitting, before anything moved.
    pub prior_order: Vec<FaceId>,
}

/// Whether the polygon has vertices strictly left and strictly right of the ray.
fn extent(ray: &Ray, poly: &Polygon) -> (bool, bool) {
    let mut left = false;
    let mut right = false;
    for &p in poly.vertices() {
        let d = ray.signed_distance(p);
        left |= d > EPS;
        right |= d < -EPS;
    }
    (left, right)
}

/// The state after splitting, before any face moves.
struct Prepared {
    ao: AbstractOrigami,
    splits: BTreeMap<FaceId, (FaceId, FaceId)>,
    moving: BTreeSet<FaceId>,
    candidates: BTreeSet<FaceId>,
}

fn check_spec(ao: &AbstractOrigami, spec: &FoldSpec) -> Result<(), EngineError> {
    if ao.posed {
        return Err(OrigamiError::Posed.into());
    }
    if !(spec.angle > EPS && spec.angle <= PI + EPS) {
        return Err(EngineError::BadAngle(spec.angle));
    }
    let named = spec.targets.iter().flatten().chain(spec.insert_face.iter());
    for &id in named {
        if !ao.faces.contains_key(&id) {
            return Err(OrigamiError::UnknownFace(id).into());
        }
    }
    Ok(())
}

fn prepare(ao: &AbstractOrigami, spec: &FoldSpec) -> Result<Prepared, EngineError> {
    check_spec(ao, spec)?;
    let ray = spec.ray;
    let line = ray.line();
    let same_dir = line.direction().dot(ray.direction()) > 0.0;
    let targets: BTreeSet<FaceId> = match &spec.targets {
        Some(t) => t.clone(),
        None => ao.face_ids(),
    };

    let mut next = ao.clone();
    next.last_fold = None;
    let mut splits = BTreeMap::new();
    let mut candidates = BTreeSet::new();
    for &id in &targets {
        let face = &ao.faces[&id];
        let (left, right) = extent(&ray, &face.polygon);
        if !(left && right) {
            candidates.insert(id);
            continue;
        }
        let cut = geometry::split_polygon(&face.polygon, &line);
        let (l, r) = if same_dir { (cut.left, cut.right) } else { (cut.right, cut.left) };
        let (Some(l), Some(r), Some(seam)) = (l, r, cut.seam) else {
            candidates.insert(id);
            continue;
        };
        let (c0, c1) = id.children();
        next.faces.remove(&id);
        next.faces.insert(c0, face.piece(c0, l));
        next.faces.insert(c1, face.piece(c1, r));
        let pos = next.layer_order.iter().position(|&f| f == id).expect("face is layered");
        next.layer_order.splice(pos..=pos, [c0, c1]);
        let sheet = face.transform.inverse().apply_segment(&seam);
        next.adjacency.insert((c0, c1), AdjacencyEdge { a: c0, b: c1, crease: seam, sheet, kind: spec.kind });
        splits.insert(id, (c0, c1));
        candidates.insert(c0);
        candidates.insert(c1);
    }

    if !splits.is_empty() {
        let old: Vec<AdjacencyEdge> = next
            .adjacency
            .values()
            .filter(|e| splits.contains_key(&e.a) || splits.contains_key(&e.b))
            .cloned()
            .collect();
        for e in &old {
            next.adjacency.remove(&e.key());
        }
        for e in redistribute(&old, ao, &ray, &splits) {
            next.adjacency.insert(e.key(), e);
        }
        let register = std::mem::take(&mut next.cut_register);
        let mut out = Vec::new();
        for e in register {
            if splits.contains_key(&e.a) || splits.contains_key(&e.b) {
                out.extend(redistribute(std::slice::from_ref(&e), ao, &ray, &splits));
            } else {
                out.push(e);
            }
        }
        next.cut_register = out;
    }

    let mut moving: BTreeSet<FaceId> = candidates
        .iter()
        .copied()
        .filter(|id| {
            let (left, right) = extent(&ray, &next.faces[id].polygon);
            right && !left
        })
        .collect();
    if moving.is_empty() {
        return Err(EngineError::NothingMoves);
    }

    // pull in everything hanging off the moving stack by creases not on the fold line
    let mut queue: VecDeque<FaceId> = moving.iter().copied().collect();
    while let Some(f) = queue.pop_front() {
        for e in next.adjacency.values() {
            let other = if e.a == f {
                e.b
            } else if e.b == f {
                e.a
            } else {
                continue;
            };
            if moving.contains(&other) || e.crease.lies_on(&line) {
                continue;
            }
            let (left, _) = extent(&ray, &next.faces[&other].polygon);
            if left {
                return Err(EngineError::Tear(other));
            }
            moving.insert(other);
            queue.push_back(other);
        }
    }

    Ok(Prepared { ao: next, splits, moving, candidates })
}

/// Splits each edge touching a split face at the fold line and hands every
/// piece to the child on its side.
fn redistribute(
    edges: &[AdjacencyEdge],
    before: &AbstractOrigami,
    ray: &Ray,
    splits: &BTreeMap<FaceId, (FaceId, FaceId)>,
) -> Vec<AdjacencyEdge> {
    let crossing = |id: FaceId, s: &Segment| -> Option<f64> {
        splits.get(&id)?;
        let t = before.faces[&id].transform;
        let (da, db) = (ray.signed_distance(t.apply(s.a)), ray.signed_distance(t.apply(s.b)));
        ((da > EPS && db < -EPS) || (da < -EPS && db > EPS)).then(|| da / (da - db))
    };
    let owner = |id: FaceId, p: Point| -> FaceId {
        match splits.get(&id) {
            Some(&(c0, c1)) => {
                let q = before.faces[&id].transform.apply(p);
                if geometry::side(ray, q) == geometry::Side::Right {
                    c1
                } else {
                    c0
                }
            }
            None => id,
        }
    };

    let mut merged: BTreeMap<(FaceId, FaceId), AdjacencyEdge> = BTreeMap::new();
    for e in edges {
        let mut ts = vec![0.0, 1.0];
        ts.extend(crossing(e.a, &e.sheet));
        ts.extend(crossing(e.b, &e.sheet));
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let sub = Segment::new(e.sheet.at(w[0]), e.sheet.at(w[1]));
            if sub.length() <= EPS {
                continue;
            }
            let mid = sub.midpoint();
            let (a, b) = (owner(e.a, mid), owner(e.b, mid));
            let crease = before.faces[&e.a].transform.apply_segment(&sub);
            match merged.get_mut(&edge_key(a, b)) {
                Some(prev) => {
                    // pieces of one edge are collinear; keep the extreme endpoints
                    let dir = e.sheet.b - e.sheet.a;
                    let mut pts = [prev.sheet.a, prev.sheet.b, sub.a, sub.b];
                    pts.sort_by(|p, q| p.dot(dir).total_cmp(&q.dot(dir)));
                    prev.sheet = Segment::new(pts[0], pts[3]);
                    prev.crease = before.faces[&e.a].transform.apply_segment(&prev.sheet);
                }
                None => {
                    merged.insert(edge_key(a, b), AdjacencyEdge { a, b, crease, sheet: sub, kind: e.kind });
                }
            }
        }
    }
    merged.into_values().collect()
}

/// Faces that a fold would move, named as they will be after splitting.
pub fn moving_set(ao: &AbstractOrigami, spec: &FoldSpec) -> Result<BTreeSet<FaceId>, EngineError> {
    prepare(ao, spec).map(|p| p.moving)
}

pub fn fold(ao: &AbstractOrigami, spec: &FoldSpec) -> Result<AbstractOrigami, EngineError> {
    let Prepared { ao: mut next, splits, moving, candidates } = prepare(ao, spec)?;
    let line = spec.ray.line();

    if spec.insert_face.is_none() {
        check_jam(&next, &moving)?;
    }

    if !spec.is_flat() {
        for e in next.adjacency.values() {
            if moving.contains(&e.a) != moving.contains(&e.b) && e.crease.lies_on(&line) {
                next.crease_angles.insert(e.key(), spec.angle);
            }
        }
        next.posed = true;
        next.pose = Some(PosedFold { ray: spec.ray, moved: moving, angle: spec.angle, kind: spec.kind });
        next.recompute_superposition();
        return Ok(next);
    }

    let prior_order = next.layer_order.clone();
    let mirror = Isometry::reflection(&line);
    for id in &moving {
        let moved = next.faces[id].moved_by(&mirror);
        next.faces.insert(*id, moved);
    }
    refresh_creases(&mut next);

    let block: Vec<FaceId> = next.layer_order.iter().rev().copied().filter(|f| moving.contains(f)).collect();
    let mut order: Vec<FaceId> = next.layer_order.iter().copied().filter(|f| !moving.contains(f)).collect();
    let at = match spec.insert_face {
        Some(anchor) if !moving.contains(&anchor) => {
            let i = order.iter().position(|&f| f == anchor).expect("anchor is layered");
            match spec.kind {
                CreaseKind::Valley => i + 1,
                CreaseKind::Mountain => i,
            }
        }
        _ => {
            let overlapping = |pool: &mut dyn Iterator<Item = &FaceId>| -> Vec<usize> {
                let hits: BTreeSet<FaceId> = pool
                    .filter(|f| {
                        moving.iter().any(|m| {
                            geometry::overlap_area(&next.faces[f].polygon, &next.faces[m].polygon) > EPS
                        })
                    })
                    .copied()
                    .collect();
                order.iter().enumerate().filter(|(_, f)| hits.contains(f)).map(|(i, _)| i).collect()
            };
            let mut hits = overlapping(&mut candidates.iter().filter(|f| !moving.contains(f)));
            if hits.is_empty() {
                hits = overlapping(&mut order.iter());
            }
            match spec.kind {
                CreaseKind::Valley => hits.last().map_or(order.len(), |&i| i + 1),
                CreaseKind::Mountain => hits.first().map_or(0, |&i| i),
            }
        }
    };
    order.splice(at..at, block);
    next.layer_order = order;
    next.recompute_superposition();
    if !next.check_superposition_acyclic() {
        return Err(EngineError::Cycle);
    }
    next.last_fold = Some(FoldRecord { line, moved: moving, splits, prior_order });
    Ok(next)
}

/// A stationary face lying between two moving faces it overlaps would have to
/// pass through paper.
fn check_jam(ao: &AbstractOrigami, moving: &BTreeSet<FaceId>) -> Result<(), EngineError> {
    let order = &ao.layer_order;
    let overlaps = |a: FaceId, b: FaceId| geometry::overlap_area(&ao.faces[&a].polygon, &ao.faces[&b].polygon) > EPS;
    for (i, &x) in order.iter().enumerate() {
        if moving.contains(&x) {
            continue;
        }
        let below = order[..i].iter().any(|&m| moving.contains(&m) && overlaps(m, x));
        let above = order[i + 1..].iter().any(|&m| moving.contains(&m) && overlaps(m, x));
        if below && above {
            return Err(EngineError::Jam(x));
        }
    }
    Ok(())
}

fn refresh_creases(ao: &mut AbstractOrigami) {
    let faces = &ao.faces;
    for e in ao.adjacency.values_mut() {
        e.crease = faces[&e.a].transform.apply_segment(&e.sheet);
    }
}

/// Undoes the immediately preceding flat fold. Subdivision and creases stay.
pub fn unfold(ao: &AbstractOrigami) -> Result<AbstractOrigami, EngineError> {
    if ao.posed {
        return Err(OrigamiError::Posed.into());
    }
    let record = ao.last_fold.as_ref().ok_or(EngineError::NothingToUnfold)?;
    let mut next = ao.clone();
    let mirror = Isometry::reflection(&record.line);
    for id in &record.moved {
        let back = next.faces[id].moved_by(&mirror);
        next.faces.insert(*id, back);
    }
    refresh_creases(&mut next);
    next.layer_order = record.prior_order.clone();
    next.recompute_superposition();
    next.last_fold = None;
    Ok(next)
}

/// The ray along the perpendicular bisector of `p` and `q` with `p` on its
/// right, so folding along it carries `p` onto `q`.
pub fn bring_ray(p: Point, q: Point) -> Result<Ray, EngineError> {
    if p.dist(q) <= EPS {
        return Err(GeometryError::Degenerate("bring a point onto itself").into());
    }
    let m = geometry::midpoint(p, q);
    let v = p - m;
    Ok(Ray::new(m, m + Point::new(-v.y, v.x))?)
}

pub fn fold_bring(
    ao: &AbstractOrigami,
    p: Point,
    q: Point,
    kind: CreaseKind,
    targets: Option<BTreeSet<FaceId>>,
) -> Result<AbstractOrigami, EngineError> {
    let spec = FoldSpec { targets, ..FoldSpec::new(kind, bring_ray(p, q)?) };
    fold(ao, &spec)
}
