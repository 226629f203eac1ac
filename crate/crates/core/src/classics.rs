//! Composite folds built from one cut, a fixed sequence of single-line folds,
//! and a glue.
//!
//! Each composite has a `*_steps` form returning every intermediate snapshot
//! with a short label, and a plain form returning only the result.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::engine::{self, bring_ray, EngineError, FoldSpec};
use crate::geometry::{self, Ray, EPS};
use crate::origami::{AbstractOrigami, CreaseKind, FaceId, OrigamiError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

impl From<OrigamiError> for ClassicError {
    fn from(e: OrigamiError) -> Self {
        ClassicError::Engine(e.into())
    }
}

/// A pair of adjacent faces, lower one first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerPair {
    pub below: FaceId,
    pub above: FaceId,
}

impl LayerPair {
    pub fn new(below: FaceId, above: FaceId) -> Self {
        LayerPair { below, above }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrimpVariant {
    Outside,
    Inside,
}

/// One labeled primitive of a composite.
pub type Step = (String, AbstractOrigami);

struct Recorder {
    cur: AbstractOrigami,
    steps: Vec<Step>,
}

impl Recorder {
    fn new(ao: &AbstractOrigami) -> Self {
        Recorder { cur: ao.clone(), steps: Vec::new() }
    }

    fn push(&mut self, label: String, next: AbstractOrigami) {
        self.cur = next.clone();
        self.steps.push((label, next));
    }

    fn cut(&mut self, pair: LayerPair) -> Result<(), ClassicError> {
        let next = self.cur.cut_edge(pair.below, pair.above)?;
        self.push(format!("cut {{{},{}}}", pair.below, pair.above), next);
        Ok(())
    }

    /// Folds and returns the set of faces that moved.
    fn fold(&mut self, spec: FoldSpec) -> Result<BTreeSet<FaceId>, ClassicError> {
        let moved = engine::moving_set(&self.cur, &spec)?;
        let next = engine::fold(&self.cur, &spec)?;
        let targets = match &spec.targets {
            Some(t) => format!(" faces {}", braces(t)),
            None => String::new(),
        };
        let insert = spec.insert_face.map(|f| format!(" insert {f}")).unwrap_or_default();
        self.push(format!("{} fold{targets}{insert}", spec.kind), next);
        Ok(moved)
    }

    fn glue(&mut self) -> Result<(), ClassicError> {
        let next = self.cur.glue_edges()?;
        self.push("glue".to_string(), next);
        Ok(())
    }

    fn finish(self) -> Vec<Step> {
        self.steps
    }
}

fn braces(ids: &BTreeSet<FaceId>) -> String {
    let inner: Vec<String> = ids.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Current faces descended from (or equal to) any of `roots`.
pub fn descendants(ao: &AbstractOrigami, roots: &[FaceId]) -> BTreeSet<FaceId> {
    ao.face_ids()
        .into_iter()
        .filter(|&f| {
            let mut id = Some(f);
            while let Some(i) = id {
                if roots.contains(&i) {
                    return true;
                }
                id = i.parent();
            }
            false
        })
        .collect()
}

fn last(steps: Vec<Step>) -> AbstractOrigami {
    steps.into_iter().last().expect("composites record steps").1
}

fn require_pair(ao: &AbstractOrigami, pair: LayerPair) -> Result<(), ClassicError> {
    if ao.edge(pair.below, pair.above).is_none() {
        return Err(ClassicError::Precondition("pair of faces is not adjacent"));
    }
    Ok(())
}

/// Cut, valley-fold `below` along `bottom = Ray[P,Q]`, valley-fold `above`
/// along `ridge = Ray[R,P]`, bring `R` onto `Q`, glue.
pub fn squash_fold_steps(
    ao: &AbstractOrigami,
    pair: LayerPair,
    bottom: Ray,
    ridge: Ray,
) -> Result<Vec<Step>, ClassicError> {
    if !bottom.origin.approx_eq(ridge.through) {
        return Err(ClassicError::Precondition("bottom and ridge rays must share their point P"));
    }
    require_pair(ao, pair)?;
    let (r, q) = (ridge.origin, bottom.through);
    let mut rec = Recorder::new(ao);
    rec.cut(pair)?;
    rec.fold(FoldSpec::valley(bottom).targets(descendants(&rec.cur, &[pair.below])))?;
    rec.fold(FoldSpec::valley(ridge).targets(descendants(&rec.cur, &[pair.above])))?;
    let both = descendants(&rec.cur, &[pair.below, pair.above]);
    rec.fold(FoldSpec::valley(bring_ray(r, q)?).targets(both))?;
    rec.glue()?;
    Ok(rec.finish())
}

pub fn squash_fold(ao: &AbstractOrigami, pair: LayerPair, bottom: Ray, ridge: Ray) -> Result<AbstractOrigami, ClassicError> {
    squash_fold_steps(ao, pair, bottom, ridge).map(last)
}

/// Cut, mountain-fold `above` tucked under `below`, valley-fold `below`
/// tucked over `above`, glue.
pub fn inside_reverse_fold_steps(ao: &AbstractOrigami, pair: LayerPair, ray: Ray) -> Result<Vec<Step>, ClassicError> {
    require_pair(ao, pair)?;
    let mut rec = Recorder::new(ao);
    rec.cut(pair)?;
    let above = descendants(&rec.cur, &[pair.above]);
    let anchor = anchor_face(&rec.cur, pair.below, &ray);
    rec.fold(FoldSpec::mountain(ray).targets(above).insert(anchor))?;
    let below = descendants(&rec.cur, &[pair.below]);
    let anchor = anchor_face(&rec.cur, pair.above, &ray);
    rec.fold(FoldSpec::valley(ray).targets(below).insert(anchor))?;
    rec.glue()?;
    Ok(rec.finish())
}

pub fn inside_reverse_fold(ao: &AbstractOrigami, pair: LayerPair, ray: Ray) -> Result<AbstractOrigami, ClassicError> {
    inside_reverse_fold_steps(ao, pair, ray).map(last)
}

/// The face standing in for `id` as an insertion anchor: `id` itself, or its
/// stationary descendant if it has been split by `ray`.
fn anchor_face(ao: &AbstractOrigami, id: FaceId, ray: &Ray) -> FaceId {
    if ao.face(id).is_some() {
        return id;
    }
    descendants(ao, &[id])
        .into_iter()
        .find(|f| {
            let poly = &ao.face(*f).expect("descendant exists").polygon;
            poly.vertices().iter().all(|&p| ray.signed_distance(p) >= -EPS)
        })
        .unwrap_or(id)
}

/// Cut, valley-fold `above`, mountain-fold `below`, glue.
pub fn outside_reverse_fold_steps(ao: &AbstractOrigami, pair: LayerPair, ray: Ray) -> Result<Vec<Step>, ClassicError> {
    require_pair(ao, pair)?;
    let mut rec = Recorder::new(ao);
    rec.cut(pair)?;
    rec.fold(FoldSpec::valley(ray).targets(descendants(&rec.cur, &[pair.above])))?;
    rec.fold(FoldSpec::mountain(ray).targets(descendants(&rec.cur, &[pair.below])))?;
    rec.glue()?;
    Ok(rec.finish())
}

pub fn outside_reverse_fold(ao: &AbstractOrigami, pair: LayerPair, ray: Ray) -> Result<AbstractOrigami, ClassicError> {
    outside_reverse_fold_steps(ao, pair, ray).map(last)
}

fn right_angle(at: geometry::Point, p: geometry::Point, q: geometry::Point) -> bool {
    let (u, v) = (p - at, q - at);
    u.dot(v).abs() <= EPS * u.norm() * v.norm()
}

/// Rays `Ray[P,Q]`, `Ray[P,R]`, `Ray[P,S]` with right angles at `R` in both
/// `PQR` and `PRS`. Cut, then valley folds along `Rev(ridge)` (faces of
/// `below` only), `base`, `Rev(hypotenuse)`, `ridge`, then glue.
pub fn rabbit_ear_fold_steps(
    ao: &AbstractOrigami,
    pair: LayerPair,
    ridge: Ray,
    base: Ray,
    hypotenuse: Ray,
) -> Result<Vec<Step>, ClassicError> {
    let p = ridge.origin;
    if !(base.origin.approx_eq(p) && hypotenuse.origin.approx_eq(p)) {
        return Err(ClassicError::Precondition("rabbit-ear rays must start at one point"));
    }
    let (q, r, s) = (ridge.through, base.through, hypotenuse.through);
    if !right_angle(r, p, q) || !right_angle(r, p, s) {
        return Err(ClassicError::Precondition("rabbit-ear triangles need right angles at the base point"));
    }
    require_pair(ao, pair)?;
    let mut rec = Recorder::new(ao);
    rec.cut(pair)?;
    rec.fold(FoldSpec::valley(ridge.rev()).targets(descendants(&rec.cur, &[pair.below])))?;
    rec.fold(FoldSpec::valley(base))?;
    rec.fold(FoldSpec::valley(hypotenuse.rev()))?;
    rec.fold(FoldSpec::valley(ridge))?;
    rec.glue()?;
    Ok(rec.finish())
}

pub fn rabbit_ear_fold(
    ao: &AbstractOrigami,
    pair: LayerPair,
    ridge: Ray,
    base: Ray,
    hypotenuse: Ray,
) -> Result<AbstractOrigami, ClassicError> {
    rabbit_ear_fold_steps(ao, pair, ridge, base, hypotenuse).map(last)
}

/// Where the second pleat line lies after the first fold, oriented so that
/// the part beyond it (as drawn on the unfolded paper) moves back.
pub fn pleat_second_ray(first: &Ray, second: &Ray) -> Ray {
    second.reflect(&first.line()).rev()
}

fn pleat_into(
    rec: &mut Recorder,
    first: Ray,
    second: Ray,
    targets: Option<BTreeSet<FaceId>>,
    kinds: (CreaseKind, CreaseKind),
) -> Result<(), ClassicError> {
    let spec = FoldSpec { targets, ..FoldSpec::new(kinds.0, first) };
    let moved = rec.fold(spec)?;
    let stack: Vec<FaceId> = moved.iter().copied().collect();
    let area = |ao: &AbstractOrigami, ids: &BTreeSet<FaceId>| ids.iter().filter_map(|&f| ao.face(f)).map(|f| f.polygon.area()).sum::<f64>();
    let stack_area = area(&rec.cur, &moved);
    let again = rec.fold(FoldSpec::new(kinds.1, second).targets(moved))?;
    let inside = descendants(&rec.cur, &stack);
    if !again.is_subset(&inside) || area(&rec.cur, &again) >= stack_area - EPS {
        return Err(ClassicError::Precondition("second pleat line misses the folded stack"));
    }
    Ok(())
}

/// Valley fold along `first`, then a mountain fold restricted to the moved
/// faces along `second`. Both rays are given on the unfolded paper.
pub fn pleat_fold_steps(
    ao: &AbstractOrigami,
    first: Ray,
    second: Ray,
    targets: Option<BTreeSet<FaceId>>,
) -> Result<Vec<Step>, ClassicError> {
    let mut rec = Recorder::new(ao);
    let second = pleat_second_ray(&first, &second);
    pleat_into(&mut rec, first, second, targets, (CreaseKind::Valley, CreaseKind::Mountain))?;
    Ok(rec.finish())
}

pub fn pleat_fold(
    ao: &AbstractOrigami,
    first: Ray,
    second: Ray,
    targets: Option<BTreeSet<FaceId>>,
) -> Result<AbstractOrigami, ClassicError> {
    pleat_fold_steps(ao, first, second, targets).map(last)
}

/// Faces reachable from `start` without crossing a crease on `divide`.
fn half(ao: &AbstractOrigami, start: FaceId, divide: &geometry::Line) -> BTreeSet<FaceId> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for e in ao.adjacency() {
            let other = if e.a == f {
                e.b
            } else if e.b == f {
                e.a
            } else {
                continue;
            };
            if !e.crease.lies_on(divide) && seen.insert(other) {
                queue.push_back(other);
            }
        }
    }
    seen
}

/// Cuts the dividing crease and pleats each half along the same two rays
/// (current coordinates; `second` as drawn on the unfolded paper, as for
/// [`pleat_fold`]). `Outside` folds the top half's pleat upward and the bottom
/// half's downward so both stay exposed; `Inside` swaps the kinds on both
/// halves, tucking the pleats between them.
pub fn pleat_crimp_fold_steps(
    ao: &AbstractOrigami,
    divide: LayerPair,
    first: Ray,
    second: Ray,
    variant: CrimpVariant,
) -> Result<Vec<Step>, ClassicError> {
    let edge = ao.edge(divide.below, divide.above).ok_or(ClassicError::Precondition("dividing faces are not adjacent"))?;
    let line = geometry::line_through(edge.crease.a, edge.crease.b).map_err(EngineError::from)?;
    let mut rec = Recorder::new(ao);
    rec.cut(divide)?;
    let top = half(&rec.cur, divide.above, &line);
    let bottom = half(&rec.cur, divide.below, &line);
    if !top.is_disjoint(&bottom) {
        return Err(ClassicError::Precondition("the dividing crease does not separate the origami"));
    }
    let (v, m) = (CreaseKind::Valley, CreaseKind::Mountain);
    let (top_kinds, bottom_kinds) = match variant {
        CrimpVariant::Outside => ((v, m), (m, v)),
        CrimpVariant::Inside => ((m, v), (v, m)),
    };
    let second = pleat_second_ray(&first, &second);
    pleat_into(&mut rec, first, second, Some(top), top_kinds)?;
    let bottom = descendants(&rec.cur, &bottom.into_iter().collect::<Vec<_>>());
    pleat_into(&mut rec, first, second, Some(bottom), bottom_kinds)?;
    rec.glue()?;
    Ok(rec.finish())
}

pub fn pleat_crimp_fold(
    ao: &AbstractOrigami,
    divide: LayerPair,
    first: Ray,
    second: Ray,
    variant: CrimpVariant,
) -> Result<AbstractOrigami, ClassicError> {
    pleat_crimp_fold_steps(ao, divide, first, second, variant).map(last)
}
