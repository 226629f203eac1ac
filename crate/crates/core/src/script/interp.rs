//! Executes a parsed script against a current origami, recording the trace.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ast::*;
use crate::classics::{self, CrimpVariant, LayerPair, Step};
use crate::engine::{self, FoldSpec};
use crate::geometry::{self, side, Line, Point, Ray, Side};
use crate::origami::{graph_equal, AbstractOrigami, ConstructionTrace, CreaseKind, FaceId};
use crate::rules;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line} (step {step}): {msg}")]
pub struct RunError {
    /// 1-based source line of the failing statement.
    pub line: usize,
    /// Index the failing step would have had in the trace.
    pub step: usize,
    pub msg: String,
}

struct Interp {
    points: BTreeMap<String, Point>,
    lines: BTreeMap<String, Line>,
    trace: ConstructionTrace,
    /// Line of the most recent flat fold, for `image(..)`.
    last_fold: Option<Line>,
}

type Res<T> = Result<T, String>;

fn face_ids(v: &[u64]) -> BTreeSet<FaceId> {
    v.iter().map(|&n| FaceId(n)).collect()
}

fn kind_of(k: Kind) -> CreaseKind {
    match k {
        Kind::Valley => CreaseKind::Valley,
        Kind::Mountain => CreaseKind::Mountain,
    }
}

fn show_ids(ids: &BTreeSet<FaceId>) -> String {
    let parts: Vec<String> = ids.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Interp {
    fn ao(&self) -> &AbstractOrigami {
        self.trace.last()
    }

    fn point(&self, e: &PointExpr) -> Res<Point> {
        match e {
            PointExpr::Name(n) => self.points.get(n).copied().ok_or_else(|| format!("unknown point `{n}`")),
            PointExpr::Coord(x, y) => {
                let p = Point::new(x.eval(), y.eval());
                if p.is_finite() {
                    Ok(p)
                } else {
                    Err(format!("coordinates of {e} are not finite"))
                }
            }
            PointExpr::Midpoint(p, q) => Ok(geometry::midpoint(self.point(p)?, self.point(q)?)),
            PointExpr::Intersect(l, m) => {
                geometry::intersect(&self.line(l)?, &self.line(m)?).ok_or_else(|| format!("{l} and {m} are parallel"))
            }
            PointExpr::Image(p) => {
                let l = self.last_fold.ok_or("image(..) needs a preceding flat fold")?;
                Ok(geometry::reflect(self.point(p)?, &l))
            }
        }
    }

    fn line(&self, e: &LineExpr) -> Res<Line> {
        match e {
            LineExpr::Name(n) => self.lines.get(n).copied().ok_or_else(|| format!("unknown line `{n}`")),
            LineExpr::Through(p, q) => Line::through(self.point(p)?, self.point(q)?).map_err(|e| e.to_string()),
        }
    }

    fn ray(&self, e: &RayExpr) -> Res<Ray> {
        match e {
            RayExpr::Ray(p, q) => Ray::new(self.point(p)?, self.point(q)?).map_err(|e| e.to_string()),
            RayExpr::Rev(r) => Ok(self.ray(r)?.rev()),
            RayExpr::Along(l, moving) => {
                let r = Ray::along(&self.line(l)?);
                let Some(p) = moving else { return Ok(r) };
                match side(&r, self.point(p)?) {
                    Side::Right => Ok(r),
                    Side::Left => Ok(r.rev()),
                    Side::On => Err(format!("moving point {p} lies on the fold line")),
                }
            }
        }
    }

    fn rule(&self, r: &Rule) -> Res<Vec<Line>> {
        let out = match r {
            Rule::O1(p, q) => rules::o1(self.point(p)?, self.point(q)?),
            Rule::O2(p, q) => rules::o2(self.point(p)?, self.point(q)?),
            Rule::O3(l, m) => rules::o3(&self.line(l)?, &self.line(m)?),
            Rule::O4(p, l) => rules::o4(self.point(p)?, &self.line(l)?),
            Rule::O5(p, m, q) => rules::o5(self.point(p)?, &self.line(m)?, self.point(q)?),
            Rule::O6(p, m, q, n) => rules::o6(self.point(p)?, &self.line(m)?, self.point(q)?, &self.line(n)?),
            Rule::O7(p, m, n) => rules::o7(self.point(p)?, &self.line(m)?, &self.line(n)?),
        };
        out.map_err(|e| e.to_string())
    }

    fn define_point(&mut self, name: &str, p: Point) -> Res<()> {
        if self.points.contains_key(name) || self.lines.contains_key(name) {
            return Err(format!("`{name}` is already defined"));
        }
        self.points.insert(name.to_string(), p);
        Ok(())
    }

    /// After a flat fold, every named point carried by the moving faces gets
    /// its image bound under the name with one more tick.
    fn bind_images(&mut self, next: &AbstractOrigami, moved: &BTreeSet<FaceId>, line: &Line) {
        let mut fresh = Vec::new();
        for (name, &p) in &self.points {
            if line.contains(p) {
                continue;
            }
            let q = geometry::reflect(p, line);
            let carried = moved.iter().any(|id| next.face(*id).is_some_and(|f| f.polygon.contains(q)));
            if carried {
                fresh.push((format!("{name}'"), q));
            }
        }
        self.points.extend(fresh);
    }

    fn do_fold(&mut self, spec: FoldSpec, label: &str, line_no: usize) -> Res<()> {
        let moved = engine::moving_set(self.ao(), &spec).map_err(|e| e.to_string())?;
        let next = engine::fold(self.ao(), &spec).map_err(|e| e.to_string())?;
        if !next.is_posed() {
            let line = spec.ray.line();
            self.bind_images(&next, &moved, &line);
            self.last_fold = Some(line);
        }
        self.trace.push(label, Some(line_no), next);
        Ok(())
    }

    fn push_steps(&mut self, text: &str, line_no: usize, steps: Vec<Step>) {
        let n = steps.len();
        for (i, (op, snap)) in steps.into_iter().enumerate() {
            self.trace.push(format!("{text} [{}/{n}] {op}", i + 1), Some(line_no), snap);
        }
        self.last_fold = None;
    }

    fn exec(&mut self, s: &Located) -> Res<()> {
        let text = s.text.as_str();
        let pair = |p: &(u64, u64)| LayerPair::new(FaceId(p.0), FaceId(p.1));
        let composite = |r: Result<Vec<Step>, classics::ClassicError>| r.map_err(|e| e.to_string());
        match &s.stmt {
            Stmt::Paper { .. } => return Err("duplicate paper declaration".into()),
            Stmt::Point { name, value } => {
                let p = self.point(value)?;
                self.define_point(name, p)?;
            }
            Stmt::Line { name, rule, pick } => {
                let sols = self.rule(rule)?;
                let chosen = match (pick, sols.len()) {
                    (_, 0) => return Err(format!("{rule} has no solution")),
                    (None, 1) => sols[0],
                    (None, n) => return Err(format!("{rule} has {n} solutions; choose one with `pick k`")),
                    (Some(k), n) if *k > n => return Err(format!("pick {k} but {rule} has {n} solutions")),
                    (Some(k), _) => sols[k - 1],
                };
                if self.points.contains_key(name) || self.lines.contains_key(name) {
                    return Err(format!("`{name}` is already defined"));
                }
                self.lines.insert(name.clone(), chosen);
            }
            Stmt::Fold { kind, faces, ray, angle, insert } => {
                let mut spec = FoldSpec::new(kind_of(*kind), self.ray(ray)?);
                if let Some(v) = faces {
                    spec.targets = Some(face_ids(v));
                }
                if let Some(a) = angle {
                    spec.angle = a.eval();
                }
                spec.insert_face = insert.map(FaceId);
                self.do_fold(spec, text, s.line)?;
            }
            Stmt::Bring { from, to, kind, faces } => {
                let ray = engine::bring_ray(self.point(from)?, self.point(to)?).map_err(|e| e.to_string())?;
                let mut spec = FoldSpec::new(kind_of(kind.unwrap_or(Kind::Valley)), ray);
                spec.targets = faces.as_deref().map(face_ids);
                self.do_fold(spec, text, s.line)?;
            }
            Stmt::Cut(a, b) => {
                let next = self.ao().cut_edge(FaceId(*a), FaceId(*b)).map_err(|e| e.to_string())?;
                self.trace.push(text, Some(s.line), next);
            }
            Stmt::Glue => {
                let next = self.ao().glue_edges().map_err(|e| e.to_string())?;
                self.trace.push(text, Some(s.line), next);
            }
            Stmt::Unfold => {
                let next = engine::unfold(self.ao()).map_err(|e| e.to_string())?;
                self.last_fold = None;
                self.trace.push(text, Some(s.line), next);
            }
            Stmt::Squash { pair: p, bottom, ridge } => {
                let steps = composite(classics::squash_fold_steps(self.ao(), pair(p), self.ray(bottom)?, self.ray(ridge)?))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::InsideReverse { pair: p, ray } => {
                let steps = composite(classics::inside_reverse_fold_steps(self.ao(), pair(p), self.ray(ray)?))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::OutsideReverse { pair: p, ray } => {
                let steps = composite(classics::outside_reverse_fold_steps(self.ao(), pair(p), self.ray(ray)?))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::RabbitEar { pair: p, ridge, base, hyp } => {
                let (ridge, base, hyp) = (self.ray(ridge)?, self.ray(base)?, self.ray(hyp)?);
                let steps = composite(classics::rabbit_ear_fold_steps(self.ao(), pair(p), ridge, base, hyp))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::Pleat { first, second, faces } => {
                let targets = faces.as_deref().map(face_ids);
                let steps = composite(classics::pleat_fold_steps(self.ao(), self.ray(first)?, self.ray(second)?, targets))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::PleatCrimp { pair: p, first, second, variant } => {
                let variant = match variant {
                    Variant::Outside => CrimpVariant::Outside,
                    Variant::Inside => CrimpVariant::Inside,
                };
                let (first, second) = (self.ray(first)?, self.ray(second)?);
                let steps = composite(classics::pleat_crimp_fold_steps(self.ao(), pair(p), first, second, variant))?;
                self.push_steps(text, s.line, steps);
            }
            Stmt::AssertFaces(v) => {
                let want = face_ids(v);
                let have = self.ao().face_ids();
                if want != have {
                    return Err(format!("assertion failed: faces are {}, expected {}", show_ids(&have), show_ids(&want)));
                }
            }
            Stmt::AssertAdjacencySince(k) => {
                let then = self.trace.snapshot(*k).ok_or_else(|| format!("no step {k} in the trace yet"))?;
                if !graph_equal(&then.adjacency_graph(), &self.ao().adjacency_graph()) {
                    return Err(format!("assertion failed: adjacency graph changed since step {k}"));
                }
            }
        }
        Ok(())
    }
}

/// Runs a script. Step 1 of the trace is the paper declaration; every
/// statement that changes the origami appends one step per primitive
/// operation it performs. Point, line and assert statements add no step.
pub fn run(ast: &ScriptAst) -> Result<ConstructionTrace, RunError> {
    let first = ast.statements.first().ok_or(RunError { line: 1, step: 1, msg: "missing paper declaration".into() })?;
    let Stmt::Paper { names, at } = &first.stmt else {
        return Err(RunError { line: first.line, step: 1, msg: "missing paper declaration".into() });
    };
    let coords = at.as_ref().map(|c| c.clone().map(|(x, y)| Point::new(x.eval(), y.eval())));
    let corner_names = [names[0].as_str(), names[1].as_str(), names[2].as_str(), names[3].as_str()];
    let ao = AbstractOrigami::init_square(corner_names, coords)
        .map_err(|e| RunError { line: first.line, step: 1, msg: e.to_string() })?;
    let corners = coords.unwrap_or(crate::origami::DEFAULT_CORNERS);
    let mut it = Interp {
        points: BTreeMap::new(),
        lines: BTreeMap::new(),
        trace: ConstructionTrace::new(ao, first.text.clone()),
        last_fold: None,
    };
    for (n, p) in names.iter().zip(corners) {
        it.define_point(n, p).map_err(|msg| RunError { line: first.line, step: 1, msg })?;
    }
    for s in &ast.statements[1..] {
        let step = it.trace.len() + 1;
        it.exec(s).map_err(|msg| RunError { line: s.line, step, msg })?;
    }
    Ok(it.trace)
}
