//! Well-formedness checks over a whole construction trace.

use crate::geometry::{self, EPS};
use crate::origami::{graph_equal, ConstructionTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Empty when the check passed.
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check(name: &'static str, failures: Vec<String>) -> Check {
    Check { name, failures }
}

/// Runs every invariant over the trace, in a fixed order.
pub fn check_trace(trace: &ConstructionTrace) -> Vec<Check> {
    let steps = trace.steps();
    let mut tree = Vec::new();
    let mut area = Vec::new();
    let mut creases = Vec::new();
    let mut layers = Vec::new();
    let a0 = steps[0].snapshot.total_area();
    if steps[0].snapshot.face_ids().len() != 1 {
        tree.push("step 1 does not start from a single face".to_string());
    }
    for (i, step) in steps.iter().enumerate() {
        let k = i + 1;
        let ao = &step.snapshot;
        if i > 0 {
            let prev = steps[i - 1].snapshot.face_ids();
            for id in ao.face_ids() {
                let ok = prev.contains(&id) || id.parent().is_some_and(|p| prev.contains(&p));
                if !ok {
                    tree.push(format!("step {k}: face {id} has no parent in step {}", k - 1));
                }
            }
        }
        let a = ao.total_area();
        if (a - a0).abs() > EPS * k as f64 {
            area.push(format!("step {k}: area {a} differs from {a0}"));
        }
        for e in ao.adjacency() {
            for id in [e.a, e.b] {
                match ao.face(id) {
                    Some(f) if f.polygon.has_boundary_segment(&e.crease) => {}
                    _ => creases.push(format!("step {k}: crease {}-{} is not on the boundary of {id}", e.a, e.b)),
                }
            }
        }
        for p in ao.superposition() {
            let (u, l) = (ao.face(p.upper), ao.face(p.lower));
            let overlap = match (u, l) {
                (Some(u), Some(l)) => geometry::overlap_area(&u.polygon, &l.polygon),
                _ => 0.0,
            };
            if overlap <= EPS {
                layers.push(format!("step {k}: {} over {} without overlapping", p.upper, p.lower));
            }
        }
        if !ao.check_superposition_acyclic() {
            layers.push(format!("step {k}: superposition is cyclic"));
        }
    }

    let register = if trace.last().cut_register().is_empty() {
        Vec::new()
    } else {
        vec![format!("{} edges still cut at the end", trace.last().cut_register().len())]
    };

    // a composite statement leaves several consecutive steps from one line
    let mut composites = Vec::new();
    let mut i = 1;
    while i < steps.len() {
        let mut j = i;
        while j + 1 < steps.len() && steps[j + 1].line.is_some() && steps[j + 1].line == steps[i].line {
            j += 1;
        }
        if j > i {
            let before = steps[i - 1].snapshot.adjacency_graph();
            let after = steps[j].snapshot.adjacency_graph();
            if !graph_equal(&before, &after) {
                composites.push(format!("steps {}..{}: adjacency changed across `{}`", i + 1, j + 1, steps[i].label));
            }
        }
        i = j + 1;
    }

    vec![
        check("face ids descend from earlier faces", tree),
        check("total area is conserved", area),
        check("creases lie on both faces' boundaries", creases),
        check("superposition pairs overlap and are acyclic", layers),
        check("cut register is empty at the end", register),
        check("composite folds preserve adjacency", composites),
    ]
}
