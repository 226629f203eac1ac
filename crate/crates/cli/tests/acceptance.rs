//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the report; the test fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use nalgebra::DMatrix;
use origami_core::classics::{descendants, squash_fold_steps, LayerPair};
use origami_core::engine::bring_ray;
use origami_core::geometry::{reflect, Polygon};
use origami_core::invariants::check_trace;
use origami_core::rules::{o1, o2, o3, o4, o5, o6, o6_polynomial, o7, real_roots};
use origami_core::script::{run_source, ScriptError};
use origami_core::{
    fold, graph_equal, unfold, AbstractOrigami, ConstructionTrace, EngineError, FaceId, FoldSpec, Line, OrigamiError,
    Point, Ray,
};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boundary coincidence, reflect-check and geometry restoration tolerance.
const TOL: f64 = 1e-9;
/// Allowed error of the dihedral angle of the standing rabbit ear.
const DIHEDRAL_TOL: f64 = 1e-6;

const COMPOSITES: &[&str] = &[
    "squash.ori",
    "inside_reverse.ori",
    "outside_reverse.ori",
    "rabbit_ear.ori",
    "pleat_crimp_outside.ori",
    "pleat_crimp_inside.ori",
];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fixture(name: &str) -> String {
    fs::read_to_string(fixture_path(name)).unwrap()
}

fn run(name: &str) -> Result<ConstructionTrace, String> {
    run_source(&fixture(name)).map_err(|e| format!("{name}: {e}"))
}

fn ids(v: &[u64]) -> BTreeSet<FaceId> {
    v.iter().map(|&n| FaceId(n)).collect()
}

fn shoelace(poly: &Polygon) -> f64 {
    let vs = poly.vertices();
    let twice: f64 = (0..vs.len()).map(|i| vs[i].cross(vs[(i + 1) % vs.len()])).sum();
    twice.abs() / 2.0
}

fn cyclic(ao: &AbstractOrigami) -> bool {
    let mut g = DiGraph::<FaceId, ()>::new();
    let idx: BTreeMap<FaceId, _> = ao.face_ids().into_iter().map(|f| (f, g.add_node(f))).collect();
    for p in ao.superposition() {
        g.add_edge(idx[&p.upper], idx[&p.lower], ());
    }
    is_cyclic_directed(&g)
}

fn squash_fixture_faces() -> Outcome {
    let trace = run("squash.ori")?;
    let got = trace.snapshot(5).ok_or("no step 5")?.face_ids();
    ensure(got == ids(&[4, 6, 10, 11, 14, 15]), || format!("O5 faces {got:?}"))
}

fn squash_keeps_adjacency() -> Outcome {
    let trace = run("squash.ori")?;
    let (o5, o10) = (trace.snapshot(5).ok_or("no step 5")?, trace.snapshot(10).ok_or("no step 10")?);
    ensure(trace.len() == 10, || format!("{} steps", trace.len()))?;
    ensure(graph_equal(&o5.adjacency_graph(), &o10.adjacency_graph()), || "adjacency of O5 and O10 differ".into())?;
    ensure(o5.edge(FaceId(10), FaceId(11)).is_some() && o10.edge(FaceId(10), FaceId(11)).is_some(), || {
        "10 and 11 are not adjacent".into()
    })
}

fn glue_coincidence() -> Outcome {
    for name in COMPOSITES {
        let trace = run(name)?;
        let glued = trace.steps().iter().filter(|s| s.label.ends_with("] glue")).count();
        ensure(glued >= 1, || format!("{name}: no glue step"))?;
        ensure(trace.last().cut_register().is_empty(), || format!("{name}: cut register not empty"))?;
    }
    // the squash stopped after its second fold: the cut edges no longer meet
    let trace = run("squash.ori")?;
    let o5 = trace.snapshot(5).unwrap();
    let (below, above) = (FaceId(10), FaceId(11));
    let (i, g, f) = (Point::new(0.5, 0.5), Point::new(1.0, 0.5), Point::new(0.5, 0.0));
    let cut = o5.cut_edge(below, above).map_err(|e| e.to_string())?;
    let one = fold(&cut, &FoldSpec::valley(Ray::new(i, g).unwrap()).targets(descendants(&cut, &[below])))
        .map_err(|e| e.to_string())?;
    let two = fold(&one, &FoldSpec::valley(Ray::new(f, i).unwrap()).targets(descendants(&one, &[above])))
        .map_err(|e| e.to_string())?;
    ensure(matches!(two.glue_edges(), Err(OrigamiError::GlueMismatch { .. })), || "truncated squash glued".into())?;
    let three = fold(&two, &FoldSpec::valley(bring_ray(f, g).unwrap()).targets(descendants(&two, &[below, above])))
        .map_err(|e| e.to_string())?;
    ensure(three.glue_edges().is_ok(), || "full squash did not glue".into())?;
    // and the composite itself agrees
    let steps = squash_fold_steps(o5, LayerPair::new(below, above), Ray::new(i, g).unwrap(), Ray::new(f, i).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(steps.len() == 5, || "squash is not five steps".into())
}

fn composite_conservation() -> Outcome {
    for name in COMPOSITES {
        let trace = run(name)?;
        let steps = trace.steps();
        let a0 = steps[0].snapshot.faces().map(|f| shoelace(&f.polygon)).sum::<f64>();
        let mut composites = 0;
        for (k, s) in steps.iter().enumerate() {
            ensure(!cyclic(&s.snapshot), || format!("{name}: step {} cyclic", k + 1))?;
            let a = s.snapshot.faces().map(|f| shoelace(&f.polygon)).sum::<f64>();
            ensure((a - a0).abs() <= TOL, || format!("{name}: step {} area {a}", k + 1))?;
            // the first step of a composite statement carries "[1/n]"
            if let Some(rest) = s.label.split(" [1/").nth(1) {
                let n: usize = rest.split(']').next().unwrap().parse().unwrap();
                let before = &steps[k - 1].snapshot;
                let after = &steps[k + n - 1].snapshot;
                ensure(graph_equal(&before.adjacency_graph(), &after.adjacency_graph()), || {
                    format!("{name}: adjacency changed across `{}`", s.label)
                })?;
                composites += 1;
            }
        }
        ensure(composites >= 1, || format!("{name}: no composite statement"))?;
    }
    Ok(())
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_line(rng: &mut ChaCha8Rng) -> Line {
    loop {
        let (p, q) = (random_point(rng), random_point(rng));
        if p.dist(q) > 0.1 {
            return Line::through(p, q).unwrap();
        }
    }
}

fn on(l: &Line, p: Point) -> bool {
    l.signed_distance(p).abs() <= TOL
}

/// Real roots from the eigenvalues of the companion matrix; `None` when a
/// near-double root makes the count ambiguous.
fn companion_roots(coeffs: &[f64]) -> Option<Vec<f64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().abs() <= 1e-12 * scale {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Some(Vec::new());
    }
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / c[deg];
    }
    let mut real = Vec::new();
    for z in m.complex_eigenvalues().iter() {
        let mag = 1.0 + z.re.abs();
        if z.im.abs() <= 1e-9 * mag {
            real.push(z.re);
        } else if z.im.abs() <= 1e-4 * mag {
            return None;
        }
    }
    real.sort_by(f64::total_cmp);
    if real.windows(2).any(|w| w[1] - w[0] < 1e-4) {
        return None;
    }
    Some(real)
}

fn huzita_justin_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = [0usize; 7];
    let mut oracle = 0;
    while count.iter().any(|&c| c < 1000) {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let (m, n) = (random_line(&mut rng), random_line(&mut rng));
        if m.normal().cross(n.normal()).abs() < 1e-2 || p.dist(q) < 1e-3 {
            continue;
        }
        if m.signed_distance(p).abs() < 1e-3 || n.signed_distance(q).abs() < 1e-3 {
            continue;
        }
        let err = |r: &str| format!("{r} failed at instance {}", count.iter().min().unwrap());
        let ls = o1(p, q).map_err(|e| e.to_string())?;
        ensure(ls.len() == 1 && on(&ls[0], p) && on(&ls[0], q), || err("O1"))?;
        let ls = o2(p, q).map_err(|e| e.to_string())?;
        ensure(ls.len() == 1 && reflect(p, &ls[0]).dist(q) <= TOL, || err("O2"))?;
        let ls = o3(&m, &n).map_err(|e| e.to_string())?;
        let (a, b) = (m.anchor(), m.anchor() + m.direction());
        ensure(ls.len() == 2 && ls.iter().all(|f| on(&n, reflect(a, f)) && on(&n, reflect(b, f))), || err("O3"))?;
        let ls = o4(p, &m).map_err(|e| e.to_string())?;
        ensure(ls.len() == 1 && on(&ls[0], p) && on(&m, reflect(m.anchor(), &ls[0])), || err("O4"))?;
        let ls = o5(p, &m, q).map_err(|e| e.to_string())?;
        ensure(ls.len() <= 2 && ls.iter().all(|f| on(f, q) && on(&m, reflect(p, f))), || err("O5"))?;
        let ls = o6(p, &m, q, &n).map_err(|e| e.to_string())?;
        ensure(ls.len() <= 3 && ls.iter().all(|f| on(&m, reflect(p, f)) && on(&n, reflect(q, f))), || err("O6"))?;
        if oracle < 100 {
            let poly = o6_polynomial(p, &m, q, &n);
            if let Some(want) = companion_roots(&poly) {
                ensure(real_roots(&poly).len() == want.len() && ls.len() == want.len(), || err("O6 oracle"))?;
                oracle += 1;
            }
        }
        let ls = o7(p, &m, &n).map_err(|e| e.to_string())?;
        ensure(ls.len() <= 1 && ls.iter().all(|f| on(&m, reflect(p, f)) && f.normal().cross(n.direction()).abs() <= TOL), || {
            err("O7")
        })?;
        for c in &mut count {
            *c += 1;
        }
    }
    ensure(oracle == 100, || format!("only {oracle} oracle comparisons"))
}

fn random_convex(rng: &mut ChaCha8Rng) -> Polygon {
    loop {
        let n = rng.gen_range(3..9);
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        a.sort_by(f64::total_cmp);
        a.dedup_by(|x, y| (*x - *y).abs() < 0.05);
        let (rx, ry) = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
        if a.len() >= 3 {
            if let Ok(p) = Polygon::new(a.iter().map(|t| Point::new(rx * t.cos(), ry * t.sin())).collect()) {
                return p;
            }
        }
    }
}

fn interior(rng: &mut ChaCha8Rng, poly: &Polygon) -> Point {
    let w: Vec<f64> = poly.vertices().iter().map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    poly.vertices().iter().zip(&w).fold(Point::new(0.0, 0.0), |acc, (&v, &k)| acc + v * (k / total))
}

fn engine_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut done = 0;
    while done < 500 {
        let poly = random_convex(&mut rng);
        let (p, q) = (interior(&mut rng, &poly), interior(&mut rng, &poly));
        if p.dist(q) < 1e-3 {
            continue;
        }
        let ao = AbstractOrigami::from_polygon(poly.clone()).map_err(|e| e.to_string())?;
        let folded = fold(&ao, &FoldSpec::valley(Ray::new(p, q).unwrap())).map_err(|e| format!("round trip {done}: {e}"))?;
        ensure(folded.face_ids() == ids(&[2, 3]), || format!("round trip {done}: faces {:?}", folded.face_ids()))?;
        let back = unfold(&folded).map_err(|e| e.to_string())?;
        // the children tile the original polygon again
        let (l, r) = FaceId(1).children();
        let (fl, fr) = (back.face(l).ok_or("missing child")?, back.face(r).ok_or("missing child")?);
        ensure((shoelace(&fl.polygon) + shoelace(&fr.polygon) - shoelace(&poly)).abs() <= TOL, || {
            format!("round trip {done}: area changed")
        })?;
        for v in fl.polygon.vertices().iter().chain(fr.polygon.vertices()) {
            ensure(poly.contains(*v), || format!("round trip {done}: vertex {v:?} left the paper"))?;
        }
        ensure(back.superposition().is_empty(), || format!("round trip {done}: layers remain"))?;
        done += 1;
    }
    // child ids on every split of the fixtures
    for name in COMPOSITES.iter().chain(&["house.ori"]) {
        let trace = run(name)?;
        for w in trace.steps().windows(2) {
            let (prev, next) = (w[0].snapshot.face_ids(), w[1].snapshot.face_ids());
            for id in next.difference(&prev) {
                let parent = id.parent().ok_or("root face appeared")?;
                ensure(prev.contains(&parent) && !next.contains(&parent), || format!("{name}: {id} is not a child"))?;
                ensure(parent.children().0 == FaceId(2 * parent.0), || "bad child numbering".into())?;
            }
        }
    }
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let half = Ray::new(Point::new(0.5, 0.0), Point::new(0.5, 1.0)).unwrap();
    let posed = fold(&sq, &FoldSpec::valley(half).angle(PI / 2.0)).map_err(|e| e.to_string())?;
    ensure(matches!(fold(&posed, &FoldSpec::valley(half)), Err(EngineError::Origami(OrigamiError::Posed))), || {
        "posed AO accepted a fold".into()
    })
}

fn origami(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_origami")).args(args).output().unwrap()
}

fn house() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = fixture_path("house.ori");
    let out = origami(&["run", file.to_str().unwrap(), "--emit-svg", dir.path().to_str().unwrap()]);
    ensure(out.status.code() == Some(0), || format!("run exited with {:?}", out.status.code()))?;
    let check = origami(&["check", file.to_str().unwrap()]);
    let report = String::from_utf8_lossy(&check.stdout).to_string();
    ensure(check.status.code() == Some(0) && !report.contains("FAIL"), || format!("check failed:\n{report}"))?;
    let n = run("house.ori")?.len();
    let got = fs::read(dir.path().join(format!("step-{n:02}.svg"))).map_err(|e| e.to_string())?;
    let want = fs::read(fixture_path("house.svg")).map_err(|e| e.to_string())?;
    ensure(got == want, || "final SVG differs from the golden file".into())
}

fn unit_normal(vs: &[Vec<f64>]) -> [f64; 3] {
    let (a, b, c) = (&vs[0], &vs[1], &vs[2]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    [n[0] / len, n[1] / len, n[2] / len]
}

fn rabbit_ear() -> Outcome {
    let trace = run("rabbit_ear.ori")?;
    ensure(trace.last().is_posed(), || "final state is not posed".into())?;
    ensure((0..trace.len() - 1).all(|i| !trace.steps()[i].snapshot.is_posed()), || "posed too early".into())?;
    // read the exported pose back and measure the ear against the base
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = origami(&["run", fixture_path("rabbit_ear.ori").to_str().unwrap(), "--emit-3d", dir.path().to_str().unwrap()]);
    ensure(out.status.code() == Some(0), || "run failed".into())?;
    let text = fs::read_to_string(dir.path().join(format!("step-{:02}-3d.json", trace.len()))).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let verts = |id: u64| -> Option<Vec<Vec<f64>>> {
        let face = json["faces"].as_array()?.iter().find(|f| f["id"] == id)?;
        face["vertices3d"].as_array()?.iter().map(|v| v.as_array()?.iter().map(|x| x.as_f64()).collect()).collect()
    };
    let (ear, base) = (verts(26).ok_or("no face 26")?, verts(12).ok_or("no face 12")?);
    let (na, nb) = (unit_normal(&ear), unit_normal(&base));
    let dot = (na[0] * nb[0] + na[1] * nb[1] + na[2] * nb[2]).clamp(-1.0, 1.0);
    let dihedral = PI - dot.acos();
    ensure((dihedral - PI / 2.0).abs() <= DIHEDRAL_TOL, || format!("dihedral {dihedral}"))?;
    let more = format!("{}fold valley along ray(A, C)\n", fixture("rabbit_ear.ori"));
    ensure(matches!(run_source(&more), Err(ScriptError::Run(_))), || "fold after the pose succeeded".into())
}

fn read_all(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn determinism() -> Outcome {
    for name in COMPOSITES.iter().chain(&["house.ori"]) {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let d = dir.path().to_str().unwrap();
            let file = fixture_path(name);
            let out = origami(&["run", file.to_str().unwrap(), "--emit-svg", d, "--emit-dot", d, "--emit-json", d]);
            ensure(out.status.code() == Some(0), || format!("{name}: run failed"))?;
            outputs.push(read_all(dir.path()));
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{name}: outputs differ between runs"))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("squash O5 face set", squash_fixture_faces),
        ("squash preserves adjacency", squash_keeps_adjacency),
        ("glue coincidence", glue_coincidence),
        ("composite conservation", composite_conservation),
        ("Huzita-Justin suite", huzita_justin_suite),
        ("engine properties", engine_properties),
        ("house fixture", house),
        ("rabbit ear", rabbit_ear),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {} {name}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn invariants_hold_on_every_fixture() {
    for name in COMPOSITES.iter().chain(&["house.ori"]) {
        let trace = run(name).unwrap();
        assert!(check_trace(&trace).iter().all(|c| c.passed()), "{name}");
    }
}
