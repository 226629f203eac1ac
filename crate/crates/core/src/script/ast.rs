//! Syntax tree of `.ori` scripts and its canonical printer.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// Numeric expression: literals, `pi`, `sqrt(..)`, the four operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(e) => -e.eval(),
            Expr::Sqrt(e) => e.eval().sqrt(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(), b.eval());
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3, false)
            }
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Bin(op, a, b) => {
                let p = op.prec();
                let paren = p < parent || (right && p == parent);
                if paren {
                    f.write_str("(")?;
                }
                a.write(f, p, false)?;
                write!(f, " {} ", op.symbol())?;
                b.write(f, p, true)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointExpr {
    Name(String),
    Coord(Expr, Expr),
    Midpoint(Box<PointExpr>, Box<PointExpr>),
    Intersect(LineExpr, LineExpr),
    /// The point reflected across the most recent fold line.
    Image(Box<PointExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineExpr {
    Name(String),
    Through(Box<PointExpr>, Box<PointExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RayExpr {
    Ray(PointExpr, PointExpr),
    Rev(Box<RayExpr>),
    /// A line oriented so the given point is on the moving (right) side, or
    /// along the line's canonical direction when no point is given.
    Along(LineExpr, Option<PointExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    O1(PointExpr, PointExpr),
    O2(PointExpr, PointExpr),
    O3(LineExpr, LineExpr),
    O4(PointExpr, LineExpr),
    O5(PointExpr, LineExpr, PointExpr),
    O6(PointExpr, LineExpr, PointExpr, LineExpr),
    O7(PointExpr, LineExpr, LineExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Valley,
    Mountain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Outside,
    Inside,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Paper { names: [String; 4], at: Option<[(Expr, Expr); 4]> },
    Point { name: String, value: PointExpr },
    Line { name: String, rule: Rule, pick: Option<usize> },
    Fold { kind: Kind, faces: Option<Vec<u64>>, ray: RayExpr, angle: Option<Expr>, insert: Option<u64> },
    Bring { from: PointExpr, to: PointExpr, kind: Option<Kind>, faces: Option<Vec<u64>> },
    Cut(u64, u64),
    Glue,
    Unfold,
    Squash { pair: (u64, u64), bottom: RayExpr, ridge: RayExpr },
    InsideReverse { pair: (u64, u64), ray: RayExpr },
    OutsideReverse { pair: (u64, u64), ray: RayExpr },
    RabbitEar { pair: (u64, u64), ridge: RayExpr, base: RayExpr, hyp: RayExpr },
    Pleat { first: RayExpr, second: RayExpr, faces: Option<Vec<u64>> },
    PleatCrimp { pair: (u64, u64), first: RayExpr, second: RayExpr, variant: Variant },
    AssertFaces(Vec<u64>),
    AssertAdjacencySince(usize),
}

/// A statement with its 1-based source line and original text.
#[derive(Debug, Clone, PartialEq)]
pub struct Located {
    pub line: usize,
    pub text: String,
    pub stmt: Stmt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptAst {
    pub statements: Vec<Located>,
}

impl fmt::Display for ScriptAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.stmt)?;
        }
        Ok(())
    }
}

fn ids(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn pair(p: &(u64, u64)) -> String {
    format!("{{{},{}}}", p.0, p.1)
}

impl fmt::Display for PointExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointExpr::Name(n) => f.write_str(n),
            PointExpr::Coord(x, y) => write!(f, "({x}, {y})"),
            PointExpr::Midpoint(p, q) => write!(f, "midpoint({p}, {q})"),
            PointExpr::Intersect(l, m) => write!(f, "intersect({l}, {m})"),
            PointExpr::Image(p) => write!(f, "image({p})"),
        }
    }
}

impl fmt::Display for LineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineExpr::Name(n) => f.write_str(n),
            LineExpr::Through(p, q) => write!(f, "line({p}, {q})"),
        }
    }
}

impl fmt::Display for RayExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayExpr::Ray(p, q) => write!(f, "ray({p}, {q})"),
            RayExpr::Rev(r) => write!(f, "rev({r})"),
            RayExpr::Along(l, None) => write!(f, "{l}"),
            RayExpr::Along(l, Some(p)) => write!(f, "{l} moving {p}"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::O1(p, q) => write!(f, "O1({p}, {q})"),
            Rule::O2(p, q) => write!(f, "O2({p}, {q})"),
            Rule::O3(l, m) => write!(f, "O3({l}, {m})"),
            Rule::O4(p, l) => write!(f, "O4({p}, {l})"),
            Rule::O5(p, m, q) => write!(f, "O5({p}, {m}, {q})"),
            Rule::O6(p, m, q, n) => write!(f, "O6({p}, {m}, {q}, {n})"),
            Rule::O7(p, m, n) => write!(f, "O7({p}, {m}, {n})"),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Valley => "valley",
            Kind::Mountain => "mountain",
        })
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Paper { names, at } => {
                write!(f, "paper square {}", names.join(" "))?;
                if let Some(at) = at {
                    f.write_str(" at")?;
                    for (x, y) in at {
                        write!(f, " ({x}, {y})")?;
                    }
                }
                Ok(())
            }
            Stmt::Point { name, value } => write!(f, "point {name} = {value}"),
            Stmt::Line { name, rule, pick } => {
                write!(f, "line {name} via {rule}")?;
                if let Some(k) = pick {
                    write!(f, " pick {k}")?;
                }
                Ok(())
            }
            Stmt::Fold { kind, faces, ray, angle, insert } => {
                write!(f, "fold {kind}")?;
                if let Some(v) = faces {
                    write!(f, " faces {}", ids(v))?;
                }
                write!(f, " along {ray}")?;
                if let Some(a) = angle {
                    write!(f, " angle {a}")?;
                }
                if let Some(n) = insert {
                    write!(f, " insert {n}")?;
                }
                Ok(())
            }
            Stmt::Bring { from, to, kind, faces } => {
                write!(f, "fold bring {from} to {to}")?;
                if let Some(k) = kind {
                    write!(f, " {k}")?;
                }
                if let Some(v) = faces {
                    write!(f, " faces {}", ids(v))?;
                }
                Ok(())
            }
            Stmt::Cut(a, b) => write!(f, "cut {}", pair(&(*a, *b))),
            Stmt::Glue => f.write_str("glue"),
            Stmt::Unfold => f.write_str("unfold"),
            Stmt::Squash { pair: p, bottom, ridge } => write!(f, "squash {} bottom {bottom} ridge {ridge}", pair(p)),
            Stmt::InsideReverse { pair: p, ray } => write!(f, "inside_reverse {} along {ray}", pair(p)),
            Stmt::OutsideReverse { pair: p, ray } => write!(f, "outside_reverse {} along {ray}", pair(p)),
            Stmt::RabbitEar { pair: p, ridge, base, hyp } => {
                write!(f, "rabbit_ear {} ridge {ridge} base {base} hyp {hyp}", pair(p))
            }
            Stmt::Pleat { first, second, faces } => {
                write!(f, "pleat first {first} second {second}")?;
                if let Some(v) = faces {
                    write!(f, " faces {}", ids(v))?;
                }
                Ok(())
            }
            Stmt::PleatCrimp { pair: p, first, second, variant } => {
                let v = match variant {
                    Variant::Outside => "outside",
                    Variant::Inside => "inside",
                };
                write!(f, "pleat_crimp {} first {first} second {second} {v}", pair(p))
            }
            Stmt::AssertFaces(v) => write!(f, "assert faces {}", ids(v)),
            Stmt::AssertAdjacencySince(k) => write!(f, "assert adjacency_preserved_since {k}"),
        }
    }
}
