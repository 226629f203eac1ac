//! Line-oriented recursive-descent parser for `.ori` scripts.

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let x = text.parse().map_err(|_| ParseError { line: line_no, col, msg: format!("bad number `{text}`") })?;
            out.push(Token { tok: Tok::Num(x), col });
        } else if "(){},=*/+-".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError { line: line_no, col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

const KEYWORDS: &[&str] = &[
    "paper", "point", "line", "fold", "cut", "glue", "unfold", "squash", "inside_reverse", "outside_reverse",
    "rabbit_ear", "pleat", "pleat_crimp", "assert", "ray", "rev", "midpoint", "intersect", "image", "moving",
    "angle", "insert", "faces", "along", "pick", "via", "to", "bring", "valley", "mountain", "pi", "sqrt",
];

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let col = self.toks.get(self.pos).map_or(self.end_col, |t| t.col);
        Err(ParseError { line: self.line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek_ident() {
            Some(s) if !KEYWORDS.contains(&s) => {
                let s = s.to_string();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(&Tok::Num(x)) if x.fract() == 0.0 && x >= 0.0 => {
                self.pos += 1;
                Ok(x as u64)
            }
            _ => self.err("expected a non-negative integer"),
        }
    }

    fn id_set(&mut self) -> Result<Vec<u64>, ParseError> {
        self.sym('{')?;
        let mut v = vec![self.integer()?];
        while self.eat_sym(',') {
            v.push(self.integer()?);
        }
        self.sym('}')?;
        Ok(v)
    }

    fn id_pair(&mut self) -> Result<(u64, u64), ParseError> {
        let v = self.id_set()?;
        match v[..] {
            [a, b] => Ok((a, b)),
            _ => {
                self.pos -= 1;
                self.err("expected a pair of faces {a,b}")
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            if let Some(&Tok::Num(x)) = self.peek() {
                self.pos += 1;
                return Ok(Expr::Num(-x));
            }
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if let Some(&Tok::Num(x)) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Num(x));
        }
        if self.eat_kw("pi") {
            return Ok(Expr::Pi);
        }
        if self.eat_kw("sqrt") {
            self.sym('(')?;
            let e = self.expr()?;
            self.sym(')')?;
            return Ok(Expr::Sqrt(Box::new(e)));
        }
        if self.eat_sym('(') {
            let e = self.expr()?;
            self.sym(')')?;
            return Ok(e);
        }
        self.err("expected a number")
    }

    fn point(&mut self) -> Result<PointExpr, ParseError> {
        if self.eat_sym('(') {
            let x = self.expr()?;
            self.sym(',')?;
            let y = self.expr()?;
            self.sym(')')?;
            return Ok(PointExpr::Coord(x, y));
        }
        if self.eat_kw("midpoint") {
            self.sym('(')?;
            let p = self.point()?;
            self.sym(',')?;
            let q = self.point()?;
            self.sym(')')?;
            return Ok(PointExpr::Midpoint(Box::new(p), Box::new(q)));
        }
        if self.eat_kw("intersect") {
            self.sym('(')?;
            let l = self.line()?;
            self.sym(',')?;
            let m = self.line()?;
            self.sym(')')?;
            return Ok(PointExpr::Intersect(l, m));
        }
        if self.eat_kw("image") {
            self.sym('(')?;
            let p = self.point()?;
            self.sym(')')?;
            return Ok(PointExpr::Image(Box::new(p)));
        }
        Ok(PointExpr::Name(self.name()?))
    }

    fn line(&mut self) -> Result<LineExpr, ParseError> {
        if self.eat_kw("line") {
            self.sym('(')?;
            let p = self.point()?;
            self.sym(',')?;
            let q = self.point()?;
            self.sym(')')?;
            return Ok(LineExpr::Through(Box::new(p), Box::new(q)));
        }
        Ok(LineExpr::Name(self.name()?))
    }

    fn ray(&mut self) -> Result<RayExpr, ParseError> {
        if self.eat_kw("ray") {
            self.sym('(')?;
            let p = self.point()?;
            self.sym(',')?;
            let q = self.point()?;
            self.sym(')')?;
            return Ok(RayExpr::Ray(p, q));
        }
        if self.eat_kw("rev") {
            self.sym('(')?;
            let r = self.ray()?;
            self.sym(')')?;
            return Ok(RayExpr::Rev(Box::new(r)));
        }
        let l = self.line()?;
        let moving = if self.eat_kw("moving") { Some(self.point()?) } else { None };
        Ok(RayExpr::Along(l, moving))
    }

    fn kind(&mut self) -> Option<Kind> {
        if self.eat_kw("valley") {
            Some(Kind::Valley)
        } else if self.eat_kw("mountain") {
            Some(Kind::Mountain)
        } else {
            None
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let Some(name) = self.peek_ident().map(str::to_string) else {
            return self.err("expected a rule O1..O7");
        };
        self.pos += 1;
        self.sym('(')?;
        let rule = match name.as_str() {
            "O1" | "O2" => {
                let p = self.point()?;
                self.sym(',')?;
                let q = self.point()?;
                if name == "O1" {
                    Rule::O1(p, q)
                } else {
                    Rule::O2(p, q)
                }
            }
            "O3" => {
                let l = self.line()?;
                self.sym(',')?;
                Rule::O3(l, self.line()?)
            }
            "O4" => {
                let p = self.point()?;
                self.sym(',')?;
                Rule::O4(p, self.line()?)
            }
            "O5" => {
                let p = self.point()?;
                self.sym(',')?;
                let m = self.line()?;
                self.sym(',')?;
                Rule::O5(p, m, self.point()?)
            }
            "O6" => {
                let p = self.point()?;
                self.sym(',')?;
                let m = self.line()?;
                self.sym(',')?;
                let q = self.point()?;
                self.sym(',')?;
                Rule::O6(p, m, q, self.line()?)
            }
            "O7" => {
                let p = self.point()?;
                self.sym(',')?;
                let m = self.line()?;
                self.sym(',')?;
                Rule::O7(p, m, self.line()?)
            }
            _ => {
                self.pos -= 2;
                return self.err(format!("unknown rule `{name}`"));
            }
        };
        self.sym(')')?;
        Ok(rule)
    }

    fn faces_opt(&mut self) -> Result<Option<Vec<u64>>, ParseError> {
        if self.eat_kw("faces") {
            Ok(Some(self.id_set()?))
        } else {
            Ok(None)
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let Some(head) = self.peek_ident().map(str::to_string) else {
            return self.err("expected a statement");
        };
        self.pos += 1;
        let stmt = match head.as_str() {
            "paper" => {
                self.kw("square")?;
                let names = [self.name()?, self.name()?, self.name()?, self.name()?];
                let at = if self.eat_kw("at") {
                    let mut pts = Vec::with_capacity(4);
                    for _ in 0..4 {
                        self.sym('(')?;
                        let x = self.expr()?;
                        self.sym(',')?;
                        let y = self.expr()?;
                        self.sym(')')?;
                        pts.push((x, y));
                    }
                    Some(pts.try_into().expect("four corners"))
                } else {
                    None
                };
                Stmt::Paper { names, at }
            }
            "point" => {
                let name = self.name()?;
                self.sym('=')?;
                Stmt::Point { name, value: self.point()? }
            }
            "line" => {
                let name = self.name()?;
                self.kw("via")?;
                let rule = self.rule()?;
                let pick = if self.eat_kw("pick") {
                    let k = self.integer()?;
                    if k == 0 {
                        self.pos -= 1;
                        return self.err("pick counts from 1");
                    }
                    Some(k as usize)
                } else {
                    None
                };
                Stmt::Line { name, rule, pick }
            }
            "fold" => {
                if self.eat_kw("bring") {
                    let from = self.point()?;
                    self.kw("to")?;
                    let to = self.point()?;
                    let kind = self.kind();
                    let faces = self.faces_opt()?;
                    Stmt::Bring { from, to, kind, faces }
                } else {
                    let Some(kind) = self.kind() else {
                        return self.err("expected `valley`, `mountain` or `bring`");
                    };
                    let faces = self.faces_opt()?;
                    self.kw("along")?;
                    let ray = self.ray()?;
                    let angle = if self.eat_kw("angle") { Some(self.expr()?) } else { None };
                    let insert = if self.eat_kw("insert") { Some(self.integer()?) } else { None };
                    Stmt::Fold { kind, faces, ray, angle, insert }
                }
            }
            "cut" => {
                let (a, b) = self.id_pair()?;
                Stmt::Cut(a, b)
            }
            "glue" => Stmt::Glue,
            "unfold" => Stmt::Unfold,
            "squash" => {
                let pair = self.id_pair()?;
                self.kw("bottom")?;
                let bottom = self.ray()?;
                self.kw("ridge")?;
                Stmt::Squash { pair, bottom, ridge: self.ray()? }
            }
            "inside_reverse" | "outside_reverse" => {
                let pair = self.id_pair()?;
                self.kw("along")?;
                let ray = self.ray()?;
                if head == "inside_reverse" {
                    Stmt::InsideReverse { pair, ray }
                } else {
                    Stmt::OutsideReverse { pair, ray }
                }
            }
            "rabbit_ear" => {
                let pair = self.id_pair()?;
                self.kw("ridge")?;
                let ridge = self.ray()?;
                self.kw("base")?;
                let base = self.ray()?;
                self.kw("hyp")?;
                Stmt::RabbitEar { pair, ridge, base, hyp: self.ray()? }
            }
            "pleat" => {
                self.kw("first")?;
                let first = self.ray()?;
                self.kw("second")?;
                let second = self.ray()?;
                Stmt::Pleat { first, second, faces: self.faces_opt()? }
            }
            "pleat_crimp" => {
                let pair = self.id_pair()?;
                self.kw("first")?;
                let first = self.ray()?;
                self.kw("second")?;
                let second = self.ray()?;
                let variant = if self.eat_kw("outside") {
                    Variant::Outside
                } else if self.eat_kw("inside") {
                    Variant::Inside
                } else {
                    return self.err("expected `outside` or `inside`");
                };
                Stmt::PleatCrimp { pair, first, second, variant }
            }
            "assert" => {
                if self.eat_kw("faces") {
                    Stmt::AssertFaces(self.id_set()?)
                } else if self.eat_kw("adjacency_preserved_since") {
                    Stmt::AssertAdjacencySince(self.integer()? as usize)
                } else {
                    return self.err("expected `faces` or `adjacency_preserved_since`");
                }
            }
            _ => {
                self.pos -= 1;
                return self.err(format!("unknown statement `{head}`"));
            }
        };
        if !self.at_end() {
            return self.err("unexpected trailing input");
        }
        Ok(stmt)
    }
}

/// Parses a whole script. The first statement must declare the paper, and
/// only once.
pub fn parse(text: &str) -> Result<ScriptAst, ParseError> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let toks = lex(line_no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser { toks: &toks, pos: 0, line: line_no, end_col: raw.chars().count() + 1 };
        let stmt = p.statement()?;
        let is_paper = matches!(stmt, Stmt::Paper { .. });
        if is_paper != statements.is_empty() {
            let msg = if is_paper { "duplicate paper declaration" } else { "missing paper declaration" };
            return Err(ParseError { line: line_no, col: toks[0].col, msg: msg.into() });
        }
        let text = raw.split('#').next().unwrap_or("").trim().to_string();
        statements.push(Located { line: line_no, text, stmt });
    }
    if statements.is_empty() {
        return Err(ParseError { line: 1, col: 1, msg: "missing paper declaration".into() });
    }
    Ok(ScriptAst { statements })
}
