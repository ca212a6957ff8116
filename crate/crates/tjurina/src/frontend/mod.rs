//! Polynomial and family-template parsing, plus report serialization.

mod emit;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::series::{Monomial, Ring, SeriesPoly};

pub use emit::{emit, quotient_from_json, quotient_to_json, Format, JsonError, Report, ScanTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unknown variable `{name}` at column {col}")]
    UnknownVariable { col: usize, name: String },
    #[error("bad exponent at column {col}: {msg}")]
    BadExponent { col: usize, msg: String },
    #[error("negative exponent at column {col}")]
    NegativeExponent { col: usize },
    #[error("coefficient {text} at column {col} does not live in {field}")]
    CoefficientNotInField {
        col: usize,
        text: String,
        field: String,
    },
    #[error("placeholder {{{name}}} at column {col} has no value")]
    UnboundPlaceholder { name: String, col: usize },
    #[error("range for `{name}` matches no placeholder")]
    UnusedRange { name: String },
    #[error("bad range `{0}`")]
    BadRange(String),
}

impl ParseError {
    /// 1-based column of the offending input, when there is one.
    pub fn column(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { col, .. }
            | ParseError::UnknownVariable { col, .. }
            | ParseError::BadExponent { col, .. }
            | ParseError::NegativeExponent { col }
            | ParseError::UnboundPlaceholder { col, .. }
            | ParseError::CoefficientNotInField { col, .. } => Some(*col),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Lit(u32),
    /// `{name}`, filled in when a template is instantiated.
    Hole { name: String, col: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Frac { num: BigInt, den: BigInt, col: usize },
    Var(usize),
    Gen(String),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Neg(Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, Exponent),
    Group(Box<PolyExpr>),
}

impl PolyExpr {
    /// Placeholder names in order of first appearance.
    pub fn holes(&self) -> Vec<String> {
        fn go(e: &PolyExpr, out: &mut Vec<String>) {
            match e {
                PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                PolyExpr::Neg(a) | PolyExpr::Group(a) => go(a, out),
                PolyExpr::Pow(a, x) => {
                    go(a, out);
                    if let Exponent::Hole { name, .. } = x {
                        if !out.contains(name) {
                            out.push(name.clone());
                        }
                    }
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Evaluates in `ring`, reading placeholders from `bindings`.
    pub fn eval(
        &self,
        ring: &Ring,
        bindings: &BTreeMap<String, i64>,
    ) -> Result<SeriesPoly, ParseError> {
        let field = ring.field();
        Ok(match self {
            PolyExpr::Int(n) => SeriesPoly::constant(ring, field.from_bigint(n)),
            PolyExpr::Frac { num, den, col } => {
                let bad = || ParseError::CoefficientNotInField {
                    col: *col,
                    text: format!("{num}/{den}"),
                    field: field.to_string(),
                };
                if den.is_zero() {
                    return Err(bad());
                }
                let q = BigRational::new(num.clone(), den.clone());
                SeriesPoly::constant(ring, field.from_rational(&q).map_err(|_| bad())?)
            }
            PolyExpr::Var(i) => SeriesPoly::var(ring, *i),
            PolyExpr::Gen(name) => SeriesPoly::constant(ring, generator_value(field, name)),
            PolyExpr::Add(a, b) => a.eval(ring, bindings)?.add(&b.eval(ring, bindings)?),
            PolyExpr::Sub(a, b) => a.eval(ring, bindings)?.sub(&b.eval(ring, bindings)?),
            PolyExpr::Neg(a) => a.eval(ring, bindings)?.neg(),
            PolyExpr::Mul(a, b) => a.eval(ring, bindings)?.mul(&b.eval(ring, bindings)?),
            PolyExpr::Group(a) => a.eval(ring, bindings)?,
            PolyExpr::Pow(a, x) => {
                let e = match x {
                    Exponent::Lit(e) => *e,
                    Exponent::Hole { name, col } => {
                        let v = *bindings
                            .get(name)
                            .ok_or_else(|| ParseError::UnboundPlaceholder {
                                name: name.clone(),
                                col: *col,
                            })?;
                        u32::try_from(v).map_err(|_| ParseError::NegativeExponent { col: *col })?
                    }
                };
                power(&a.eval(ring, bindings)?, e)
            }
        })
    }
}

fn power(f: &SeriesPoly, mut e: u32) -> SeriesPoly {
    // a single term is raised directly
    if f.len() == 1 {
        let (m, c) = f.terms().next().unwrap();
        let exps = m.exps().iter().map(|x| x * e).collect();
        let c = f.field().pow_u64(c, e as u64);
        return SeriesPoly::term(f.ring(), Monomial::new(exps), c);
    }
    let mut acc = SeriesPoly::one(f.ring());
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Value of a named generator anywhere in the extension tower of `field`.
fn generator_value(field: &Field, name: &str) -> Scalar {
    let mut level = field.clone();
    loop {
        if level.generator_names().last().map(String::as_str) == Some(name) {
            let g = level.generator().unwrap();
            return field.embed(&level, &g).unwrap();
        }
        level = level.base().expect("generator was resolved by the lexer").clone();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Gen(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Ident(String),
    End,
}

fn lex(text: &str, vars: &[String], gens: &[String]) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Num(digits.parse().unwrap()), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            // inside braces the word is a placeholder name
            if matches!(out.last(), Some((Tok::LBrace, _))) {
                out.push((Tok::Ident(word), col));
            } else {
                split_word(&word, col, vars, gens, &mut out)?;
            }
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            _ => {
                return Err(ParseError::Syntax {
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// Splits juxtaposed names such as `xy` into `x`, `y`, longest match first.
fn split_word(
    word: &str,
    col: usize,
    vars: &[String],
    gens: &[String],
    out: &mut Vec<(Tok, usize)>,
) -> Result<(), ParseError> {
    let mut rest = word;
    let mut at = col;
    while !rest.is_empty() {
        let best = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v, Tok::Var(i)))
            .chain(gens.iter().map(|g| (g, Tok::Gen(g.clone()))))
            .filter(|(name, _)| rest.starts_with(name.as_str()))
            .max_by_key(|(name, _)| name.len());
        let Some((name, tok)) = best else {
            return Err(ParseError::UnknownVariable {
                col: at,
                name: rest.to_string(),
            });
        };
        out.push((tok, at));
        at += name.chars().count();
        rest = &rest[name.len()..];
        // digits glued to a name, as in `y13`, are not a coefficient
        if rest.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(ParseError::UnknownVariable {
                col: at - name.chars().count(),
                name: format!("{name}{}", rest),
            });
        }
    }
    Ok(())
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn col(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                PolyExpr::Neg(Box::new(self.term()?))
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Var(_) | Tok::Gen(_) | Tok::LParen => {}
                Tok::Num(_) => return self.error("missing operator before number"),
                _ => return Ok(lhs),
            }
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(PolyExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.exponent()?;
        Ok(PolyExpr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<PolyExpr, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(n) => {
                if *self.peek() != Tok::Slash {
                    return Ok(PolyExpr::Int(n));
                }
                self.bump();
                match self.bump() {
                    (Tok::Num(d), _) => Ok(PolyExpr::Frac { num: n, den: d, col }),
                    (_, c) => Err(ParseError::Syntax {
                        col: c,
                        msg: "a fraction needs an integer denominator".into(),
                    }),
                }
            }
            Tok::Var(i) => Ok(PolyExpr::Var(i)),
            Tok::Gen(g) => Ok(PolyExpr::Gen(g)),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(ParseError::Syntax {
                        col,
                        msg: "unclosed parenthesis".into(),
                    });
                }
                self.bump();
                Ok(PolyExpr::Group(Box::new(inner)))
            }
            Tok::LBrace => Err(ParseError::Syntax {
                col,
                msg: "placeholders are only allowed as exponents".into(),
            }),
            Tok::End => Err(ParseError::Syntax {
                col,
                msg: "unexpected end of input".into(),
            }),
            Tok::RParen => Err(ParseError::Syntax {
                col,
                msg: "unbalanced `)`".into(),
            }),
            Tok::Slash => Err(ParseError::Syntax {
                col,
                msg: "division is only allowed inside a literal fraction".into(),
            }),
            other => Err(ParseError::Syntax {
                col,
                msg: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(n) => literal_exponent(&n, col),
            Tok::Minus => Err(ParseError::NegativeExponent { col }),
            Tok::LBrace => {
                let (inner, icol) = self.bump();
                let exp = match inner {
                    Tok::Ident(name) => Exponent::Hole { name, col: icol },
                    Tok::Num(n) => literal_exponent(&n, icol)?,
                    Tok::Minus => return Err(ParseError::NegativeExponent { col: icol }),
                    _ => {
                        return Err(ParseError::BadExponent {
                            col: icol,
                            msg: "expected a placeholder name".into(),
                        })
                    }
                };
                match self.bump() {
                    (Tok::RBrace, _) => Ok(exp),
                    (_, c) => Err(ParseError::Syntax {
                        col: c,
                        msg: "expected `}`".into(),
                    }),
                }
            }
            _ => Err(ParseError::BadExponent {
                col,
                msg: "expected a non-negative integer".into(),
            }),
        }
    }
}

fn literal_exponent(n: &BigInt, col: usize) -> Result<Exponent, ParseError> {
    u32::try_from(n)
        .map(Exponent::Lit)
        .map_err(|_| ParseError::BadExponent {
            col,
            msg: format!("{n} is too large"),
        })
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Ident(s) => format!("`{s}`"),
        _ => format!("{t:?}"),
    }
}

/// Parses `text` into an expression tree over the variables of `ring` and
/// the generator names of its field.
pub fn parse_expr(text: &str, ring: &Ring) -> Result<PolyExpr, ParseError> {
    let gens = ring.field().generator_names();
    let toks = lex(text, ring.vars(), &gens)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => p.error("unbalanced `)`"),
        t => {
            let msg = format!("unexpected {}", describe(t));
            p.error(msg)
        }
    }
}

/// Parses a polynomial with coefficients reduced into the field of `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<SeriesPoly, ParseError> {
    parse_expr(text, ring)?.eval(ring, &BTreeMap::new())
}

/// Variables for `text` when none are declared: the shortest prefix of
/// `x, y, z` covering every one of those letters that occurs.
pub fn infer_vars(text: &str) -> Vec<String> {
    let mut n = 1;
    let mut in_brace = false;
    for c in text.chars() {
        match c {
            '{' => in_brace = true,
            '}' => in_brace = false,
            'y' if !in_brace => n = n.max(2),
            'z' if !in_brace => n = n.max(3),
            _ => {}
        }
    }
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

/// A template family: an expression with exponent placeholders, a range for
/// each placeholder and the characteristics to scan.
#[derive(Clone, Debug)]
pub struct FamilyTemplate {
    pub text: String,
    pub vars: Vec<String>,
    pub expr: PolyExpr,
    /// Sorted by placeholder name.
    pub ranges: Vec<(String, Vec<i64>)>,
    pub chars: Vec<u64>,
}

impl FamilyTemplate {
    /// Parameter points in lexicographic order of the sorted names.
    pub fn points(&self) -> Vec<BTreeMap<String, i64>> {
        let mut out = vec![BTreeMap::new()];
        for (name, values) in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let mut q = pt.clone();
                        q.insert(name.clone(), v);
                        q
                    })
                })
                .collect();
        }
        if self.ranges.iter().any(|(_, v)| v.is_empty()) {
            out.clear();
        }
        out
    }

    pub fn grid_size(&self) -> usize {
        self.ranges.iter().map(|(_, v)| v.len()).product::<usize>() * self.chars.len()
    }

    pub fn instantiate(
        &self,
        field: &Field,
        point: &BTreeMap<String, i64>,
    ) -> Result<SeriesPoly, ParseError> {
        let ring = Ring::new(field.clone(), &self.vars);
        Ok(self.expr.eval(&ring, point)?.exact())
    }
}

/// Parses a family template. Every placeholder needs a range and every range
/// needs a placeholder.
pub fn parse_template(
    text: &str,
    vars: &[String],
    ranges: &[(String, Vec<i64>)],
    chars: &[u64],
) -> Result<FamilyTemplate, ParseError> {
    let ring = Ring::new(Field::rationals(), vars);
    let expr = parse_expr(text, &ring)?;
    let holes: BTreeSet<String> = expr.holes().into_iter().collect();
    let mut sorted: Vec<(String, Vec<i64>)> = ranges.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for (name, _) in &sorted {
        if !holes.contains(name) {
            return Err(ParseError::UnusedRange { name: name.clone() });
        }
    }
    if let Some(name) = holes.iter().find(|h| !sorted.iter().any(|(n, _)| n == *h)) {
        return Err(ParseError::UnboundPlaceholder {
            name: name.clone(),
            col: hole_column(&expr, name),
        });
    }
    let template = FamilyTemplate {
        text: text.to_string(),
        vars: vars.to_vec(),
        expr,
        ranges: sorted,
        chars: chars.to_vec(),
    };
    // catch negative values up front rather than halfway through a scan
    for (name, values) in &template.ranges {
        if values.iter().any(|&v| v < 0) {
            let col = hole_column(&template.expr, name);
            return Err(ParseError::NegativeExponent { col });
        }
    }
    Ok(template)
}

fn hole_column(e: &PolyExpr, name: &str) -> usize {
    fn go(e: &PolyExpr, name: &str) -> Option<usize> {
        match e {
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                go(a, name).or_else(|| go(b, name))
            }
            PolyExpr::Neg(a) | PolyExpr::Group(a) => go(a, name),
            PolyExpr::Pow(a, Exponent::Hole { name: n, col }) => {
                if n == name {
                    Some(*col)
                } else {
                    go(a, name)
                }
            }
            PolyExpr::Pow(a, _) => go(a, name),
            _ => None,
        }
    }
    go(e, name).unwrap_or(0)
}

/// `k=14..24`, `r=13` or `k=1,3,5`.
pub fn parse_range(text: &str) -> Result<(String, Vec<i64>), ParseError> {
    let bad = || ParseError::BadRange(text.to_string());
    let (name, spec) = text.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(bad());
    }
    let mut values = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim();
            let b: i64 = match b.strip_prefix('=') {
                Some(c) => c.trim().parse().map_err(|_| bad())?,
                None => b.parse().map_err(|_| bad())?,
            };
            values.extend(a..=b);
        } else {
            values.push(part.parse().map_err(|_| bad())?);
        }
    }
    values.sort_unstable();
    values.dedup();
    Ok((name.to_string(), values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: usize) -> Ring {
        Ring::standard(Field::from_characteristic(p).unwrap(), n)
    }

    #[test]
    fn reads_the_usual_forms() {
        let f = parse_poly("x^3 + x*y^13 + y^17", &ring(5, 2)).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.to_text(), "x^3 + x*y^13 + y^17");
        let g = parse_poly("1/2*x^2", &ring(5, 2)).unwrap();
        assert_eq!(g.to_text(), "3*x^2");
        let h = parse_poly("xy^2 - 2(x + y)^2", &ring(0, 2)).unwrap();
        assert_eq!(h.to_text(), "-2*x^2 - 4*x*y - 2*y^2 + x*y^2");
    }

    #[test]
    fn fraction_outside_the_field() {
        let e = parse_poly("1/5*x", &ring(5, 2)).unwrap_err();
        assert!(matches!(e, ParseError::CoefficientNotInField { col: 1, .. }));
        assert!(parse_poly("1/0", &ring(0, 1)).is_err());
    }

    #[test]
    fn positions_are_reported() {
        let cases = [
            ("x^2 + (y", 7),
            ("x^2 + y)", 8),
            ("x^-2", 3),
            ("x^y", 3),
            ("x + w", 5),
            ("x ++ y", 4),
            ("x/y", 2),
            ("x^", 3),
            ("", 1),
            ("x y13", 3),
            ("(x)2", 4),
        ];
        for (text, col) in cases {
            let e = parse_poly(text, &ring(7, 2)).unwrap_err();
            assert_eq!(e.column(), Some(col), "{text}: {e}");
        }
    }

    #[test]
    fn extension_generators() {
        let base = Field::prime(5).unwrap();
        let m = crate::field::UPoly::new(&base, vec![base.from_int(2), base.zero(), base.one()]);
        let k = Field::extension(&base, m, "a").unwrap();
        let r = Ring::new(k, &["x", "y"]);
        let f = parse_poly("a*x^2 + (a + 1)*y^3", &r).unwrap();
        let back = parse_poly(&f.to_text(), &r).unwrap();
        assert_eq!(f, back);
        // a^2 = -2 = 3
        let g = parse_poly("a^2*x", &r).unwrap();
        assert_eq!(g.to_text(), "3*x");
    }

    #[test]
    fn templates() {
        let vars = infer_vars("x^3 + x*y^{r} + y^{k}");
        assert_eq!(vars, ["x", "y"]);
        let t = parse_template(
            "x^3 + x*y^{r} + y^{k}",
            &vars,
            &[parse_range("r=13").unwrap(), parse_range("k=14..24").unwrap()],
            &[0],
        )
        .unwrap();
        let pts = t.points();
        assert_eq!(pts.len(), 11);
        let f = t.instantiate(&Field::prime(5).unwrap(), &pts[3]).unwrap();
        assert_eq!(f.to_text(), "x^3 + x*y^13 + y^17");

        let single = parse_template("y^{k}", &vars, &[parse_range("k=2..4").unwrap()], &[0]);
        assert_eq!(single.unwrap().points().len(), 3);

        let e = parse_template("x^{k} + y^{j}", &vars, &[parse_range("k=2").unwrap()], &[0]);
        assert!(matches!(e, Err(ParseError::UnboundPlaceholder { .. })));
        let e = parse_template("x^{k}", &vars, &[parse_range("k=-1..2").unwrap()], &[0]);
        assert!(matches!(e, Err(ParseError::NegativeExponent { col: 4 })));
        let e = parse_template("{k}*x^2", &vars, &[parse_range("k=1").unwrap()], &[0]);
        assert!(matches!(e, Err(ParseError::Syntax { col: 1, .. })));
        let e = parse_template("x^2", &vars, &[parse_range("k=1").unwrap()], &[0]);
        assert!(matches!(e, Err(ParseError::UnusedRange { .. })));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("k=3..5").unwrap().1, vec![3, 4, 5]);
        assert_eq!(parse_range("k=7,2").unwrap().1, vec![2, 7]);
        assert_eq!(parse_range("k=5..4").unwrap().1, Vec::<i64>::new());
        assert!(parse_range("k").is_err());
        assert!(parse_range("=3").is_err());
    }
}
