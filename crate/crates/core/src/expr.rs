//! Structure expressions such as `T(2, Z(4))` or `locmod(regular(Z(12)), {2})`.
//!
//! ```text
//! expr := name "(" args ")"
//! args := arg { "," arg }
//! arg  := expr | integer | "{" [ integer { "," integer } ] "}" | "[" [ integer { "," integer } ] "]"
//! ```
//!
//! Sets are stored sorted and deduplicated; lists keep their order. The pretty form of an
//! expression is the descriptor of the structure it elaborates to.

use std::fmt;

use thiserror::Error;

use crate::error::{AlgebraError, Result};
use crate::hom::{canonical_hom, make_ring_hom, RingHom};
use crate::limits::Limits;
use crate::localization::{localize_module, localize_ring, multiplicative_closure};
use crate::matrix::{MatrixShape, ShapeKind};
use crate::module::{
    cyclic_submodule, induced_module, matrix_module, product_module, quotient_module,
    regular_module, submodule_generated, FiniteModule,
};
use crate::ring::{make_matrix_ring, make_poly_quotient_ring, make_product_ring, make_zn, FiniteRing};
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(" or "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Ring,
    Module,
    Hom,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Ring => "ring",
            Sort::Module => "module",
            Sort::Hom => "homomorphism",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Expr(Expr),
    Int(u64),
    Set(Vec<u64>),
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub name: String,
    pub args: Vec<Arg>,
}

impl Expr {
    pub fn new(name: &str, args: Vec<Arg>) -> Self {
        Expr {
            name: name.to_string(),
            args,
        }
    }

    pub fn sort(&self) -> Sort {
        signature(&self.name).expect("parsed constructor").0
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Expr(e) => write!(f, "{e}"),
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Set(xs) => write!(f, "{{{}}}", join(xs)),
            Arg::List(xs) => write!(f, "[{}]", join(xs)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Set,
    List,
    Of(Sort),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Int => f.write_str("integer"),
            Kind::Set => f.write_str("set"),
            Kind::List => f.write_str("list"),
            Kind::Of(s) => write!(f, "{s} expression"),
        }
    }
}

enum Shape {
    Fixed(&'static [Kind]),
    /// One or more arguments of the same kind.
    Variadic(Kind),
    /// The fixed arguments, optionally followed by one more.
    Optional(&'static [Kind], Kind),
}

const RING: Kind = Kind::Of(Sort::Ring);
const MODULE: Kind = Kind::Of(Sort::Module);
const HOM: Kind = Kind::Of(Sort::Hom);

pub const CONSTRUCTORS: [&str; 20] = [
    "Z", "M", "T", "S", "V", "prod", "polyq", "loc", "regular", "matmod", "trimod", "smod", "vmod",
    "prodmod", "cyclic", "span", "quot", "locmod", "induced", "hom",
];

fn signature(name: &str) -> Option<(Sort, Shape)> {
    Some(match name {
        "Z" => (Sort::Ring, Shape::Fixed(&[Kind::Int])),
        "M" | "T" | "S" | "V" => (Sort::Ring, Shape::Fixed(&[Kind::Int, RING])),
        "prod" => (Sort::Ring, Shape::Variadic(RING)),
        "polyq" => (Sort::Ring, Shape::Fixed(&[RING, Kind::Int])),
        "loc" => (Sort::Ring, Shape::Fixed(&[RING, Kind::Set])),
        "regular" => (Sort::Module, Shape::Fixed(&[RING])),
        "matmod" | "trimod" | "smod" | "vmod" => (Sort::Module, Shape::Fixed(&[Kind::Int, MODULE])),
        "prodmod" => (Sort::Module, Shape::Variadic(MODULE)),
        "cyclic" => (Sort::Module, Shape::Fixed(&[MODULE, Kind::Int])),
        "span" => (Sort::Module, Shape::Fixed(&[MODULE, Kind::Set])),
        "quot" => (Sort::Module, Shape::Fixed(&[MODULE, MODULE])),
        "locmod" => (Sort::Module, Shape::Fixed(&[MODULE, Kind::Set])),
        "induced" => (Sort::Module, Shape::Fixed(&[HOM, MODULE])),
        "hom" => (Sort::Hom, Shape::Optional(&[RING, RING], Kind::List)),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Open(char),
    Close(char),
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Open(c) | Tok::Close(c) => format!("'{c}'"),
            Tok::Comma => "','".to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn error(pos: Pos, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                column += 1;
            }
            let n = digits
                .parse()
                .map_err(|_| error(pos, format!("integer {digits} is too large"), &[]))?;
            out.push((Tok::Int(n), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                ident.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(ident), pos));
            continue;
        }
        let tok = match c {
            '(' | '{' | '[' => Tok::Open(c),
            ')' | '}' | ']' => Tok::Close(c),
            ',' => Tok::Comma,
            _ => return Err(error(pos, format!("unexpected character '{c}'"), &[])),
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let (tok, pos) = self.peek();
        error(*pos, format!("unexpected {}", tok.describe()), expected)
    }

    fn expr(&mut self, expected: Option<Sort>) -> PResult<Expr> {
        let (tok, pos) = self.bump();
        let Tok::Ident(name) = tok else {
            self.at -= 1;
            return Err(self.unexpected(&["constructor name"]));
        };
        let Some((sort, shape)) = signature(&name) else {
            return Err(error(
                pos,
                format!("unknown constructor '{name}'"),
                &CONSTRUCTORS,
            ));
        };
        if let Some(want) = expected {
            if want != sort {
                return Err(error(
                    pos,
                    format!("'{name}' builds a {sort}, a {want} is required here"),
                    &[],
                ));
            }
        }
        if self.peek().0 != Tok::Open('(') {
            return Err(self.unexpected(&["'('"]));
        }
        self.bump();
        let mut args: Vec<(Arg, Pos)> = Vec::new();
        if self.peek().0 != Tok::Close(')') {
            loop {
                let pos = self.peek().1;
                let want = match &shape {
                    Shape::Fixed(kinds) => kinds.get(args.len()).copied(),
                    Shape::Variadic(k) => Some(*k),
                    Shape::Optional(kinds, extra) => kinds.get(args.len()).copied().or(Some(*extra)),
                };
                let arg = self.arg(want)?;
                args.push((arg, pos));
                match self.peek().0 {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::Close(')') => break,
                    _ => return Err(self.unexpected(&["','", "')'"])),
                }
            }
        }
        let close = self.bump().1;
        check_shape(&name, &shape, &args, close)?;
        Ok(Expr {
            name,
            args: args.into_iter().map(|(a, _)| a).collect(),
        })
    }

    fn arg(&mut self, want: Option<Kind>) -> PResult<Arg> {
        let (tok, pos) = self.peek().clone();
        let arg = match tok {
            Tok::Int(n) => {
                self.bump();
                Arg::Int(n)
            }
            Tok::Open('{') => {
                self.bump();
                let mut xs = self.ints('}')?;
                xs.sort_unstable();
                xs.dedup();
                Arg::Set(xs)
            }
            Tok::Open('[') => {
                self.bump();
                Arg::List(self.ints(']')?)
            }
            Tok::Ident(_) => {
                let sort = match want {
                    Some(Kind::Of(s)) => Some(s),
                    _ => None,
                };
                Arg::Expr(self.expr(sort)?)
            }
            _ => return Err(self.unexpected(&["constructor name", "integer", "'{'", "'['"])),
        };
        if let Some(k) = want {
            if !matches_kind(&arg, k) {
                return Err(error(pos, format!("expected {k}"), &[]));
            }
        }
        Ok(arg)
    }

    fn ints(&mut self, close: char) -> PResult<Vec<u64>> {
        let mut xs = Vec::new();
        if self.peek().0 == Tok::Close(close) {
            self.bump();
            return Ok(xs);
        }
        loop {
            match self.bump().0 {
                Tok::Int(n) => xs.push(n),
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected(&["integer"]));
                }
            }
            match self.bump().0 {
                Tok::Comma => {}
                Tok::Close(c) if c == close => return Ok(xs),
                _ => {
                    self.at -= 1;
                    let closing = format!("'{close}'");
                    return Err(self.unexpected(&["','", &closing]));
                }
            }
        }
    }
}

fn matches_kind(arg: &Arg, kind: Kind) -> bool {
    match (arg, kind) {
        (Arg::Int(_), Kind::Int) | (Arg::Set(_), Kind::Set) | (Arg::List(_), Kind::List) => true,
        (Arg::Expr(e), Kind::Of(s)) => e.sort() == s,
        _ => false,
    }
}

fn check_shape(name: &str, shape: &Shape, args: &[(Arg, Pos)], close: Pos) -> PResult<()> {
    let (min, max) = match shape {
        Shape::Fixed(k) => (k.len(), k.len()),
        Shape::Variadic(_) => (1, usize::MAX),
        Shape::Optional(k, _) => (k.len(), k.len() + 1),
    };
    let n = args.len();
    if n < min || n > max {
        let want = match shape {
            Shape::Fixed(k) => format!("{}", k.len()),
            Shape::Variadic(_) => "at least 1".to_string(),
            Shape::Optional(k, _) => format!("{} or {}", k.len(), k.len() + 1),
        };
        let pos = if n > max { args[max].1 } else { close };
        let plural = if want == "1" { "" } else { "s" };
        return Err(error(
            pos,
            format!("arity mismatch: '{name}' takes {want} argument{plural}, found {n}"),
            &[],
        ));
    }
    Ok(())
}

/// Parses a structure expression.
pub fn parse_structure(text: &str) -> std::result::Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr(None)?;
    if p.peek().0 != Tok::End {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

/// An elaborated expression.
#[derive(Debug, Clone)]
pub enum Structure {
    Ring(FiniteRing),
    Module(FiniteModule),
    Hom(RingHom),
}

impl Structure {
    pub fn descriptor(&self) -> &str {
        match self {
            Structure::Ring(r) => r.descriptor(),
            Structure::Module(m) => m.descriptor(),
            Structure::Hom(h) => h.descriptor(),
        }
    }

    /// Rings are read as their regular module.
    pub fn into_module(self) -> Result<FiniteModule> {
        match self {
            Structure::Module(m) => Ok(m),
            Structure::Ring(r) => Ok(regular_module(&r)),
            Structure::Hom(h) => Err(AlgebraError::InvalidParameter(format!(
                "{} is a homomorphism, not a module",
                h.descriptor()
            ))),
        }
    }
}

fn int(arg: &Arg) -> usize {
    match arg {
        Arg::Int(n) => *n as usize,
        _ => unreachable!("checked by the parser"),
    }
}

fn ints(arg: &Arg) -> Vec<ElementId> {
    match arg {
        Arg::Set(xs) | Arg::List(xs) => xs.iter().map(|&x| x as ElementId).collect(),
        _ => unreachable!("checked by the parser"),
    }
}

fn sub(arg: &Arg) -> &Expr {
    match arg {
        Arg::Expr(e) => e,
        _ => unreachable!("checked by the parser"),
    }
}

fn in_ring(ring: &FiniteRing, x: ElementId) -> Result<ElementId> {
    if ring.contains(x) {
        Ok(x)
    } else {
        Err(AlgebraError::ElementOutOfRange {
            descriptor: ring.descriptor().to_string(),
            element: x as u64,
            size: ring.size(),
        })
    }
}

fn kind_of(name: &str) -> ShapeKind {
    match name {
        "M" | "matmod" => ShapeKind::Full,
        "T" | "trimod" => ShapeKind::Upper,
        "S" | "smod" => ShapeKind::SpecialUpper,
        _ => ShapeKind::VType,
    }
}

pub fn elaborate_ring(expr: &Expr, limits: &Limits) -> Result<FiniteRing> {
    let a = &expr.args;
    match expr.name.as_str() {
        "Z" => make_zn(int(&a[0])),
        "M" | "T" | "S" | "V" => {
            let base = elaborate_ring(sub(&a[1]), limits)?;
            make_matrix_ring(MatrixShape::new(kind_of(&expr.name), int(&a[0])), &base, limits)
        }
        "prod" => {
            let factors = a
                .iter()
                .map(|x| elaborate_ring(sub(x), limits))
                .collect::<Result<Vec<_>>>()?;
            make_product_ring(&factors, limits)
        }
        "polyq" => make_poly_quotient_ring(&elaborate_ring(sub(&a[0]), limits)?, int(&a[1]), limits),
        "loc" => {
            let ring = elaborate_ring(sub(&a[0]), limits)?;
            let set = multiplicative_closure(&ring, &ints(&a[1]))?;
            Ok(localize_ring(&set, limits)?.ring)
        }
        other => Err(AlgebraError::InvalidParameter(format!("'{other}' does not build a ring"))),
    }
}

pub fn elaborate_module(expr: &Expr, limits: &Limits) -> Result<FiniteModule> {
    let a = &expr.args;
    match expr.name.as_str() {
        "regular" => Ok(regular_module(&elaborate_ring(sub(&a[0]), limits)?)),
        "matmod" | "trimod" | "smod" | "vmod" => {
            let base = elaborate_module(sub(&a[1]), limits)?;
            let shape = MatrixShape::new(kind_of(&expr.name), int(&a[0]));
            matrix_module(shape, &base.ring().clone(), &base, limits)
        }
        "prodmod" => {
            let factors = a
                .iter()
                .map(|x| elaborate_module(sub(x), limits))
                .collect::<Result<Vec<_>>>()?;
            product_module(&factors, limits)
        }
        "cyclic" => cyclic_submodule(&elaborate_module(sub(&a[0]), limits)?, int(&a[1])),
        "span" => submodule_generated(&elaborate_module(sub(&a[0]), limits)?, &ints(&a[1])),
        "quot" => {
            let m = elaborate_module(sub(&a[0]), limits)?;
            let n = elaborate_module(sub(&a[1]), limits)?;
            quotient_module(&m, &n).map_err(|e| match e {
                AlgebraError::InvalidParameter(msg) => AlgebraError::ShapeMismatch(msg),
                e => e,
            })
        }
        "locmod" => {
            let m = elaborate_module(sub(&a[0]), limits)?;
            let set = multiplicative_closure(m.ring(), &ints(&a[1]))?;
            Ok(localize_module(&m, &set, limits)?.module)
        }
        "induced" => {
            let h = elaborate_hom(sub(&a[0]), limits)?;
            induced_module(&h, &elaborate_module(sub(&a[1]), limits)?)
        }
        other => Err(AlgebraError::InvalidParameter(format!("'{other}' does not build a module"))),
    }
}

pub fn elaborate_hom(expr: &Expr, limits: &Limits) -> Result<RingHom> {
    let a = &expr.args;
    let src = elaborate_ring(sub(&a[0]), limits)?;
    let tgt = elaborate_ring(sub(&a[1]), limits)?;
    match a.get(2) {
        None => canonical_hom(&src, &tgt, limits),
        Some(list) => {
            let map = ints(list)
                .into_iter()
                .map(|x| in_ring(&tgt, x))
                .collect::<Result<Vec<_>>>()?;
            make_ring_hom(&src, &tgt, map, limits)
        }
    }
}

pub fn elaborate(expr: &Expr, limits: &Limits) -> Result<Structure> {
    Ok(match expr.sort() {
        Sort::Ring => Structure::Ring(elaborate_ring(expr, limits)?),
        Sort::Module => Structure::Module(elaborate_module(expr, limits)?),
        Sort::Hom => Structure::Hom(elaborate_hom(expr, limits)?),
    })
}

/// Parses and elaborates in one step.
pub fn build(text: &str, limits: &Limits) -> Result<Structure> {
    elaborate(&parse_structure(text)?, limits)
}

/// Parses and elaborates a module expression; a ring expression yields its regular module.
pub fn build_module(text: &str, limits: &Limits) -> Result<FiniteModule> {
    build(text, limits)?.into_module()
}

pub fn build_ring(text: &str, limits: &Limits) -> Result<FiniteRing> {
    match build(text, limits)? {
        Structure::Ring(r) => Ok(r),
        other => Err(AlgebraError::InvalidParameter(format!(
            "{} is not a ring",
            other.descriptor()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn parses_nested_expressions() {
        let e = parse_structure("T(2, Z(4))").unwrap();
        assert_eq!(
            e,
            Expr::new("T", vec![Arg::Int(2), Arg::Expr(Expr::new("Z", vec![Arg::Int(4)]))])
        );
        let l = parse_structure("locmod(regular(Z(12)), {2})").unwrap();
        assert_eq!(l.name, "locmod");
        assert_eq!(l.args[1], Arg::Set(vec![2]));
        assert_eq!(l.sort(), Sort::Module);
    }

    #[test]
    fn whitespace_and_lines() {
        let e = parse_structure("  prod( Z(2) ,\n  Z(3) )  ").unwrap();
        assert_eq!(e.to_string(), "prod(Z(2), Z(3))");
        let err = parse_structure("prod(Z(2),\n  Q(3))").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn error_positions() {
        let err = parse_structure("Z()").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        assert!(err.message.contains("arity"));
        let err = parse_structure("Z(2, 3)").unwrap_err();
        assert_eq!(err.column, 6);
        let err = parse_structure("Y(2)").unwrap_err();
        assert!(err.message.contains("unknown constructor"));
        assert!(!err.expected.is_empty());
        let err = parse_structure("regular(regular(Z(2)))").unwrap_err();
        assert_eq!(err.column, 9);
        let err = parse_structure("Z(2").unwrap_err();
        assert_eq!(err.column, 4);
        assert!(err.expected.contains(&"')'".to_string()));
        assert!(parse_structure("Z(2) Z(3)").is_err());
        assert!(parse_structure("span(regular(Z(4)), {1,})").is_err());
        assert!(parse_structure("Z(99999999999999999999999)").is_err());
    }

    #[test]
    fn sets_are_canonical() {
        let e = parse_structure("span(regular(Z(12)), {4, 2, 4})").unwrap();
        assert_eq!(e.to_string(), "span(regular(Z(12)), {2, 4})");
    }

    #[test]
    fn elaborated_descriptors_match_pretty_forms() {
        for text in [
            "Z(12)",
            "T(2, Z(4))",
            "M(2, Z(2))",
            "S(3, Z(2))",
            "V(3, Z(3))",
            "prod(Z(2), Z(3))",
            "polyq(Z(3), 2)",
            "loc(Z(12), {2})",
            "regular(Z(4))",
            "matmod(2, regular(Z(2)))",
            "trimod(2, regular(Z(4)))",
            "smod(3, regular(Z(2)))",
            "vmod(2, regular(Z(2)))",
            "prodmod(regular(Z(3)), regular(Z(3)))",
            "cyclic(regular(Z(12)), 4)",
            "span(regular(Z(12)), {3, 4})",
            "quot(regular(Z(12)), cyclic(regular(Z(12)), 4))",
            "locmod(regular(Z(12)), {2})",
            "induced(hom(Z(8), Z(4)), regular(Z(4)))",
            "hom(Z(12), Z(12), [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11])",
        ] {
            let s = build(text, &lim()).unwrap();
            assert_eq!(s.descriptor(), text);
        }
    }

    #[test]
    fn elaboration_errors() {
        assert!(matches!(
            build("quot(regular(Z(4)), cyclic(regular(Z(8)), 2))", &lim()),
            Err(AlgebraError::ShapeMismatch(_))
        ));
        assert!(matches!(
            build("induced(hom(Z(8), Z(4)), regular(Z(8)))", &lim()),
            Err(AlgebraError::ShapeMismatch(_))
        ));
        assert!(matches!(
            build("cyclic(regular(Z(4)), 7)", &lim()),
            Err(AlgebraError::ElementOutOfRange { .. })
        ));
        assert!(matches!(build("Z(1)", &lim()), Err(AlgebraError::InvalidParameter(_))));
        assert!(matches!(build("hom(Z(6), Z(4))", &lim()), Err(AlgebraError::InvalidParameter(_))));
        assert!(matches!(build("M(6, Z(2))", &lim()), Err(AlgebraError::SizeLimit { .. })));
    }

    fn ring_expr() -> impl Strategy<Value = Expr> {
        let leaf = (2u64..9).prop_map(|n| Expr::new("Z", vec![Arg::Int(n)]));
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (prop::sample::select(vec!["M", "T", "S", "V"]), 1u64..4, inner.clone())
                    .prop_map(|(c, n, r)| Expr::new(c, vec![Arg::Int(n), Arg::Expr(r)])),
                prop::collection::vec(inner.clone(), 1..3)
                    .prop_map(|rs| Expr::new("prod", rs.into_iter().map(Arg::Expr).collect())),
                (inner.clone(), 1u64..4)
                    .prop_map(|(r, n)| Expr::new("polyq", vec![Arg::Expr(r), Arg::Int(n)])),
                (inner, prop::collection::btree_set(0u64..20, 0..3)).prop_map(|(r, s)| {
                    Expr::new("loc", vec![Arg::Expr(r), Arg::Set(s.into_iter().collect())])
                }),
            ]
        })
    }

    fn module_expr() -> impl Strategy<Value = Expr> {
        let leaf = ring_expr().prop_map(|r| Expr::new("regular", vec![Arg::Expr(r)]));
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (prop::sample::select(vec!["matmod", "trimod", "smod", "vmod"]), 1u64..4, inner.clone())
                    .prop_map(|(c, n, m)| Expr::new(c, vec![Arg::Int(n), Arg::Expr(m)])),
                prop::collection::vec(inner.clone(), 1..3)
                    .prop_map(|ms| Expr::new("prodmod", ms.into_iter().map(Arg::Expr).collect())),
                (inner.clone(), 0u64..50)
                    .prop_map(|(m, x)| Expr::new("cyclic", vec![Arg::Expr(m), Arg::Int(x)])),
                (inner.clone(), inner.clone())
                    .prop_map(|(m, n)| Expr::new("quot", vec![Arg::Expr(m), Arg::Expr(n)])),
                (inner.clone(), prop::collection::btree_set(0u64..20, 0..3)).prop_map(|(m, s)| {
                    Expr::new("span", vec![Arg::Expr(m), Arg::Set(s.into_iter().collect())])
                }),
                (ring_expr(), ring_expr(), prop::collection::vec(0u64..9, 0..4), inner).prop_map(
                    |(a, b, l, m)| {
                        let h = Expr::new("hom", vec![Arg::Expr(a), Arg::Expr(b), Arg::List(l)]);
                        Expr::new("induced", vec![Arg::Expr(h), Arg::Expr(m)])
                    }
                ),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_then_parse_is_identity(e in prop_oneof![ring_expr(), module_expr()]) {
            let text = e.to_string();
            prop_assert_eq!(parse_structure(&text).unwrap(), e);
        }

        #[test]
        fn elaborated_descriptor_is_the_pretty_form(n in 2u64..13, k in 1u64..3, c in 0usize..4) {
            let ctor = ["M", "T", "S", "V"][c];
            let text = format!("regular({ctor}({k}, Z({n})))");
            let e = parse_structure(&text).unwrap();
            if let Ok(s) = elaborate(&e, &Limits::default()) {
                prop_assert_eq!(s.descriptor(), e.to_string());
            }
        }
    }
}
