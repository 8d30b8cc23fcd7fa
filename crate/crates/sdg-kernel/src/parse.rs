//! A small LL(1) grammar for test functions, vector fields, and
//! distribution trees, with a canonical printer that round-trips.
//!
//! Function expressions use the variables `x`, `y`, `z` (or `t`, `x`, ...
//! for time-dependent profiles), the operators `+ - * / ^`, and the
//! functions `exp`, `sin`, `cos`, `bump`. Distribution expressions use
//! the constructors `dirac(p...)`, `dirac_d(p, k)`, `interval(a, b)`,
//! `sphere(dim=.., t=.., avg|raw)`, `ball(..)`, `heat_kernel(t)`,
//! `poisson(t)`, `laplacian(e)`, `push_p(e)`, `mul(g, e)`,
//! `deriv(e; xi...)`, `convolve(k, e)`, and
//! `lincomb(c1 * e1 + c2 * e2 + ...)`.

use crate::distribution::{self, Distribution};
use crate::flows::VectorField;
use crate::smooth::{AffineMap, Expr, TestFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
}

struct Lexer {
    tokens: Vec<(usize, Tok)>,
    cursor: usize,
    end: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Self, ParseError> {
        let bytes = src.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    tokens.push((i, Tok::Plus));
                    i += 1;
                }
                '-' => {
                    tokens.push((i, Tok::Minus));
                    i += 1;
                }
                '*' => {
                    tokens.push((i, Tok::Star));
                    i += 1;
                }
                '/' => {
                    tokens.push((i, Tok::Slash));
                    i += 1;
                }
                '^' => {
                    tokens.push((i, Tok::Caret));
                    i += 1;
                }
                '(' => {
                    tokens.push((i, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((i, Tok::RParen));
                    i += 1;
                }
                ',' => {
                    tokens.push((i, Tok::Comma));
                    i += 1;
                }
                ';' => {
                    tokens.push((i, Tok::Semi));
                    i += 1;
                }
                '=' => {
                    tokens.push((i, Tok::Equals));
                    i += 1;
                }
                '0'..='9' | '.' => {
                    let start = i;
                    while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E')
                    {
                        // allow exponent signs
                        if matches!(bytes[i] as char, 'e' | 'E')
                            && i + 1 < bytes.len()
                            && matches!(bytes[i + 1] as char, '+' | '-')
                        {
                            i += 1;
                        }
                        i += 1;
                    }
                    let text = &src[start..i];
                    match text.parse::<f64>() {
                        Ok(v) => tokens.push((start, Tok::Num(v))),
                        Err(_) => return err(start, format!("bad number literal '{text}'")),
                    }
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let start = i;
                    while i < bytes.len()
                        && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                    {
                        i += 1;
                    }
                    tokens.push((start, Tok::Ident(src[start..i].to_string())));
                }
                other => return err(i, format!("unexpected character '{other}'")),
            }
        }
        Ok(Lexer {
            tokens,
            cursor: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        self.cursor += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            Some(t) => err(pos, format!("expected {what}, found {t:?}")),
            None => err(pos, format!("expected {what}, found end of input")),
        }
    }

    fn finished(&self) -> bool {
        self.cursor >= self.tokens.len()
    }
}

/// What a parsed source string turned out to be.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Function(TestFunction),
    Field(VectorField),
    Dist(Box<Distribution<f64>>),
}

const DIST_KEYWORDS: [&str; 11] = [
    "dirac",
    "dirac_d",
    "interval",
    "sphere",
    "ball",
    "heat_kernel",
    "poisson",
    "laplacian",
    "push_p",
    "mul",
    "lincomb",
];

/// Parse a source string as a distribution, vector field, or test
/// function, sniffing the kind from its shape.
pub fn parse_expression(src: &str) -> Result<Parsed, ParseError> {
    let trimmed = src.trim_start();
    let head: String = trimmed
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    if DIST_KEYWORDS.contains(&head.as_str()) || head == "deriv" || head == "convolve" {
        return Ok(Parsed::Dist(Box::new(parse_distribution(src)?)));
    }
    if top_level_comma(src) {
        return Ok(Parsed::Field(parse_vector_field(src)?));
    }
    let vars = infer_space_vars(src)?;
    Ok(Parsed::Function(parse_test_function(src, &vars)?))
}

fn top_level_comma(src: &str) -> bool {
    let mut depth = 0i32;
    for c in src.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn infer_space_vars(src: &str) -> Result<Vec<String>, ParseError> {
    let uses = |name: &str| {
        let mut lexer = Lexer::new(src).ok();
        if let Some(l) = lexer.as_mut() {
            l.tokens
                .iter()
                .any(|(_, t)| matches!(t, Tok::Ident(s) if s == name))
        } else {
            false
        }
    };
    let dim = if uses("z") {
        3
    } else if uses("y") {
        2
    } else {
        1
    };
    Ok(["x", "y", "z"][..dim]
        .iter()
        .map(|s| s.to_string())
        .collect())
}

/// Parse a smooth expression with the given variable names.
pub fn parse_test_function(src: &str, vars: &[String]) -> Result<TestFunction, ParseError> {
    let mut lexer = Lexer::new(src)?;
    let expr = parse_sum(&mut lexer, vars)?;
    if !lexer.finished() {
        return err(lexer.pos(), "trailing input after expression");
    }
    Ok(TestFunction::new(vars.len(), expr).named(src.trim()))
}

/// Parse a vector field: one expression per coordinate, comma separated,
/// optionally wrapped in parentheses. Variables are `x`, `y`, `z` up to
/// the component count.
pub fn parse_vector_field(src: &str) -> Result<VectorField, ParseError> {
    let trimmed = src.trim();
    let inner = if trimmed.starts_with('(')
        && trimmed.ends_with(')')
        && top_level_comma(&trimmed[1..trimmed.len() - 1])
    {
        &trimmed[1..trimmed.len() - 1]
    } else {
        trimmed
    };
    let parts = split_top_level(inner, ',');
    let dim = parts.len();
    if !(1..=3).contains(&dim) {
        return err(0, format!("vector fields have 1-3 components, got {dim}"));
    }
    let vars: Vec<String> = ["x", "y", "z"][..dim]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut components = Vec::with_capacity(dim);
    for part in parts {
        let mut lexer = Lexer::new(part)?;
        components.push(parse_sum(&mut lexer, &vars)?);
        if !lexer.finished() {
            return err(lexer.pos(), "trailing input in component");
        }
    }
    Ok(VectorField::new(components))
}

fn split_top_level(src: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
}

fn parse_sum(lexer: &mut Lexer, vars: &[String]) -> Result<Expr, ParseError> {
    let mut acc = parse_term(lexer, vars)?;
    loop {
        match lexer.peek() {
            Some(Tok::Plus) => {
                lexer.next();
                acc = Expr::Add(Box::new(acc), Box::new(parse_term(lexer, vars)?));
            }
            Some(Tok::Minus) => {
                lexer.next();
                acc = Expr::Sub(Box::new(acc), Box::new(parse_term(lexer, vars)?));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lexer: &mut Lexer, vars: &[String]) -> Result<Expr, ParseError> {
    let mut acc = parse_unary(lexer, vars)?;
    loop {
        match lexer.peek() {
            Some(Tok::Star) => {
                lexer.next();
                acc = Expr::Mul(Box::new(acc), Box::new(parse_unary(lexer, vars)?));
            }
            Some(Tok::Slash) => {
                lexer.next();
                acc = Expr::Div(Box::new(acc), Box::new(parse_unary(lexer, vars)?));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_unary(lexer: &mut Lexer, vars: &[String]) -> Result<Expr, ParseError> {
    if matches!(lexer.peek(), Some(Tok::Minus)) {
        lexer.next();
        return Ok(Expr::Neg(Box::new(parse_unary(lexer, vars)?)));
    }
    parse_power(lexer, vars)
}

fn parse_power(lexer: &mut Lexer, vars: &[String]) -> Result<Expr, ParseError> {
    let base = parse_atom(lexer, vars)?;
    if matches!(lexer.peek(), Some(Tok::Caret)) {
        lexer.next();
        let pos = lexer.pos();
        let negative = if matches!(lexer.peek(), Some(Tok::Minus))
            || matches!(lexer.peek(), Some(Tok::LParen))
        {
            // allow ^(-k)
            let parens = matches!(lexer.peek(), Some(Tok::LParen));
            if parens {
                lexer.next();
            }
            let neg = matches!(lexer.peek(), Some(Tok::Minus));
            if neg {
                lexer.next();
            }
            if parens {
                Some((neg, true))
            } else {
                Some((neg, false))
            }
        } else {
            None
        };
        let exponent = match lexer.next() {
            Some(Tok::Num(v)) if v.fract() == 0.0 => v as i32,
            other => return err(pos, format!("expected integer exponent, found {other:?}")),
        };
        if let Some((neg, parens)) = negative {
            if parens {
                lexer.expect(Tok::RParen, "')'")?;
            }
            return Ok(Expr::PowInt(
                Box::new(base),
                if neg { -exponent } else { exponent },
            ));
        }
        return Ok(Expr::PowInt(Box::new(base), exponent));
    }
    Ok(base)
}

fn parse_atom(lexer: &mut Lexer, vars: &[String]) -> Result<Expr, ParseError> {
    let pos = lexer.pos();
    match lexer.next() {
        Some(Tok::Num(v)) => Ok(Expr::Const(v)),
        Some(Tok::LParen) => {
            let inner = parse_sum(lexer, vars)?;
            lexer.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
        Some(Tok::Ident(name)) => {
            if let Some(idx) = vars.iter().position(|v| *v == name) {
                return Ok(Expr::Var(idx));
            }
            let func = match name.as_str() {
                "exp" | "sin" | "cos" | "bump" => name,
                other => {
                    return err(pos, format!("unknown identifier '{other}'"));
                }
            };
            lexer.expect(Tok::LParen, "'(' after function name")?;
            let arg = parse_sum(lexer, vars)?;
            lexer.expect(Tok::RParen, "')'")?;
            Ok(match func.as_str() {
                "exp" => arg.exp(),
                "sin" => arg.sin(),
                "cos" => arg.cos(),
                _ => arg.bump(),
            })
        }
        other => err(pos, format!("expected a value, found {other:?}")),
    }
}

/// Parse a distribution tree.
pub fn parse_distribution(src: &str) -> Result<Distribution<f64>, ParseError> {
    let mut lexer = Lexer::new(src)?;
    let dist = parse_dist_node(&mut lexer)?;
    if !lexer.finished() {
        return err(lexer.pos(), "trailing input after distribution");
    }
    Ok(dist)
}

fn parse_number(lexer: &mut Lexer) -> Result<f64, ParseError> {
    let pos = lexer.pos();
    let negative = if matches!(lexer.peek(), Some(Tok::Minus)) {
        lexer.next();
        true
    } else {
        false
    };
    match lexer.next() {
        Some(Tok::Num(v)) => Ok(if negative { -v } else { v }),
        other => err(pos, format!("expected a number, found {other:?}")),
    }
}

fn parse_dist_node(lexer: &mut Lexer) -> Result<Distribution<f64>, ParseError> {
    let pos = lexer.pos();
    let name = match lexer.next() {
        Some(Tok::Ident(n)) => n,
        other => return err(pos, format!("expected a constructor, found {other:?}")),
    };
    lexer.expect(Tok::LParen, "'('")?;
    let node = match name.as_str() {
        "dirac" => {
            let mut point = vec![parse_number(lexer)?];
            while matches!(lexer.peek(), Some(Tok::Comma)) {
                lexer.next();
                point.push(parse_number(lexer)?);
            }
            if point.len() > 3 {
                return err(pos, "dirac points live in dimensions 1-3");
            }
            distribution::dirac(point)
        }
        "dirac_d" => {
            let p = parse_number(lexer)?;
            lexer.expect(Tok::Comma, "','")?;
            let order_pos = lexer.pos();
            let k = parse_number(lexer)?;
            if k.fract() != 0.0 || k < 0.0 {
                return err(order_pos, "derivative order must be a non-negative integer");
            }
            distribution::dirac_derivative(vec![p], vec![k as usize])
        }
        "interval" => {
            let a = parse_number(lexer)?;
            lexer.expect(Tok::Comma, "','")?;
            let b = parse_number(lexer)?;
            distribution::interval(a, b)
        }
        "sphere" | "ball" => {
            let (dim, t, averaged) = parse_geometry_args(lexer, pos)?;
            if name == "sphere" {
                distribution::sphere(dim, t, averaged)
            } else {
                distribution::ball(dim, t, averaged)
            }
        }
        "heat_kernel" => {
            let t_pos = lexer.pos();
            let t = parse_number(lexer)?;
            match distribution::heat_gaussian(t) {
                Ok(d) => d,
                Err(e) => return err(t_pos, e.to_string()),
            }
        }
        "poisson" => distribution::poisson_ball(parse_number(lexer)?),
        "laplacian" => parse_dist_node(lexer)?.laplacian(),
        "push_p" => {
            let inner = parse_dist_node(lexer)?;
            let dim = inner.dim();
            if dim < 2 {
                return err(pos, "push_p needs a distribution in dimension 2 or 3");
            }
            let map = AffineMap::coordinate_projection(dim, dim - 1);
            match distribution::pushforward(map, inner) {
                Ok(d) => d,
                Err(e) => return err(pos, e.to_string()),
            }
        }
        "mul" => {
            // mul(g, e): the function source runs to the matching comma
            let g_start = lexer.pos();
            let mut depth = 0usize;
            let mut split = None;
            for i in lexer.cursor..lexer.tokens.len() {
                match lexer.tokens[i].1 {
                    Tok::LParen => depth += 1,
                    Tok::RParen => {
                        if depth == 0 {
                            break;
                        }
                        depth -= 1;
                    }
                    Tok::Comma if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let split = match split {
                Some(i) => i,
                None => return err(g_start, "mul needs two arguments"),
            };
            let mut g_lexer = Lexer {
                tokens: lexer.tokens[lexer.cursor..split].to_vec(),
                cursor: 0,
                end: lexer.end,
            };
            lexer.cursor = split + 1;
            let inner = parse_dist_node(lexer)?;
            let dim = inner.dim();
            let vars: Vec<String> = ["x", "y", "z"][..dim]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let expr = parse_sum(&mut g_lexer, &vars)?;
            if !g_lexer.finished() {
                return err(g_start, "trailing input in multiplier");
            }
            let g = TestFunction::new(dim, expr);
            match distribution::multiply(g, inner) {
                Ok(d) => d,
                Err(e) => return err(pos, e.to_string()),
            }
        }
        "convolve" => {
            let kernel = parse_dist_node(lexer)?;
            lexer.expect(Tok::Comma, "','")?;
            let inner = parse_dist_node(lexer)?;
            match distribution::convolve(kernel, inner) {
                Ok(d) => d,
                Err(e) => return err(pos, e.to_string()),
            }
        }
        "lincomb" => {
            let mut terms = Vec::new();
            loop {
                let negative = if matches!(lexer.peek(), Some(Tok::Minus)) {
                    lexer.next();
                    true
                } else {
                    false
                };
                let c_pos = lexer.pos();
                let c = match lexer.next() {
                    Some(Tok::Num(v)) => {
                        if negative {
                            -v
                        } else {
                            v
                        }
                    }
                    other => return err(c_pos, format!("expected a coefficient, found {other:?}")),
                };
                lexer.expect(Tok::Star, "'*'")?;
                terms.push((c, parse_dist_node(lexer)?));
                match lexer.peek() {
                    Some(Tok::Plus) => {
                        lexer.next();
                    }
                    _ => break,
                }
            }
            distribution::lincomb(terms)
        }
        other => return err(pos, format!("unknown constructor '{other}'")),
    };
    lexer.expect(Tok::RParen, "')'")?;
    Ok(node)
}

fn parse_geometry_args(lexer: &mut Lexer, pos: usize) -> Result<(usize, f64, bool), ParseError> {
    let mut dim: Option<usize> = None;
    let mut t: Option<f64> = None;
    let mut averaged: Option<bool> = None;
    loop {
        let key_pos = lexer.pos();
        match lexer.next() {
            Some(Tok::Ident(key)) if key == "dim" => {
                lexer.expect(Tok::Equals, "'='")?;
                let v = parse_number(lexer)?;
                if v.fract() != 0.0 || !(1.0..=3.0).contains(&v) {
                    return err(key_pos, "dim must be 1, 2, or 3");
                }
                dim = Some(v as usize);
            }
            Some(Tok::Ident(key)) if key == "t" => {
                lexer.expect(Tok::Equals, "'='")?;
                t = Some(parse_number(lexer)?);
            }
            Some(Tok::Ident(key)) if key == "avg" => averaged = Some(true),
            Some(Tok::Ident(key)) if key == "raw" => averaged = Some(false),
            other => return err(key_pos, format!("unexpected argument {other:?}")),
        }
        match lexer.peek() {
            Some(Tok::Comma) => {
                lexer.next();
            }
            _ => break,
        }
    }
    match (dim, t, averaged) {
        (Some(d), Some(t), Some(a)) => Ok((d, t, a)),
        _ => err(pos, "sphere/ball need dim=, t=, and avg|raw"),
    }
}

/// Canonical rendering of a float-parameter distribution, parseable by
/// [`parse_distribution`] for every grammar-expressible tree.
pub fn print_distribution(d: &Distribution<f64>) -> String {
    match d {
        Distribution::Dirac { point } => format!(
            "dirac({})",
            point
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Distribution::DiracDerivative { point, multi_index } => {
            if point.len() == 1 {
                format!("dirac_d({}, {})", point[0], multi_index[0])
            } else {
                format!("dirac_d({:?}; {:?})", point, multi_index)
            }
        }
        Distribution::Interval { a, b } => format!("interval({a}, {b})"),
        Distribution::Sphere { dim, t, averaged } => format!(
            "sphere(dim={dim}, t={t}, {})",
            if *averaged { "avg" } else { "raw" }
        ),
        Distribution::Ball { dim, t, averaged } => format!(
            "ball(dim={dim}, t={t}, {})",
            if *averaged { "avg" } else { "raw" }
        ),
        Distribution::HeatGaussian { t } => format!("heat_kernel({t})"),
        Distribution::PoissonBall { t } => format!("poisson({t})"),
        Distribution::LinComb(terms) => {
            let body = terms
                .iter()
                .map(|(c, d)| format!("{c} * {}", print_distribution(d)))
                .collect::<Vec<_>>()
                .join(" + ");
            format!("lincomb({body})")
        }
        Distribution::MultiplyByFunction { g, inner } => {
            format!("mul({}, {})", g.expr(), print_distribution(inner))
        }
        Distribution::DirectionalDerivative { xi, inner } => {
            let comps = xi
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            format!("deriv({}; {comps})", print_distribution(inner))
        }
        Distribution::Laplacian(inner) => format!("laplacian({})", print_distribution(inner)),
        Distribution::Pushforward { map, inner } => {
            let from = map.from_dim();
            let projection = AffineMap::coordinate_projection(from, from.saturating_sub(1));
            if *map == projection {
                format!("push_p({})", print_distribution(inner))
            } else {
                format!("push_affine({})", print_distribution(inner))
            }
        }
        Distribution::Convolution { kernel, inner } => format!(
            "convolve({}, {})",
            print_distribution(kernel),
            print_distribution(inner)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{pair, PairConfig};
    use crate::smooth::var;

    #[test]
    fn parses_function_expression() {
        let f = parse_test_function("x^2 * exp(-x^2)", &["x".to_string()]).unwrap();
        let direct = TestFunction::new(1, var(0).pow(2) * (-var(0).pow(2)).exp());
        for &x in &[0.0, 0.5, -1.2] {
            assert!((f.eval_f64(&[x]).unwrap() - direct.eval_f64(&[x]).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn parses_spec_constructors() {
        let d = parse_distribution("laplacian(ball(dim=3,t=0.5,avg))").unwrap();
        assert_eq!(d, crate::distribution::ball(3, 0.5, true).laplacian());
        let s = parse_distribution("lincomb(0.5*sphere(dim=1,t=0.3,avg))").unwrap();
        assert_eq!(
            s,
            crate::distribution::lincomb(vec![(0.5, crate::distribution::sphere(1, 0.3, true))])
        );
    }

    #[test]
    fn sniffs_expression_kinds() {
        assert!(matches!(
            parse_expression("dirac(0)").unwrap(),
            Parsed::Dist(_)
        ));
        assert!(matches!(
            parse_expression("x^2 + y").unwrap(),
            Parsed::Function(_)
        ));
        assert!(matches!(
            parse_expression("-y, x").unwrap(),
            Parsed::Field(_)
        ));
    }

    #[test]
    fn reports_error_positions() {
        let e = parse_distribution("sphere(dim=3, t=0.5)").unwrap_err();
        assert!(e.message.contains("avg"));
        let e = parse_test_function("x^2 +* 3", &["x".to_string()]).unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_test_function("foo(3)", &["x".to_string()]).unwrap_err();
        assert!(e.message.contains("unknown identifier"));
    }

    #[test]
    fn vector_field_components() {
        let f = parse_vector_field("(-y, x)").unwrap();
        assert_eq!(f.dim(), 2);
        let xi = f.principal_part(&[1.0, 2.0]).unwrap();
        assert_eq!(xi, vec![-2.0, 1.0]);
    }

    #[test]
    fn print_parse_round_trip() {
        let corpus = [
            "dirac(0)",
            "dirac(0.5, -1)",
            "dirac_d(0, 2)",
            "interval(-1, 1)",
            "interval(0.25, 0.75)",
            "sphere(dim=1, t=0.3, avg)",
            "sphere(dim=2, t=0.5, raw)",
            "sphere(dim=3, t=1, avg)",
            "ball(dim=1, t=0.7, raw)",
            "ball(dim=2, t=1.2, avg)",
            "ball(dim=3, t=0.5, avg)",
            "heat_kernel(0.25)",
            "poisson(0.5)",
            "laplacian(ball(dim=3, t=0.5, avg))",
            "laplacian(laplacian(dirac(0)))",
            "push_p(sphere(dim=3, t=0.5, avg))",
            "mul(x^2 + 1, ball(dim=1, t=1, raw))",
            "lincomb(0.5 * sphere(dim=1, t=0.3, avg))",
            "lincomb(1 * dirac(0) + -2 * dirac(0.1) + 1 * dirac(0.2))",
            "convolve(dirac(0.5), ball(dim=1, t=1, raw))",
        ];
        for src in corpus {
            let parsed = parse_distribution(src).unwrap_or_else(|e| panic!("{src}: {e}"));
            let printed = print_distribution(&parsed);
            let reparsed = parse_distribution(&printed)
                .unwrap_or_else(|e| panic!("reparse of '{printed}': {e}"));
            assert_eq!(parsed, reparsed, "{src} -> {printed}");
        }
    }

    #[test]
    fn parsed_trees_pair_correctly() {
        let d = parse_distribution("lincomb(0.5 * sphere(dim=1, t=0.3, avg))").unwrap();
        let phi = parse_test_function("x^2", &["x".to_string()]).unwrap();
        let value = pair(&d, &phi, &PairConfig::default()).unwrap();
        // (1/2)(phi(0.3) + phi(-0.3)) = 0.09
        assert!((value - 0.09).abs() < 1e-14);
    }
}
