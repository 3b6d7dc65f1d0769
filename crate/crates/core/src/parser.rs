//! Text format for polynomial maps.
//!
//! ```text
//! vars x, y; mod 5^2
//! f1 = x + y^2
//! f2 = 3/2*y
//! ```
//!
//! Statements are separated by `;` or newlines; a newline directly after an
//! operator or inside parentheses continues the statement. `#` starts a
//! comment. Division is allowed only by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::{inverse_mod, Modulus, ScalarKind};

/// Coefficients of a parsed map, in the narrowest ring that holds them.
#[derive(Debug, Clone, PartialEq)]
pub enum MapCoefficients {
    Integer(PolyMap<BigInt>),
    Rational(PolyMap<BigRational>),
}

/// Result of parsing a map source.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMap {
    pub vars: Vec<String>,
    pub component_names: Vec<String>,
    /// Present when the source declared `mod p^k`; integer coefficients are then reduced into `[0, p^k)`.
    pub modulus: Option<Modulus>,
    pub coefficients: MapCoefficients,
}

impl ParsedMap {
    pub fn kind(&self) -> ScalarKind {
        match (&self.modulus, &self.coefficients) {
            (Some(_), _) => ScalarKind::Residue,
            (None, MapCoefficients::Integer(_)) => ScalarKind::Integer,
            (None, MapCoefficients::Rational(_)) => ScalarKind::Rational,
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// The map over ℤ; fails for maps with non-integral coefficients.
    pub fn integer_map(&self) -> Result<PolyMap<BigInt>> {
        match &self.coefficients {
            MapCoefficients::Integer(f) => Ok(f.clone()),
            MapCoefficients::Rational(_) => Err(Error::Unsupported("this operation needs integer coefficients".into())),
        }
    }

    /// The map over ℚ (integer maps are embedded).
    pub fn rational_map(&self) -> PolyMap<BigRational> {
        match &self.coefficients {
            MapCoefficients::Integer(f) => f.map_coefficients(|c| BigRational::from_integer(c.clone())),
            MapCoefficients::Rational(f) => f.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    Sep,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(message: impl Into<String>, line: usize, column: usize) -> Error {
    Error::Syntax { message: message.into(), line, column }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0i64;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok: Tok| out.push(Token { tok, line: tl, column: tc });
        match c {
            '\n' => {
                let continues = depth > 0
                    || matches!(
                        out.last().map(|t| &t.tok),
                        Some(
                            Tok::Plus
                                | Tok::Minus
                                | Tok::Star
                                | Tok::Slash
                                | Tok::Caret
                                | Tok::Comma
                                | Tok::Eq
                                | Tok::LParen
                        )
                    );
                if !continues {
                    push(&mut out, Tok::Sep);
                }
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            ';' => push(&mut out, Tok::Sep),
            '+' => push(&mut out, Tok::Plus),
            '-' | '−' => push(&mut out, Tok::Minus),
            '*' => push(&mut out, Tok::Star),
            '/' => push(&mut out, Tok::Slash),
            '^' => push(&mut out, Tok::Caret),
            '(' => {
                depth += 1;
                push(&mut out, Tok::LParen)
            }
            ')' => {
                depth -= 1;
                push(&mut out, Tok::RParen)
            }
            ',' => push(&mut out, Tok::Comma),
            '=' => push(&mut out, Tok::Eq),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                col += i - start;
                let n = digits.parse::<BigInt>().expect("digit run parses");
                push(&mut out, Tok::Int(n));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Ident(name));
                continue;
            }
            other => return Err(syntax(format!("unexpected character `{other}`"), line, col)),
        }
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        syntax(message, t.line, t.column)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.next();
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(name) => Ok((name.clone(), t.clone())),
            _ => Err(syntax(format!("expected {what}"), t.line, t.column)),
        }
    }

    fn integer(&mut self, what: &str) -> Result<BigInt> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(n),
            _ => Err(syntax(format!("expected {what}"), t.line, t.column)),
        }
    }

    fn end_of_statement(&mut self) -> Result<()> {
        match self.peek().tok {
            Tok::Sep | Tok::End => Ok(()),
            _ => Err(self.error_here("expected `;` or end of line")),
        }
    }

    fn header(&mut self) -> Result<()> {
        let (kw, t) = self.ident("`vars` header")?;
        if kw != "vars" {
            return Err(syntax("expected `vars` header", t.line, t.column));
        }
        loop {
            let (name, t) = self.ident("variable name")?;
            if name == "vars" || name == "mod" {
                return Err(syntax(format!("`{name}` is reserved"), t.line, t.column));
            }
            if self.vars.contains(&name) {
                return Err(syntax(format!("duplicate variable `{name}`"), t.line, t.column));
            }
            self.vars.push(name);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.end_of_statement()
    }

    fn modulus_clause(&mut self) -> Result<Option<Modulus>> {
        let save = self.pos;
        self.skip_separators();
        if !matches!(&self.peek().tok, Tok::Ident(s) if s == "mod") {
            self.pos = save;
            return Ok(None);
        }
        let kw = self.next();
        let p = self.integer("prime after `mod`")?;
        let k = if self.peek().tok == Tok::Caret {
            self.next();
            self.integer("exponent")?
        } else {
            BigInt::one()
        };
        let (p, k) = match (p.to_u64(), k.to_u32()) {
            (Some(p), Some(k)) => (p, k),
            _ => return Err(syntax("modulus out of range", kw.line, kw.column)),
        };
        let m = Modulus::new(p, k).map_err(|e| syntax(e.to_string(), kw.line, kw.column))?;
        self.end_of_statement()?;
        Ok(Some(m))
    }

    fn expr(&mut self) -> Result<MultiPoly<BigRational>> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<BigRational>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let at = self.next();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(syntax("division only by a nonzero constant", at.line, at.column));
                    }
                    let inv = BigRational::one() / d.constant_term();
                    acc = acc.scale(&inv);
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                    return Err(self.error_here("expected an operator (write `*` for products)"))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly<BigRational>> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly<BigRational>> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.peek().clone();
        let parenthesised = t.tok == Tok::LParen;
        if parenthesised {
            self.next();
        }
        if self.peek().tok == Tok::Minus {
            return Err(Error::NegativeExponent { line: self.peek().line, column: self.peek().column });
        }
        let e = self.integer("nonnegative integer exponent")?;
        if parenthesised {
            self.expect(Tok::RParen, "`)`")?;
        }
        let e = e.to_u32().ok_or_else(|| syntax("exponent too large", t.line, t.column))?;
        if self.peek().tok == Tok::Caret {
            return Err(self.error_here("chained `^` is ambiguous; use parentheses"));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly<BigRational>> {
        let n = self.vars.len();
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(MultiPoly::constant(n, BigRational::from_integer(v))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MultiPoly::var(n, i)),
                None => Err(Error::UnknownVariable { name, line: t.line, column: t.column }),
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(syntax("expected a number, variable or `(`", t.line, t.column)),
        }
    }
}

fn to_residue(c: &BigRational, m: &Modulus) -> Option<BigInt> {
    let den = inverse_mod(c.denom(), m.value())?;
    Some(m.reduce(&(c.numer() * den)))
}

/// Parses a map source.
pub fn parse_map(text: &str) -> Result<ParsedMap> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0, vars: Vec::new() };
    parser.skip_separators();
    parser.header()?;
    let modulus = parser.modulus_clause()?;
    let mut names = Vec::new();
    let mut comps = Vec::new();
    loop {
        parser.skip_separators();
        if parser.peek().tok == Tok::End {
            break;
        }
        let (name, t) = parser.ident("component name")?;
        if names.contains(&name) {
            return Err(syntax(format!("duplicate component `{name}`"), t.line, t.column));
        }
        if name == "mod" {
            return Err(syntax("`mod` must directly follow the `vars` header", t.line, t.column));
        }
        parser.expect(Tok::Eq, "`=`")?;
        comps.push(parser.expr()?);
        names.push(name);
        parser.end_of_statement()?;
    }
    let n = parser.vars.len();
    if comps.len() != n {
        return Err(Error::NotSquare { vars: n, components: comps.len() });
    }
    let coefficients = match &modulus {
        Some(m) => {
            let mut out = Vec::with_capacity(n);
            for c in &comps {
                let r = c
                    .try_map_coefficients(|_, v| to_residue(v, m))
                    .ok_or_else(|| syntax(format!("a coefficient has no inverse modulo {m}"), 1, 1))?;
                out.push(r);
            }
            MapCoefficients::Integer(PolyMap::new(out)?)
        }
        None if comps.iter().all(|c| c.terms().all(|(_, v)| v.is_integer())) => MapCoefficients::Integer(PolyMap::new(
            comps.iter().map(|c| c.map_coefficients(|v| v.to_integer())).collect(),
        )?),
        None => MapCoefficients::Rational(PolyMap::new(comps)?),
    };
    Ok(ParsedMap { vars: parser.vars, component_names: names, modulus, coefficients })
}

/// Parses a single polynomial in the given variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<MultiPoly<BigRational>> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0, vars: vars.to_vec() };
    let p = parser.expr()?;
    parser.skip_separators();
    if parser.peek().tok != Tok::End {
        return Err(parser.error_here("unexpected trailing input"));
    }
    Ok(p)
}

/// Parses a rational literal `a`, `-a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let p = parse_poly(text, &[])?;
    Ok(p.constant_term())
}

/// Integer content check used by callers that accept only integral input.
pub fn integral_poly(p: &MultiPoly<BigRational>) -> Option<MultiPoly<BigInt>> {
    p.try_map_coefficients(|_, c| c.is_integer().then(|| c.to_integer()))
}
