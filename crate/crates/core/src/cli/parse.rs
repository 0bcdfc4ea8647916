//! The presentation language.
//!
//! ```text
//! presentation := [kind] ring ['[' vars ']'] ['/' '(' poly {(';' | ',') poly} ')'] ['deg' '<=' int]
//! kind         := 'algebra' | 'module' | 'extension'
//! ring         := 'F' prime | 'Z/' prime-power
//! ```
//!
//! Polynomials have integer coefficients; `*` may be omitted between factors, factors may carry a
//! unary minus and `#` starts a comment.

use crate::error::{Error, Result};
use crate::fpalg::{presentation_to_algebra, FpAlgebra, IntPoly, DEFAULT_DIM_CAP};
use crate::zpn_linalg::{is_prime, Modulus, ZpnModule};
use crate::zpnalg::ZpnAlgebra;
use serde::Serialize;
use std::collections::BTreeMap;

const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// A finite F_p-algebra F_p[x..]/(f..).
    Algebra,
    /// A Z/p^n-module on generators modulo linear relators.
    Module,
    /// A Z/p^n-algebra Z/p^n[t]/(f), f monic, read as a lift of its reduction.
    Extension,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Algebra => "algebra",
            Kind::Module => "module",
            Kind::Extension => "extension",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub kind: Kind,
    pub p: u64,
    /// Coefficients live in Z/p^n; n = 1 is written F_p.
    pub n: u32,
    pub generators: Vec<String>,
    pub relators: Vec<IntPoly>,
    /// Monomials of total degree above the bound are set to zero.
    pub degree_bound: Option<u32>,
}

/// What a presentation builds to.
#[derive(Clone, Debug)]
pub enum Built {
    Algebra(FpAlgebra),
    Module(ZpnModule),
    Extension(ZpnAlgebra),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Le,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let v = s.parse::<u64>().map_err(|_| err(l, k, format!("integer {s} is too large")))?;
            out.push(Token { tok: Tok::Int(v), line: l, col: k });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l, col: k });
            continue;
        }
        chars.next();
        col += 1;
        if c == '<' && chars.peek() == Some(&'=') {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Le, line: l, col: k });
            continue;
        }
        if "[](),;/+-*^".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l, col: k });
        } else {
            return Err(err(l, k, format!("unexpected character '{c}'")));
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// (p, n) with q = p^n, if q is a prime power.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut n = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

// integer polynomial arithmetic, with overflow reported by the caller

fn poly_const(nv: usize, c: i64) -> IntPoly {
    let mut terms = BTreeMap::new();
    if c != 0 {
        terms.insert(vec![0; nv], c);
    }
    IntPoly { terms }
}

fn poly_add(a: &IntPoly, b: &IntPoly, sign: i64) -> Option<IntPoly> {
    let mut terms = a.terms.clone();
    for (m, &c) in &b.terms {
        let e = terms.entry(m.clone()).or_insert(0);
        *e = e.checked_add(c.checked_mul(sign)?)?;
    }
    terms.retain(|_, c| *c != 0);
    Some(IntPoly { terms })
}

fn poly_mul(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for (ma, &ca) in &a.terms {
        for (mb, &cb) in &b.terms {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = terms.entry(m).or_insert(0);
            *e = e.checked_add(ca.checked_mul(cb)?)?;
        }
    }
    terms.retain(|_, c| *c != 0);
    Some(IntPoly { terms })
}

fn poly_pow(a: &IntPoly, e: u32, nv: usize) -> Option<IntPoly> {
    (0..e).try_fold(poly_const(nv, 1), |acc, _| poly_mul(&acc, a))
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    vars: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }
    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }
    fn here(&self, msg: impl Into<String>) -> Error {
        let t = self.peek();
        err(t.line, t.col, msg)
    }
    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("'{v}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Le => "'<='".into(),
            Tok::End => "end of input".into(),
        }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.here(format!("expected '{c}', found {}", Self::describe(&self.peek().tok))))
        }
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }
    fn int(&mut self) -> Result<(u64, usize, usize)> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok((v, t.line, t.col)),
            other => Err(err(t.line, t.col, format!("expected an integer, found {}", Self::describe(&other)))),
        }
    }

    fn presentation(&mut self) -> Result<Presentation> {
        let mut kind = Kind::Algebra;
        if let Tok::Ident(s) = &self.peek().tok {
            let k = match s.as_str() {
                "algebra" => Some(Kind::Algebra),
                "module" => Some(Kind::Module),
                "extension" => Some(Kind::Extension),
                _ => None,
            };
            if let Some(k) = k {
                kind = k;
                self.next();
            }
        }
        let ring_tok = self.peek().clone();
        let (p, n) = self.ring()?;
        if kind == Kind::Algebra && n != 1 {
            return Err(err(ring_tok.line, ring_tok.col, "algebras are presented over a prime field F_p"));
        }
        if self.eat('[') {
            if self.peek().tok != Tok::Sym(']') {
                loop {
                    let t = self.next();
                    let Tok::Ident(name) = t.tok else {
                        return Err(err(t.line, t.col, format!("expected a generator name, found {}", Self::describe(&t.tok))));
                    };
                    if ["algebra", "module", "extension", "deg"].contains(&name.as_str()) {
                        return Err(err(t.line, t.col, format!("'{name}' is a keyword")));
                    }
                    if self.vars.contains(&name) {
                        return Err(err(t.line, t.col, format!("generator '{name}' is repeated")));
                    }
                    self.vars.push(name);
                    if !self.eat(',') {
                        break;
                    }
                }
            }
            self.expect(']')?;
        }
        let mut relators = Vec::new();
        let mut positions = Vec::new();
        if self.eat('/') {
            self.expect('(')?;
            loop {
                let t = self.peek().clone();
                let f = self.expr()?;
                positions.push((t.line, t.col));
                relators.push(f);
                if !(self.eat(';') || self.eat(',')) {
                    break;
                }
            }
            self.expect(')')?;
        }
        let mut degree_bound = None;
        if self.peek().tok == Tok::Ident("deg".into()) {
            let t = self.next();
            if self.peek().tok != Tok::Le {
                return Err(self.here("expected '<=' after 'deg'"));
            }
            self.next();
            let (b, ..) = self.int()?;
            if kind != Kind::Algebra {
                return Err(err(t.line, t.col, "degree bounds apply to algebras only"));
            }
            degree_bound = Some(u32::try_from(b).map_err(|_| err(t.line, t.col, "degree bound is too large"))?);
        }
        if self.peek().tok != Tok::End {
            return Err(self.here(format!("unexpected {}", Self::describe(&self.peek().tok))));
        }
        let pres = Presentation { kind, p, n, generators: self.vars.clone(), relators, degree_bound };
        check_kind(&pres, &positions, (ring_tok.line, ring_tok.col))?;
        Ok(pres)
    }

    fn ring(&mut self) -> Result<(u64, u32)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s.starts_with('F') && s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()) => {
                let q: u64 = s[1..].parse().map_err(|_| err(t.line, t.col, "field size is too large"))?;
                if !is_prime(q) {
                    return Err(err(t.line, t.col + 1, format!("{q} is not prime")));
                }
                Ok((q, 1))
            }
            Tok::Ident(s) if s == "Z" => {
                self.expect('/')?;
                let (q, line, col) = self.int()?;
                let (p, n) = prime_power(q).ok_or_else(|| err(line, col, format!("{q} is not a prime power")))?;
                Modulus::new(p, n).map_err(|e| err(line, col, e.to_string()))?;
                Ok((p, n))
            }
            other => Err(err(t.line, t.col, format!("expected a coefficient ring F<p> or Z/<q>, found {}", Self::describe(other)))),
        }
    }

    fn overflow(&self, line: usize, col: usize) -> Error {
        err(line, col, "coefficient overflow")
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let nv = self.vars.len();
        let start = self.peek().clone();
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        let first = self.term()?;
        let mut acc = poly_add(&poly_const(nv, 0), &first, sign).ok_or_else(|| self.overflow(start.line, start.col))?;
        loop {
            let t = self.peek().clone();
            let s = match t.tok {
                Tok::Sym('+') => 1,
                Tok::Sym('-') => -1,
                _ => break,
            };
            self.next();
            let rhs = self.term()?;
            acc = poly_add(&acc, &rhs, s).ok_or_else(|| self.overflow(t.line, t.col))?;
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
            && self.peek().tok != Tok::Ident("deg".into())
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            let t = self.peek().clone();
            if self.eat('*') || self.starts_atom() {
                let rhs = self.factor()?;
                acc = poly_mul(&acc, &rhs).ok_or_else(|| self.overflow(t.line, t.col))?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntPoly> {
        let nv = self.vars.len();
        let t = self.next();
        if t.tok == Tok::Sym('-') {
            let inner = self.factor()?;
            return poly_add(&poly_const(nv, 0), &inner, -1).ok_or_else(|| self.overflow(t.line, t.col));
        }
        let base = match &t.tok {
            Tok::Int(v) => poly_const(nv, i64::try_from(*v).map_err(|_| self.overflow(t.line, t.col))?),
            Tok::Ident(s) => {
                let i = self.vars.iter().position(|v| v == s).ok_or_else(|| err(t.line, t.col, format!("unknown generator '{s}'")))?;
                let mut m = vec![0; nv];
                m[i] = 1;
                IntPoly { terms: BTreeMap::from([(m, 1)]) }
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                inner
            }
            other => return Err(err(t.line, t.col, format!("expected a term, found {}", Self::describe(other)))),
        };
        if self.eat('^') {
            let (e, line, col) = self.int()?;
            if e > MAX_EXPONENT as u64 {
                return Err(err(line, col, format!("exponent {e} exceeds {MAX_EXPONENT}")));
            }
            return poly_pow(&base, e as u32, nv).ok_or_else(|| self.overflow(line, col));
        }
        Ok(base)
    }
}

fn check_kind(p: &Presentation, positions: &[(usize, usize)], ring: (usize, usize)) -> Result<()> {
    match p.kind {
        Kind::Algebra => Ok(()),
        Kind::Module => {
            for (f, &(line, col)) in p.relators.iter().zip(positions) {
                if f.terms.keys().any(|m| m.iter().sum::<u32>() != 1) {
                    return Err(err(line, col, "module relators must be linear combinations of the generators"));
                }
            }
            Ok(())
        }
        Kind::Extension => {
            if p.generators.len() > 1 {
                return Err(err(ring.0, ring.1, "extensions take at most one generator"));
            }
            if p.relators.len() != p.generators.len() {
                return Err(err(ring.0, ring.1, "an extension Z/q[t]/(f) needs exactly one monic relator"));
            }
            if let (Some(f), Some(&(line, col))) = (p.relators.first(), positions.first()) {
                let q = p.p.pow(p.n) as i64;
                let top = f.degree();
                if top == 0 || f.terms.get(&vec![top]).map(|c| c.rem_euclid(q)) != Some(1) {
                    return Err(err(line, col, "the relator must be monic of positive degree"));
                }
            }
            Ok(())
        }
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = lex(text)?;
    Parser { toks: &toks, pos: 0, vars: Vec::new() }.presentation()
}

fn format_monomial(vars: &[String], m: &[u32]) -> String {
    m.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms by decreasing degree, then decreasing exponent vector.
pub fn format_poly(vars: &[String], f: &IntPoly) -> String {
    let mut terms: Vec<(&Vec<u32>, i64)> = f.terms.iter().map(|(m, &c)| (m, c)).filter(|(_, c)| *c != 0).collect();
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let mono = format_monomial(vars, m);
        let mag = c.unsigned_abs();
        let body = match (mono.is_empty(), mag) {
            (true, _) => mag.to_string(),
            (false, 1) => mono,
            (false, _) => format!("{mag}*{mono}"),
        };
        match (k, c < 0) {
            (0, false) => out.push_str(&body),
            (0, true) => out.push_str(&format!("-{body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
            (_, true) => out.push_str(&format!(" - {body}")),
        }
    }
    out
}

impl Presentation {
    pub fn format(&self) -> String {
        let ring = if self.n == 1 { format!("F{}", self.p) } else { format!("Z/{}", self.p.pow(self.n)) };
        let mut s = format!("{} {}[{}]", self.kind.keyword(), ring, self.generators.join(", "));
        if !self.relators.is_empty() {
            let rels: Vec<String> = self.relators.iter().map(|f| format_poly(&self.generators, f)).collect();
            s.push_str(&format!("/({})", rels.join("; ")));
        }
        if let Some(b) = self.degree_bound {
            s.push_str(&format!(" deg <= {b}"));
        }
        s
    }

    pub fn modulus(&self) -> Result<Modulus> {
        Modulus::new(self.p, self.n)
    }

    /// Structure constants or relation matrix; algebras are capped at `dim_cap` dimensions.
    pub fn build(&self, dim_cap: usize) -> Result<Built> {
        let k = self.generators.len();
        match self.kind {
            Kind::Algebra => {
                let mut rels = self.relators.clone();
                if let Some(b) = self.degree_bound {
                    // every monomial of degree b + 1 generates the ideal of degree > b
                    let mut stack = vec![(Vec::new(), b + 1)];
                    while let Some((prefix, rest)) = stack.pop() {
                        if prefix.len() == k {
                            if rest == 0 {
                                rels.push(IntPoly { terms: BTreeMap::from([(prefix, 1)]) });
                            }
                            continue;
                        }
                        for e in 0..=rest {
                            let mut m: Vec<u32> = prefix.clone();
                            m.push(e);
                            stack.push((m, rest - e));
                        }
                    }
                }
                if k == 0 {
                    if rels.iter().any(|f| f.terms.values().any(|&c| c.rem_euclid(self.p as i64) != 0)) {
                        return FpAlgebra::zero_ring(self.p).map(Built::Algebra);
                    }
                    return FpAlgebra::prime_field(self.p).map(Built::Algebra);
                }
                presentation_to_algebra(self.p, &self.generators, &rels, dim_cap).map(Built::Algebra)
            }
            Kind::Module => {
                let md = self.modulus()?;
                let rows: Vec<Vec<u64>> = self
                    .relators
                    .iter()
                    .map(|f| {
                        let mut row = vec![0; k];
                        for (m, &c) in &f.terms {
                            let i = m.iter().position(|&e| e == 1).expect("linear relator");
                            row[i] = md.reduce(c);
                        }
                        row
                    })
                    .collect();
                Ok(Built::Module(ZpnModule::new(md, k, &rows)))
            }
            Kind::Extension => {
                let md = self.modulus()?;
                match self.relators.first() {
                    None => Ok(Built::Extension(ZpnAlgebra::integers(md))),
                    Some(f) => {
                        let mut coeffs = vec![0i64; f.degree() as usize + 1];
                        for (m, &c) in &f.terms {
                            coeffs[m[0] as usize] = c;
                        }
                        ZpnAlgebra::poly_quotient(md, &coeffs).map(Built::Extension)
                    }
                }
            }
        }
    }

    pub fn build_default(&self) -> Result<Built> {
        self.build(DEFAULT_DIM_CAP)
    }

    /// The finite F_p-algebra presented, or the reduction mod p of an extension.
    pub fn algebra(&self) -> Result<FpAlgebra> {
        match self.build_default()? {
            Built::Algebra(a) => Ok(a),
            Built::Extension(b) => b.mod_p(),
            Built::Module(_) => Err(Error::Precondition("a module presentation does not define an algebra".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexer_positions() {
        let t = lex("algebra\n  F2[t]").unwrap();
        assert_eq!((t[1].line, t[1].col), (2, 3));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn formatting_of_signs_and_constants() {
        let p = parse_presentation("F3[t]/(-t^3 + t - 1)").unwrap();
        assert_eq!(format_poly(&p.generators, &p.relators[0]), "-t^3 + t - 1");
    }
}
