//! Plain-text form of closed forms, e.g. `1/2*F(2n) + (n + 1)*F(n)^2*F(n+1)`.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := item ("*" item)*
//! item   := "-" item | number ["/" number] | "n" ["^" int] | "(" expr ")" ["^" int]
//!         | name "(" linear ")" ["^" int]
//! linear := ["-"] lin_atom (("+" | "-") lin_atom)*
//! lin_atom := int ["*"] "n" | "n" | int
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::closer::monomial::{ClosedForm, FactorRef, Term};
use crate::error::{Error, Result};
use crate::exact::Poly;
use crate::scalar::Field;
use crate::sequence::SeqRef;
use crate::{ExactScalar, UniPoly};

fn render_arg(alpha: i64, shift: i64) -> String {
    let mut s = match alpha {
        0 => String::new(),
        1 => "n".to_string(),
        -1 => "-n".to_string(),
        a => format!("{a}n"),
    };
    if alpha == 0 {
        s = shift.to_string();
    } else if shift > 0 {
        s.push_str(&format!("+{shift}"));
    } else if shift < 0 {
        s.push_str(&format!("{shift}"));
    }
    s
}

fn render_factors(factors: &[FactorRef]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let mut j = i;
        while j < factors.len() && factors[j] == factors[i] {
            j += 1;
        }
        let f = &factors[i];
        let mut s = format!("{}({})", f.seq.name(), render_arg(f.alpha, f.shift));
        if j - i > 1 {
            s.push_str(&format!("^{}", j - i));
        }
        out.push(s);
        i = j;
    }
    out
}

/// Summands of one term as `(negative, body)` pairs.
fn render_term(t: &Term) -> Vec<(bool, String)> {
    let poly = t.poly.scale(&t.constant);
    let factors = render_factors(&t.factors);
    let nonzero: Vec<usize> = (0..poly.coeffs().len()).filter(|&k| !poly.coeffs()[k].is_zero()).collect();
    let power = |k: usize| match k {
        0 => None,
        1 => Some("n".to_string()),
        k => Some(format!("n^{k}")),
    };
    if factors.is_empty() {
        return nonzero
            .into_iter()
            .rev()
            .map(|k| {
                let c = &poly.coeffs()[k];
                let mag = c.abs();
                let body = match power(k) {
                    None => mag.to_string(),
                    Some(p) if mag.is_one() => p,
                    Some(p) => format!("{mag}*{p}"),
                };
                (c.is_negative(), body)
            })
            .collect();
    }
    let (neg, mut parts) = if nonzero.len() == 1 {
        let k = nonzero[0];
        let c = &poly.coeffs()[k];
        let mut parts = Vec::new();
        if !c.abs().is_one() {
            parts.push(c.abs().to_string());
        }
        parts.extend(power(k));
        (c.is_negative(), parts)
    } else {
        let neg = poly.lead().is_some_and(|c| c.is_negative());
        let shown = if neg { -poly.clone() } else { poly.clone() };
        (neg, vec![format!("({})", shown.render("n"))])
    };
    parts.extend(factors);
    vec![(neg, parts.join("*"))]
}

/// Text form of `cf`; the zero form renders as `0`.
pub fn render(cf: &ClosedForm) -> String {
    let mut out = String::new();
    for (neg, body) in cf.terms.iter().flat_map(render_term) {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                toks.push(Tok::Minus);
                i += 1
            }
            '*' | '\u{00b7}' => {
                toks.push(Tok::Star);
                i += 1
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Tok::Num(s.parse().expect("digits")));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Invalid(format!("unexpected character `{c}` in closed form"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<SeqRef>,
}

fn syntax(msg: impl Into<String>) -> Error {
    Error::Invalid(format!("closed form syntax: {}", msg.into()))
}

fn constant(c: ExactScalar) -> ClosedForm {
    ClosedForm::new(vec![Term::new(Poly::constant(c), Vec::new())]).expect("no factors")
}

fn multiply(x: &ClosedForm, y: &ClosedForm) -> ClosedForm {
    let mut terms = Vec::new();
    for s in &x.terms {
        for t in &y.terms {
            let poly = s.poly.clone() * t.poly.clone();
            let poly = poly.scale(&(&s.constant * &t.constant));
            let factors = s.factors.iter().chain(&t.factors).cloned().collect();
            terms.push(Term::new(poly, factors));
        }
    }
    ClosedForm::new(terms).expect("factors of canonical forms")
}

fn power(x: &ClosedForm, e: usize) -> ClosedForm {
    (0..e).fold(constant(ExactScalar::one()), |acc, _| multiply(&acc, x))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(syntax(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(syntax(format!("expected an integer at token {}", self.pos))),
        }
    }

    fn small(&mut self) -> Result<i64> {
        i64::try_from(self.int()?).map_err(|_| syntax("integer out of range"))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.eat(&Tok::Caret) {
            usize::try_from(self.int()?).map_err(|_| syntax("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn expr(&mut self) -> Result<ClosedForm> {
        let mut acc = if self.eat(&Tok::Minus) {
            self.term()?.scale(&-ExactScalar::one())
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ClosedForm> {
        let mut acc = self.item()?;
        while self.eat(&Tok::Star) {
            acc = multiply(&acc, &self.item()?);
        }
        Ok(acc)
    }

    fn item(&mut self) -> Result<ClosedForm> {
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.item()?.scale(&-ExactScalar::one()))
            }
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let mut c = ExactScalar::from_int(v);
                if self.eat(&Tok::Slash) {
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(syntax("zero denominator"));
                    }
                    c /= ExactScalar::from_int(d);
                }
                Ok(constant(c))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let e = self.exponent()?;
                Ok(power(&inner, e))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let seq = (self.resolve)(&name)
                        .ok_or_else(|| Error::Invalid(format!("unknown sequence `{name}`")))?;
                    let (alpha, shift) = self.linear()?;
                    self.expect(Tok::RParen)?;
                    let e = self.exponent()?;
                    let factors = vec![FactorRef::new(seq, alpha, shift); e];
                    return ClosedForm::new(vec![Term::new(Poly::one(), factors)]);
                }
                if name != "n" {
                    return Err(syntax(format!("unknown symbol `{name}`")));
                }
                let e = self.exponent()?;
                let p: UniPoly = Poly::monomial(ExactScalar::one(), e);
                ClosedForm::new(vec![Term::new(p, Vec::new())])
            }
            other => Err(syntax(format!("unexpected {other:?} at token {}", self.pos))),
        }
    }

    fn linear(&mut self) -> Result<(i64, i64)> {
        let (mut alpha, mut shift) = (0i64, 0i64);
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        loop {
            let (a, s) = self.lin_atom()?;
            alpha += sign * a;
            shift += sign * s;
            if self.eat(&Tok::Plus) {
                sign = 1;
            } else if self.eat(&Tok::Minus) {
                sign = -1;
            } else {
                return Ok((alpha, shift));
            }
        }
    }

    fn lin_atom(&mut self) -> Result<(i64, i64)> {
        if self.eat(&Tok::Ident("n".into())) {
            return Ok((1, 0));
        }
        let k = self.small()?;
        self.eat(&Tok::Star);
        if self.eat(&Tok::Ident("n".into())) {
            Ok((k, 0))
        } else {
            Ok((0, k))
        }
    }
}

/// Parses the text form, resolving sequence names through `resolve`.
pub fn parse(text: &str, resolve: &dyn Fn(&str) -> Option<SeqRef>) -> Result<ClosedForm> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, resolve };
    let cf = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(format!("trailing input at token {}", p.pos)));
    }
    Ok(cf)
}

/// [`parse`] against a fixed list of sequences, looked up by name.
pub fn parse_with(text: &str, seqs: &[SeqRef]) -> Result<ClosedForm> {
    let table: HashMap<&str, SeqRef> = seqs.iter().map(|s| (s.name(), s.clone())).collect();
    parse(text, &|name| table.get(name).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::builtin;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn fib() -> SeqRef {
        Arc::new(builtin("fibonacci", &[]).unwrap().renamed("F"))
    }

    fn q(a: i64, b: i64) -> ExactScalar {
        ExactScalar::of(a) / ExactScalar::of(b)
    }

    #[test]
    fn renders_and_parses() {
        let f = fib();
        let cf = ClosedForm::new(vec![
            Term::new(Poly::constant(q(1, 2)), vec![FactorRef::new(f.clone(), 2, 0)]),
            Term::new(
                Poly::constant(q(-1, 2)),
                vec![FactorRef::new(f.clone(), 1, 0), FactorRef::new(f.clone(), 1, 0), FactorRef::new(f.clone(), 1, 1)],
            ),
            Term::new(Poly::from_coeffs(vec![q(1, 1), q(3, 1)]), vec![FactorRef::new(f.clone(), 1, -1)]),
            Term::new(Poly::from_coeffs(vec![q(-1, 1), q(0, 1), q(2, 3)]), vec![]),
        ])
        .unwrap();
        let text = render(&cf);
        assert_eq!(text, "2/3*n^2 - 1 + (3*n + 1)*F(n-1) - 1/2*F(n)^2*F(n+1) + 1/2*F(2n)");
        assert_eq!(parse_with(&text, &[f.clone()]).unwrap(), cf);
        assert_eq!(render(&ClosedForm::zero()), "0");
    }

    #[test]
    fn accepts_loose_input() {
        let f = fib();
        let a = parse_with("F(n) \u{2212} 2*(n+1)^2*F(2*n + 3)", &[f.clone()]).unwrap();
        let b = parse_with("F(n) - (2*n^2 + 4*n + 2)*F(2n+3)", &[f.clone()]).unwrap();
        assert_eq!(a, b);
        assert!(parse_with("G(n)", &[f.clone()]).is_err());
        assert!(parse_with("F(n) +", &[f.clone()]).is_err());
        assert!(parse_with("1/0", &[f]).is_err());
    }

    #[test]
    fn alpha_zero_factors_fold() {
        let f = fib();
        let cf = parse_with("F(5)*F(n)", &[f]).unwrap();
        assert_eq!(render(&cf), "5*F(n)");
    }

    proptest! {
        #[test]
        fn round_trip(raw in prop::collection::vec((-5i64..=5, 1i64..=3, 0u32..=2, 0usize..=2, 1i64..=3, -2i64..=2), 0..5)) {
            let f = fib();
            let terms = raw
                .iter()
                .map(|&(c, d, h, nf, alpha, shift)| {
                    let poly = Poly::monomial(q(c, d), h as usize) + Poly::constant(q(1, d));
                    Term::new(poly, vec![FactorRef::new(f.clone(), alpha, shift); nf])
                })
                .collect();
            let cf = ClosedForm::new(terms).unwrap();
            let back = parse_with(&render(&cf), &[f]).unwrap();
            prop_assert_eq!(back, cf);
        }
    }
}
