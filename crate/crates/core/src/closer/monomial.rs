use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::Poly;
use crate::scalar::Field;
use crate::sequence::SeqRef;
use crate::{ExactScalar, UniPoly};

/// A factor `F(alpha n + shift)` of a target monomial.
#[derive(Clone, Debug)]
pub struct FactorRef {
    pub seq: SeqRef,
    pub alpha: i64,
    pub shift: i64,
}

impl FactorRef {
    pub fn new(seq: SeqRef, alpha: i64, shift: i64) -> Self {
        FactorRef { seq, alpha, shift }
    }

    pub fn evaluate(&self, n: i64) -> Result<ExactScalar> {
        self.seq.evaluate(self.alpha * n + self.shift)
    }

    fn key(&self) -> (&str, i64, i64) {
        (self.seq.name(), self.alpha, self.shift)
    }
}

impl PartialEq for FactorRef {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for FactorRef {}

impl PartialOrd for FactorRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FactorRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

fn product(factors: &[FactorRef], n: i64) -> Result<ExactScalar> {
    let mut acc = ExactScalar::one();
    for f in factors {
        acc *= f.evaluate(n)?;
    }
    Ok(acc)
}

/// Splits off factors with `alpha = 0`, which are constants, and sorts the rest.
fn fold_constants(factors: Vec<FactorRef>) -> Result<(ExactScalar, Vec<FactorRef>)> {
    let mut constant = ExactScalar::one();
    let mut rest = Vec::with_capacity(factors.len());
    for f in factors {
        if f.alpha == 0 {
            constant *= f.seq.evaluate(f.shift)?;
        } else {
            rest.push(f);
        }
    }
    rest.sort();
    Ok((constant, rest))
}

/// `constant · n^h · ∏ F(alpha n + shift)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetMonomial {
    pub h: u32,
    pub factors: Vec<FactorRef>,
    pub constant: ExactScalar,
}

impl TargetMonomial {
    /// Canonical monomial; `alpha = 0` factors are evaluated into the constant.
    pub fn new(h: u32, factors: Vec<FactorRef>) -> Result<Self> {
        let (constant, factors) = fold_constants(factors)?;
        Ok(TargetMonomial { h, factors, constant })
    }

    /// Basis monomial: `alpha = 0` factors are dropped and the constant is 1,
    /// so that a vanishing initial value cannot erase a basis element.
    pub fn basis(h: u32, mut factors: Vec<FactorRef>) -> Self {
        factors.retain(|f| f.alpha != 0);
        factors.sort();
        TargetMonomial {
            h,
            factors,
            constant: ExactScalar::one(),
        }
    }

    pub fn evaluate(&self, n: i64) -> Result<ExactScalar> {
        let np = ExactScalar::of(n).pow_i(self.h as i64);
        Ok(&self.constant * np * product(&self.factors, n)?)
    }

    /// Equivalence ignores the constant.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.h == other.h && self.factors == other.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }
}

impl PartialOrd for TargetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TargetMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Within equal factors, higher powers of n come first.
        self.factors
            .cmp(&other.factors)
            .then_with(|| other.h.cmp(&self.h))
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

/// `poly(n) · constant · ∏ F(alpha n + shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub poly: UniPoly,
    pub constant: ExactScalar,
    pub factors: Vec<FactorRef>,
}

impl Term {
    pub fn new(poly: UniPoly, factors: Vec<FactorRef>) -> Self {
        Term {
            poly,
            constant: ExactScalar::one(),
            factors,
        }
    }

    pub fn evaluate(&self, n: i64) -> Result<ExactScalar> {
        let p = self.poly.eval(&ExactScalar::of(n));
        if p.is_zero() {
            return Ok(p);
        }
        Ok(p * &self.constant * product(&self.factors, n)?)
    }
}

/// A linear combination of monomials with polynomial coefficients.
///
/// The canonical form has pairwise distinct factor lists in sorted order,
/// no zero coefficients, no `alpha = 0` factors and every constant equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosedForm {
    pub terms: Vec<Term>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm::default()
    }

    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<FactorRef>, UniPoly> = BTreeMap::new();
        for t in terms {
            let (c, factors) = fold_constants(t.factors)?;
            let poly = t.poly.scale(&(c * t.constant));
            if poly.is_zero() {
                continue;
            }
            let slot = merged.entry(factors).or_insert_with(Poly::zero);
            *slot = slot.clone() + poly;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(factors, poly)| Term::new(poly, factors))
            .collect();
        Ok(ClosedForm { terms })
    }

    /// Combination `Σ coeffs[i] · basis[i]`.
    pub fn from_basis(basis: &[TargetMonomial], coeffs: &[ExactScalar]) -> Self {
        let terms = basis
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| Term::new(Poly::monomial(c * &m.constant, m.h as usize), m.factors.clone()))
            .collect();
        Self::new(terms).expect("basis monomials carry no alpha = 0 factors")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, n: i64) -> Result<ExactScalar> {
        let mut total = ExactScalar::zero();
        for t in &self.terms {
            total += t.evaluate(n)?;
        }
        Ok(total)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.poly.scale(c), t.factors.clone()))
            .collect();
        Self::new(terms).expect("canonical input")
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Self::new(terms).expect("canonical input")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-ExactScalar::one()))
    }

    /// Coefficient polynomial of the monomial with exactly these factors,
    /// given as `(sequence, alpha, shift)` triples in any order.
    pub fn coefficient(&self, factors: &[(&str, i64, i64)]) -> UniPoly {
        let mut want: Vec<(&str, i64, i64)> = factors.to_vec();
        want.sort();
        self.terms
            .iter()
            .find(|t| t.factors.iter().map(FactorRef::key).eq(want.iter().copied()))
            .map(|t| t.poly.clone())
            .unwrap_or_else(Poly::zero)
    }
}

/// `F` as a polynomial in its index when every characteristic root is 1.
fn polynomial_of(seq: &SeqRef) -> Option<UniPoly> {
    let d = seq.order();
    let one = ExactScalar::one();
    let x_minus_one = Poly::from_coeffs(vec![-one.clone(), one]);
    if seq.char_poly() != x_minus_one.pow(d as u32) {
        return None;
    }
    let points = (0..d as i64)
        .map(|i| Ok((ExactScalar::of(i), seq.evaluate(i)?)))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    Some(Poly::interpolate(&points))
}

impl ClosedForm {
    /// Rewrites factors of polynomial sequences (such as `F(n) = n`) as
    /// polynomial coefficients in `n`.
    pub fn expand_polynomial_factors(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut poly = t.poly.scale(&t.constant);
                let mut rest = Vec::new();
                for f in &t.factors {
                    match polynomial_of(&f.seq) {
                        Some(q) => {
                            let arg = Poly::from_coeffs(vec![ExactScalar::of(f.shift), ExactScalar::of(f.alpha)]);
                            poly = poly * q.compose(&arg);
                        }
                        None => rest.push(f.clone()),
                    }
                }
                Term::new(poly, rest)
            })
            .collect();
        Self::new(terms).expect("canonical input")
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render(self))
    }
}
