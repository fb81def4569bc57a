//! Products of characteristic roots, handled through polynomials whose
//! roots are exactly the values in question. No root is ever computed.

use num_traits::Zero;

use crate::closer::basis::{gamma, BasisKind, BasisSpec};
use crate::closer::problem::SumProblem;
use crate::error::{Error, Result};
use crate::exact::composed::binomial;
use crate::exact::{composed_power, composed_product, symmetric_power, Poly};
use crate::scalar::Field;
use crate::sequence::{CFiniteSequence, SeqRef};
use crate::{ExactScalar, UniPoly};

/// A finite set of algebraic numbers, stored as the monic squarefree
/// rational polynomial whose roots are exactly its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialValueSet {
    pub poly: UniPoly,
    /// Monomial degree represented, when the set is a degree-`p` family.
    pub degree_p: Option<usize>,
}

impl MonomialValueSet {
    /// The set `{1}`.
    pub fn unit() -> Self {
        MonomialValueSet {
            poly: linear_one(),
            degree_p: Some(0),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn contains_one(&self) -> bool {
        self.poly.eval(&ExactScalar::of(1)).is_zero()
    }

    /// `|self ∩ other|`, the degree of the gcd.
    pub fn intersection_size(&self, other: &Self) -> usize {
        self.poly.gcd(&other.poly).degree().unwrap_or(0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let g = self.poly.gcd(&other.poly);
        MonomialValueSet {
            poly: (self.poly.clone() * other.poly.exact_div(&g)).monic(),
            degree_p: None,
        }
    }
}

fn linear_one() -> UniPoly {
    Poly::from_coeffs(vec![ExactScalar::of(-1), ExactScalar::of(1)])
}

fn squarefree_roots(seq: &CFiniteSequence) -> Result<UniPoly> {
    let sq = seq.spectral_profile().squarefree_part.clone();
    if sq.coeff(0).is_zero() {
        return Err(Error::Unsupported(format!("sequence `{}` has the characteristic root 0", seq.name())));
    }
    Ok(sq)
}

/// All values `∏_i (r^{(i)})^{b_i}`, one root `r^{(i)}` chosen per entry.
pub fn value_set_products(seqs: &[SeqRef], exponents: &[i64]) -> Result<MonomialValueSet> {
    assert_eq!(seqs.len(), exponents.len(), "one exponent per sequence");
    let mut acc = linear_one();
    for (seq, &b) in seqs.iter().zip(exponents) {
        let powered = composed_power(&squarefree_roots(seq)?, b)?.squarefree_part();
        acc = composed_product(&acc, &powered)?.squarefree_part();
    }
    Ok(MonomialValueSet {
        poly: acc,
        degree_p: None,
    })
}

/// `S_p`: the values of all degree-`p` monomials in the distinct roots.
pub fn degree_p_value_set(seq: &CFiniteSequence, p: usize) -> Result<MonomialValueSet> {
    let base = squarefree_roots(seq)?;
    let mut acc = linear_one();
    for _ in 0..p {
        acc = composed_product(&acc, &base)?.squarefree_part();
    }
    Ok(MonomialValueSet {
        poly: acc,
        degree_p: Some(p),
    })
}

/// Number of formally distinct degree-`p` monomials in `d` roots.
pub fn formal_count(d: usize, p: usize) -> Result<usize> {
    if d == 0 {
        return Ok(usize::from(p == 0));
    }
    binomial(p + d - 1, p)
}

/// Whether some `∏ r_i^{b_i}` (one root per summand factor) equals 1.
pub fn theta_one_possible(p: &SumProblem) -> Result<bool> {
    let seqs: Vec<SeqRef> = p.factors().iter().map(|f| f.seq.clone()).collect();
    let b: Vec<i64> = p.factors().iter().map(|f| f.b).collect();
    Ok(value_set_products(&seqs, &b)?.contains_one())
}

fn require_distinct_roots(seq: &CFiniteSequence) -> Result<()> {
    if seq.spectral_profile().delta > 0 {
        return Err(Error::Unsupported(format!(
            "sequence `{}` has repeated characteristic roots",
            seq.name()
        )));
    }
    Ok(())
}

/// `(dim W_p, dim W_q^+, dim W_{p,q}^{++})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub w_p: usize,
    pub w_q_plus: usize,
    pub w_pq_plus_plus: usize,
}

/// Dimensions of the spans of degree-`p` monomials, of degree-`q` monomials
/// with linear coefficients, and of both together.
pub fn dims(seq: &CFiniteSequence, p: usize, q: usize) -> Result<Dims> {
    require_distinct_roots(seq)?;
    let sp = degree_p_value_set(seq, p)?;
    let sq = degree_p_value_set(seq, q)?;
    let both = sp.intersection_size(&sq);
    Ok(Dims {
        w_p: sp.cardinality(),
        w_q_plus: 2 * sq.cardinality(),
        w_pq_plus_plus: sp.cardinality() + 2 * sq.cardinality() - both,
    })
}

/// Number of formally distinct monomials in the fundamental-style family
/// with `p` and `q`: `C(p+d-1, p) + 2 C(q+d-1, q)`, counted once when `p = q`.
pub fn formal_dims(seq: &CFiniteSequence, p: usize, q: usize) -> Result<usize> {
    let d = seq.spectral_profile().distinct;
    let cp = formal_count(d, p)?;
    let cq = formal_count(d, q)?;
    Ok(if p == q { 2 * cq } else { cp + 2 * cq })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    NotUnique { deficit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub verdict: Uniqueness,
    /// Dimension of the span of the basis monomials as functions of `n`.
    pub dimension: usize,
    /// Number of formally distinct basis monomials.
    pub m: usize,
}

impl UniquenessReport {
    pub fn is_unique(&self) -> bool {
        self.verdict == Uniqueness::Unique
    }
}

/// Whether the closed form in `basis` is unique, i.e. the basis monomials
/// are linearly independent as functions of `n`.
///
/// With distinct roots the monomials span `{t^n : t ∈ T} ∪ {n^h s^n : s ∈ S}`
/// where `T` and `S` are the value sets of the two monomial families, so the
/// dimension is `|T ∪ S| + ψ |S|`.
pub fn uniqueness_report(p: &SumProblem, basis: &BasisSpec) -> Result<UniquenessReport> {
    for seq in p.sequences() {
        require_distinct_roots(&seq)?;
    }
    let psi = basis.psi_degree as usize;
    let (upper, lower) = match basis.kind {
        BasisKind::Shifted => {
            let seqs: Vec<SeqRef> = p.factors().iter().map(|f| f.seq.clone()).collect();
            let ab: Vec<i64> = p.factors().iter().map(|f| f.a + f.b).collect();
            let a: Vec<i64> = p.factors().iter().map(|f| f.a).collect();
            (value_set_products(&seqs, &ab)?, value_set_products(&seqs, &a)?)
        }
        BasisKind::Fundamental => {
            let seq = &p.factors()[0].seq;
            let big_p: i64 = p.factors().iter().map(|f| f.a + f.b).sum();
            let big_q: i64 = p.factors().iter().map(|f| f.a).sum();
            debug_assert_eq!(gamma(p) as usize, psi);
            (
                degree_p_value_set(seq, big_p as usize)?,
                degree_p_value_set(seq, big_q as usize)?,
            )
        }
    };
    let dimension = upper.union(&lower).cardinality() + psi * lower.cardinality();
    let m = basis.m();
    let verdict = if dimension == m {
        Uniqueness::Unique
    } else {
        Uniqueness::NotUnique {
            deficit: m.saturating_sub(dimension),
        }
    };
    Ok(UniquenessReport { verdict, dimension, m })
}

/// Discriminant of the monic polynomial whose roots are the values of the
/// `C(p+d-1, p)` formally distinct degree-`p` monomials in the roots of the
/// characteristic polynomial. It vanishes exactly when two of them coincide.
pub fn hyperdiscriminant(seq: &CFiniteSequence, p: usize) -> Result<ExactScalar> {
    let f = symmetric_power(&seq.char_poly(), p)?;
    if f.degree() == Some(1) {
        return Ok(ExactScalar::of(1));
    }
    Ok(f.discriminant())
}

/// Everything `cfsum analyze` reports for one sequence and `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub sequence: String,
    pub p: usize,
    pub q: usize,
    pub s_p: usize,
    pub s_q: usize,
    pub intersection: usize,
    pub one_in_s_p: bool,
    pub one_in_s_q: bool,
    pub dims: Dims,
    pub formal_dimension: usize,
    /// The span of the family has the dimension of its formally distinct
    /// monomials.
    pub unique: bool,
    pub hyperdiscriminant: ExactScalar,
}

pub fn analyze(seq: &CFiniteSequence, p: usize, q: usize) -> Result<Analysis> {
    let d = dims(seq, p, q)?;
    let sp = degree_p_value_set(seq, p)?;
    let sq = degree_p_value_set(seq, q)?;
    let formal_dimension = formal_dims(seq, p, q)?;
    Ok(Analysis {
        sequence: seq.name().to_string(),
        p,
        q,
        s_p: sp.cardinality(),
        s_q: sq.cardinality(),
        intersection: sp.intersection_size(&sq),
        one_in_s_p: sp.contains_one(),
        one_in_s_q: sq.contains_one(),
        dims: d,
        formal_dimension,
        unique: d.w_pq_plus_plus == formal_dimension,
        hyperdiscriminant: hyperdiscriminant(seq, p)?,
    })
}
