use std::collections::BTreeSet;

use crate::closer::monomial::{FactorRef, TargetMonomial};
use crate::closer::problem::SumProblem;
use crate::error::{Error, Result};
use crate::sequence::SeqRef;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Products `∏ F((a+b)n + i)` plus `n^h ∏ F(a n + i)`.
    Shifted,
    /// Homogeneous monomials in `F(n), ..., F(n+D-1)`; single sequence only.
    Fundamental,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Shifted => "shifted",
            BasisKind::Fundamental => "fundamental",
        }
    }
}

/// A finite list of distinct target monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub kind: BasisKind,
    /// Largest power of `n` attached to the second family of monomials.
    pub psi_degree: u32,
    pub monomials: Vec<TargetMonomial>,
}

impl BasisSpec {
    /// Number of distinct monomials, which is also the sample size.
    pub fn m(&self) -> usize {
        self.monomials.len()
    }

    fn from_set(kind: BasisKind, psi_degree: u32, set: BTreeSet<TargetMonomial>) -> Self {
        BasisSpec {
            kind,
            psi_degree,
            monomials: set.into_iter().collect(),
        }
    }
}

/// All multisets of `size` shifts from `0..order`, each non-decreasing.
fn shift_multisets(order: i64, size: usize) -> Vec<Vec<i64>> {
    fn go(start: i64, order: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for s in start..order {
            cur.push(s);
            go(s, order, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, order, size, &mut Vec::new(), &mut out);
    out
}

/// Every factor list obtained by giving each `(sequence, alpha)` slot a shift
/// in `0..D`. Slots with the same sequence and alpha are interchangeable, so
/// they receive multisets of shifts. Slots with `alpha = 0` are constants and
/// are left out.
fn factor_products(slots: &[(SeqRef, i64)]) -> Vec<Vec<FactorRef>> {
    let mut groups: Vec<(SeqRef, i64, usize)> = Vec::new();
    for (seq, alpha) in slots {
        if *alpha == 0 {
            continue;
        }
        match groups.iter_mut().find(|(s, a, _)| s.name() == seq.name() && a == alpha) {
            Some(g) => g.2 += 1,
            None => groups.push((seq.clone(), *alpha, 1)),
        }
    }
    let mut out: Vec<Vec<FactorRef>> = vec![Vec::new()];
    for (seq, alpha, count) in groups {
        let choices = shift_multisets(seq.order() as i64, count);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                let seq = &seq;
                choices.iter().map(move |shifts| {
                    let mut v = prefix.clone();
                    v.extend(shifts.iter().map(|&s| FactorRef::new(seq.clone(), alpha, s)));
                    v
                })
            })
            .collect();
    }
    out
}

/// `1 + Σ {Δ(i) : a_i = 0}`.
pub fn conservative_psi_degree(p: &SumProblem) -> u32 {
    1 + p
        .factors()
        .iter()
        .filter(|f| f.a == 0)
        .map(|f| f.seq.spectral_profile().delta)
        .sum::<u32>()
}

/// The shifted basis. `theta_one_possible` states whether some product
/// `∏ r_i^{b_i}` of characteristic roots can equal 1; when it cannot, the
/// second family needs no powers of `n`.
pub fn build_basis_shifted(p: &SumProblem, theta_one_possible: bool) -> BasisSpec {
    let psi = if theta_one_possible { conservative_psi_degree(p) } else { 0 };
    let mut set = BTreeSet::new();
    let upper: Vec<(SeqRef, i64)> = p.factors().iter().map(|f| (f.seq.clone(), f.a + f.b)).collect();
    for factors in factor_products(&upper) {
        set.insert(TargetMonomial::basis(0, factors));
    }
    let lower: Vec<(SeqRef, i64)> = p.factors().iter().map(|f| (f.seq.clone(), f.a)).collect();
    for factors in factor_products(&lower) {
        for h in 0..=psi {
            set.insert(TargetMonomial::basis(h, factors.clone()));
        }
    }
    BasisSpec::from_set(BasisKind::Shifted, psi, set)
}

/// `γ = max(0, 1 + Δ (k - Σ {a_i : a_i > 0}))`.
pub fn gamma(p: &SumProblem) -> u32 {
    let delta = p.factors()[0].seq.spectral_profile().delta as i64;
    let positive: i64 = p.factors().iter().filter(|f| f.a > 0).map(|f| f.a).sum();
    (1 + delta * (p.k() as i64 - positive)).max(0) as u32
}

/// The fundamental basis: degree-`P` monomials in `F(n), ..., F(n+D-1)`
/// plus `n^h` times degree-`Q` monomials for `h ≤ γ`, where
/// `P = Σ (a_i + b_i)` and `Q = Σ a_i`.
pub fn build_basis_fundamental(p: &SumProblem) -> Result<BasisSpec> {
    if !p.single_sequence() {
        return Err(Error::Unsupported(
            "the fundamental basis is defined for a single sequence only".into(),
        ));
    }
    let seq = p.factors()[0].seq.clone();
    let big_p: i64 = p.factors().iter().map(|f| f.a + f.b).sum();
    let big_q: i64 = p.factors().iter().map(|f| f.a).sum();
    let g = gamma(p);
    let slots = |deg: i64| -> Vec<(SeqRef, i64)> { (0..deg).map(|_| (seq.clone(), 1)).collect() };
    let mut set = BTreeSet::new();
    for factors in factor_products(&slots(big_p)) {
        set.insert(TargetMonomial::basis(0, factors));
    }
    for factors in factor_products(&slots(big_q)) {
        for h in 0..=g {
            set.insert(TargetMonomial::basis(h, factors.clone()));
        }
    }
    Ok(BasisSpec::from_set(BasisKind::Fundamental, g, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closer::problem::TermFactor;
    use crate::scalar::Field;
    use crate::sequence::builtin;
    use crate::ExactScalar;
    use std::sync::Arc;

    fn coll() -> SumProblem {
        let f: SeqRef = Arc::new(builtin("fibonacci", &[]).unwrap());
        SumProblem::new(vec![
            TermFactor::new(f.clone(), 0, 1, 0),
            TermFactor::new(f.clone(), 0, 1, 0),
            TermFactor::new(f, 2, -1, 0),
        ])
        .unwrap()
    }

    #[test]
    fn collision_sum_bases() {
        let b = build_basis_shifted(&coll(), true);
        assert_eq!(b.m(), 8);
        assert_eq!(b.psi_degree, 1);
        let b0 = build_basis_shifted(&coll(), false);
        assert_eq!(b0.m(), 6);
        let f = build_basis_fundamental(&coll()).unwrap();
        assert_eq!(f.m(), 10);
    }

    #[test]
    fn subword_square_basis() {
        let g: SeqRef = Arc::new(builtin("subword", &[ExactScalar::of(3)]).unwrap());
        let p = SumProblem::new(vec![TermFactor::new(g.clone(), 0, 1, 0), TermFactor::new(g, 0, 1, 0)]).unwrap();
        let b = build_basis_shifted(&p, true);
        assert_eq!(b.m(), 8);
        assert_eq!(build_basis_fundamental(&p).unwrap().m(), 8);
    }

    #[test]
    fn mixed_fundamental_rejected() {
        let f: SeqRef = Arc::new(builtin("fibonacci", &[]).unwrap());
        let n: SeqRef = Arc::new(builtin("n", &[]).unwrap());
        let p = SumProblem::new(vec![TermFactor::new(f, 0, 1, 0), TermFactor::new(n, 0, 1, 0)]).unwrap();
        assert!(matches!(build_basis_fundamental(&p), Err(Error::Unsupported(_))));
    }
}
