use std::collections::BTreeMap;

use crate::closer::monomial::ClosedForm;
use crate::closer::problem::SumProblem;
use crate::closer::solve::shifted_basis;
use crate::error::Result;
use crate::sequence::SeqRef;
use crate::ExactScalar;

/// Upper bound on the C-finite degree of `f(n)`: the smallest of the basis
/// size `M` and the two product bounds over
/// `Q = {ℓ : a_ℓ + b_ℓ ≠ 0}` and `R = {ℓ : a_ℓ ≠ 0}`.
pub fn degree_bound(p: &SumProblem) -> Result<usize> {
    let m = shifted_basis(p, false)?.m();
    let q: Vec<&SeqRef> = p.factors().iter().filter(|f| f.a + f.b != 0).map(|f| &f.seq).collect();
    let r: Vec<&SeqRef> = p.factors().iter().filter(|f| f.a != 0).map(|f| &f.seq).collect();
    let fine = refined_product(&q) + refined_product(&r);
    let coarse = order_product(&q) + order_product(&r);
    Ok(m.min(fine).min(coarse))
}

/// `∏ d + Σ_ℓ (D_ℓ ∏_{j≠ℓ} d_j − ∏ d)`, which is `∏ d · (1 + Σ (D/d − 1))`.
fn refined_product(set: &[&SeqRef]) -> usize {
    let d: Vec<usize> = set.iter().map(|s| s.spectral_profile().distinct).collect();
    let all: usize = d.iter().product();
    let mut total = all;
    for (l, s) in set.iter().enumerate() {
        let others: usize = d.iter().enumerate().filter(|(j, _)| *j != l).map(|(_, v)| v).product();
        total += s.order() * others - all;
    }
    total
}

fn order_product(set: &[&SeqRef]) -> usize {
    set.iter().map(|s| s.order()).product()
}

/// Upper bound on the C-finite degree of a closed form.
///
/// Terms are grouped by the multiset of `(sequence, alpha)` pairs among
/// their factors. A group whose largest coefficient degree is `h` lies in
/// the span of `n^j ∏ r^{alpha n}` over choices of roots, with
/// `j ≤ h + Σ (e − 1)`; the bound counts these functions.
pub fn closed_form_degree_bound(cf: &ClosedForm) -> usize {
    let mut signatures: BTreeMap<Vec<(String, i64)>, (Vec<(SeqRef, i64)>, usize)> = BTreeMap::new();
    for t in &cf.terms {
        let slots: Vec<(SeqRef, i64)> = t.factors.iter().map(|f| (f.seq.clone(), f.alpha)).collect();
        let key: Vec<(String, i64)> = slots.iter().map(|(s, a)| (s.name().to_string(), *a)).collect();
        let h = t.poly.degree().unwrap_or(0);
        let entry = signatures.entry(key).or_insert((slots, 0));
        entry.1 = entry.1.max(h);
    }
    signatures
        .values()
        .map(|(slots, h)| {
            let excess = excess_distribution(slots);
            excess.iter().enumerate().map(|(s, count)| count * (1 + h + s)).sum::<usize>()
        })
        .sum()
}

/// `out[s]` counts root choices (one root per slot, multisets within equal
/// slots) whose total excess multiplicity `Σ (e − 1)` is `s`.
fn excess_distribution(slots: &[(SeqRef, i64)]) -> Vec<usize> {
    let mut groups: Vec<(&SeqRef, i64, usize)> = Vec::new();
    for (seq, alpha) in slots {
        match groups.iter_mut().find(|(s, a, _)| s.name() == seq.name() && a == alpha) {
            Some(g) => g.2 += 1,
            None => groups.push((seq, *alpha, 1)),
        }
    }
    let mut dist = vec![1usize];
    for (seq, _, count) in groups {
        let excess: Vec<usize> = seq
            .spectral_profile()
            .multiplicities
            .iter()
            .map(|e| *e as usize - 1)
            .collect();
        // Multisets of `count` roots, by total excess.
        let mut g = vec![vec![0usize; 1]; count + 1];
        g[0] = vec![1];
        for &x in &excess {
            // Ascending sizes let a root be chosen repeatedly.
            for size in 1..=count {
                let prev = g[size - 1].clone();
                let cur = &mut g[size];
                if cur.len() < prev.len() + x {
                    cur.resize(prev.len() + x, 0);
                }
                for (s, c) in prev.iter().enumerate() {
                    cur[s + x] += c;
                }
            }
        }
        let group = &g[count];
        let mut next = vec![0usize; dist.len() + group.len() - 1];
        for (i, a) in dist.iter().enumerate() {
            for (j, b) in group.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        dist = next;
    }
    dist
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Refuted {
        n: i64,
        lhs: ExactScalar,
        rhs: ExactScalar,
    },
}

/// Outcome of [`certify_identity`]: both sides agree on `0..window`, and
/// `window ≥ bound`, the C-finite degree bound of their difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub bound: usize,
    pub window: usize,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }
}

/// Proves `lhs = rhs` for all `n ≥ 0`, or `sum(n) + lhs = rhs` when a sum is
/// given, by checking as many initial values as the C-finite degree bound of
/// the difference.
pub fn certify_identity(lhs: &ClosedForm, rhs: &ClosedForm, sum: Option<&SumProblem>) -> Result<Certificate> {
    certify_identity_window(lhs, rhs, sum, 0)
}

/// As [`certify_identity`], checking at least `min_window` points.
pub fn certify_identity_window(
    lhs: &ClosedForm,
    rhs: &ClosedForm,
    sum: Option<&SumProblem>,
    min_window: usize,
) -> Result<Certificate> {
    let mut bound = closed_form_degree_bound(&lhs.sub(rhs));
    if let Some(p) = sum {
        bound += degree_bound(p)?;
    }
    let window = bound.max(min_window);
    for n in 0..window as i64 {
        let mut l = lhs.evaluate(n)?;
        if let Some(p) = sum {
            l += p.brute_force_sum(n)?;
        }
        let r = rhs.evaluate(n)?;
        if l != r {
            return Ok(Certificate {
                bound,
                window,
                verdict: Verdict::Refuted { n, lhs: l, rhs: r },
            });
        }
    }
    Ok(Certificate {
        bound,
        window,
        verdict: Verdict::Proved,
    })
}
