//! Indefinite sums (every `a_i = 0`): weighted power sums through Eulerian
//! polynomials, the `Φ` expansion of a rationally splitting sequence, and a
//! check that the non-polynomial part of a solved sum ignores the initial
//! values.

use num_traits::{One, Zero};

use crate::closer::monomial::{ClosedForm, Term};
use crate::closer::problem::{SumProblem, TermFactor};
use crate::closer::solve::{solve_problem, SolveOptions};
use crate::closer::BasisKind;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Poly};
use crate::scalar::Field;
use crate::sequence::{RationalSpectrum, SeqRef};
use crate::spectra;
use crate::{ExactMatrix, ExactScalar, UniPoly};

fn binom(n: u64, k: u64) -> ExactScalar {
    if k > n {
        return ExactScalar::zero();
    }
    let mut acc = ExactScalar::one();
    for i in 0..k {
        acc = acc * ExactScalar::of((n - i) as i64) / ExactScalar::of((i + 1) as i64);
    }
    acc
}

/// Eulerian polynomial `A_k(x) = Σ_m A(k, m) x^m` of degree `k - 1`
/// (`A_0 = 1`), built from `A(k, m) = (m+1) A(k-1, m) + (k-m) A(k-1, m-1)`.
pub fn eulerian(k: usize) -> UniPoly {
    let mut row: Vec<i64> = vec![1];
    for n in 2..=k {
        let mut next = vec![0i64; n];
        for m in 0..n {
            let keep = if m < row.len() { (m as i64 + 1) * row[m] } else { 0 };
            let carry = if m >= 1 { (n as i64 - m as i64) * row[m - 1] } else { 0 };
            next[m] = keep + carry;
        }
        row = next;
    }
    Poly::from_coeffs(row.into_iter().map(ExactScalar::of).collect())
}

/// `B_k(x) = Σ_{j≥0} j^k x^j` as a rational function value:
/// `1/(1-x)` for `k = 0`, `x A_k(x) / (1-x)^{k+1}` otherwise.
pub fn eulerian_generating_value(k: usize, x: &ExactScalar) -> Result<ExactScalar> {
    let one = ExactScalar::one();
    if *x == one {
        return Err(Error::Invalid("the generating function has a pole at x = 1".into()));
    }
    let denom = (&one - x).pow_i(k as i64 + 1);
    let numer = if k == 0 { one } else { x * eulerian(k).eval(x) };
    Ok(numer / denom)
}

/// Bernoulli numbers `B_0..=B_m` with `B_1 = -1/2`.
fn bernoulli(m: usize) -> Vec<ExactScalar> {
    let mut b: Vec<ExactScalar> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(ExactScalar::one());
            continue;
        }
        let mut s = ExactScalar::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binom(n as u64 + 1, k as u64) * bk;
        }
        b.push(-s / ExactScalar::of(n as i64 + 1));
    }
    b
}

/// `Σ_{j=0}^{n-1} j^p` as a polynomial in `n` of degree `p + 1`.
pub fn faulhaber(p: usize) -> UniPoly {
    let b = bernoulli(p);
    let scale = ExactScalar::of(p as i64 + 1).inv();
    let mut coeffs = vec![ExactScalar::zero(); p + 2];
    for (k, bk) in b.iter().enumerate() {
        coeffs[p + 1 - k] = binom(p as u64 + 1, k as u64) * bk * &scale;
    }
    Poly::from_coeffs(coeffs)
}

/// `S_p(n, x) = Σ_{j=0}^{n-1} j^p x^j`, evaluated through
/// `B_p(x) - x^n Σ_k C(p,k) n^k B_{p-k}(x)` when `x ≠ 1` and through the
/// power-sum polynomial when `x = 1`.
pub fn geometric_power_sum(p: usize, x: &ExactScalar, n: u64) -> Result<ExactScalar> {
    let nq = ExactScalar::of(n as i64);
    if x.is_one() {
        return Ok(faulhaber(p).eval(&nq));
    }
    let mut tail = ExactScalar::zero();
    for k in 0..=p {
        tail += binom(p as u64, k as u64) * nq.pow_i(k as i64) * eulerian_generating_value(p - k, x)?;
    }
    Ok(eulerian_generating_value(p, x)? - x.pow_i(n as i64) * tail)
}

/// Each `Φ_h^m(n)` of a rationally splitting sequence as a combination of
/// `F(n), ..., F(n+D-1)`.
#[derive(Clone, Debug)]
pub struct PhiExpansion {
    pub seq: SeqRef,
    pub spectrum: RationalSpectrum,
    /// `(m, h)` index of each row of `coefficients`; row `(m, h)` holds
    /// `Φ^m_{e_m-1-h}`.
    pub columns: Vec<(usize, usize)>,
    /// `M_0^{-1}`, whose entries depend only on the roots.
    pub coefficients: ExactMatrix,
}

impl PhiExpansion {
    fn row_of(&self, m: usize, h: usize) -> Option<usize> {
        let e = self.spectrum.roots.get(m)?.1 as usize;
        if h >= e {
            return None;
        }
        self.columns.iter().position(|&c| c == (m, e - 1 - h))
    }

    /// Coefficients of `Φ_h^m` on `F(n), ..., F(n+D-1)`.
    pub fn phi_coefficients(&self, m: usize, h: usize) -> Result<Vec<ExactScalar>> {
        let r = self
            .row_of(m, h)
            .ok_or_else(|| Error::Invalid(format!("no function Φ^{m}_{h}")))?;
        Ok(self.coefficients.row(r).to_vec())
    }

    /// `Φ_h^m(n)` through the expansion in shifted sequence values.
    pub fn evaluate(&self, m: usize, h: usize, n: i64) -> Result<ExactScalar> {
        let c = self.phi_coefficients(m, h)?;
        let values = self.seq.values(n, c.len())?;
        Ok(c.iter().zip(&values).map(|(a, v)| a * v).sum())
    }

    /// `Φ_h^m(n) = Σ_{i=h}^{e_m-1} C(i,h) λ_{m,i} n^{i-h} r_m^n`, from the roots.
    pub fn evaluate_direct(&self, m: usize, h: usize, n: i64) -> Result<ExactScalar> {
        let (r, e) = self
            .spectrum
            .roots
            .get(m)
            .ok_or_else(|| Error::Invalid(format!("no root with index {m}")))?;
        let nq = ExactScalar::of(n);
        let mut total = ExactScalar::zero();
        for i in h..*e as usize {
            total += binom(i as u64, h as u64) * &self.spectrum.lambda[m][i] * nq.pow_i((i - h) as i64);
        }
        Ok(total * r.pow_i(n))
    }
}

/// Builds `M_0` (row `t`, column `(m, h)`: `r_m^t t^{e_m-1-h}`) and inverts it.
pub fn phi_expansion(seq: &SeqRef) -> Result<PhiExpansion> {
    let spectrum = seq.rational_spectrum()?;
    if spectrum.roots.iter().any(|(r, _)| r.is_zero()) {
        return Err(Error::Unsupported(format!("sequence `{}` has the characteristic root 0", seq.name())));
    }
    let columns: Vec<(usize, usize)> = spectrum
        .roots
        .iter()
        .enumerate()
        .flat_map(|(m, (_, e))| (0..*e as usize).map(move |h| (m, h)))
        .collect();
    let d = columns.len();
    let m0 = Matrix::from_fn(d, d, |t, j| {
        let (m, h) = columns[j];
        let (r, e) = &spectrum.roots[m];
        r.pow_i(t as i64) * ExactScalar::of(t as i64).pow_i((*e as usize - 1 - h) as i64)
    });
    let coefficients = m0
        .inverse()
        .ok_or_else(|| Error::Unsupported("singular root matrix".into()))?;
    Ok(PhiExpansion {
        seq: seq.clone(),
        spectrum,
        columns,
        coefficients,
    })
}

/// Solution of the sum for one choice of initial values.
#[derive(Clone, Debug)]
pub struct VariantReport {
    pub initials: Vec<ExactScalar>,
    /// Sum of the pure powers of `n` in the particular solution.
    pub psi: UniPoly,
    /// Everything else in the particular solution.
    pub sequence_part: ClosedForm,
    pub identities: Vec<ClosedForm>,
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub sequence: String,
    pub variants: Vec<VariantReport>,
    /// Sequence parts agree across variants modulo each variant's identities.
    pub independent: bool,
    /// `1 + Σ Δ(i)` over the summand factors.
    pub psi_bound: usize,
    /// Some product of characteristic roots `∏ r_i` equals 1.
    pub theta_one: bool,
    /// `deg Ψ ≤ psi_bound`, and `deg Ψ ≤ 0` when `theta_one` fails.
    pub psi_within_bound: bool,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.independent && self.psi_within_bound
    }
}

fn split(cf: &ClosedForm) -> (UniPoly, ClosedForm) {
    let mut psi = Poly::zero();
    let mut rest = Vec::new();
    for t in &cf.terms {
        if t.factors.is_empty() {
            psi = psi + t.poly.scale(&t.constant);
        } else {
            rest.push(t.clone());
        }
    }
    (psi, ClosedForm::new(rest).expect("canonical terms"))
}

/// Whether `diff` lies in the span of the sequence parts of `identities`.
fn in_span(diff: &ClosedForm, identities: &[ClosedForm]) -> bool {
    if diff.is_zero() {
        return true;
    }
    let (_, target) = split(diff);
    if target.is_zero() {
        return true;
    }
    let parts: Vec<ClosedForm> = identities.iter().map(|id| split(id).1).collect();
    let mut keys: Vec<(Vec<_>, usize)> = Vec::new();
    for cf in parts.iter().chain(std::iter::once(&target)) {
        for t in &cf.terms {
            for k in 0..t.poly.coeffs().len() {
                let key = (t.factors.clone(), k);
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    let coord = |cf: &ClosedForm, (factors, k): &(Vec<_>, usize)| -> ExactScalar {
        cf.terms
            .iter()
            .find(|t| &t.factors == factors)
            .map(|t| t.poly.coeff(*k) * &t.constant)
            .unwrap_or_else(ExactScalar::zero)
    };
    if parts.is_empty() {
        return false;
    }
    let a = Matrix::from_fn(keys.len(), parts.len(), |i, j| coord(&parts[j], &keys[i]));
    let b: Vec<ExactScalar> = keys.iter().map(|k| coord(&target, k)).collect();
    a.solve_general(&b).is_ok()
}

/// Solves an indefinite sum once per set of initial values for the sequence
/// named `target` (the first factor's sequence by default) and compares the
/// non-polynomial parts.
pub fn independence_check(
    p: &SumProblem,
    target: Option<&str>,
    variants: &[Vec<ExactScalar>],
) -> Result<IndependenceReport> {
    if p.factors().iter().any(|f| f.a != 0) {
        return Err(Error::Invalid("independence check needs an indefinite sum (every a = 0)".into()));
    }
    if variants.is_empty() {
        return Err(Error::Invalid("at least one variant is required".into()));
    }
    let name = target.unwrap_or_else(|| p.factors()[0].seq.name()).to_string();
    let base = p
        .sequences()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::Invalid(format!("the sum has no sequence `{name}`")))?;

    let mut reports = Vec::with_capacity(variants.len());
    let mut problems = Vec::with_capacity(variants.len());
    for init in variants {
        if init.len() != base.order() {
            return Err(Error::Invalid(format!(
                "variant needs {} initial values, got {}",
                base.order(),
                init.len()
            )));
        }
        let seq = base.with_initials(init.clone())?;
        if seq.order() != base.order() || seq.recurrence() != base.recurrence() {
            return Err(Error::Invalid(format!(
                "initial values {init:?} change the minimal recurrence of `{name}`"
            )));
        }
        let seq: SeqRef = std::sync::Arc::new(seq);
        let factors = p
            .factors()
            .iter()
            .map(|f| {
                let s = if f.seq.name() == name { seq.clone() } else { f.seq.clone() };
                TermFactor::new(s, f.a, f.b, f.c)
            })
            .collect();
        let q = SumProblem::new(factors)?;
        let sol = solve_problem(&q, BasisKind::Shifted, &SolveOptions::default())?;
        let (psi, sequence_part) = split(&sol.particular);
        reports.push(VariantReport {
            initials: init.clone(),
            psi,
            sequence_part,
            identities: sol.identities,
        });
        problems.push(q);
    }

    let first = &reports[0];
    let independent = reports.iter().all(|r| {
        let diff = r.sequence_part.sub(&first.sequence_part);
        in_span(&diff, &r.identities) && in_span(&diff, &first.identities)
    });
    let psi_bound = 1 + p
        .factors()
        .iter()
        .map(|f| f.seq.spectral_profile().delta as usize)
        .sum::<usize>();
    let theta_one = spectra::theta_one_possible(&problems[0])?;
    let cap = if theta_one { psi_bound } else { 0 };
    let psi_within_bound = reports.iter().all(|r| r.psi.degree().unwrap_or(0) <= cap);
    Ok(IndependenceReport {
        sequence: name,
        variants: reports,
        independent,
        psi_bound,
        theta_one,
        psi_within_bound,
    })
}

/// `Ψ` as a closed form with no sequence factors.
pub fn psi_form(psi: &UniPoly) -> ClosedForm {
    ClosedForm::new(vec![Term::new(psi.clone(), Vec::new())]).expect("no factors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{builtin, CFiniteSequence};
    use std::sync::Arc;

    fn q(a: i64, b: i64) -> ExactScalar {
        ExactScalar::of(a) / ExactScalar::of(b)
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian(0), Poly::one());
        assert_eq!(eulerian(1), Poly::one());
        assert_eq!(eulerian(2), Poly::from_coeffs(vec![q(1, 1), q(1, 1)]));
        assert_eq!(eulerian(3), Poly::from_coeffs(vec![q(1, 1), q(4, 1), q(1, 1)]));
        assert_eq!(eulerian(4), Poly::from_coeffs(vec![q(1, 1), q(11, 1), q(11, 1), q(1, 1)]));
        let mut fact = 1i64;
        for k in 1..=8 {
            fact *= k as i64;
            assert_eq!(eulerian(k).eval(&q(1, 1)), q(fact, 1));
        }
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(geometric_power_sum(0, &q(2, 1), 5).unwrap(), q(31, 1));
        assert_eq!(geometric_power_sum(2, &q(1, 2), 4).unwrap(), q(21, 8));
        assert_eq!(geometric_power_sum(3, &q(1, 1), 4).unwrap(), q(36, 1));
        assert_eq!(faulhaber(1), Poly::from_coeffs(vec![q(0, 1), q(-1, 2), q(1, 2)]));
    }

    #[test]
    fn phi_for_two_geometric_terms() {
        let seq: SeqRef = Arc::new(CFiniteSequence::new("F", vec![q(5, 1), q(-6, 1)], vec![q(2, 1), q(5, 1)]).unwrap());
        let phi = phi_expansion(&seq).unwrap();
        assert_eq!(phi.phi_coefficients(0, 0).unwrap(), vec![q(3, 1), q(-1, 1)]);
        assert_eq!(phi.phi_coefficients(1, 0).unwrap(), vec![q(-2, 1), q(1, 1)]);
        for n in 0..6 {
            assert_eq!(phi.evaluate(0, 0, n).unwrap(), ExactScalar::of(2).pow_i(n));
            assert_eq!(phi.evaluate(1, 0, n).unwrap(), ExactScalar::of(3).pow_i(n));
        }
    }

    #[test]
    fn phi_rejects_irrational_roots() {
        let f: SeqRef = Arc::new(builtin("fibonacci", &[]).unwrap());
        assert!(matches!(phi_expansion(&f), Err(Error::Unsupported(_))));
    }
}
