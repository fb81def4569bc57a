use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sequence::SeqRef;
use crate::ExactScalar;

/// One factor `F(a n + b j + c)` of the summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFactor {
    pub seq: SeqRef,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl TermFactor {
    pub fn new(seq: SeqRef, a: i64, b: i64, c: i64) -> Self {
        TermFactor { seq, a, b, c }
    }

    fn validate(&self) -> Result<()> {
        if self.a < 0 || self.a + self.b < 0 || (self.a == 0 && self.a + self.b == 0) {
            return Err(Error::Invalid(format!(
                "factor {}({}n{:+}j{:+}) needs a >= 0, a + b >= 0 and one of them positive",
                self.seq.name(),
                self.a,
                self.b,
                self.c
            )));
        }
        Ok(())
    }
}

/// `f(n) = Σ_{j=0}^{n-1} ∏_i F_i(a_i n + b_i j + c_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumProblem {
    factors: Vec<TermFactor>,
}

impl SumProblem {
    pub fn new(factors: Vec<TermFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("a sum needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(SumProblem { factors })
    }

    pub fn factors(&self) -> &[TermFactor] {
        &self.factors
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    /// Whether every factor refers to the same sequence (by name).
    pub fn single_sequence(&self) -> bool {
        let first = self.factors[0].seq.name();
        self.factors.iter().all(|f| f.seq.name() == first)
    }

    /// Distinct sequences in order of first appearance.
    pub fn sequences(&self) -> Vec<SeqRef> {
        let mut out: Vec<SeqRef> = Vec::new();
        for f in &self.factors {
            if !out.iter().any(|s| s.name() == f.seq.name()) {
                out.push(f.seq.clone());
            }
        }
        out
    }

    /// The summand at `(n, j)`.
    pub fn summand(&self, n: i64, j: i64) -> Result<ExactScalar> {
        let mut prod = ExactScalar::one();
        for f in &self.factors {
            prod *= f.seq.evaluate(f.a * n + f.b * j + f.c)?;
            if prod.is_zero() {
                break;
            }
        }
        Ok(prod)
    }

    /// Direct evaluation of the sum; the empty sum at `n = 0` is zero.
    pub fn brute_force_sum(&self, n: i64) -> Result<ExactScalar> {
        let mut total = ExactScalar::zero();
        for j in 0..n.max(0) {
            total += self.summand(n, j)?;
        }
        Ok(total)
    }

    /// `f(from), ..., f(from + count - 1)`.
    pub fn brute_force_values(&self, from: i64, count: usize) -> Result<Vec<ExactScalar>> {
        (0..count as i64).map(|i| self.brute_force_sum(from + i)).collect()
    }
}

impl fmt::Display for SumProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("sum_{j<n} ")?;
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{}({}n{:+}j{:+})", t.seq.name(), t.a, t.b, t.c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::sequence::builtin;
    use std::sync::Arc;

    #[test]
    fn validation() {
        let f: SeqRef = Arc::new(builtin("fibonacci", &[]).unwrap());
        assert!(SumProblem::new(vec![]).is_err());
        assert!(SumProblem::new(vec![TermFactor::new(f.clone(), 1, -2, 0)]).is_err());
        assert!(SumProblem::new(vec![TermFactor::new(f.clone(), 0, 0, 3)]).is_err());
        assert!(SumProblem::new(vec![TermFactor::new(f.clone(), 1, -1, 0)]).is_ok());
        assert!(SumProblem::new(vec![TermFactor::new(f.clone(), -1, 2, 0)]).is_err());
        assert!(SumProblem::new(vec![TermFactor::new(f.clone(), 0, 1, 0)]).is_ok());
    }

    #[test]
    fn small_sums() {
        let f: SeqRef = Arc::new(builtin("fibonacci", &[]).unwrap());
        let coll = SumProblem::new(vec![
            TermFactor::new(f.clone(), 0, 1, 0),
            TermFactor::new(f.clone(), 0, 1, 0),
            TermFactor::new(f.clone(), 2, -1, 0),
        ])
        .unwrap();
        assert_eq!(coll.brute_force_sum(2).unwrap(), ExactScalar::of(2));
        assert_eq!(coll.brute_force_sum(0).unwrap(), ExactScalar::of(0));
        let plain = SumProblem::new(vec![TermFactor::new(f, 0, 1, 0)]).unwrap();
        assert_eq!(plain.brute_force_sum(5).unwrap(), ExactScalar::of(7));
    }
}
