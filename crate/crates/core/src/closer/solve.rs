use num_traits::Zero;

use crate::closer::basis::{build_basis_fundamental, build_basis_shifted, BasisKind, BasisSpec};
use crate::closer::monomial::ClosedForm;
use crate::closer::problem::SumProblem;
use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::spectra;
use crate::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// First sampled `n`; samples are `anchor..anchor + M`.
    pub anchor: i64,
    /// Further consecutive points checked after the sample window.
    pub extra_checks: usize,
    /// Always attach the full power-of-`n` allowance in the shifted basis,
    /// skipping the root-product test.
    pub conservative_psi: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            anchor: 1,
            extra_checks: 20,
            conservative_psi: false,
        }
    }
}

/// Particular solution, relations among the basis monomials, and the
/// window on which both were checked against the direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: ClosedForm,
    pub identities: Vec<ClosedForm>,
    pub basis: BasisSpec,
    /// Coefficient of each basis monomial in the particular solution.
    pub coefficients: Vec<ExactScalar>,
    /// Nullspace vectors behind `identities`, in basis coordinates.
    pub identity_vectors: Vec<Vec<ExactScalar>>,
    /// Every `n` in `0..verified_window` was checked.
    pub verified_window: usize,
}

/// Shifted basis for `p`, with the power-of-`n` allowance dropped when no
/// product of characteristic roots `∏ r_i^{b_i}` equals 1.
///
/// Single-sequence problems keep the allowance unconditionally, matching
/// the basis of the one-sequence theorem.
pub fn shifted_basis(p: &SumProblem, conservative: bool) -> Result<BasisSpec> {
    let theta = conservative || p.single_sequence() || spectra::theta_one_possible(p)?;
    Ok(build_basis_shifted(p, theta))
}

pub fn basis_for(p: &SumProblem, kind: BasisKind, opts: &SolveOptions) -> Result<BasisSpec> {
    match kind {
        BasisKind::Shifted => shifted_basis(p, opts.conservative_psi),
        BasisKind::Fundamental => build_basis_fundamental(p),
    }
}

/// Builds the basis of the given kind and solves.
pub fn solve_problem(p: &SumProblem, kind: BasisKind, opts: &SolveOptions) -> Result<SolutionSpace> {
    let basis = basis_for(p, kind, opts)?;
    solve(p, basis, opts)
}

/// Fits the basis to `f(n)` on `M` consecutive samples and verifies the
/// result (and every relation found) on further points.
pub fn solve(p: &SumProblem, basis: BasisSpec, opts: &SolveOptions) -> Result<SolutionSpace> {
    let m = basis.m();
    if m == 0 {
        return Err(Error::Invalid("empty basis".into()));
    }
    if opts.anchor < 0 {
        return Err(Error::Invalid("the sample anchor must be nonnegative".into()));
    }
    let samples: Vec<i64> = (opts.anchor..opts.anchor + m as i64).collect();
    let mut rows = Vec::with_capacity(m);
    for &n in &samples {
        let row = basis
            .monomials
            .iter()
            .map(|mono| mono.evaluate(n))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let rhs = samples
        .iter()
        .map(|&n| p.brute_force_sum(n))
        .collect::<Result<Vec<_>>>()?;
    let sol = Matrix::from_rows(rows).solve_general(&rhs)?;

    let particular = ClosedForm::from_basis(&basis.monomials, &sol.particular);
    let identities: Vec<ClosedForm> = sol
        .nullspace
        .iter()
        .map(|v| ClosedForm::from_basis(&basis.monomials, v))
        .collect();

    let window = opts.anchor as usize + m + opts.extra_checks;
    for n in 0..window as i64 {
        if samples.contains(&n) {
            continue;
        }
        let expected = p.brute_force_sum(n)?;
        let got = particular.evaluate(n)?;
        if got != expected {
            return Err(Error::Mismatch {
                n,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
        for id in &identities {
            let v = id.evaluate(n)?;
            if !v.is_zero() {
                return Err(Error::Mismatch {
                    n,
                    expected: "0".into(),
                    got: v.to_string(),
                });
            }
        }
    }

    Ok(SolutionSpace {
        particular,
        identities,
        basis,
        coefficients: sol.particular,
        identity_vectors: sol.nullspace,
        verified_window: window,
    })
}
