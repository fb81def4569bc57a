//! C-finite sequences: evaluation, minimization and spectral data.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Poly};
use crate::scalar::Field;
use crate::{ExactScalar, UniPoly};

/// Shared handle to a sequence. Sequences are immutable apart from their
/// internal value cache, so handles can be cloned freely across threads.
pub type SeqRef = Arc<CFiniteSequence>;

/// A sequence with `F(n) = c_1 F(n-1) + ... + c_D F(n-D)`.
pub struct CFiniteSequence {
    name: String,
    recurrence: Vec<ExactScalar>,
    initials: Vec<ExactScalar>,
    minimal: bool,
    cache: RwLock<Cache>,
    profile: OnceLock<SpectralProfile>,
}

#[derive(Default)]
struct Cache {
    /// F(0), F(1), ...
    forward: Vec<ExactScalar>,
    /// F(-1), F(-2), ...
    backward: Vec<ExactScalar>,
}

/// Root multiplicity data read off the squarefree decomposition of the
/// characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralProfile {
    pub order: usize,
    /// Number of distinct roots `d`.
    pub distinct: usize,
    /// Root multiplicities `e_m`, largest first.
    pub multiplicities: Vec<u32>,
    /// `max e_m - 1`.
    pub delta: u32,
    pub squarefree_part: UniPoly,
    pub char_poly: UniPoly,
    /// Squarefree factors grouped by multiplicity.
    pub factors: Vec<(UniPoly, u32)>,
}

/// Explicit roots and coefficients for a sequence whose characteristic
/// polynomial splits over the rationals:
/// `F(n) = Σ_m Σ_h lambda[m][h] n^h r_m^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSpectrum {
    /// `(r_m, e_m)`, roots in increasing order.
    pub roots: Vec<(ExactScalar, u32)>,
    pub lambda: Vec<Vec<ExactScalar>>,
}

impl RationalSpectrum {
    pub fn evaluate(&self, n: i64) -> ExactScalar {
        let nq = ExactScalar::of(n);
        let mut total = ExactScalar::zero();
        for ((r, _), lam) in self.roots.iter().zip(&self.lambda) {
            let rn = r.pow_i(n);
            let mut np = ExactScalar::one();
            for l in lam {
                total += l * &np * &rn;
                np *= &nq;
            }
        }
        total
    }
}

impl CFiniteSequence {
    /// A sequence exactly as given, without minimization.
    pub fn new(
        name: impl Into<String>,
        recurrence: Vec<ExactScalar>,
        initials: Vec<ExactScalar>,
    ) -> Result<Self> {
        let name = name.into();
        if recurrence.is_empty() {
            return Err(Error::Invalid(format!("sequence `{name}` has an empty recurrence")));
        }
        if recurrence.len() != initials.len() {
            return Err(Error::Invalid(format!(
                "sequence `{name}`: {} recurrence coefficients but {} initial values",
                recurrence.len(),
                initials.len()
            )));
        }
        Ok(Self::raw(name, recurrence, initials, false))
    }

    fn raw(name: String, recurrence: Vec<ExactScalar>, initials: Vec<ExactScalar>, minimal: bool) -> Self {
        let cache = Cache {
            forward: initials.clone(),
            backward: Vec::new(),
        };
        CFiniteSequence {
            name,
            recurrence,
            initials,
            minimal,
            cache: RwLock::new(cache),
            profile: OnceLock::new(),
        }
    }

    /// Builds and minimizes in one step; this is how every sequence used by
    /// the summation engine is constructed.
    pub fn minimal(
        name: impl Into<String>,
        recurrence: Vec<ExactScalar>,
        initials: Vec<ExactScalar>,
    ) -> Result<SeqRef> {
        Ok(Arc::new(Self::new(name, recurrence, initials)?.minimize()?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.recurrence.len()
    }

    pub fn recurrence(&self) -> &[ExactScalar] {
        &self.recurrence
    }

    pub fn initials(&self) -> &[ExactScalar] {
        &self.initials
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// A copy under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self::raw(name.into(), self.recurrence.clone(), self.initials.clone(), self.minimal)
    }

    /// The same recurrence with different initial values, minimized.
    pub fn with_initials(&self, initials: Vec<ExactScalar>) -> Result<Self> {
        Self::new(self.name.clone(), self.recurrence.clone(), initials)?.minimize()
    }

    /// `x^D - Σ c_i x^{D-i}`.
    pub fn char_poly(&self) -> UniPoly {
        let d = self.order();
        let mut coeffs = vec![ExactScalar::zero(); d + 1];
        coeffs[d] = ExactScalar::one();
        for (i, c) in self.recurrence.iter().enumerate() {
            coeffs[d - 1 - i] = -c.clone();
        }
        Poly::from_coeffs(coeffs)
    }

    /// `F(n)` for any integer `n`, extending backwards through the
    /// recurrence when `n < 0`.
    pub fn evaluate(&self, n: i64) -> Result<ExactScalar> {
        {
            let cache = self.cache.read().expect("sequence cache poisoned");
            if n >= 0 {
                if let Some(v) = cache.forward.get(n as usize) {
                    return Ok(v.clone());
                }
            } else if let Some(v) = cache.backward.get((-n - 1) as usize) {
                return Ok(v.clone());
            }
        }
        let mut cache = self.cache.write().expect("sequence cache poisoned");
        let d = self.order();
        if n >= 0 {
            while cache.forward.len() <= n as usize {
                let len = cache.forward.len();
                let next = self
                    .recurrence
                    .iter()
                    .enumerate()
                    .fold(ExactScalar::zero(), |acc, (i, c)| acc + c * &cache.forward[len - 1 - i]);
                cache.forward.push(next);
            }
            return Ok(cache.forward[n as usize].clone());
        }
        let last = &self.recurrence[d - 1];
        if last.is_zero() {
            return Err(Error::BackwardExtension {
                seq: self.name.clone(),
                n,
            });
        }
        let want = (-n) as usize;
        while cache.backward.len() < want {
            // F(m - D) = (F(m) - Σ_{i<D} c_i F(m - i)) / c_D with m = -k - 1 + D.
            let k = cache.backward.len() as i64;
            let m = -k - 1 + d as i64;
            let at = |j: i64, c: &Cache| -> ExactScalar {
                if j >= 0 {
                    c.forward[j as usize].clone()
                } else {
                    c.backward[(-j - 1) as usize].clone()
                }
            };
            let mut acc = at(m, &cache);
            for i in 1..d {
                acc -= &self.recurrence[i - 1] * at(m - i as i64, &cache);
            }
            let v = acc / last;
            cache.backward.push(v);
        }
        Ok(cache.backward[want - 1].clone())
    }

    /// `F(from), ..., F(from + count - 1)`.
    pub fn values(&self, from: i64, count: usize) -> Result<Vec<ExactScalar>> {
        (0..count as i64).map(|i| self.evaluate(from + i)).collect()
    }

    /// The minimal-order sequence with the same values for `n ≥ 0`.
    ///
    /// Rejects the zero sequence and sequences whose minimal characteristic
    /// polynomial has the root 0.
    pub fn minimize(&self) -> Result<Self> {
        let d = self.order();
        let values = self.values(0, 2 * d)?;
        let rec = fit_recurrence(&values, d).expect("a sequence satisfies its own recurrence");
        if rec.is_empty() {
            return Err(Error::Invalid(format!("sequence `{}` is identically zero", self.name)));
        }
        if rec.last().is_some_and(Zero::is_zero) {
            return Err(Error::Unsupported(format!(
                "sequence `{}`: minimal characteristic polynomial has the root 0",
                self.name
            )));
        }
        let initials = values[..rec.len()].to_vec();
        Ok(Self::raw(self.name.clone(), rec, initials, true))
    }

    /// Multiplicity profile of the characteristic polynomial, cached.
    pub fn spectral_profile(&self) -> &SpectralProfile {
        self.profile.get_or_init(|| {
            let char_poly = self.char_poly();
            let factors = char_poly.squarefree_decomposition();
            let mut multiplicities = Vec::new();
            for (g, m) in &factors {
                for _ in 0..g.degree().unwrap_or(0) {
                    multiplicities.push(*m);
                }
            }
            multiplicities.sort_unstable_by(|a, b| b.cmp(a));
            let squarefree_part = factors.iter().fold(Poly::one(), |acc, (g, _)| acc * g.clone());
            SpectralProfile {
                order: self.order(),
                distinct: squarefree_part.degree().unwrap_or(0),
                delta: multiplicities.first().map_or(0, |m| m - 1),
                multiplicities,
                squarefree_part,
                char_poly,
                factors,
            }
        })
    }

    /// Roots and coefficients when the characteristic polynomial splits over Q.
    pub fn rational_spectrum(&self) -> Result<RationalSpectrum> {
        let d = self.order();
        let roots = self.char_poly().rational_roots();
        let found: u32 = roots.iter().map(|(_, e)| e).sum();
        if found as usize != d {
            return Err(Error::Unsupported(format!(
                "characteristic polynomial of `{}` does not split over the rationals",
                self.name
            )));
        }
        let cols: Vec<(usize, u32)> = roots
            .iter()
            .enumerate()
            .flat_map(|(m, (_, e))| (0..*e).map(move |h| (m, h)))
            .collect();
        let a = Matrix::from_fn(d, d, |t, j| {
            let (m, h) = cols[j];
            ExactScalar::of(t as i64).pow_i(h as i64) * roots[m].0.pow_i(t as i64)
        });
        let sol = a.solve_general(&self.initials)?;
        let mut lambda: Vec<Vec<ExactScalar>> = roots.iter().map(|(_, e)| Vec::with_capacity(*e as usize)).collect();
        for (j, (m, _)) in cols.iter().enumerate() {
            lambda[*m].push(sol.particular[j].clone());
        }
        Ok(RationalSpectrum { roots, lambda })
    }
}

impl Clone for CFiniteSequence {
    fn clone(&self) -> Self {
        Self::raw(self.name.clone(), self.recurrence.clone(), self.initials.clone(), self.minimal)
    }
}

impl fmt::Debug for CFiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CFiniteSequence")
            .field("name", &self.name)
            .field("recurrence", &self.recurrence)
            .field("initials", &self.initials)
            .field("minimal", &self.minimal)
            .finish()
    }
}

impl PartialEq for CFiniteSequence {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.recurrence == other.recurrence && self.initials == other.initials
    }
}

impl Eq for CFiniteSequence {}

/// Smallest-order recurrence `v(n) = Σ_{i=1}^r c_i v(n-i)` holding on all of
/// `values`, searching orders up to `max_order`. An empty coefficient list
/// means the values are all zero.
///
/// When the values come from a sequence of order at most `max_order` and
/// there are at least `2 * max_order` of them, the result is the minimal
/// recurrence of the whole sequence.
pub fn fit_recurrence(values: &[ExactScalar], max_order: usize) -> Option<Vec<ExactScalar>> {
    if values.iter().all(Zero::is_zero) {
        return Some(Vec::new());
    }
    for r in 1..=max_order.min(values.len()) {
        let rows = values.len() - r;
        if rows == 0 {
            continue;
        }
        let a = Matrix::from_fn(rows, r, |i, j| values[r + i - 1 - j].clone());
        let b = &values[r..];
        if let Ok(sol) = a.solve_general(b) {
            return Some(sol.particular);
        }
    }
    None
}

/// The sequences that can be named without an explicit recurrence.
pub fn builtin(kind: &str, params: &[ExactScalar]) -> Result<CFiniteSequence> {
    let q = |v: i64| ExactScalar::of(v);
    let want = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(Error::Invalid(format!(
                "builtin `{kind}` takes {n} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    let seq = match kind {
        "fibonacci" => {
            want(0)?;
            CFiniteSequence::new(kind, vec![q(1), q(1)], vec![q(0), q(1)])?
        }
        "subword" => {
            want(1)?;
            let a = params[0].clone();
            CFiniteSequence::new(kind, vec![a.clone(), q(0), q(-1)], vec![q(1), a.clone(), &a * &a])?
        }
        "p5" => {
            want(0)?;
            partitions_at_most(kind, 5)
        }
        "geometric" => {
            want(1)?;
            CFiniteSequence::new(kind, vec![params[0].clone()], vec![q(1)])?
        }
        "polynomial_power" => {
            want(1)?;
            let p = small_nonnegative(&params[0], kind)?;
            polynomial_power(kind, p)
        }
        "n" => {
            want(0)?;
            polynomial_power(kind, 1)
        }
        _ => return Err(Error::Invalid(format!("unknown builtin sequence `{kind}`"))),
    };
    seq.minimize()
}

fn small_nonnegative(v: &ExactScalar, kind: &str) -> Result<u32> {
    if !v.is_integer() || v.is_negative() || *v > ExactScalar::of(64) {
        return Err(Error::Invalid(format!("builtin `{kind}` needs a small nonnegative integer")));
    }
    Ok(v.to_integer().try_into().expect("bounded above"))
}

/// `F(n) = n^p`, via `(x - 1)^{p+1}`.
fn polynomial_power(name: &str, p: u32) -> CFiniteSequence {
    let d = p as usize + 1;
    let rec = (1..=d)
        .map(|i| {
            let b = ExactScalar::from_int(num_integer::binomial(d.into(), i.into()));
            if i % 2 == 1 {
                b
            } else {
                -b
            }
        })
        .collect();
    let init = (0..d).map(|k| ExactScalar::of(k as i64).pow_i(p as i64)).collect();
    CFiniteSequence::raw(name.to_string(), rec, init, false)
}

/// Partitions of `n` into at most `k` parts: the generating function is
/// `1 / ∏_{i=1}^k (1 - z^i)`.
fn partitions_at_most(name: &str, k: usize) -> CFiniteSequence {
    let mut denom = vec![1i64];
    for i in 1..=k {
        let mut next = vec![0i64; denom.len() + i];
        for (j, c) in denom.iter().enumerate() {
            next[j] += c;
            next[j + i] -= c;
        }
        denom = next;
    }
    let d = denom.len() - 1;
    let rec = denom[1..].iter().map(|&c| ExactScalar::of(-c)).collect();
    // Count by parts of size at most k.
    let mut count = vec![0i64; d];
    count[0] = 1;
    for part in 1..=k {
        for n in part..d {
            count[n] += count[n - part];
        }
    }
    let init = count.into_iter().map(ExactScalar::of).collect();
    CFiniteSequence::raw(name.to_string(), rec, init, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> ExactScalar {
        ExactScalar::of(v)
    }

    fn qs(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn fibonacci_values() {
        let f = builtin("fibonacci", &[]).unwrap();
        assert_eq!(f.evaluate(10).unwrap(), q(55));
        assert_eq!(f.evaluate(-1).unwrap(), q(1));
        assert_eq!(f.evaluate(-6).unwrap(), q(-8));
        assert_eq!(f.values(0, 7).unwrap(), qs(&[0, 1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn minimize_drops_spurious_factor() {
        let s = CFiniteSequence::new("s", qs(&[2, 0, -1]), qs(&[0, 1, 1])).unwrap();
        let m = s.minimize().unwrap();
        assert_eq!(m.recurrence(), qs(&[1, 1]).as_slice());
        assert_eq!(m.initials(), qs(&[0, 1]).as_slice());
        let c = CFiniteSequence::new("c", qs(&[2, -1]), qs(&[5, 5])).unwrap().minimize().unwrap();
        assert_eq!(c.recurrence(), qs(&[1]).as_slice());
    }

    #[test]
    fn minimize_rejects_zero_root_and_zero_sequence() {
        let transient = CFiniteSequence::new("t", qs(&[0, 0]), qs(&[3, 1])).unwrap();
        assert!(matches!(transient.minimize(), Err(Error::Unsupported(_))));
        let zero = CFiniteSequence::new("z", qs(&[1, 1]), qs(&[0, 0])).unwrap();
        assert!(matches!(zero.minimize(), Err(Error::Invalid(_))));
    }

    #[test]
    fn backward_extension_needs_nonzero_last_coefficient() {
        let s = CFiniteSequence::new("s", qs(&[1, 0]), qs(&[1, 1])).unwrap();
        assert!(matches!(s.evaluate(-1), Err(Error::BackwardExtension { .. })));
    }

    #[test]
    fn profiles() {
        let f = builtin("fibonacci", &[]).unwrap();
        let p = f.spectral_profile();
        assert_eq!((p.order, p.distinct, p.delta), (2, 2, 0));
        assert_eq!(p.multiplicities, vec![1, 1]);

        let p5 = builtin("p5", &[]).unwrap();
        let p = p5.spectral_profile();
        assert_eq!((p.order, p.distinct, p.delta), (15, 10, 4));
        assert_eq!(p.multiplicities, vec![5, 2, 1, 1, 1, 1, 1, 1, 1, 1]);

        let cube = builtin("polynomial_power", &[q(3)]).unwrap();
        let p = cube.spectral_profile();
        assert_eq!((p.distinct, p.delta), (1, 3));
    }

    #[test]
    fn rational_spectra() {
        let s = CFiniteSequence::minimal("s", qs(&[5, -6]), qs(&[2, 5])).unwrap();
        let spec = s.rational_spectrum().unwrap();
        assert_eq!(spec.roots, vec![(q(2), 1), (q(3), 1)]);
        assert_eq!(spec.lambda, vec![qs(&[1]), qs(&[1])]);

        let t = CFiniteSequence::minimal("t", qs(&[4, -4]), qs(&[1, 4])).unwrap();
        let spec = t.rational_spectrum().unwrap();
        assert_eq!(spec.roots, vec![(q(2), 2)]);
        assert_eq!(spec.lambda, vec![qs(&[1, 1])]);

        let f = builtin("fibonacci", &[]).unwrap();
        assert!(matches!(f.rational_spectrum(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn builtin_values() {
        let g = builtin("subword", &[q(2)]).unwrap();
        assert_eq!(g.values(0, 6).unwrap(), qs(&[1, 2, 4, 7, 12, 20]));
        let p5 = builtin("p5", &[]).unwrap();
        assert_eq!(p5.values(0, 8).unwrap(), qs(&[1, 1, 2, 3, 5, 7, 10, 13]));
        let g3 = builtin("geometric", &[q(3)]).unwrap();
        assert_eq!(g3.evaluate(4).unwrap(), q(81));
        let sq = builtin("polynomial_power", &[q(2)]).unwrap();
        assert_eq!(sq.evaluate(12).unwrap(), q(144));
        assert_eq!(sq.evaluate(-3).unwrap(), q(9));
        assert!(builtin("lucas", &[]).is_err());
    }
}
