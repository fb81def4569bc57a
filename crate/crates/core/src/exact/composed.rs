//! Polynomials whose roots are products and powers of the roots of others.
//!
//! The main route goes through power sums: the `k`-th power sum of the
//! pairwise products of roots of `f` and `g` is `p_k(f) p_k(g)`, and Newton's
//! identities turn power sums back into coefficients. The resultant route
//! `Res_y(f(y), y^deg g · g(x/y))` is kept as an independent check.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::scalar::Field;

/// Default cap on the degree of any composed polynomial.
pub const DEFAULT_DEGREE_CAP: usize = 20_000;

static DEGREE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DEGREE_CAP);

pub fn degree_cap() -> usize {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Sets the process-wide degree cap for composed products and powers.
pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

fn check_cap(degree: usize) -> Result<()> {
    let cap = degree_cap();
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    Ok(())
}

fn require_nonzero_roots<F: Field>(f: &Poly<F>) -> Result<usize> {
    let Some(n) = f.degree() else {
        return Err(Error::Invalid("zero polynomial has no root set".into()));
    };
    if n > 0 && f.coeff(0).is_zero() {
        return Err(Error::Unsupported("polynomial has the root 0".into()));
    }
    Ok(n)
}

/// Power sums `p_1..=p_count` of the roots of `f` (with multiplicity).
pub fn power_sums<F: Field>(f: &Poly<F>, count: usize) -> Vec<F> {
    let f = f.monic();
    let n = f.degree().unwrap_or(0);
    // a[i] is the coefficient of x^{n-i} in the monic polynomial.
    let a: Vec<F> = (0..=n).map(|i| f.coeff(n - i)).collect();
    let mut p: Vec<F> = Vec::with_capacity(count + 1);
    p.push(F::of(n as i64));
    for k in 1..=count {
        let mut s = if k <= n { a[k].clone() * F::of(k as i64) } else { F::zero() };
        for i in 1..k.min(n + 1) {
            s = s + a[i].clone() * p[k - i].clone();
        }
        p.push(-s);
    }
    p.remove(0);
    p
}

/// The monic polynomial of degree `n` whose roots have power sums `p_1..p_n`.
pub fn from_power_sums<F: Field>(p: &[F], n: usize) -> Poly<F> {
    assert!(p.len() >= n, "not enough power sums");
    let mut e: Vec<F> = Vec::with_capacity(n + 1);
    e.push(F::one());
    for k in 1..=n {
        let mut s = F::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * p[i - 1].clone();
            s = if i % 2 == 1 { s + term } else { s - term };
        }
        e.push(s / F::of(k as i64));
    }
    let coeffs = (0..=n)
        .map(|j| {
            let k = n - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -e[k].clone()
            }
        })
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Monic polynomial of degree `deg f · deg g` whose roots are all products
/// `r s` with `f(r) = 0`, `g(s) = 0`, counted with multiplicity.
pub fn composed_product<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>> {
    let n = require_nonzero_roots(f)?;
    let m = require_nonzero_roots(g)?;
    let deg = n * m;
    check_cap(deg)?;
    let pf = power_sums(f, deg);
    let pg = power_sums(g, deg);
    let prod: Vec<F> = pf.into_iter().zip(pg).map(|(a, b)| a * b).collect();
    Ok(from_power_sums(&prod, deg))
}

/// The same polynomial as [`composed_product`], computed as the resultant
/// `Res_y(f(y), y^m g(x/y))` sampled at `deg f · deg g + 1` points and
/// interpolated, then made monic.
pub fn composed_product_by_resultant<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>> {
    let n = require_nonzero_roots(f)?;
    let m = require_nonzero_roots(g)?;
    let deg = n * m;
    check_cap(deg)?;
    let points: Vec<(F, F)> = (0..=deg)
        .map(|t| {
            let x = F::of(t as i64);
            // y^m g(x/y) = Σ g_i x^i y^{m-i}
            let mut h = vec![F::zero(); m + 1];
            let mut xp = F::one();
            for i in 0..=m {
                h[m - i] = g.coeff(i) * xp.clone();
                xp = xp * x.clone();
            }
            (x, f.resultant(&Poly::from_coeffs(h)))
        })
        .collect();
    Ok(Poly::interpolate(&points).monic())
}

/// Monic polynomial whose roots are `r^b` for the roots `r` of `f`, with
/// multiplicity. `b = 0` gives `(x - 1)^deg f`; negative `b` inverts roots.
pub fn composed_power<F: Field>(f: &Poly<F>, b: i64) -> Result<Poly<F>> {
    let n = require_nonzero_roots(f)?;
    if b == 0 {
        return Ok(Poly::from_coeffs(vec![-F::one(), F::one()]).pow(n as u32));
    }
    let base = if b < 0 { f.reversed() } else { f.clone() };
    let e = b.unsigned_abs() as usize;
    if e == 1 {
        return Ok(base.monic());
    }
    check_cap(n * e)?;
    let p = power_sums(&base, n * e);
    let pb: Vec<F> = (1..=n).map(|k| p[k * e - 1].clone()).collect();
    Ok(from_power_sums(&pb, n))
}

/// Monic polynomial of degree `C(n+p-1, p)` whose roots are the values of
/// all formal degree-`p` monomials in the roots of `f` (`n = deg f`).
pub fn symmetric_power<F: Field>(f: &Poly<F>, p: usize) -> Result<Poly<F>> {
    let n = require_nonzero_roots(f)?;
    let count = binomial(n + p - 1, p)?;
    check_cap(count)?;
    if p == 0 {
        return Ok(Poly::from_coeffs(vec![-F::one(), F::one()]));
    }
    // The k-th power sum of the monomials is h_p(r_1^k, ..., r_n^k), and
    // h_p = Σ_{λ ⊢ p} p_λ / z_λ.
    let ps = power_sums(f, count * p);
    let parts = partitions(p);
    let sums: Vec<F> = (1..=count)
        .map(|k| {
            parts.iter().fold(F::zero(), |acc, lambda| {
                let prod = lambda
                    .iter()
                    .fold(F::one(), |a, &part| a * ps[k * part - 1].clone());
                acc + prod / z_lambda::<F>(lambda)
            })
        })
        .collect();
    Ok(from_power_sums(&sums, count))
}

fn z_lambda<F: Field>(lambda: &[usize]) -> F {
    let mut z = F::one();
    let mut i = 0;
    while i < lambda.len() {
        let part = lambda[i];
        let mut run = 0;
        while i < lambda.len() && lambda[i] == part {
            run += 1;
            i += 1;
            z = z * F::of(run as i64) * F::of(part as i64);
        }
    }
    z
}

/// All partitions of `p` as non-increasing part lists.
pub(crate) fn partitions(p: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, p, &mut Vec::new(), &mut out);
    out
}

/// `C(n, k)` as a machine integer, rejecting overflow.
pub(crate) fn binomial(n: usize, k: usize) -> Result<usize> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return Err(Error::DegreeCap {
                degree: usize::MAX,
                cap: degree_cap(),
            });
        }
    }
    Ok(acc as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;
    type P = Poly<Q>;

    fn p(c: &[i64]) -> P {
        P::from_coeffs(c.iter().map(|&v| Q::of(v)).collect())
    }

    fn fib() -> P {
        p(&[-1, -1, 1])
    }

    #[test]
    fn fibonacci_times_two() {
        assert_eq!(composed_product(&fib(), &p(&[-2, 1])).unwrap(), p(&[-4, -2, 1]));
        assert_eq!(composed_product(&fib(), &p(&[-1, 1])).unwrap(), fib());
    }

    #[test]
    fn fibonacci_squared_products() {
        // roots r1^2, r2^2, -1, -1: (x^2 - 3x + 1)(x + 1)^2
        let expected = p(&[1, -3, 1]) * p(&[1, 1]).pow(2);
        assert_eq!(composed_product(&fib(), &fib()).unwrap(), expected);
    }

    #[test]
    fn powers_of_fibonacci_roots() {
        assert_eq!(composed_power(&fib(), -1).unwrap(), p(&[-1, 1, 1]));
        assert_eq!(composed_power(&fib(), 1).unwrap(), fib());
        assert_eq!(composed_power(&fib(), 2).unwrap(), p(&[1, -3, 1]));
        assert_eq!(composed_power(&fib(), 0).unwrap(), p(&[1, -2, 1]));
    }

    #[test]
    fn zero_root_rejected() {
        assert!(composed_product(&p(&[0, 1]), &fib()).is_err());
        assert!(composed_power(&p(&[0, 0, 1]), 2).is_err());
    }

    #[test]
    fn symmetric_square_of_fibonacci() {
        // formal monomials r1^2, r1 r2, r2^2
        assert_eq!(symmetric_power(&fib(), 2).unwrap(), p(&[1, -3, 1]) * p(&[1, 1]));
        assert_eq!(symmetric_power(&fib(), 1).unwrap(), fib());
    }

    #[test]
    fn degree_cap_enforced() {
        let big = p(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let saved = degree_cap();
        set_degree_cap(50);
        let err = composed_product(&big, &big).unwrap_err();
        set_degree_cap(saved);
        assert_eq!(err, Error::DegreeCap { degree: 121, cap: 50 });
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    fn root_list() -> impl Strategy<Value = Vec<Q>> {
        prop::collection::vec((1i64..=4, prop::bool::ANY, 1i64..=2), 1..=4)
            .prop_map(|v| {
                v.into_iter()
                    .map(|(a, neg, b)| Q::of(if neg { -a } else { a }) / Q::of(b))
                    .collect()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_roots_are_pairwise_products(r in root_list(), s in root_list()) {
            let f = P::from_roots(&r);
            let g = P::from_roots(&s);
            let mut prods = Vec::new();
            for a in &r {
                for b in &s {
                    prods.push(a * b);
                }
            }
            let expected = P::from_roots(&prods);
            prop_assert_eq!(composed_product(&f, &g).unwrap(), expected.clone());
            prop_assert_eq!(composed_product_by_resultant(&f, &g).unwrap(), expected);
        }

        #[test]
        fn power_roots_are_powers(r in root_list(), b in -3i64..=3) {
            let f = P::from_roots(&r);
            let powered: Vec<Q> = r.iter().map(|x| x.pow_i(b)).collect();
            prop_assert_eq!(composed_power(&f, b).unwrap(), P::from_roots(&powered));
        }
    }
}
