//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::exact::matrix::Matrix;
use crate::scalar::{clear_denominators, Field, Ring};

/// A univariate polynomial with coefficients in ascending degree order.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![F::zero(), F::one()])
    }

    /// `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * Self::from_coeffs(vec![-r.clone(), F::one()])
        })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Degree, or `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::of(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// The same polynomial divided by its leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv()),
            None => Self::zero(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// `x^deg * f(1/x)`: the polynomial whose roots are the reciprocals.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// `f(c * x)`.
    pub fn scale_argument(&self, c: &F) -> Self {
        let mut p = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * p.clone());
            p = p * c.clone();
        }
        Self::from_coeffs(out)
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * g.clone() + Self::constant(c.clone()))
    }

    /// Euclidean division: `(q, r)` with `self = q * divisor + r`, `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient; the caller guarantees `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0)` is zero.
    ///
    /// Runs a primitive pseudo-remainder sequence over the integer ring to
    /// keep coefficient growth in check, then normalizes over the field.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = primitive_int(self);
        let mut b = primitive_int(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_prem(&a, &b);
            a = b;
            b = int_primitive_part(r);
        }
        Self::from_coeffs(a.into_iter().map(F::from_int).collect()).monic()
    }

    /// Squarefree decomposition (Yun): pairwise coprime monic squarefree
    /// factors `g_j` with multiplicities `m_j` so that
    /// `self = lead · ∏ g_j^{m_j}`. Sorted by multiplicity.
    ///
    /// Panics on the zero polynomial.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = c - b.derivative();
        let mut mult = 1u32;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let next_b = b.exact_div(&a);
            let next_c = d.exact_div(&a);
            if !a.is_constant() {
                out.push((a, mult));
            }
            d = next_c - next_b.derivative();
            b = next_b;
            mult += 1;
        }
        out
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero(), "squarefree part of zero");
        let f = self.monic();
        if f.is_constant() {
            return Self::one();
        }
        f.exact_div(&f.gcd(&f.derivative())).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Resultant `lead(f)^{deg g} ∏_{f(α)=0} g(α)`, which equals the
    /// determinant of the Sylvester matrix with the rows of `f` first.
    /// Computed by the Euclidean algorithm over the field.
    pub fn resultant(&self, other: &Self) -> F {
        let (Some(df), Some(dg)) = (self.degree(), other.degree()) else {
            return F::zero();
        };
        if dg == 0 {
            return other.coeffs[0].pow_i(df as i64);
        }
        if df == 0 {
            return self.coeffs[0].pow_i(dg as i64);
        }
        if df < dg {
            let sign = if (df * dg) % 2 == 1 { -F::one() } else { F::one() };
            return sign * other.resultant(self);
        }
        let r = self.rem(other);
        let Some(dr) = r.degree() else {
            return F::zero();
        };
        let sign = if (df * dg) % 2 == 1 { -F::one() } else { F::one() };
        sign * other.coeffs[dg].pow_i((df - dr) as i64) * other.resultant(&r)
    }

    /// Sylvester matrix with the `deg g` shifted rows of `f` first.
    pub fn sylvester_matrix(&self, other: &Self) -> Matrix<F> {
        let df = self.degree().unwrap_or(0);
        let dg = other.degree().unwrap_or(0);
        let n = df + dg;
        let mut rows = Vec::with_capacity(n);
        for (p, shifts) in [(self, dg), (other, df)] {
            for s in 0..shifts {
                let mut row = vec![F::zero(); n];
                for (k, c) in p.coeffs.iter().rev().enumerate() {
                    row[s + k] = c.clone();
                }
                rows.push(row);
            }
        }
        Matrix::from_rows(rows)
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lead(f)`; 1 for linear polynomials.
    pub fn discriminant(&self) -> F {
        let n = self.degree().expect("discriminant of the zero polynomial");
        if n == 0 {
            return F::zero();
        }
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -F::one() } else { F::one() };
        sign * self.resultant(&self.derivative()) / self.coeffs[n].clone()
    }

    /// Rational roots with multiplicities, by the rational root theorem on
    /// each squarefree factor. Trial division bounds the cost by the square
    /// root of the integer coefficients involved.
    pub fn rational_roots(&self) -> Vec<(F, u32)> {
        let mut roots = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            let mut g = g;
            if g.coeffs[0].is_zero() {
                roots.push((F::zero(), m));
                g = g.exact_div(&Self::x());
            }
            if g.is_constant() {
                continue;
            }
            let ints = primitive_int(&g);
            let lead = ints.last().unwrap().abs();
            let tail = ints[0].abs();
            let num_divs = divisors(&tail);
            let den_divs = divisors(&lead);
            for p in &num_divs {
                for q in &den_divs {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    for sign in [F::one(), -F::one()] {
                        let cand = sign * F::from_parts(p.clone(), q.clone());
                        if g.degree().unwrap_or(0) > 0 && g.eval(&cand).is_zero() {
                            g = g.exact_div(&Self::from_coeffs(vec![-cand.clone(), F::one()]));
                            roots.push((cand, m));
                        }
                    }
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        roots
    }

    /// Interpolating polynomial of minimal degree through the given points
    /// (Newton divided differences). The abscissae must be distinct.
    pub fn interpolate(points: &[(F, F)]) -> Self {
        let n = points.len();
        let mut dd: Vec<F> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i].clone() - dd[i - 1].clone();
                let den = points[i].0.clone() - points[i - level].0.clone();
                dd[i] = num / den;
            }
        }
        let mut result = Self::zero();
        for i in (0..n).rev() {
            let shift = Self::from_coeffs(vec![-points[i].0.clone(), F::one()]);
            result = result * shift + Self::constant(dd[i].clone());
        }
        result
    }

    /// Renders with an explicit variable name, highest degree first,
    /// e.g. `3/2*n^2 - n + 1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let pow = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if mag.is_one() {
                        pow
                    } else {
                        format!("{mag}*{pow}")
                    }
                }
            };
            out.push_str(&body);
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::from_coeffs(long)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }
}

// ---- integer-ring helpers for the primitive remainder sequence ----

fn primitive_int<F: Field>(p: &Poly<F>) -> Vec<F::Int> {
    let (ints, _) = clear_denominators(p.coeffs());
    int_primitive_part(ints)
}

fn int_primitive_part<I: Ring>(mut v: Vec<I>) -> Vec<I> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let Some(lead) = v.last() else {
        return v;
    };
    let mut content = v.iter().fold(I::zero(), |acc, c| acc.gcd(c));
    if lead.is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for c in v.iter_mut() {
            *c = c.clone() / content.clone();
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (both nonzero, trimmed).
fn int_prem<I: Ring>(a: &[I], b: &[I]) -> Vec<I> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.clone() * lb.clone();
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - lr.clone() * bc.clone();
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        // Intermediate contents grow geometrically without this.
        r = int_primitive_part(r);
    }
    r
}

fn divisors<I: Ring>(n: &I) -> Vec<I> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = I::one();
    while d.clone() * d.clone() <= *n {
        if (n.clone() % d.clone()).is_zero() {
            let other = n.clone() / d.clone();
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d = d + I::one();
    }
    large.reverse();
    small.extend(large);
    small
}
