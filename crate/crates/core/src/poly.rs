//! Exact multivariate polynomials with rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded lexicographic: lower total degree first, and within one degree the
//! larger power of `x1` first (`x1^2`, `x1*x2`, `x2^2`, ...). Every iteration,
//! printout and downstream Gram–Schmidt therefore sees the same order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::PolyError;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"-0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "+" => BigInt::zero(),
            "-" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs() * &scale + frac;
        let n = if negative { -mag } else { mag };
        return Ok(Rational::new(n, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best `f64` approximation of a rational, robust to huge numerators and
/// denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    // Rescale into a window where both parts fit a double.
    let (n2, d2) = if shift > 0 {
        (n.clone(), d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d.clone())
    };
    let q = Rational::new(n2 << 64usize, d2);
    let mant = q.to_integer().to_f64().unwrap_or(f64::NAN) / 2f64.powi(64);
    mant * 2f64.powi(shift as i32)
}

/// Exponent tuple `γ ∈ ℕ₀^d` of a monomial `x^γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    /// The exponent vector of `x_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.0[axis] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|γ|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices of dimension `dim` and total degree exactly `n`, in
    /// graded-lex order.
    pub fn of_degree(dim: usize, n: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let dim = cur.len();
            if pos + 1 == dim {
                cur[pos] = left;
                out.push(MultiIndex::new(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if dim == 0 {
            if n == 0 {
                out.push(MultiIndex::new(&[]));
            }
            return out;
        }
        rec(0, n, &mut cur, &mut out);
        out
    }

    /// All multi-indices of total degree at most `n`, in graded-lex order.
    pub fn up_to_degree(dim: usize, n: u32) -> Vec<MultiIndex> {
        (0..=n).flat_map(|k| Self::of_degree(dim, k)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parity of a polynomial under `x ↦ -x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Decomposition of a polynomial into homogeneous components.
#[derive(Clone, Debug)]
pub struct Grading {
    pub degree: i64,
    /// Non-zero homogeneous parts in increasing degree.
    pub parts: Vec<MPoly>,
    pub parity: Parity,
}

/// Element of `Π^d`: a polynomial in `x1, ..., xd` with exact rational
/// coefficients. No stored coefficient is ever zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl MPoly {
    pub fn zero(dim: usize) -> Self {
        MPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zeros(dim), c)
    }

    /// The coordinate function `x_axis` (zero-based axis).
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim, "axis {axis} out of range for dimension {dim}");
        Self::monomial(MultiIndex::unit(dim, axis), Rational::one())
    }

    pub fn monomial(index: MultiIndex, coef: Rational) -> Self {
        let dim = index.dim();
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(index, coef);
        }
        MPoly { dim, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = MPoly::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "multi-index dimension mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// `‖x‖² = x1² + ... + xd²`.
    pub fn norm_sq(dim: usize) -> Self {
        Self::from_terms(
            dim,
            (0..dim).map(|i| {
                let mut m = MultiIndex::zeros(dim);
                m.0[i] = 2;
                (m, Rational::one())
            }),
        )
    }

    /// The weight factor `1 - ‖x‖²`.
    pub fn one_minus_norm_sq(dim: usize) -> Self {
        &Self::one(dim) - &Self::norm_sq(dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |m| i64::from(m.degree()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c·x^m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = MPoly::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// `self + s·other`.
    pub fn try_add_scaled(&self, other: &MPoly, s: &Rational) -> Result<MPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        if s.is_zero() {
            return Ok(out);
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c * s);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.dim);
        }
        MPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    /// Multiplies by the monomial `x^m`.
    pub fn shift(&self, m: &MultiIndex) -> MPoly {
        MPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.add(m), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative `∂_axis` (zero-based axis).
    pub fn diff(&self, axis: usize) -> Result<MPoly, PolyError> {
        if axis >= self.dim {
            return Err(PolyError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut out = MPoly::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[axis];
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k.0[axis] = e - 1;
            out.terms.insert(k, c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// All first partials `[∂_1 p, ..., ∂_d p]`.
    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.dim)
            .map(|i| self.diff(i).expect("axis in range"))
            .collect()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        if x.len() != self.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m.exps()) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation by direct monomial summation.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exps()
                    .iter()
                    .zip(x)
                    .fold(rational_to_f64(c), |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum())
    }

    /// The homogeneous component of degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> MPoly {
        MPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn grade(&self) -> Grading {
        let mut parts: Vec<MPoly> = Vec::new();
        let mut current: Option<u32> = None;
        for (m, c) in &self.terms {
            if current != Some(m.degree()) {
                current = Some(m.degree());
                parts.push(MPoly::zero(self.dim));
            }
            parts
                .last_mut()
                .expect("pushed above")
                .terms
                .insert(m.clone(), c.clone());
        }
        let has_even = parts.iter().any(|p| p.degree() % 2 == 0);
        let has_odd = parts.iter().any(|p| p.degree() % 2 != 0);
        let parity = match (has_even, has_odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        };
        Grading {
            degree: self.degree(),
            parts,
            parity,
        }
    }

    pub fn parity(&self) -> Parity {
        self.grade().parity
    }

    /// Coefficients converted to `f64`, in graded-lex order.
    pub fn to_f64_terms(&self) -> Vec<(MultiIndex, f64)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), rational_to_f64(c)))
            .collect()
    }

    /// Least common multiple of all coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for MPoly {
    /// `coef * x1^a1*...*xd^ad` terms joined by ` + `, in graded-lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{} * ", fmt_rational(c))?;
            for (k, e) in m.exps().iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        Ok(())
    }
}

impl MPoly {
    /// Parses a polynomial in `x1..xd`. Accepts the canonical printed form as
    /// well as looser input such as `x1^2 - 3/2*x1*x2 + 1`.
    pub fn parse(dim: usize, s: &str) -> Result<MPoly, PolyError> {
        Parser::new(dim, s).parse()
    }
}

struct Parser<'a> {
    dim: usize,
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(dim: usize, src: &'a str) -> Self {
        Parser { dim, src, pos: 0 }
    }

    fn err(&self, what: &str) -> PolyError {
        PolyError::Parse(format!("{what} at byte {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn parse(mut self) -> Result<MPoly, PolyError> {
        let mut out = MPoly::zero(self.dim);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        loop {
            self.skip_ws();
            let mut sign = Rational::one();
            // Sign characters, possibly repeated as in `+ -3 * x1^2`.
            loop {
                match self.peek() {
                    Some(b'+') => self.pos += 1,
                    Some(b'-') => {
                        sign = -sign;
                        self.pos += 1
                    }
                    _ => break,
                }
                self.skip_ws();
            }
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') | Some(b'-') => continue,
                Some(_) => return Err(self.err("unexpected character")),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(MultiIndex, Rational), PolyError> {
        let mut coef = Rational::one();
        let mut exps = MultiIndex::zeros(self.dim);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coef *= self.number()?;
                }
                Some(b'x') => {
                    self.pos += 1;
                    let axis = self.unsigned()? as usize;
                    if axis == 0 || axis > self.dim {
                        return Err(self.err("variable index out of range"));
                    }
                    self.skip_ws();
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.unsigned()?;
                    }
                    exps.0[axis - 1] += e;
                }
                _ => return Err(self.err("expected number or variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok((exps, coef))
    }

    fn unsigned(&mut self) -> Result<u32, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected unsigned integer"))
    }

    fn number(&mut self) -> Result<Rational, PolyError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == b'/' || c == b'.')
        {
            self.pos += 1;
        }
        parse_rational(&self.src[start..self.pos])
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&MPoly> for &MPoly {
            type Output = MPoly;
            /// Panics on dimension mismatch; use the `try_*` form to recover.
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$try(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $trait<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Mul<&Rational> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &Rational) -> MPoly {
        self.scale(rhs)
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// `scale · (p op q)`, exact.
pub fn poly_arith(p: &MPoly, q: &MPoly, op: ArithOp, scale: &Rational) -> Result<MPoly, PolyError> {
    let r = match op {
        ArithOp::Add => p.try_add(q)?,
        ArithOp::Sub => p.try_sub(q)?,
        ArithOp::Mul => p.try_mul(q)?,
    };
    Ok(r.scale(scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(dim: usize, i: usize) -> MPoly {
        MPoly::var(dim, i)
    }

    #[test]
    fn monomial_product() {
        let p = &x(1, 0) * &x(1, 0);
        assert_eq!(p, MPoly::monomial(MultiIndex::new(&[2]), int(1)));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let p = MPoly::parse(2, "x1^3 - 2/3*x1*x2 + 5").unwrap();
        let z = poly_arith(&p, &p.scale(&int(-1)), ArithOp::Add, &int(1)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), -1);
    }

    #[test]
    fn weight_factor_expansion() {
        let w = MPoly::one_minus_norm_sq(2);
        assert_eq!(w, MPoly::parse(2, "1 - x1^2 - x2^2").unwrap());
        assert_eq!((&w * &MPoly::one(2)), w);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            x(2, 0).try_add(&x(3, 0)),
            Err(PolyError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn derivatives() {
        let p = MPoly::parse(2, "x1^2*x2").unwrap();
        assert_eq!(p.diff(0).unwrap(), MPoly::parse(2, "2*x1*x2").unwrap());
        assert!(MPoly::parse(2, "x1^3").unwrap().diff(1).unwrap().is_zero());
        assert_eq!(
            MPoly::one_minus_norm_sq(2).diff(0).unwrap(),
            MPoly::parse(2, "-2*x1").unwrap()
        );
        assert!(matches!(
            p.diff(2),
            Err(PolyError::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn evaluation() {
        let p = MPoly::parse(2, "x1^2 + x2").unwrap();
        assert_eq!(p.eval_rational(&[rat(1, 2), rat(1, 3)]).unwrap(), rat(7, 12));
        let q = MPoly::parse(3, "7/2 + x1*x2 - x3^4").unwrap();
        assert_eq!(q.eval_rational(&[int(0), int(0), int(0)]).unwrap(), rat(7, 2));
        let w = MPoly::one_minus_norm_sq(3);
        let v = [0.48f64, -0.6, 0.64];
        let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        let u: Vec<f64> = v.iter().map(|t| t / n).collect();
        assert!(w.eval_f64(&u).unwrap().abs() < 1e-14);
        assert!(p.eval_rational(&[int(1)]).is_err());
    }

    #[test]
    fn grading_and_parity() {
        let g = MPoly::parse(2, "x1^2 + x2^2").unwrap().grade();
        assert_eq!((g.degree, g.parts.len(), g.parity), (2, 1, Parity::Even));
        let g = MPoly::parse(1, "x1 + x1^3").unwrap().grade();
        assert_eq!((g.degree, g.parts.len(), g.parity), (3, 2, Parity::Odd));
        assert_eq!(MPoly::parse(1, "1 + x1").unwrap().parity(), Parity::Mixed);
        let p = MPoly::parse(3, "1 + x1 - x2^2*x3 + 4*x3^5").unwrap();
        let sum = p
            .grade()
            .parts
            .iter()
            .fold(MPoly::zero(3), |acc, q| &acc + q);
        assert_eq!(sum, p);
    }

    #[test]
    fn graded_lex_order() {
        let m = MultiIndex::of_degree(2, 2);
        assert_eq!(
            m,
            vec![
                MultiIndex::new(&[2, 0]),
                MultiIndex::new(&[1, 1]),
                MultiIndex::new(&[0, 2])
            ]
        );
        assert!(MultiIndex::new(&[0, 1]) < MultiIndex::new(&[2, 0]));
        assert_eq!(MultiIndex::up_to_degree(3, 4).len(), 35);
    }

    #[test]
    fn text_format_round_trip() {
        let p = MPoly::parse(2, "1/2 - x1 + 3*x1^2*x2").unwrap();
        let s = p.to_string();
        assert_eq!(s, "1/2 * x1^0*x2^0 + -1 * x1^1*x2^0 + 3 * x1^2*x2^1");
        assert_eq!(MPoly::parse(2, &s).unwrap(), p);
        assert_eq!(MPoly::zero(3).to_string(), "0");
        assert!(MPoly::parse(2, "x3").is_err());
        assert!(MPoly::parse(2, "").is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(10), 400) * 3,
            num_traits::pow(BigInt::from(10), 400),
        );
        assert_eq!(rational_to_f64(&big), 3.0);
        let r = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), 1100));
        assert_eq!(rational_to_f64(&r), 0.0);
        let r = Rational::new(
            num_traits::pow(BigInt::from(3), 700) + 1,
            num_traits::pow(BigInt::from(3), 700) * 4,
        );
        assert!((rational_to_f64(&r) - 0.25).abs() < 1e-16);
    }
}
