//! Univariate rational polynomials and Jacobi polynomials.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{fmt_rational, int, MPoly, Rational};

/// Dense univariate polynomial, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::from_coeffs(vec![Rational::one()])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// `a + b t`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        UniPoly::from_coeffs(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + crate::poly::rational_to_f64(c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        UniPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, s: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// `p(a + b t)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> UniPoly {
        let inner = UniPoly::linear(a.clone(), b.clone());
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| {
            acc.mul(&inner).add(&UniPoly::from_coeffs(vec![c.clone()]))
        })
    }

    /// Substitutes a multivariate polynomial for the variable.
    pub fn compose_mpoly(&self, x: &MPoly) -> MPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(MPoly::zero(x.dim()), |acc, c| {
                &(&acc * x) + &MPoly::constant(x.dim(), c.clone())
            })
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{} * t^{}", fmt_rational(c), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_params(a: &Rational, b: &Rational) -> Result<()> {
    if *a <= int(-1) || *b <= int(-1) {
        return Err(Error::JacobiParameters {
            a: fmt_rational(a),
            b: fmt_rational(b),
        });
    }
    Ok(())
}

/// `P^{(a,b)}_n(t)` by the three-term recurrence, with exact coefficients.
pub fn jacobi_poly(n: usize, a: &Rational, b: &Rational) -> Result<UniPoly> {
    check_params(a, b)?;
    let two = int(2);
    let mut prev = UniPoly::one();
    if n == 0 {
        return Ok(prev);
    }
    let ab = a + b;
    let mut cur = UniPoly::linear((a - b) / &two, (&ab + &two) / &two);
    for k in 2..n + 1 {
        let k = int(k as i64);
        let s = &two * &k + &ab;
        let c0 = &two * &k * (&k + &ab) * (&s - &two);
        let c1 = (&s - int(1)) * &s * (&s - &two);
        let c2 = (&s - int(1)) * (a * a - b * b);
        let c3 = &two * (&k + a - int(1)) * (&k + b - int(1)) * &s;
        let lin = UniPoly::linear(c2, c1);
        let next = lin.mul(&cur).sub(&prev.scale(&c3)).scale(&(int(1) / c0));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P^{(a,b)}_n(2s - 1)` as a polynomial in `s`.
pub fn jacobi_shifted(n: usize, a: &Rational, b: &Rational) -> Result<UniPoly> {
    Ok(jacobi_poly(n, a, b)?.compose_linear(&int(-1), &int(2)))
}

/// Float `P^{(a,b)}_n(t)` by the same recurrence.
pub fn jacobi_f64(n: usize, a: f64, b: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let ab = a + b;
    let mut cur = 0.5 * (a - b) + 0.5 * (ab + 2.0) * t;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let c0 = 2.0 * k * (k + ab) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = ((c2 + c1 * t) * cur - c3 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}
