//! Floating-point orthogonal bases and projections of sampled functions.
//!
//! Monomial expansions of high-degree orthogonal polynomials cancel badly in
//! floating point, so the float path never evaluates them. Each basis
//! element is instead a radial factor evaluated by a Jacobi recurrence times
//! a solid harmonic evaluated by its own recurrence:
//!
//! * `d = 1`: `1` and `x1`;
//! * `d = 2`: `Re` and `Im` of `(x1 + i x2)^m`;
//! * `d = 3`: `Re`/`Im` of `(x1 + i x2)^k` times the homogeneous Gegenbauer
//!   form `‖x‖^{m-k} C^{(k+1/2)}_{m-k}(x3/‖x‖)`.
//!
//! These harmonics are orthogonal on the sphere, which makes the Lebesgue
//! elements `P_j(2‖x‖²-1) Y_m` and the Sobolev elements `g(‖x‖²) Y_m`
//! (with `g` the radial image of a Jacobi polynomial under `M^α`) exactly
//! orthogonal without any Gram–Schmidt step. Gradients come from forward-mode
//! dual numbers.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jacobi::jacobi_shifted;
use crate::measure::Alpha;
use crate::par::Execution;
use crate::poly::{int, rat, rational_to_f64, MPoly, MultiIndex, Rational};
use crate::quadrature::QuadRule;

/// Value with gradient in up to three variables.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    pub v: f64,
    pub g: [f64; 3],
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { v, g: [0.0; 3] }
    }

    pub fn variable(v: f64, axis: usize) -> Self {
        let mut g = [0.0; 3];
        g[axis] = 1.0;
        Dual { v, g }
    }

    fn scale(self, s: f64) -> Self {
        Dual {
            v: self.v * s,
            g: self.g.map(|x| x * s),
        }
    }

    fn offset(self, s: f64) -> Self {
        Dual { v: self.v + s, ..self }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            g: [self.g[0] + o.g[0], self.g[1] + o.g[1], self.g[2] + o.g[2]],
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        self + (-o)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        self.scale(-1.0)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            g: [
                self.g[0] * o.v + self.v * o.g[0],
                self.g[1] * o.v + self.v * o.g[1],
                self.g[2] * o.v + self.v * o.g[2],
            ],
        }
    }
}

/// `P^{(a,b)}_n(t)` on a dual argument.
fn jacobi_dual(n: usize, a: f64, b: f64, t: Dual) -> Dual {
    let mut prev = Dual::constant(1.0);
    if n == 0 {
        return prev;
    }
    let ab = a + b;
    let mut cur = t.scale(0.5 * (ab + 2.0)).offset(0.5 * (a - b));
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let c0 = 2.0 * k * (k + ab) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (t.scale(c1).offset(c2) * cur - prev.scale(c3)).scale(1.0 / c0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A sphere-orthogonal solid harmonic of degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Harmonic {
    pub m: usize,
    /// Azimuthal order; `0` for `d = 1`.
    pub k: usize,
    /// Imaginary (sine) part instead of the real part.
    pub sine: bool,
}

/// All harmonics of degree `m` in dimension `d`, in a fixed order.
pub fn harmonics(d: usize, m: usize) -> Vec<Harmonic> {
    let h = |k, sine| Harmonic { m, k, sine };
    match d {
        1 if m <= 1 => vec![h(0, false)],
        1 => vec![],
        2 if m == 0 => vec![h(0, false)],
        2 => vec![h(m, false), h(m, true)],
        _ => {
            let mut out = vec![h(0, false)];
            for k in 1..=m {
                out.push(h(k, false));
                out.push(h(k, true));
            }
            out
        }
    }
}

/// Scalars a harmonic can be evaluated over.
trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn constant_in(c: i64, dim: usize) -> Self;
    /// Multiplies by the rational `num / den`.
    fn scale_by(&self, num: i64, den: i64) -> Self;
}

impl Ring for Dual {
    fn constant_in(c: i64, _: usize) -> Self {
        Dual::constant(c as f64)
    }
    fn scale_by(&self, num: i64, den: i64) -> Self {
        self.scale(num as f64 / den as f64)
    }
}

impl Ring for MPoly {
    fn constant_in(c: i64, dim: usize) -> Self {
        MPoly::constant(dim, int(c))
    }
    fn scale_by(&self, num: i64, den: i64) -> Self {
        self.scale(&rat(num, den))
    }
}

impl Harmonic {
    fn eval_in<R: Ring>(&self, x: &[R], dim: usize) -> R {
        let one = R::constant_in(1, dim);
        match dim {
            1 => {
                if self.m == 0 {
                    one
                } else {
                    x[0].clone()
                }
            }
            _ => {
                // (x1 + i x2)^k by repeated multiplication.
                let (mut re, mut im) = (one.clone(), R::constant_in(0, dim));
                for _ in 0..self.k {
                    let nre = re.clone() * x[0].clone() - im.clone() * x[1].clone();
                    let nim = re * x[1].clone() + im * x[0].clone();
                    re = nre;
                    im = nim;
                }
                let planar = if self.sine { im } else { re };
                if dim == 2 {
                    return planar;
                }
                // Homogeneous Gegenbauer recurrence with λ = k + 1/2.
                let k = self.k as i64;
                let n = self.m - self.k;
                let r2 = x[0].clone() * x[0].clone() + x[1].clone() * x[1].clone() + x[2].clone() * x[2].clone();
                let mut prev = one;
                let mut cur = if n == 0 { prev.clone() } else { x[2].scale_by(2 * k + 1, 1) };
                for j in 2..=n as i64 {
                    let next = (x[2].clone() * cur.clone()).scale_by(2 * j + 2 * k - 1, j)
                        - (r2.clone() * prev).scale_by(j + 2 * k - 1, j);
                    prev = cur;
                    cur = next;
                }
                planar * cur
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Dual {
        let xs: Vec<Dual> = x.iter().enumerate().map(|(i, &v)| Dual::variable(v, i)).collect();
        self.eval_in(&xs, x.len())
    }

    /// Exact polynomial form.
    pub fn to_poly(&self, d: usize) -> MPoly {
        let xs: Vec<MPoly> = (0..d).map(|i| MPoly::var(d, i)).collect();
        self.eval_in(&xs, d)
    }
}

/// Radial factor of a structured element, as a function of `s = ‖x‖²`.
#[derive(Clone, Debug, PartialEq)]
pub enum Radial {
    /// `P^{(a,b)}_j(2s - 1)`.
    Jacobi { j: usize, a: Rational, b: Rational },
    /// Radial part of `M^α(f(s) Y_m)` with `f = P^{(α+1, m+(d-2)/2)}_{k-1}(2s-1)`.
    Mapped { k: usize, alpha: Rational, m: usize, d: usize },
}

impl Radial {
    fn eval(&self, s: Dual) -> Dual {
        let t = s.scale(2.0).offset(-1.0);
        match self {
            Radial::Jacobi { j, a, b } => jacobi_dual(*j, rational_to_f64(a), rational_to_f64(b), t),
            Radial::Mapped { k, alpha, m, d } => {
                let al = rational_to_f64(alpha);
                let a = al + 1.0;
                let b = *m as f64 + (*d as f64 - 2.0) / 2.0;
                let n = k - 1;
                let f = jacobi_dual(n, a, b, t);
                let nab = n as f64 + a + b;
                let f1 = if n >= 1 {
                    jacobi_dual(n - 1, a + 1.0, b + 1.0, t).scale(nab + 1.0)
                } else {
                    Dual::constant(0.0)
                };
                let f2 = if n >= 2 {
                    jacobi_dual(n - 2, a + 2.0, b + 2.0, t).scale((nab + 1.0) * (nab + 2.0))
                } else {
                    Dual::constant(0.0)
                };
                let om = s.scale(-1.0).offset(1.0);
                let curv = om * om * f2 - (om * f1).scale(2.0 * a) + f.scale(al * a);
                let slope = om * f1 - f.scale(a);
                (s * curv).scale(4.0) + (om * slope).scale(2.0 * *d as f64 + 4.0 * *m as f64)
            }
        }
    }

    /// Exact radial polynomial in `s`.
    fn to_unipoly(&self) -> crate::jacobi::UniPoly {
        use crate::jacobi::UniPoly;
        match self {
            Radial::Jacobi { j, a, b } => jacobi_shifted(*j, a, b).expect("valid parameters"),
            Radial::Mapped { k, alpha, m, d } => {
                let a = alpha + int(1);
                let b = int(*m as i64) + rat(*d as i64 - 2, 2);
                let f = jacobi_shifted(k - 1, &a, &b).expect("valid parameters");
                let f1 = f.derivative();
                let f2 = f1.derivative();
                let s = UniPoly::linear(int(0), int(1));
                let om = UniPoly::linear(int(1), int(-1));
                let curv = om
                    .mul(&om)
                    .mul(&f2)
                    .sub(&om.mul(&f1).scale(&(int(2) * &a)))
                    .add(&f.scale(&(alpha * &a)));
                let slope = om.mul(&f1).sub(&f.scale(&a));
                s.mul(&curv)
                    .scale(&int(4))
                    .add(&om.mul(&slope).scale(&int(2 * *d as i64 + 4 * *m as i64)))
            }
        }
    }
}

/// One element of a structured orthogonal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatElement {
    pub degree: usize,
    pub harmonic: Harmonic,
    pub radial: Radial,
}

impl FloatElement {
    pub fn eval(&self, x: &[f64]) -> Dual {
        let s = x.iter().enumerate().fold(Dual::constant(0.0), |acc, (i, &v)| {
            let xi = Dual::variable(v, i);
            acc + xi * xi
        });
        self.radial.eval(s) * self.harmonic.eval(x)
    }

    /// Exact polynomial form; only sensible for modest degrees.
    pub fn to_poly(&self, d: usize) -> MPoly {
        let r = self.radial.to_unipoly().compose_mpoly(&MPoly::norm_sq(d));
        &r * &self.harmonic.to_poly(d)
    }
}

/// Which inner product a structured basis is orthogonal in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Lebesgue,
    Sobolev,
}

/// Degree-`n` elements of the structured basis.
pub fn structured_elements(family: Family, a: &Alpha, n: usize) -> Result<Vec<FloatElement>> {
    let d = a.dim();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let half = rat(d as i64 - 2, 2);
    let mut out = Vec::new();
    if family == Family::Lebesgue || n <= 2 {
        for j in 0..=n / 2 {
            let m = n - 2 * j;
            let radial = Radial::Jacobi {
                j,
                a: a.value().clone(),
                b: int(m as i64) + &half,
            };
            for h in harmonics(d, m) {
                out.push(FloatElement { degree: n, harmonic: h, radial: radial.clone() });
            }
        }
        return Ok(out);
    }
    for h in harmonics(d, n) {
        out.push(FloatElement {
            degree: n,
            harmonic: h,
            radial: Radial::Jacobi { j: 0, a: a.value().clone(), b: int(n as i64) + &half },
        });
    }
    for k in 1..=n / 2 {
        let m = n - 2 * k;
        for h in harmonics(d, m) {
            out.push(FloatElement {
                degree: n,
                harmonic: h,
                radial: Radial::Mapped { k, alpha: a.value().clone(), m, d },
            });
        }
    }
    Ok(out)
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// A function on the ball given by callbacks.
pub struct FuncSample {
    pub dim: usize,
    value: Box<ValueFn>,
    gradient: Option<Box<GradFn>>,
}

impl std::fmt::Debug for FuncSample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FuncSample")
            .field("dim", &self.dim)
            .field("has_gradient", &self.gradient.is_some())
            .finish()
    }
}

const CHECK_POINTS: usize = 10;
const CHECK_SEED: u64 = 0x5eed_ba11;
const CHECK_STEP: f64 = 1e-6;
const CHECK_TOL: f64 = 1e-5;

impl FuncSample {
    pub fn new<V>(dim: usize, value: V) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        FuncSample { dim, value: Box::new(value), gradient: None }
    }

    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.gradient = Some(Box::new(gradient));
        self
    }

    /// Samples a polynomial and its exact gradient.
    pub fn from_poly(p: &MPoly) -> Self {
        let terms = p.to_f64_terms();
        let grads: Vec<Vec<(MultiIndex, f64)>> = p.gradient().iter().map(|g| g.to_f64_terms()).collect();
        let eval = |terms: &[(MultiIndex, f64)], x: &[f64]| -> f64 {
            terms
                .iter()
                .map(|(m, c)| c * m.exps().iter().zip(x).map(|(&e, xi)| xi.powi(e as i32)).product::<f64>())
                .sum()
        };
        FuncSample::new(p.dim(), move |x| eval(&terms, x)).with_gradient(move |x, g| {
            for (gi, terms) in g.iter_mut().zip(&grads) {
                *gi = eval(terms, x);
            }
        })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.gradient.as_ref().ok_or(Error::MissingGradient)?;
        let mut out = vec![0.0; self.dim];
        g(x, &mut out);
        Ok(out)
    }

    /// Compares the gradient callback with central differences at seeded
    /// random interior points.
    pub fn check_gradient(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
        let mut done = 0;
        while done < CHECK_POINTS {
            let x: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-0.8..0.8)).collect();
            if x.iter().map(|v| v * v).sum::<f64>() > 0.64 {
                continue;
            }
            done += 1;
            let g = self.gradient(&x)?;
            for i in 0..self.dim {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += CHECK_STEP;
                xm[i] -= CHECK_STEP;
                let fd = (self.value(&xp) - self.value(&xm)) / (2.0 * CHECK_STEP);
                if (fd - g[i]).abs() > CHECK_TOL * fd.abs().max(1.0) {
                    return Err(Error::InconsistentGradient {
                        point: x.clone(),
                        detail: format!("axis {}: callback {} vs difference {}", i + 1, g[i], fd),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Basis values and gradients at every quadrature node.
#[derive(Clone, Debug)]
pub struct SampledBasis {
    pub family: Family,
    pub alpha: Alpha,
    pub elements: Vec<FloatElement>,
    /// `values[e][k]` is element `e` at node `k`.
    pub values: Vec<Vec<Dual>>,
    /// Squared norms in the family's inner product, normalized by `Σ w`.
    pub sq_norms: Vec<f64>,
    /// Normalized means `⟨b, 1⟩ / Σ w`.
    pub means: Vec<f64>,
}

impl SampledBasis {
    /// All elements of degree `≤ nmax`, sampled on `rule`.
    pub fn new(family: Family, a: &Alpha, nmax: usize, rule: &QuadRule, exec: Execution) -> Result<Self> {
        if rule.d != a.dim() {
            return Err(Error::InvalidConfig(format!(
                "quadrature dimension {} differs from {}",
                rule.d,
                a.dim()
            )));
        }
        rule.require_degree(2 * nmax)?;
        let mut elements = Vec::new();
        for n in 0..=nmax {
            elements.extend(structured_elements(family, a, n)?);
        }
        let total = rule.total_weight();
        let values: Vec<Vec<Dual>> = exec.map(&elements, |e| (0..rule.len()).map(|k| e.eval(rule.point(k))).collect());
        let stats: Vec<(f64, f64)> = exec.map(&values, |vals| {
            let mut mean = 0.0;
            let mut sq = 0.0;
            let mut gsq = 0.0;
            for (v, w) in vals.iter().zip(&rule.weights) {
                mean += w * v.v;
                sq += w * v.v * v.v;
                gsq += w * v.g.iter().map(|g| g * g).sum::<f64>();
            }
            let mean = mean / total;
            let nrm = match family {
                Family::Lebesgue => sq / total,
                Family::Sobolev => gsq / total + mean * mean,
            };
            (nrm, mean)
        });
        let (sq_norms, means) = stats.into_iter().unzip();
        Ok(SampledBasis { family, alpha: a.clone(), elements, values, sq_norms, means })
    }
}

/// `u` and `∇u` at every node.
pub fn sample_function(u: &FuncSample, rule: &QuadRule, exec: Execution) -> Result<Vec<Dual>> {
    if u.dim != rule.d {
        return Err(Error::InvalidConfig(format!("function dimension {} differs from {}", u.dim, rule.d)));
    }
    let vals = exec.map_range(rule.len(), |k| {
        let x = rule.point(k);
        let mut d = Dual::constant(u.value(x));
        if let Ok(g) = u.gradient(x) {
            d.g[..g.len()].copy_from_slice(&g);
        }
        d
    });
    Ok(vals)
}

/// Expansion `Σ c_e b_e` in a structured basis.
#[derive(Clone, Debug)]
pub struct FloatProjection {
    pub alpha: Alpha,
    pub elements: Vec<FloatElement>,
    pub coefs: Vec<f64>,
}

impl FloatProjection {
    pub fn eval(&self, x: &[f64]) -> Dual {
        self.elements
            .iter()
            .zip(&self.coefs)
            .fold(Dual::constant(0.0), |acc, (e, c)| acc + e.eval(x).scale(*c))
    }

    /// Monomial coefficients, from the exact form of each element.
    pub fn to_poly_terms(&self) -> Vec<(MultiIndex, f64)> {
        let d = self.alpha.dim();
        let mut acc: std::collections::BTreeMap<MultiIndex, f64> = Default::default();
        for (e, c) in self.elements.iter().zip(&self.coefs) {
            for (m, v) in e.to_poly(d).to_f64_terms() {
                *acc.entry(m).or_insert(0.0) += c * v;
            }
        }
        acc.into_iter().collect()
    }
}

/// Coefficients of `u` in a sampled basis.
pub fn expansion_coefficients(basis: &SampledBasis, samples: &[Dual], rule: &QuadRule, exec: Execution) -> Vec<f64> {
    let total = rule.total_weight();
    let umean = samples.iter().zip(&rule.weights).map(|(s, w)| w * s.v).sum::<f64>() / total;
    exec.map_range(basis.elements.len(), |e| {
        let vals = &basis.values[e];
        let mut acc = 0.0;
        for ((b, s), w) in vals.iter().zip(samples).zip(&rule.weights) {
            acc += w * match basis.family {
                Family::Lebesgue => b.v * s.v,
                Family::Sobolev => b.g[0] * s.g[0] + b.g[1] * s.g[1] + b.g[2] * s.g[2],
            };
        }
        let mut ip = acc / total;
        if basis.family == Family::Sobolev {
            ip += umean * basis.means[e];
        }
        ip / basis.sq_norms[e]
    })
}

/// Projection of a sampled function onto all degrees `≤ n`.
pub fn project_function(u: &FuncSample, family: Family, a: &Alpha, n: usize, rule: &QuadRule) -> Result<FloatProjection> {
    project_function_with(u, family, a, n, rule, Execution::default())
}

pub fn project_function_with(
    u: &FuncSample,
    family: Family,
    a: &Alpha,
    n: usize,
    rule: &QuadRule,
    exec: Execution,
) -> Result<FloatProjection> {
    if family == Family::Sobolev && !u.has_gradient() {
        return Err(Error::MissingGradient);
    }
    if u.has_gradient() {
        u.check_gradient()?;
    }
    let basis = SampledBasis::new(family, a, n, rule, exec)?;
    let samples = sample_function(u, rule, exec)?;
    let coefs = expansion_coefficients(&basis, &samples, rule, exec);
    Ok(FloatProjection { alpha: a.clone(), elements: basis.elements, coefs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{dim_orthogonal, lebesgue_basis, sobolev_basis};
    use crate::diffops::{laplacian, operator_m};
    use crate::measure::{inner_alpha, inner_sobolev};
    use crate::projectors::{partial_sum_lebesgue, partial_sum_sobolev};

    fn al(d: usize, n: i64, den: i64) -> Alpha {
        Alpha::new(d, rat(n, den)).unwrap()
    }

    #[test]
    fn harmonics_are_harmonic_and_counted() {
        for d in 1..=3 {
            for m in 0..=6 {
                let hs = harmonics(d, m);
                assert_eq!(hs.len(), crate::bases::dim_harmonic(d, m));
                for h in hs {
                    let p = h.to_poly(d);
                    assert!(laplacian(&p).is_zero());
                    assert_eq!(p.degree(), m as i64);
                }
            }
        }
    }

    #[test]
    fn mapped_radial_matches_operator_m() {
        for d in 1..=3 {
            let a = al(d, 1, 2);
            for n in 3..=6 {
                for e in structured_elements(Family::Sobolev, &a, n).unwrap() {
                    if let Radial::Mapped { k, m, .. } = &e.radial {
                        let b = int(*m as i64) + rat(d as i64 - 2, 2);
                        let f = jacobi_shifted(k - 1, &(a.value() + int(1)), &b).unwrap();
                        let v = &f.compose_mpoly(&MPoly::norm_sq(d)) * &e.harmonic.to_poly(d);
                        assert_eq!(operator_m(&v, a.value()), e.to_poly(d));
                    }
                }
            }
        }
    }

    #[test]
    fn structured_spans_match_exact_bases() {
        for d in 1..=3 {
            let a = al(d, 5, 2);
            for n in 0..=5 {
                for (fam, exact) in [
                    (Family::Lebesgue, lebesgue_basis(d, n, &a).unwrap()),
                    (Family::Sobolev, sobolev_basis(d, n, &a).unwrap()),
                ] {
                    let els = structured_elements(fam, &a, n).unwrap();
                    assert_eq!(els.len(), dim_orthogonal(d, n));
                    for (i, e) in els.iter().enumerate() {
                        let p = e.to_poly(d);
                        let ip = |q: &MPoly| match fam {
                            Family::Lebesgue => inner_alpha(&p, q, &a),
                            Family::Sobolev => inner_sobolev(&p, q, &a),
                        };
                        let mut r = p.clone();
                        for (b, nrm) in exact.elements.iter().zip(&exact.sq_norms) {
                            r = r.try_add_scaled(b, &-(ip(b) / nrm)).unwrap();
                        }
                        assert!(r.is_zero(), "d={d} n={n} {fam:?}");
                        for f in &els[..i] {
                            assert_eq!(ip(&f.to_poly(d)), int(0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_gradients_match_exact() {
        let a = al(3, 0, 1);
        let x = [0.3, -0.2, 0.5];
        for fam in [Family::Lebesgue, Family::Sobolev] {
            for e in structured_elements(fam, &a, 4).unwrap() {
                let p = e.to_poly(3);
                let v = e.eval(&x);
                assert!((v.v - p.eval_f64(&x).unwrap()).abs() < 1e-12);
                for i in 0..3 {
                    let g = p.diff(i).unwrap().eval_f64(&x).unwrap();
                    assert!((v.g[i] - g).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn projection_of_polynomial_matches_exact() {
        for d in 1..=3 {
            let a = al(d, -1, 2);
            let u = MPoly::parse(d, "x1^2 + 3*x1 - 1/2").unwrap();
            let rule = QuadRule::new(d, a.to_f64(), 10).unwrap();
            for (fam, n) in [(Family::Lebesgue, 1), (Family::Sobolev, 1), (Family::Sobolev, 2)] {
                let proj = project_function(&FuncSample::from_poly(&u), fam, &a, n, &rule).unwrap();
                let exact = match fam {
                    Family::Lebesgue => partial_sum_lebesgue(&u, &a, n).unwrap(),
                    Family::Sobolev => partial_sum_sobolev(&u, &a, n).unwrap(),
                };
                let got = proj.to_poly_terms();
                for (m, c) in exact.to_f64_terms() {
                    let g = got.iter().find(|(k, _)| *k == m).map_or(0.0, |t| t.1);
                    assert!((g - c).abs() <= 1e-10 * c.abs(), "{m:?}: {g} vs {c}");
                }
                for (m, g) in &got {
                    if exact.coeff(m) == int(0) {
                        assert!(g.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn constant_mode_of_exponential() {
        let a = al(2, 0, 1);
        let rule = QuadRule::new(2, 0.0, 30).unwrap();
        let u = FuncSample::new(2, |x| x[0].exp()).with_gradient(|x, g| {
            g[0] = x[0].exp();
            g[1] = 0.0;
        });
        let proj = project_function(&u, Family::Sobolev, &a, 0, &rule).unwrap();
        // (1/π) ∫_disk e^{x1} = 2 I_1(1) ≈ 1.1303182079849700.
        assert!((proj.coefs[0] - 1.130_318_207_984_97).abs() < 1e-13);
    }

    #[test]
    fn gradient_validation() {
        let a = al(2, 0, 1);
        let rule = QuadRule::new(2, 0.0, 8).unwrap();
        let bad = FuncSample::new(2, |x| x[0] * x[0]).with_gradient(|_, g| {
            g[0] = 1.0;
            g[1] = 0.0;
        });
        assert!(matches!(
            project_function(&bad, Family::Sobolev, &a, 2, &rule),
            Err(Error::InconsistentGradient { .. })
        ));
        let none = FuncSample::new(2, |x| x[0]);
        assert_eq!(project_function(&none, Family::Sobolev, &a, 2, &rule).unwrap_err(), Error::MissingGradient);
        assert!(project_function(&none, Family::Lebesgue, &a, 2, &rule).is_ok());
        assert!(matches!(
            project_function(&none, Family::Lebesgue, &a, 5, &rule),
            Err(Error::QuadratureTooCoarse { .. })
        ));
    }
}
