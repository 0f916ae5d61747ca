//! Exact orthogonal projections onto `V^α_n`, `V^{α,1}_n` and their sums.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};

use crate::bases::{gram_schmidt, lebesgue_basis_with, sobolev_basis_with, BasisSet, InnerKind, SpaceTag};
use crate::error::{Error, Result};
use crate::measure::{inner_alpha, Alpha};
use crate::par::Execution;
use crate::poly::{fmt_rational, MPoly, MultiIndex, Rational};

/// Inner product family of a projector.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectorFamily {
    Lebesgue(Alpha),
    Sobolev(Alpha),
    /// Sobolev product with gradient term scaled by `ρ > 0`. Its bases are
    /// built from scratch by Gram–Schmidt over monomials in that product.
    SobolevScaled(Alpha, Rational),
}

/// Projection onto one degree or onto all degrees up to `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Single(usize),
    Cumulative(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorKind {
    pub family: ProjectorFamily,
    pub mode: Mode,
}

impl ProjectorFamily {
    pub fn alpha(&self) -> &Alpha {
        match self {
            ProjectorFamily::Lebesgue(a)
            | ProjectorFamily::Sobolev(a)
            | ProjectorFamily::SobolevScaled(a, _) => a,
        }
    }

    pub fn inner_kind(&self) -> InnerKind {
        match self {
            ProjectorFamily::Lebesgue(a) => InnerKind::Lebesgue(a.clone()),
            ProjectorFamily::Sobolev(a) => InnerKind::Sobolev(a.clone()),
            ProjectorFamily::SobolevScaled(a, r) => InnerKind::SobolevScaled(a.clone(), r.clone()),
        }
    }

    fn validate(&self) -> Result<()> {
        if let ProjectorFamily::SobolevScaled(_, rho) = self {
            if !rho.is_positive() {
                return Err(Error::InvalidConfig(format!(
                    "balancing constant must be positive, got {}",
                    fmt_rational(rho)
                )));
            }
        }
        Ok(())
    }

    /// Orthogonal basis of the degree-`n` space of this family.
    pub fn basis(&self, n: usize, exec: Execution) -> Result<Arc<BasisSet>> {
        self.validate()?;
        let a = self.alpha();
        match self {
            ProjectorFamily::Lebesgue(_) => lebesgue_basis_with(a.dim(), n, a, exec),
            ProjectorFamily::Sobolev(_) => sobolev_basis_with(a.dim(), n, a, exec),
            ProjectorFamily::SobolevScaled(_, rho) => scaled_basis(a, rho, n, exec),
        }
    }
}

type ScaledKey = (Alpha, Rational, usize);
type ScaledCache = Mutex<HashMap<ScaledKey, Arc<BasisSet>>>;

fn scaled_cache() -> &'static ScaledCache {
    static C: OnceLock<ScaledCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Degree-`n` block of Gram–Schmidt over all monomials in graded-lex order.
fn scaled_basis(a: &Alpha, rho: &Rational, n: usize, exec: Execution) -> Result<Arc<BasisSet>> {
    let key = (a.clone(), rho.clone(), n);
    if let Some(b) = scaled_cache().lock().expect("poisoned").get(&key) {
        return Ok(b.clone());
    }
    let kind = InnerKind::SobolevScaled(a.clone(), rho.clone());
    let lower: Vec<Arc<BasisSet>> = (0..n)
        .map(|k| scaled_basis(a, rho, k, exec))
        .collect::<Result<_>>()?;
    let residuals: Vec<MPoly> = MultiIndex::of_degree(a.dim(), n as u32)
        .into_iter()
        .map(|m| {
            let mut r = MPoly::monomial(m, Rational::from_integer(1.into()));
            for b in &lower {
                r = r.try_sub(&project_onto(&r, b, &kind, exec))?;
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut b = gram_schmidt(&residuals, &kind, exec)?;
    b.tag = SpaceTag::Span { d: a.dim() };
    let b = Arc::new(b);
    Ok(scaled_cache()
        .lock()
        .expect("poisoned")
        .entry(key)
        .or_insert(b)
        .clone())
}

/// `Σ_b ⟨u,b⟩/⟨b,b⟩ · b` over one orthogonal set.
pub fn project_onto(u: &MPoly, basis: &BasisSet, kind: &InnerKind, exec: Execution) -> MPoly {
    let coefs = exec.map_range(basis.len(), |k| {
        kind.inner(u, &basis.elements[k]) / &basis.sq_norms[k]
    });
    let mut out = MPoly::zero(u.dim());
    for (c, b) in coefs.iter().zip(&basis.elements) {
        if !c.is_zero() {
            out = out.try_add_scaled(b, c).expect("same dimension");
        }
    }
    out
}

/// Degrees that can carry a nonzero component of `u` under `mode`.
fn degrees(u: &MPoly, mode: Mode) -> std::ops::RangeInclusive<usize> {
    let top = u.degree();
    match mode {
        Mode::Single(n) if (n as i64) <= top => n..=n,
        Mode::Cumulative(n) if top >= 0 => 0..=n.min(top as usize),
        #[allow(clippy::reversed_empty_ranges)]
        _ => 1..=0,
    }
}

/// Exact orthogonal projection of a polynomial.
pub fn project_poly(u: &MPoly, kind: &ProjectorKind) -> Result<MPoly> {
    project_poly_with(u, kind, Execution::default())
}

pub fn project_poly_with(u: &MPoly, kind: &ProjectorKind, exec: Execution) -> Result<MPoly> {
    kind.family.validate()?;
    let a = kind.family.alpha();
    if u.dim() != a.dim() {
        return Err(Error::Poly(crate::PolyError::DimensionMismatch {
            left: u.dim(),
            right: a.dim(),
        }));
    }
    let inner = kind.family.inner_kind();
    let mut out = MPoly::zero(u.dim());
    for n in degrees(u, kind.mode) {
        let b = kind.family.basis(n, exec)?;
        out = &out + &project_onto(u, &b, &inner, exec);
    }
    Ok(out)
}

/// `proj^α_n`.
pub fn proj_lebesgue(u: &MPoly, a: &Alpha, n: usize) -> Result<MPoly> {
    project_poly(u, &ProjectorKind { family: ProjectorFamily::Lebesgue(a.clone()), mode: Mode::Single(n) })
}

/// `S^α_N`.
pub fn partial_sum_lebesgue(u: &MPoly, a: &Alpha, n: usize) -> Result<MPoly> {
    project_poly(u, &ProjectorKind { family: ProjectorFamily::Lebesgue(a.clone()), mode: Mode::Cumulative(n) })
}

/// `proj^{α,1}_n`.
pub fn proj_sobolev(u: &MPoly, a: &Alpha, n: usize) -> Result<MPoly> {
    project_poly(u, &ProjectorKind { family: ProjectorFamily::Sobolev(a.clone()), mode: Mode::Single(n) })
}

/// `S^{α,1}_N`.
pub fn partial_sum_sobolev(u: &MPoly, a: &Alpha, n: usize) -> Result<MPoly> {
    project_poly(u, &ProjectorKind { family: ProjectorFamily::Sobolev(a.clone()), mode: Mode::Cumulative(n) })
}

/// Solves `A x = b` exactly by Gaussian elimination.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular("exact linear solve"))?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            let pivot = a[col].clone();
            for (v, p) in a[r][col..n].iter_mut().zip(&pivot[col..n]) {
                *v -= &f * p;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in (r + 1)..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Ok(x)
}

/// `T^α_i f`: the element `t` of `V^{α,1}_{n+1}` with
/// `⟨b, t⟩_{α,1} = ⟨∂_i b, f⟩_α` for every `b` in that space, where
/// `f ∈ V^α_n`. Axis `i` is zero-based.
pub fn adjoint_t(f: &MPoly, i: usize, a: &Alpha) -> Result<MPoly> {
    if f.is_zero() {
        return Ok(MPoly::zero(a.dim()));
    }
    let n = f.degree() as usize;
    let residual = f.try_sub(&proj_lebesgue(f, a, n)?)?;
    if !residual.is_zero() {
        return Err(Error::NotInSpace {
            degree: n,
            alpha: fmt_rational(a.value()),
            reason: "nonzero residual after projection onto the degree-n space".into(),
        });
    }
    let basis = sobolev_basis_with(a.dim(), n + 1, a, Execution::default())?;
    let kind = InnerKind::Sobolev(a.clone());
    let gram: Vec<Vec<Rational>> = basis
        .elements
        .iter()
        .map(|p| basis.elements.iter().map(|q| kind.inner(p, q)).collect())
        .collect();
    let rhs: Vec<Rational> = basis
        .elements
        .iter()
        .map(|b| Ok(inner_alpha(&b.diff(i)?, f, a)))
        .collect::<Result<_>>()?;
    let x = solve_exact(gram, rhs)?;
    let mut out = MPoly::zero(a.dim());
    for (c, b) in x.iter().zip(&basis.elements) {
        out = out.try_add_scaled(b, c)?;
    }
    Ok(out)
}
