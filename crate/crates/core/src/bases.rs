//! Exact bases of harmonic, Lebesgue-orthogonal and Sobolev-orthogonal
//! polynomial spaces on the ball.
//!
//! Candidates of the form `R(‖x‖²)·Y` with `Y` harmonic of degree `m` are
//! orthogonal across different `m` in both inner products, because each
//! product is rotation invariant. Gram–Schmidt on a candidate list therefore
//! only mixes candidates sharing one radial factor, and its result is the
//! radial factor times the orthogonalized harmonics. [`lebesgue_basis`] and
//! [`sobolev_basis`] build that result directly; the literal Gram–Schmidt
//! route is kept in [`lebesgue_candidates`] / [`sobolev_candidates`] and the
//! two are compared exactly in the tests.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::diffops::operator_m;
use crate::error::{Error, Result};
use crate::jacobi::jacobi_shifted;
use crate::measure::{inner_alpha, inner_sobolev, inner_sobolev_scaled, Alpha};
use crate::par::Execution;
use crate::poly::{fmt_rational, int, rat, MPoly, MultiIndex, Rational};

/// Which space a [`BasisSet`] spans.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    Harmonic { d: usize, n: usize },
    Lebesgue { alpha: Alpha, n: usize },
    Sobolev { alpha: Alpha, n: usize },
    /// Output of a free-standing Gram–Schmidt run.
    Span { d: usize },
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Harmonic { d, n } => write!(f, "space=H d={d} n={n}"),
            SpaceTag::Lebesgue { alpha, n } => write!(
                f,
                "space=V(alpha) d={} n={n} alpha={}",
                alpha.dim(),
                fmt_rational(alpha.value())
            ),
            SpaceTag::Sobolev { alpha, n } => write!(
                f,
                "space=V(alpha,1) d={} n={n} alpha={}",
                alpha.dim(),
                fmt_rational(alpha.value())
            ),
            SpaceTag::Span { d } => write!(f, "space=span d={d}"),
        }
    }
}

/// Inner product used by Gram–Schmidt and the projectors. All values are
/// normalized by `c_α`.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerKind {
    Lebesgue(Alpha),
    Sobolev(Alpha),
    SobolevScaled(Alpha, Rational),
}

impl InnerKind {
    pub fn inner(&self, p: &MPoly, q: &MPoly) -> Rational {
        match self {
            InnerKind::Lebesgue(a) => inner_alpha(p, q, a),
            InnerKind::Sobolev(a) => inner_sobolev(p, q, a),
            InnerKind::SobolevScaled(a, rho) => inner_sobolev_scaled(p, q, a, rho),
        }
    }

    pub fn alpha(&self) -> &Alpha {
        match self {
            InnerKind::Lebesgue(a) | InnerKind::Sobolev(a) | InnerKind::SobolevScaled(a, _) => a,
        }
    }
}

/// An ordered, pairwise orthogonal (never normalized) list of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    pub tag: SpaceTag,
    pub elements: Vec<MPoly>,
    /// Squared norms in the space's own inner product. Harmonic sets are not
    /// orthogonal; for them this holds the diagonal of the `α = 0` Gram matrix.
    pub sq_norms: Vec<Rational>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Dump format: a header line then one element per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.tag);
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// `binom(n, k)` as `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Dimension of degree-`n` homogeneous harmonics in `d` variables.
pub fn dim_harmonic(d: usize, n: usize) -> usize {
    let all = binomial(n + d - 1, d - 1);
    let lower = if n >= 2 { binomial(n + d - 3, d - 1) } else { 0 };
    (all - lower) as usize
}

/// Dimension of `V^α_n` and `V^{α,1}_n`.
pub fn dim_orthogonal(d: usize, n: usize) -> usize {
    binomial(n + d - 1, n) as usize
}

/// Orthogonalizes `candidates` in input order.
pub fn gram_schmidt(candidates: &[MPoly], inner: &InnerKind, exec: Execution) -> Result<BasisSet> {
    let d = inner.alpha().dim();
    let mut elements: Vec<MPoly> = Vec::with_capacity(candidates.len());
    let mut sq_norms: Vec<Rational> = Vec::with_capacity(candidates.len());
    for (index, c) in candidates.iter().enumerate() {
        let coefs = exec.map_range(elements.len(), |j| inner.inner(c, &elements[j]) / &sq_norms[j]);
        let mut r = c.clone();
        for (e, k) in elements.iter().zip(&coefs) {
            if !k.is_zero() {
                r = r.try_add_scaled(e, &-k)?;
            }
        }
        let nrm = inner.inner(&r, &r);
        if !nrm.is_positive() {
            return Err(Error::LinearDependence { index });
        }
        elements.push(r);
        sq_norms.push(nrm);
    }
    Ok(BasisSet {
        tag: SpaceTag::Span { d },
        elements,
        sq_norms,
    })
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[row].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot).take(cols) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Homogeneous harmonic polynomials of degree `n`: the kernel of the
/// Laplacian on degree-`n` forms. Pivots are taken from the graded-lex
/// latest monomials, so each element is one free monomial (in graded-lex
/// order) plus later monomials.
pub fn harmonic_basis(d: usize, n: usize) -> BasisSet {
    let tag = SpaceTag::Harmonic { d, n };
    let monos = MultiIndex::of_degree(d, n as u32);
    let elements: Vec<MPoly> = if n < 2 {
        monos.iter().map(|m| MPoly::monomial(m.clone(), int(1))).collect()
    } else {
        let rows = MultiIndex::of_degree(d, n as u32 - 2);
        let row_of: HashMap<&MultiIndex, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        // Columns in reverse graded-lex order.
        let cols: Vec<&MultiIndex> = monos.iter().rev().collect();
        let mut mat = vec![vec![Rational::zero(); cols.len()]; rows.len()];
        for (c, m) in cols.iter().enumerate() {
            for i in 0..d {
                let e = m.exps()[i];
                if e >= 2 {
                    let mut low = m.exps().to_vec();
                    low[i] -= 2;
                    let r = row_of[&MultiIndex::new(&low)];
                    mat[r][c] += int((e * (e - 1)) as i64);
                }
            }
        }
        let pivots = rref(&mut mat, cols.len());
        let free: Vec<usize> = (0..cols.len()).rev().filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut h = MPoly::monomial(cols[f].clone(), int(1));
                for (r, &p) in pivots.iter().enumerate() {
                    let v = &mat[r][f];
                    if !v.is_zero() {
                        h.add_term(cols[p].clone(), -v);
                    }
                }
                h
            })
            .collect()
    };
    let a0 = Alpha::new(d, int(0)).expect("valid");
    let sq_norms = elements.iter().map(|h| inner_alpha(h, h, &a0)).collect();
    BasisSet { tag, elements, sq_norms }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum CacheKey {
    Harmonic(usize, usize),
    Lebesgue(Alpha, usize),
    Sobolev(Alpha, usize),
}

type Cache = Mutex<HashMap<CacheKey, Arc<BasisSet>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CacheKey, build: impl FnOnce() -> Result<BasisSet>) -> Result<Arc<BasisSet>> {
    if let Some(b) = cache().lock().expect("basis cache poisoned").get(&key) {
        return Ok(b.clone());
    }
    let b = Arc::new(build()?);
    Ok(cache()
        .lock()
        .expect("basis cache poisoned")
        .entry(key)
        .or_insert(b)
        .clone())
}

/// [`harmonic_basis`] orthogonalized in order; orthogonal on the sphere
/// and in every `⟨·,·⟩_α`.
pub fn orthogonal_harmonics(d: usize, n: usize) -> Arc<BasisSet> {
    cached(CacheKey::Harmonic(d, n), || {
        let raw = harmonic_basis(d, n);
        let a0 = Alpha::new(d, int(0)).expect("valid");
        let mut b = gram_schmidt(&raw.elements, &InnerKind::Lebesgue(a0), Execution::Sequential)?;
        b.tag = SpaceTag::Harmonic { d, n };
        Ok(b)
    })
    .expect("harmonic basis is linearly independent")
}

/// `P^{(α, m+(d-2)/2)}_j(2‖x‖² - 1)` for `m = n - 2j`.
fn radial_factor(a: &Alpha, n: usize, j: usize) -> Result<MPoly> {
    let d = a.dim();
    let m = n - 2 * j;
    let b = int(m as i64) + rat(d as i64 - 2, 2);
    Ok(jacobi_shifted(j, a.value(), &b)?.compose_mpoly(&MPoly::norm_sq(d)))
}

/// Raw candidates `P_j(2‖x‖²-1)·Y` with unnormalized harmonics `Y`.
pub fn lebesgue_candidates(d: usize, n: usize, a: &Alpha) -> Result<Vec<MPoly>> {
    check_dim(d, a)?;
    let mut out = Vec::new();
    for j in 0..=n / 2 {
        let r = radial_factor(a, n, j)?;
        for y in harmonic_basis(d, n - 2 * j).elements {
            out.push(&r * &y);
        }
    }
    Ok(out)
}

fn check_dim(d: usize, a: &Alpha) -> Result<()> {
    if d != a.dim() {
        return Err(Error::InvalidConfig(format!(
            "basis dimension {d} differs from weight dimension {}",
            a.dim()
        )));
    }
    Ok(())
}

/// Orthogonal basis of `V^α_n`.
pub fn lebesgue_basis(d: usize, n: usize, a: &Alpha) -> Result<Arc<BasisSet>> {
    lebesgue_basis_with(d, n, a, Execution::default())
}

pub fn lebesgue_basis_with(d: usize, n: usize, a: &Alpha, exec: Execution) -> Result<Arc<BasisSet>> {
    check_dim(d, a)?;
    cached(CacheKey::Lebesgue(a.clone(), n), || {
        let mut elements = Vec::with_capacity(dim_orthogonal(d, n));
        for j in 0..=n / 2 {
            let r = radial_factor(a, n, j)?;
            let harm = orthogonal_harmonics(d, n - 2 * j);
            elements.extend(exec.map(&harm.elements, |y| &r * y));
        }
        let sq_norms = exec.map(&elements, |e| inner_alpha(e, e, a));
        Ok(BasisSet {
            tag: SpaceTag::Lebesgue { alpha: a.clone(), n },
            elements,
            sq_norms,
        })
    })
}

/// Raw Sobolev candidates: harmonics, then `M^α` images of the
/// `(α+1)`-basis of degree `n-2`. For `n ≤ 2` these are the Lebesgue ones.
pub fn sobolev_candidates(d: usize, n: usize, a: &Alpha) -> Result<Vec<MPoly>> {
    if n <= 2 {
        return lebesgue_candidates(d, n, a);
    }
    check_dim(d, a)?;
    let mut out = harmonic_basis(d, n).elements;
    for v in &lebesgue_basis(d, n - 2, &a.raised())?.elements {
        out.push(operator_m(v, a.value()));
    }
    Ok(out)
}

/// Orthogonal basis of `V^{α,1}_n`.
pub fn sobolev_basis(d: usize, n: usize, a: &Alpha) -> Result<Arc<BasisSet>> {
    sobolev_basis_with(d, n, a, Execution::default())
}

pub fn sobolev_basis_with(d: usize, n: usize, a: &Alpha, exec: Execution) -> Result<Arc<BasisSet>> {
    check_dim(d, a)?;
    cached(CacheKey::Sobolev(a.clone(), n), || {
        let elements: Vec<MPoly> = if n <= 2 {
            lebesgue_basis_with(d, n, a, exec)?.elements.clone()
        } else {
            let mut e = orthogonal_harmonics(d, n).elements.clone();
            let lower = lebesgue_basis_with(d, n - 2, &a.raised(), exec)?;
            e.extend(exec.map(&lower.elements, |v| operator_m(v, a.value())));
            e
        };
        let sq_norms = exec.map(&elements, |e| inner_sobolev(e, e, a));
        Ok(BasisSet {
            tag: SpaceTag::Sobolev { alpha: a.clone(), n },
            elements,
            sq_norms,
        })
    })
}
