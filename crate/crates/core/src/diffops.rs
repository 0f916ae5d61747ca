//! Differential operators on the ball as exact maps between polynomials.
//!
//! Axes are zero-based throughout: `angular_d(p, 0, 1)` is `D_{1,2}`.

use crate::measure::{mean, Alpha};
use crate::poly::{int, MPoly, MultiIndex, Rational};

fn d(p: &MPoly, axis: usize) -> MPoly {
    p.diff(axis).expect("axis out of range")
}

fn times_var(p: &MPoly, axis: usize) -> MPoly {
    p.shift(&MultiIndex::unit(p.dim(), axis))
}

/// `D_{i,j} p = x_i ∂_j p - x_j ∂_i p`.
pub fn angular_d(p: &MPoly, i: usize, j: usize) -> MPoly {
    if i == j {
        assert!(i < p.dim(), "axis {i} out of range for dimension {}", p.dim());
        return MPoly::zero(p.dim());
    }
    &times_var(&d(p, j), i) - &times_var(&d(p, i), j)
}

/// `d^α_j p = -(1 - ‖x‖²) ∂_j p + 2(α+1) x_j p`. Any rational `α` is accepted.
pub fn lowering_d(p: &MPoly, j: usize, alpha: &Rational) -> MPoly {
    let dp = d(p, j);
    let mut out = -&dp;
    for k in 0..p.dim() {
        out = &out + &dp.shift(&MultiIndex::unit(p.dim(), k).add(&MultiIndex::unit(p.dim(), k)));
    }
    let c = int(2) * (alpha + int(1));
    out.try_add_scaled(&times_var(p, j), &c)
        .expect("same dimension")
}

/// Sum of `D_{i,j}²` over all `i < j` (the Laplace–Beltrami part).
pub fn angular_laplacian(p: &MPoly) -> MPoly {
    let mut out = MPoly::zero(p.dim());
    for i in 0..p.dim() {
        for j in (i + 1)..p.dim() {
            out = &out + &angular_d(&angular_d(p, i, j), i, j);
        }
    }
    out
}

/// `𝓛^(α) p = Σ_j d^α_j ∂_j p - Σ_{i<j} D_{i,j}² p`.
pub fn sl_operator_l(p: &MPoly, alpha: &Rational) -> MPoly {
    let mut out = -&angular_laplacian(p);
    for j in 0..p.dim() {
        out = &out + &lowering_d(&d(p, j), j, alpha);
    }
    out
}

/// `M^α p = Σ_j d^{α-1}_j d^α_j p`.
pub fn operator_m(p: &MPoly, alpha: &Rational) -> MPoly {
    let lower = alpha - int(1);
    let mut out = MPoly::zero(p.dim());
    for j in 0..p.dim() {
        out = &out + &lowering_d(&lowering_d(p, j, alpha), j, &lower);
    }
    out
}

/// `𝓛̃^(α) q = 𝓛^(α-1) q + 2 proj^α_0(x·∇q)`; the projection uses the measure of `a`.
pub fn sl_operator_ltilde(q: &MPoly, a: &Alpha) -> MPoly {
    let base = sl_operator_l(q, &(a.value() - int(1)));
    let m = mean(&euler(q), a);
    &base + &MPoly::constant(q.dim(), int(2) * m)
}

/// `x·∇p`.
pub fn euler(p: &MPoly) -> MPoly {
    MPoly::from_terms(
        p.dim(),
        p.terms()
            .map(|(m, c)| (m.clone(), c * int(m.degree() as i64))),
    )
}

/// `Δp`.
pub fn laplacian(p: &MPoly) -> MPoly {
    let mut out = MPoly::zero(p.dim());
    for i in 0..p.dim() {
        out = &out + &d(&d(p, i), i);
    }
    out
}

/// Selector for [`euler_and_laplace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerOrLaplace {
    XGrad,
    Laplacian,
}

pub fn euler_and_laplace(p: &MPoly, which: EulerOrLaplace) -> MPoly {
    match which {
        EulerOrLaplace::XGrad => euler(p),
        EulerOrLaplace::Laplacian => laplacian(p),
    }
}

/// A named operator, for code that picks operators at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorTag {
    AngularD(usize, usize),
    Lowering(usize, Rational),
    SturmLiouvilleL(Rational),
    MapM(Rational),
    SturmLiouvilleLtilde(Alpha),
    Laplacian,
    EulerXGrad,
}

impl OperatorTag {
    pub fn apply(&self, p: &MPoly) -> MPoly {
        match self {
            OperatorTag::AngularD(i, j) => angular_d(p, *i, *j),
            OperatorTag::Lowering(j, a) => lowering_d(p, *j, a),
            OperatorTag::SturmLiouvilleL(a) => sl_operator_l(p, a),
            OperatorTag::MapM(a) => operator_m(p, a),
            OperatorTag::SturmLiouvilleLtilde(a) => sl_operator_ltilde(p, a),
            OperatorTag::Laplacian => laplacian(p),
            OperatorTag::EulerXGrad => euler(p),
        }
    }
}
