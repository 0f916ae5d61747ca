#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_ball::bases::{gram_schmidt, InnerKind};
use sobolev_ball::poly::{rat, MPoly, MultiIndex};
use sobolev_ball::projectors::project_onto;
use sobolev_ball::{Alpha, Execution, Rational};

/// The weight exponents used across the exact suites.
pub const ALPHAS: [(i64, i64); 4] = [(-1, 2), (0, 1), (1, 1), (5, 2)];

pub fn alpha(d: usize, p: i64, q: i64) -> Alpha {
    Alpha::new(d, rat(p, q)).unwrap()
}

pub fn alphas(d: usize) -> Vec<Alpha> {
    ALPHAS.iter().map(|&(p, q)| alpha(d, p, q)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coef(rng: &mut ChaCha8Rng) -> Rational {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-6..=6);
    }
    rat(p, rng.gen_range(1..=5))
}

pub fn random_monomial(rng: &mut ChaCha8Rng, d: usize, degree: u32) -> MultiIndex {
    let mut e = vec![0u32; d];
    for _ in 0..degree {
        e[rng.gen_range(0..d)] += 1;
    }
    MultiIndex::new(&e)
}

/// `terms` random monomials of degree at most `max_degree`.
pub fn random_poly(rng: &mut ChaCha8Rng, d: usize, max_degree: u32, terms: usize) -> MPoly {
    let mut p = MPoly::zero(d);
    for _ in 0..terms {
        let k = rng.gen_range(0..=max_degree);
        let m = random_monomial(rng, d, k);
        p.add_term(m, random_coef(rng));
    }
    p
}

/// Sparse polynomial with exact degree `degree`.
pub fn random_sparse(rng: &mut ChaCha8Rng, d: usize, degree: u32, terms: usize) -> MPoly {
    loop {
        let mut p = random_poly(rng, d, degree, terms.saturating_sub(1));
        let top = random_monomial(rng, d, degree);
        p.add_term(top, random_coef(rng));
        if p.degree() == degree as i64 {
            return p;
        }
    }
}

/// True when every polynomial of `vs` lies in the span of the orthogonal
/// set `basis` (orthogonal for `kind`).
pub fn in_span(vs: &[MPoly], basis: &[MPoly], kind: &InnerKind) -> bool {
    let set = match gram_schmidt(basis, kind, Execution::Sequential) {
        Ok(s) => s,
        Err(_) => return false,
    };
    vs.iter()
        .all(|v| (v - &project_onto(v, &set, kind, Execution::Sequential)).is_zero())
}

/// Equal spans, both lists linearly independent.
pub fn same_span(a: &[MPoly], b: &[MPoly], kind: &InnerKind) -> bool {
    a.len() == b.len() && in_span(a, b, kind) && in_span(b, a, kind)
}

/// Sum of a list of polynomials of dimension `d`.
pub fn sum(d: usize, ps: &[MPoly]) -> MPoly {
    ps.iter().fold(MPoly::zero(d), |acc, p| &acc + p)
}
