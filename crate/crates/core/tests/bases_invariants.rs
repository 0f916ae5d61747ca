mod common;

use common::{alpha, alphas, in_span, same_span};
use sobolev_ball::bases::{
    dim_orthogonal, gram_schmidt, harmonic_basis, lebesgue_basis, orthogonal_harmonics, sobolev_basis,
    InnerKind,
};
use sobolev_ball::diffops::{laplacian, operator_m};
use sobolev_ball::measure::{inner_alpha, inner_sobolev};
use sobolev_ball::poly::{int, MPoly, MultiIndex, Parity};
use sobolev_ball::projectors::{proj_lebesgue, project_onto};
use sobolev_ball::{Error, Execution};

fn literal_sobolev_block(d: usize, n: usize, kind: &InnerKind, lower: &[Vec<MPoly>]) -> Vec<MPoly> {
    let mut out = Vec::new();
    for m in MultiIndex::of_degree(d, n as u32) {
        let mut r = MPoly::monomial(m, int(1));
        for block in lower {
            let set = gram_schmidt(block, kind, Execution::Sequential).unwrap();
            r = &r - &project_onto(&r, &set, kind, Execution::Sequential);
        }
        out.push(r);
    }
    out
}

#[test]
fn sobolev_spans_match_gram_schmidt_on_monomials() {
    for d in 1..=3 {
        for a in alphas(d) {
            let kind = InnerKind::Sobolev(a.clone());
            let mut lower: Vec<Vec<MPoly>> = Vec::new();
            for n in 0..=5 {
                let block = literal_sobolev_block(d, n, &kind, &lower);
                let basis = sobolev_basis(d, n, &a).unwrap();
                assert!(same_span(&basis.elements, &block, &kind), "{a} n={n}");
                lower.push(basis.elements.clone());
            }
        }
    }
}

#[test]
fn bases_are_orthogonal_across_degrees() {
    for d in 1..=3 {
        for a in alphas(d) {
            let leb: Vec<_> = (0..=5).map(|n| lebesgue_basis(d, n, &a).unwrap()).collect();
            let sob: Vec<_> = (0..=5).map(|n| sobolev_basis(d, n, &a).unwrap()).collect();
            for (i, bi) in leb.iter().enumerate() {
                assert_eq!(bi.len(), dim_orthogonal(d, i));
                for bj in &leb[i..] {
                    for p in &bi.elements {
                        for q in &bj.elements {
                            if !std::ptr::eq(p, q) {
                                assert_eq!(inner_alpha(p, q, &a), int(0), "{a}");
                            }
                        }
                    }
                }
            }
            for (i, bi) in sob.iter().enumerate() {
                for bj in &sob[i..] {
                    for p in &bi.elements {
                        for q in &bj.elements {
                            if !std::ptr::eq(p, q) {
                                assert_eq!(inner_sobolev(p, q, &a), int(0), "{a}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn elements_have_the_parity_of_their_degree() {
    for d in 1..=3 {
        let a = alpha(d, 1, 2);
        for n in 0..=6 {
            let want = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
            for b in lebesgue_basis(d, n, &a).unwrap().elements.iter().chain(&sobolev_basis(d, n, &a).unwrap().elements) {
                assert_eq!(b.parity(), want);
                assert_eq!(b.degree(), n as i64);
            }
        }
    }
}

#[test]
fn harmonics_are_orthogonal_to_lower_degrees() {
    for d in 2..=3 {
        for a in alphas(d) {
            for n in 1..=6 {
                let h = harmonic_basis(d, n);
                for p in &h.elements {
                    assert!(laplacian(p).is_zero());
                    for k in 0..n {
                        assert!(proj_lebesgue(p, &a, k).unwrap().is_zero(), "{a} n={n} k={k}");
                    }
                }
                let oh = orthogonal_harmonics(d, n);
                assert!(same_span(&oh.elements, &h.elements, &InnerKind::Lebesgue(a.clone())));
            }
        }
    }
}

#[test]
fn mapped_elements_live_in_two_degrees() {
    for d in 1..=3 {
        for a in alphas(d) {
            for n in 0..=4 {
                for v in &lebesgue_basis(d, n, &a.raised()).unwrap().elements {
                    let m = operator_m(v, a.value());
                    for k in 0..=n + 2 {
                        if k != n && k != n + 2 {
                            assert!(proj_lebesgue(&m, &a, k).unwrap().is_zero(), "{a} n={n} k={k}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn derivatives_of_sobolev_elements_are_lebesgue_orthogonal() {
    for d in 1..=3 {
        for a in alphas(d) {
            for n in 1..=6 {
                let target = lebesgue_basis(d, n - 1, &a).unwrap();
                let kind = InnerKind::Lebesgue(a.clone());
                for q in &sobolev_basis(d, n, &a).unwrap().elements {
                    let parts: Vec<MPoly> = q.gradient();
                    assert!(in_span(&parts, &target.elements, &kind), "{a} n={n}");
                }
            }
        }
    }
}

#[test]
fn gram_schmidt_modes_agree_and_report_dependence() {
    let a = alpha(3, 5, 2);
    let cands: Vec<MPoly> = MultiIndex::up_to_degree(3, 4)
        .into_iter()
        .map(|m| MPoly::monomial(m, int(1)))
        .collect();
    for kind in [InnerKind::Lebesgue(a.clone()), InnerKind::Sobolev(a.clone())] {
        let s = gram_schmidt(&cands, &kind, Execution::Sequential).unwrap();
        let p = gram_schmidt(&cands, &kind, Execution::Parallel).unwrap();
        assert_eq!(s.elements, p.elements);
        assert_eq!(s.sq_norms, p.sq_norms);
    }
    let mut dup = cands[..4].to_vec();
    dup.push(&cands[1] + &cands[2]);
    match gram_schmidt(&dup, &InnerKind::Lebesgue(a), Execution::Sequential) {
        Err(Error::LinearDependence { index }) => assert_eq!(index, 4),
        other => panic!("expected dependence error, got {other:?}"),
    }
}

#[test]
fn basis_text_lists_one_element_per_line() {
    let a = alpha(2, 0, 1);
    let b = sobolev_basis(2, 3, &a).unwrap();
    let text = b.to_text();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# space=V(alpha,1) d=2 n=3 alpha=0");
    let rest: Vec<&str> = lines.collect();
    assert_eq!(rest.len(), 4);
    for (line, e) in rest.iter().zip(&b.elements) {
        assert_eq!(&MPoly::parse(2, line).unwrap(), e);
    }
}
