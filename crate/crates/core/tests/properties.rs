mod common;

use std::sync::Arc;

use lefschetz_core::atlas::{equivalent_changes, group_closure, stabilizer, ChangeOfChart, CycloMatrix, FiniteMatrixGroup};
use lefschetz_core::cohomology::invariant::projector_is_idempotent;
use lefschetz_core::cohomology::{invariant_cohomology, CohomologyData, SimplicialComplex, SimplicialGroupAction};
use lefschetz_core::cyclotomic::Cyclotomic;
use lefschetz_core::foliation::metric::{conformal_factor, conformal_factor_f64};
use lefschetz_core::foliation::{PolyForm, PolyVectorField};
use lefschetz_core::poly::Poly;
use lefschetz_core::rational::{frac, int, to_f64, Rational};
use nalgebra::DMatrix;
use proptest::prelude::*;

const DIM: usize = 3;

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -3i64..=3), 0..4)
        .prop_map(|terms| Poly::from_terms(DIM, terms.into_iter().map(|((a, b, c), k)| (vec![a, b, c], int(k)))))
}

fn index_sets(p: usize) -> Vec<Vec<usize>> {
    common::index_sets(DIM, p)
}

fn form_strategy(p: usize) -> impl Strategy<Value = PolyForm> {
    let sets = index_sets(p);
    prop::collection::vec(poly_strategy(), sets.len()).prop_map(move |coeffs| {
        let mut out = PolyForm::zero(DIM, p);
        for (f, idx) in coeffs.into_iter().zip(&sets) {
            out = out.add(&PolyForm::monomial(f, idx).unwrap());
        }
        out
    })
}

fn field_strategy() -> impl Strategy<Value = PolyVectorField> {
    prop::collection::vec(poly_strategy(), DIM).prop_map(PolyVectorField::new)
}

fn cyclo(order: u32, coeffs: &[i64]) -> Cyclotomic {
    Cyclotomic::new(order, coeffs.iter().map(|&c| int(c)).collect())
}

fn quaternion_group() -> FiniteMatrixGroup {
    let i = Cyclotomic::root_of_unity(4, 1);
    let z = Cyclotomic::zero();
    let one = Cyclotomic::one();
    let a = CycloMatrix::from_rows(vec![vec![i.clone(), z.clone()], vec![z.clone(), -&i]]).unwrap();
    let b = CycloMatrix::from_rows(vec![vec![z.clone(), one.clone()], vec![-&one, z]]).unwrap();
    group_closure(&[a, b], 64).unwrap()
}

fn diagonal_group(order: u32, a: u32, b: u32) -> FiniteMatrixGroup {
    let g = CycloMatrix::diagonal(vec![Cyclotomic::root_of_unity(order, a), Cyclotomic::root_of_unity(order, b)]);
    group_closure(&[g], 64).unwrap()
}

fn point_strategy(order: u32) -> impl Strategy<Value = Vec<Cyclotomic>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, 2), 2)
        .prop_map(move |v| v.iter().map(|c| cyclo(order, c)).collect())
}

fn same_elements(a: &FiniteMatrixGroup, b: &FiniteMatrixGroup) -> bool {
    a.order() == b.order() && a.elements().iter().all(|g| b.contains(g))
}

fn random_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(form in (0usize..=2).prop_flat_map(form_strategy)) {
        prop_assert!(form.d().d().is_zero());
    }

    #[test]
    fn leibniz_rule(a in form_strategy(1), b in form_strategy(1), f in poly_strategy()) {
        // d(α∧β) = dα∧β − α∧dβ for 1-forms, and d(fα) = df∧α + f dα
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).sub(&a.wedge(&b.d()));
        prop_assert_eq!(lhs, rhs);
        let f0 = PolyForm::function(f);
        prop_assert_eq!(f0.wedge(&a).d(), f0.d().wedge(&a).add(&f0.wedge(&a.d())));
    }

    #[test]
    fn cartan_formula_one_forms(a in form_strategy(1), z in prop::collection::vec(poly_strategy(), DIM)) {
        let field = PolyVectorField::new(z.clone());
        let cartan = a.interior(&field).d().add(&a.d().interior(&field));
        prop_assert_eq!(cartan, common::lie_derivative(&a, &z));
    }

    #[test]
    fn cartan_formula_two_forms(w in form_strategy(2), z in prop::collection::vec(poly_strategy(), DIM)) {
        let field = PolyVectorField::new(z.clone());
        let cartan = w.interior(&field).d().add(&w.d().interior(&field));
        prop_assert_eq!(cartan, common::lie_derivative(&w, &z));
    }

    #[test]
    fn interior_is_antiderivation(a in form_strategy(1), b in form_strategy(1), z in field_strategy()) {
        let lhs = a.wedge(&b).interior(&z);
        let rhs = a.interior(&z).wedge(&b).sub(&a.wedge(&b.interior(&z)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn equivalent_changes_round_trip(gi in 0usize..8, hi in 0usize..8, off in point_strategy(4), c in point_strategy(4)) {
        let group = quaternion_group();
        prop_assert_eq!(group.order(), 8);
        let h = group.elements()[hi].matrix().clone();
        let phi = ChangeOfChart::new(0, 1, h, off, c, frac(1, 2)).unwrap();
        let g = &group.elements()[gi];
        let moved = phi.post_compose(g.matrix());
        let found = equivalent_changes(&phi, &moved, &group).unwrap();
        prop_assert_eq!(found.as_ref(), Some(g));
        let back = equivalent_changes(&moved, &phi, &group).unwrap();
        prop_assert_eq!(back, Some(g.inverse()));
    }

    #[test]
    fn stabilizer_conjugation(gi in 0usize..8, x in point_strategy(4), axis in 0usize..3) {
        let group = quaternion_group();
        let zero = Cyclotomic::zero();
        // points on the axes and at the origin have larger stabilizers
        let x = match axis {
            0 => vec![zero.clone(), zero],
            1 => x,
            _ => vec![x[0].clone(), zero],
        };
        let g = &group.elements()[gi];
        let lhs = stabilizer(&group, &g.apply(&x));
        let conj: Vec<_> = stabilizer(&group, &x).elements().iter().map(|s| g.compose(s).compose(&g.inverse())).collect();
        let rhs = FiniteMatrixGroup::from_elements(conj).unwrap();
        prop_assert!(same_elements(&lhs, &rhs));
        prop_assert_eq!(group.order() % lhs.order(), 0);
    }

    #[test]
    fn stabilizer_conjugation_cyclic(k in 2u32..9, a in 1u32..8, b in 0u32..8, x in point_strategy(8), gi in 0usize..8) {
        let order = 8 * k;
        let group = diagonal_group(order, a * 8 % order, b * 8 % order);
        let x: Vec<Cyclotomic> = x.iter().map(|c| c.promote(order)).collect();
        let g = &group.elements()[gi % group.order()];
        let lhs = stabilizer(&group, &g.apply(&x));
        let rhs = stabilizer(&group, &x);
        // abelian: conjugation is trivial
        prop_assert!(same_elements(&lhs, &rhs));
    }

    #[test]
    fn closure_is_idempotent(k in 2u32..7, a in 0u32..6, b in 0u32..6, with_swap in any::<bool>()) {
        let g = CycloMatrix::diagonal(vec![Cyclotomic::root_of_unity(k, a), Cyclotomic::root_of_unity(k, b)]);
        let mut gens = vec![g];
        if with_swap {
            let (z, one) = (Cyclotomic::zero(), Cyclotomic::one());
            gens.push(CycloMatrix::from_rows(vec![vec![z.clone(), one.clone()], vec![one, z]]).unwrap());
        }
        let once = group_closure(&gens, 256).unwrap();
        let all: Vec<CycloMatrix> = once.elements().iter().map(|e| e.matrix().clone()).collect();
        let twice = group_closure(&all, 256).unwrap();
        prop_assert!(same_elements(&once, &twice));
        for x in once.elements() {
            for y in once.elements() {
                prop_assert!(once.contains(&x.mul(y)));
            }
        }
    }

    #[test]
    fn conformal_factor_is_homogeneous(entries in prop::collection::vec(-3i64..=3, 4), c in 1i64..=9, m in 1usize..=3) {
        // M0 = AᵀA + I is positive definite; u0(c M0) = u0(M0) / c^(m'/m)
        let size = 2;
        let a: Vec<Vec<Rational>> = (0..size).map(|i| (0..size).map(|j| int(entries[i * size + j])).collect()).collect();
        let m0: Vec<Vec<Rational>> = (0..size)
            .map(|i| (0..size).map(|j| (0..size).map(|k| &a[k][i] * &a[k][j]).sum::<Rational>() + int(i64::from(i == j))).collect())
            .collect();
        let scaled: Vec<Vec<Rational>> = m0.iter().map(|r| r.iter().map(|x| x * int(c)).collect()).collect();
        let u = conformal_factor(&m0, m).unwrap().to_f64();
        let us = conformal_factor(&scaled, m).unwrap().to_f64();
        let expected = u / (c as f64).powf(size as f64 / m as f64);
        prop_assert!((us - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        let mf = DMatrix::from_fn(size, size, |i, j| to_f64(&m0[i][j]));
        prop_assert!((conformal_factor_f64(&mf, m).unwrap() - u).abs() <= 1e-12 * u.max(1.0));
    }

    #[test]
    fn betti_numbers_are_relabeling_invariant(perm in random_permutation(7), which in any::<bool>()) {
        let facets = if which { common::torus7() } else { common::octahedron() };
        let n = if which { 7 } else { 6 };
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < n).collect();
        let k = SimplicialComplex::build(None, &facets).unwrap();
        let relabeled = k.relabel(&perm).unwrap();
        let a = CohomologyData::compute(Arc::new(k)).unwrap();
        let b = CohomologyData::compute(Arc::new(relabeled)).unwrap();
        prop_assert_eq!(a.betti(), b.betti());
    }

    #[test]
    fn invariant_projector_is_idempotent(perm in random_permutation(6), k in prop::sample::select(vec![1usize, 2, 3, 6])) {
        // relabeled bipyramid over a hexagon with a rotation of order k
        let facets = lefschetz_core::catalog::bipyramid_facets(6);
        let step = 6 / k;
        let rotation: Vec<usize> = (0..6).map(|v| (v + step) % 6).chain([6, 7]).collect();
        let perm: Vec<usize> = perm.into_iter().chain([6, 7]).collect();
        let complex = SimplicialComplex::build(None, &facets).unwrap().relabel(&perm).unwrap();
        let inv_perm = {
            let mut out = vec![0; 8];
            for (i, &p) in perm.iter().enumerate() {
                out[p] = i;
            }
            out
        };
        // conjugate the rotation into the new labels
        let conj: Vec<usize> = (0..8).map(|v| perm[rotation[inv_perm[v]]]).collect();
        let action = SimplicialGroupAction::generated(8, &[conj], 16).unwrap();
        prop_assert_eq!(action.order(), k);
        let data = CohomologyData::compute(Arc::new(complex)).unwrap();
        let inv = invariant_cohomology(&data, &action).unwrap();
        for d in &inv.degrees {
            prop_assert!(projector_is_idempotent(&d.projector));
        }
        prop_assert_eq!(inv.betti(), vec![1, 0, 1]);
    }
}
