//! Randomized invariants.

mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use veerflow_core::graphs::simple_cycles;
use veerflow_core::ingest::{encode_taut_isosig, infer_veers, parse_native};
use veerflow_core::kernel::{delta_tau, fan_histogram};
use veerflow_core::perm::Perm4;
use veerflow_core::polyring::{det, Exponent, IntPoly};
use veerflow_core::veering_poly::{clique_oracle_classes, perron_from_classes, ClassEdge};
use veerflow_core::Analysis;

fn poly(terms: Vec<(i64, i64, i64)>) -> IntPoly {
    IntPoly::from_terms(2, terms.into_iter().map(|(a, b, c)| (vec![a, b], BigInt::from(c))))
}

fn arb_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((-3i64..=3, -3i64..=3, -4i64..=4), 0..6).prop_map(poly)
}

fn leibniz(m: &[Vec<IntPoly>]) -> IntPoly {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut total = IntPoly::zero_in(2);
    for p in permutations(m.len()) {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = IntPoly::constant(2, BigInt::from(if inversions % 2 == 0 { 1 } else { -1 }));
        for (r, &c) in p.iter().enumerate() {
            term = &term * &m[r][c];
        }
        total = &total + &term;
    }
    total
}

fn arb_digraph() -> impl Strategy<Value = (usize, Vec<ClassEdge>)> {
    (1usize..=8).prop_flat_map(|nv| {
        let edge = (0..nv, 0..nv, -2i64..=2, -2i64..=2).prop_map(|(tail, head, a, b)| ClassEdge {
            tail,
            head,
            class: vec![a, b],
        });
        (Just(nv), prop::collection::vec(edge, 0..=16))
    })
}

fn inverted(p: &IntPoly) -> IntPoly {
    p.map_exponents(1, |e| Exponent(vec![-e.0[0]])).normalized()
}

/// Sorted coefficients, up to an overall sign.
fn coefficient_multiset(p: &IntPoly) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = p.terms().map(|(_, c)| c.clone()).collect();
    c.sort();
    let mut neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
    neg.sort();
    c.min(neg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, IntPoly::zero_in(2));
        prop_assert_eq!(&a * &IntPoly::one_in(2), a.clone());
    }

    #[test]
    fn determinant_matches_leibniz(n in 1usize..=5, entries in prop::collection::vec(arb_poly(), 25)) {
        let m: Vec<Vec<IntPoly>> = (0..n).map(|r| entries[r * 5..r * 5 + n].to_vec()).collect();
        let d = det(&m).unwrap();
        let l = leibniz(&m);
        prop_assert_eq!(d, l);
    }

    #[test]
    fn perron_equals_clique((nv, edges) in arb_digraph()) {
        prop_assert_eq!(
            perron_from_classes(nv, 2, &edges).unwrap(),
            clique_oracle_classes(nv, 2, &edges).unwrap()
        );
    }
}

fn relabel_strategy() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    let n = common::fixture_names().len();
    (0..n, prop::collection::vec(0usize..24, 7), prop::collection::vec(any::<u64>(), 7))
        .prop_map(|(i, perms, keys)| {
            let mut order: Vec<usize> = (0..7).collect();
            order.sort_by_key(|&k| keys[k]);
            (i, perms, order)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_survive_relabelling((i, perms, order) in relabel_strategy()) {
        let f = common::load(&common::fixture_names()[i]);
        let raw = parse_native(&f.vtg).unwrap();
        let n = raw.num_tetrahedra();
        let mut tet_map: Vec<usize> = order.into_iter().filter(|&k| k < n).collect();
        tet_map.truncate(n);
        let maps: Vec<Perm4> = perms[..n].iter().map(|&p| Perm4::from_ordered_index(p).unwrap()).collect();
        let relabelled = raw.relabel(&tet_map, &maps).unwrap();
        let an = Analysis::new(infer_veers(&relabelled).unwrap()).unwrap();

        prop_assert_eq!(encode_taut_isosig(&relabelled), f.sig.clone());
        prop_assert_eq!(an.betti(), f.an.betti());
        let (mut t1, mut t2) = (an.model.torsion.clone(), f.an.model.torsion.clone());
        t1.sort();
        t2.sort();
        prop_assert_eq!(t1, t2);
        prop_assert_eq!(delta_tau(&an.vt), delta_tau(&f.an.vt));
        prop_assert_eq!(fan_histogram(&an.vt), fan_histogram(&f.an.vt));
        prop_assert_eq!(
            simple_cycles(&an.gamma, 8, 100_000).unwrap().len(),
            simple_cycles(&f.an.gamma, 8, 100_000).unwrap().len()
        );
        let (v, w) = (an.veering_polynomial(), f.an.veering_polynomial());
        prop_assert_eq!(v.num_terms(), w.num_terms());
        prop_assert_eq!(coefficient_multiset(&v), coefficient_multiset(&w));
        if an.betti() == 1 {
            prop_assert!(v == w || v == inverted(&w));
        }
    }
}

#[test]
fn leibniz_helper_is_correct_on_small_cases() {
    let x = poly(vec![(1, 0, 1)]);
    let y = poly(vec![(0, 1, 1)]);
    let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
    assert_eq!(leibniz(&m), &(&x * &x) - &(&y * &y));
    assert!(leibniz(&[vec![IntPoly::zero_in(2)]]).is_zero());
    assert_eq!(leibniz(&[vec![IntPoly::one_in(2)]]), IntPoly::one_in(2));
}
