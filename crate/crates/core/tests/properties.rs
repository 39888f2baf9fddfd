use proptest::prelude::*;

use arboreal::linalg::Matrix;
use arboreal::quiverrep::euler::rooting_invariants;
use arboreal::treecat::generate::unrooted_trees_up_to;
use arboreal::treecat::{compose, enumerate_correspondences, leq_witness, Arb, Correspondence, RootedTree};
use arboreal::{Field, PrimeField, Rational, Rationals};

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

/// Rank by fraction-free elimination on `i128`, independent of the sparse code.
fn bareiss_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (rows, cols) = (a.len(), a[0].len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let (x, y) = (a[rank][c], a[r][c]);
                for k in 0..cols {
                    a[r][k] = a[r][k] * x - a[rank][k] * y;
                }
                let g = a[r].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                if g > 1 {
                    a[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn rank_matches_integer_elimination(m in small_matrix()) {
        let f = Rationals;
        let a = Matrix::from_i64(&f, &m);
        prop_assert_eq!(a.rank(&f), bareiss_rank(&m));
        prop_assert_eq!(a.transpose().rank(&f), a.rank(&f));
        let k = a.kernel(&f);
        prop_assert_eq!(k.ncols(), a.ncols() - a.rank(&f));
        prop_assert!(a.mul(&f, &k).is_zero());
    }

    #[test]
    fn prime_field_axioms(a in 0i64..101, b in 0i64..101, c in 0i64..101) {
        let f = PrimeField::new(101).unwrap();
        let (x, y, z) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
        prop_assert_eq!(f.sub(&f.add(&x, &y), &y), x.clone());
        match f.inv(&x) {
            Some(i) => prop_assert!(f.is_one(&f.mul(&x, &i))),
            None => prop_assert!(f.is_zero(&x)),
        }
    }

    #[test]
    fn rational_arithmetic_is_exact(n1 in -1000i64..1000, d1 in 1i64..1000, n2 in -1000i64..1000, d2 in 1i64..1000) {
        let f = Rationals;
        let (x, y) = (Rational::new(n1, d1), Rational::new(n2, d2));
        let s = f.add(&x, &y);
        prop_assert_eq!(s, Rational::new(n1 * d2 + n2 * d1, d1 * d2));
        if let Some(q) = f.div(&x, &y) {
            prop_assert_eq!(f.mul(&q, &y), x);
        }
    }
}

#[test]
fn order_is_a_partial_order_with_bottom() {
    for t in unrooted_trees_up_to(4) {
        let arb = Arb::new(&t);
        let n = arb.len();
        for i in 0..n {
            assert!(arb.leq(i, i));
            assert!(arb.leq(arb.bottom(), i));
            for j in 0..n {
                if i != j && arb.leq(i, j) {
                    assert!(!arb.leq(j, i), "{t}: antisymmetry");
                }
                for k in 0..n {
                    if arb.leq(i, j) && arb.leq(j, k) {
                        assert!(arb.leq(i, k), "{t}: transitivity");
                    }
                }
            }
        }
    }
}

#[test]
fn composition_has_identities_and_stays_below() {
    for t in unrooted_trees_up_to(4) {
        let id_t = Correspondence::trivial(&t);
        for inner in enumerate_correspondences(&t) {
            let real = inner.realize(&t);
            let r = &real.image;
            assert_eq!(compose(&Correspondence::trivial(r), r, &inner, &t).unwrap(), inner);
            for outer in enumerate_correspondences(r) {
                let c = compose(&outer, r, &inner, &t).unwrap();
                c.validate(&t).unwrap();
                // the composite lies above the inner map, witnessed by the outer one
                assert_eq!(leq_witness(&t, &inner, &c), Some(outer.clone()), "{t}: {}", inner.label(&t));
            }
            assert_eq!(compose(&inner, &t, &id_t, &t).unwrap(), inner);
        }
    }
}

#[test]
fn rooting_data_is_root_independent() {
    for t in unrooted_trees_up_to(6) {
        let base = rooting_invariants(&RootedTree::new(t.clone(), 0).unwrap());
        for r in 1..t.n() {
            assert_eq!(rooting_invariants(&RootedTree::new(t.clone(), r).unwrap()), base, "{t} rooted at {r}");
        }
    }
}
