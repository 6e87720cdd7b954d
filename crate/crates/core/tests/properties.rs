use std::collections::BTreeSet;

use ipgap::linalg::{LatticeElement, SupportSet};
use ipgap::model::{gamma_matrix, lawrence_lift, HierarchicalModel, SimplicialComplex};
use ipgap::opt::{enumerate_fiber, solve_ip, unit_cost};
use ipgap::pairs::{classify_pair, enumerate_standard_pairs, is_admissible, standard_pairs_of_ideal, StandardPair};
use ipgap::toric::{
    graver_basis, graver_basis_with, graver_completion, is_optimal, orient_basis, GraverOptions, TermOrder,
};
use ipgap::{Error, IntMatrix};
use proptest::prelude::*;

fn dot(c: &[i64], x: &[i64]) -> i64 {
    c.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn normalized(elements: impl IntoIterator<Item = LatticeElement>) -> BTreeSet<Vec<i64>> {
    elements.into_iter().map(|z| z.sign_normalized().into_vec()).collect()
}

/// `u ⊑ v`: same signs and `|u_i| <= |v_i|`.
fn conformal_le(u: &[i64], v: &[i64]) -> bool {
    u.iter().zip(v).all(|(&a, &b)| a == 0 || (a.signum() == b.signum() && a.abs() <= b.abs()))
}

/// Every vector of `[-r, r]^n`.
fn box_vectors(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=2, 3usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-2i64..=2, r * c).prop_map(move |d| IntMatrix::from_vec(r, c, d).unwrap())
    })
}

fn random_model() -> impl Strategy<Value = HierarchicalModel> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let levels = proptest::collection::vec(2u32..=3, n);
            let facets = proptest::collection::vec(1u32..(1 << n), 1..=3);
            (Just(n), levels, facets)
        })
        .prop_filter("at most 18 cells", |(_, levels, _)| levels.iter().product::<u32>() <= 18)
        .prop_map(|(n, levels, masks)| {
            let facets: Vec<Vec<usize>> =
                masks.iter().map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect()).collect();
            HierarchicalModel::new(SimplicialComplex::new(&facets, n).unwrap(), levels).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graver_matches_brute_force_minimal_kernel_vectors(a in small_matrix()) {
        prop_assume!(!a.has_zero_column());
        let graver = match graver_completion(&a, GraverOptions { max_elements: 5_000, ..GraverOptions::default() }) {
            Ok(g) => g,
            Err(Error::BudgetExceeded(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for g in &graver {
            prop_assert!(a.annihilates(g.as_slice()));
        }
        let got = normalized(graver.clone());
        prop_assert_eq!(got.len(), graver.len());
        for u in &got {
            for v in &got {
                prop_assert!(u == v || !conformal_le(u, v));
            }
        }
        // Every conformally minimal kernel vector in the box [-2,2]^n is a Graver element.
        let kernel: Vec<Vec<i64>> = box_vectors(a.cols(), 2)
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0) && a.annihilates(v))
            .collect();
        for v in &kernel {
            let minimal = !kernel.iter().any(|w| w != v && conformal_le(w, v));
            if minimal {
                prop_assert!(got.contains(&LatticeElement::new(v.clone()).sign_normalized().into_vec()), "missing {:?}", v);
            }
        }
    }

    #[test]
    fn lawrence_shortcut_agrees_with_completion(a in small_matrix()) {
        prop_assume!(a.cols() <= 4 && !a.has_zero_column());
        let lifted = lawrence_lift(&a);
        let opts = GraverOptions { max_elements: 5_000, ..GraverOptions::default() };
        let (fast, slow) = match (graver_basis_with(&lifted, opts), graver_completion(&lifted, opts)) {
            (Ok(f), Ok(s)) => (f, s),
            _ => return Ok(()),
        };
        prop_assert_eq!(normalized(fast.elements.iter().map(|b| b.element().clone())), normalized(slow));
    }

    #[test]
    fn standard_pairs_match_brute_force(
        gens in proptest::collection::vec(proptest::collection::vec(0i64..=3, 3), 1..=4)
    ) {
        prop_assume!(gens.iter().all(|g| g.iter().any(|&x| x > 0)));
        let pairs = standard_pairs_of_ideal(&gens, 3, 10_000).unwrap();
        let divides = |g: &[i64], x: &[i64]| g.iter().zip(x).all(|(a, b)| a <= b);

        // Standard monomials of degree <= 10 are exactly the points covered by the pairs.
        for x in box_vectors(3, 10).into_iter().filter(|x| x.iter().all(|&v| v >= 0) && x.iter().sum::<i64>() <= 10) {
            let standard = !gens.iter().any(|g| divides(g, &x));
            prop_assert_eq!(standard, pairs.iter().any(|p| p.contains_point(&x)), "{:?}", x);
        }

        // Brute force: admissible (γ, τ) with roots below the generator exponents, keep the maximal ones.
        let mut admissible = Vec::new();
        for mask in 0u32..8 {
            let free = SupportSet::new((0..3).filter(|j| mask >> j & 1 == 1));
            for root in box_vectors(3, 3).into_iter().filter(|r| r.iter().all(|&v| v >= 0)) {
                if let Ok(p) = StandardPair::new(root, free.clone()) {
                    if is_admissible(&p, &gens) {
                        admissible.push(p);
                    }
                }
            }
        }
        let maximal: BTreeSet<StandardPair> = admissible
            .iter()
            .filter(|p| !admissible.iter().any(|q| q != *p && p.contained_in(q)))
            .cloned()
            .collect();
        prop_assert_eq!(pairs.iter().cloned().collect::<BTreeSet<_>>(), maximal);
    }

    #[test]
    fn solve_ip_matches_fiber_minimum_and_optimality_test(
        model in random_model(),
        seed_table in proptest::collection::vec(0i64..=2, 18),
        cost in proptest::collection::vec(0i64..=3, 18),
    ) {
        let a = model.margin_matrix().into_matrix();
        let table = &seed_table[..a.cols()];
        let c = &cost[..a.cols()];
        let b = a.mul_vec(table).unwrap();
        let fiber = match enumerate_fiber(&a, &b, 100_000) {
            Ok(f) => f,
            Err(Error::BudgetExceeded(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(fiber.contains(&table.to_vec()));
        let best = fiber.iter().map(|x| dot(c, x)).min().unwrap();
        prop_assert_eq!(solve_ip(&a, c, &b).unwrap().value, Some(best));

        let graver = match graver_basis_with(&a, GraverOptions { max_elements: 20_000, ..GraverOptions::default() }) {
            Ok(g) => g,
            Err(Error::BudgetExceeded(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let order = TermOrder::new(c.to_vec());
        let basis = orient_basis(&graver, &order);
        for x in &fiber {
            prop_assert_eq!(is_optimal(x, &basis, &order), dot(c, x) == best, "{:?}", x);
        }
    }
}

#[test]
fn enumerated_pairs_of_gamma4_are_optimal_and_covers_are_not() {
    let a = gamma_matrix(4).unwrap();
    for j in 0..a.cols() {
        let c = unit_cost(a.cols(), j);
        let order = TermOrder::new(c.clone());
        let basis = orient_basis(&graver_basis(&a).unwrap(), &order);
        let optimal = |p: &[i64]| solve_ip(&a, &c, &a.mul_vec(p).unwrap()).unwrap().value == Some(dot(&c, p));
        for pair in enumerate_standard_pairs(&basis).unwrap() {
            let status = classify_pair(&pair, &basis).unwrap();
            assert!(status.admissible && status.standard, "{pair:?}");
            for t in 0..=4 {
                assert!(optimal(&pair.point(t)), "{pair:?} at T={t}");
            }
            for cover in pair.covers() {
                assert!((0..=8).any(|t| !optimal(&cover.point(t))), "cover {cover:?} stays optimal");
            }
        }
    }
}

#[test]
fn optimality_on_a_non_lawrence_matrix_uses_the_full_graver_set() {
    // Independence of a binary and a parity variable, with two cells per margin cell.
    let a = IntMatrix::from_text("4 8\n1 1 1 1 0 0 0 0\n0 0 0 0 1 1 1 1\n1 0 1 0 1 0 1 0\n0 1 0 1 0 1 0 1\n").unwrap();
    let c = vec![0, 2, 3, 2, 2, 1, 1, 3];
    let order = TermOrder::new(c.clone());
    let basis = orient_basis(&graver_basis(&a).unwrap(), &order);
    assert_eq!(basis.len(), 20);
    for x in [[0, 2, 0, 0, 0, 0, 5, 0], [1, 1, 0, 0, 0, 1, 4, 0]] {
        let best = solve_ip(&a, &c, &a.mul_vec(&x).unwrap()).unwrap().value.unwrap();
        assert!(dot(&c, &x) > best);
        assert!(!is_optimal(&x, &basis, &order));
    }
}
