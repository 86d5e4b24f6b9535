use mpqs_core::trees::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn t(s: &str) -> ComparisonTree {
    parse(s).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Catalan numbers from the convolution recurrence, independent of the
/// library's helper.
fn catalan_ref(k: usize) -> usize {
    let mut c = vec![1usize];
    for n in 1..=k {
        c.push((0..n).map(|i| c[i] * c[n - 1 - i]).sum());
    }
    c[k]
}

#[test]
fn depth_profiles() {
    assert_eq!(t("[2,1,3]").depth_profile(), &[2, 2, 2, 2]);
    assert_eq!(t("[1]").depth_profile(), &[1, 1]);
    assert_eq!(
        t("[4,3,2,1,5,6,7]").depth_profile(),
        &[4, 4, 3, 2, 2, 3, 4, 4]
    );
    // Root p3, left child p1, p2 right below p1.
    assert_eq!(t("[3,1,2]").depth_profile(), &[2, 3, 3, 1]);
}

#[test]
fn cost_examples() {
    assert_eq!(t("[2,1,3]").cost(&[1, 2, 3, 4]).unwrap(), 20);
    assert_eq!(t("[1,3,2]").cost(&[0, 0, 0, 0]).unwrap(), 0);
    assert_eq!(t("[1,2,3]").cost(&[1, 1, 1, 1]).unwrap(), 9);
    assert!(matches!(
        t("[1,2,3]").cost(&[1, 1, 1]),
        Err(TreeError::Dimension { k: 3, got: 3 })
    ));
}

#[test]
fn avg_cost_examples() {
    assert_eq!(t("[2,1,3]").avg_cost(&[1, 1, 1, 1]).unwrap(), q(2, 1));
    assert_eq!(t("[1,2,3]").avg_cost(&[3, 0, 0, 0]).unwrap(), q(1, 1));
    assert_eq!(t("[1,3,2]").avg_cost(&[1, 1, 1, 1]).unwrap(), q(9, 4));
    assert_eq!(
        t("[1,3,2]").avg_cost(&[0, 0, 0, 0]),
        Err(TreeError::EmptyGroups)
    );
}

#[test]
fn enumeration_counts_and_order() {
    for k in 1..=9 {
        let all = enumerate_trees(k).unwrap();
        assert_eq!(all.len(), catalan_ref(k), "k = {k}");
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
    assert_eq!(enumerate_trees(5).unwrap().len(), 42);
    let three: Vec<String> = enumerate_trees(3)
        .unwrap()
        .iter()
        .map(|t| t.to_string())
        .collect();
    assert_eq!(
        three,
        ["[1,2,3]", "[1,3,2]", "[2,1,3]", "[3,1,2]", "[3,2,1]"]
    );
    assert_eq!(enumerate_trees(13), Err(TreeError::KOutOfRange(13)));
}

#[test]
fn optimal_tree_examples() {
    let l1 = t("[1,3,2]");
    let l2 = t("[2,1,3]");
    let l3 = t("[3,1,2]");
    let three = vec![l1.clone(), l2.clone(), l3.clone()];
    // a_0 > a_3 and a_0 > a_1 + a_2
    let (best, _) = optimal_tree(&[9, 2, 3, 4], Some(&three)).unwrap();
    assert_eq!(best, l1);
    let (best, c) = optimal_tree(&[10, 1, 1, 1], None).unwrap();
    assert_eq!((best.to_string(), c), ("[1,2,3]".to_string(), 18));
    let (best, c) = optimal_tree(&[1, 1, 1, 1], None).unwrap();
    assert_eq!((best, c), (l2, 8));
    assert_eq!(
        optimal_tree(&[1, 1, 1, 1], Some(&[])),
        Err(TreeError::NoCandidates)
    );
}

#[test]
fn optimal_tree_restricted_matches_full_when_all_given() {
    let all = enumerate_trees(3).unwrap();
    let (a, ca) = optimal_tree(&[10, 1, 1, 1], Some(&all)).unwrap();
    let (b, cb) = optimal_tree(&[10, 1, 1, 1], None).unwrap();
    assert_eq!((a, ca), (b, cb));
}

#[test]
fn balanced_and_extremal() {
    assert_eq!(balanced_tree(3).unwrap(), t("[2,1,3]"));
    assert_eq!(balanced_tree(1).unwrap(), t("[1]"));
    assert!(balanced_tree(7)
        .unwrap()
        .depth_profile()
        .iter()
        .all(|&d| d == 3));
    assert_eq!(extremal_tree(7).unwrap(), t("[4,3,2,1,5,6,7]"));
    assert_eq!(extremal_tree(3).unwrap(), balanced_tree(3).unwrap());
    assert_eq!(extremal_tree(1).unwrap(), t("[1]"));
    for k in 1..=40 {
        let d = balanced_tree(k).unwrap().depth_profile().to_vec();
        assert!(
            d.iter().max().unwrap() - d.iter().min().unwrap() <= 1,
            "k = {k}"
        );
    }
    for k in (1..=21).step_by(2) {
        let m = (k + 2) / 2;
        assert_eq!(extremal_tree(k).unwrap().depth_profile()[0] as usize, m);
    }
}

#[test]
fn parse_format_round_trip_and_spaces() {
    assert_eq!(t("[ 2, 1 ,3 ]").to_string(), "[2,1,3]");
    for k in 1..=6 {
        for tree in enumerate_trees(k).unwrap() {
            let s = format(&tree);
            assert_eq!(format(&parse(&s).unwrap()), s);
        }
    }
}

#[test]
fn kraft_equality() {
    for k in 1..=8 {
        for tree in enumerate_trees(k).unwrap() {
            let sum: f64 = tree
                .depth_profile()
                .iter()
                .map(|&d| 0.5f64.powi(d as i32))
                .sum();
            assert_eq!(sum, 1.0, "{tree}");
        }
    }
}

#[test]
fn inorder_and_leaf_order() {
    // Locating a key between p_h and p_{h+1} must give A_h for every tree.
    for k in 1..=6 {
        let pivots: Vec<u32> = (1..=k as u32).map(|h| 10 * h).collect();
        for tree in enumerate_trees(k).unwrap() {
            for h in 0..=k {
                let x = 10 * h as u32 + 5;
                let (g, c) = tree.locate(&pivots, &x);
                assert_eq!(g, h);
                assert_eq!(c, tree.depth_profile()[h]);
            }
        }
    }
}

fn brute_min(k: usize, gv: &[u64]) -> (ComparisonTree, u64) {
    let mut best: Option<(ComparisonTree, u64)> = None;
    for tree in enumerate_trees(k).unwrap() {
        let c: u64 = tree
            .depth_profile()
            .iter()
            .zip(gv)
            .map(|(&d, &a)| d as u64 * a)
            .sum();
        if best.as_ref().is_none_or(|(_, bc)| c < *bc) {
            best = Some((tree, c));
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn dp_matches_exhaustive_including_ties(
        k in 1usize..=7,
        raw in proptest::collection::vec(0u64..6, 8),
    ) {
        let gv = &raw[..=k];
        let (bt, bc) = brute_min(k, gv);
        let (dt, dc) = optimal_tree(gv, None).unwrap();
        prop_assert_eq!(dc, bc);
        prop_assert_eq!(dt, bt);
    }

    #[test]
    fn dp_matches_exhaustive_wide_weights(
        k in 1usize..=6,
        raw in proptest::collection::vec(0u64..100_000, 7),
    ) {
        let gv = &raw[..=k];
        let (bt, bc) = brute_min(k, gv);
        let (dt, dc) = optimal_tree(gv, None).unwrap();
        prop_assert_eq!((dt, dc), (bt, bc));
    }

    #[test]
    fn cost_is_linear(
        k in 1usize..=6,
        idx in 0usize..132,
        a in proptest::collection::vec(0u64..1000, 7),
        b in proptest::collection::vec(0u64..1000, 7),
    ) {
        let trees = enumerate_trees(k).unwrap();
        let tree = &trees[idx % trees.len()];
        let sum: Vec<u64> = a[..=k].iter().zip(&b[..=k]).map(|(x, y)| x + y).collect();
        prop_assert_eq!(
            tree.cost(&sum).unwrap(),
            tree.cost(&a[..=k]).unwrap() + tree.cost(&b[..=k]).unwrap()
        );
    }

    #[test]
    fn optimal_is_lower_bound(
        k in 1usize..=6,
        raw in proptest::collection::vec(0u64..10_000, 7),
    ) {
        let gv = &raw[..=k];
        let (_, best) = optimal_tree(gv, None).unwrap();
        for tree in enumerate_trees(k).unwrap() {
            prop_assert!(best <= tree.cost(gv).unwrap());
        }
    }
}
