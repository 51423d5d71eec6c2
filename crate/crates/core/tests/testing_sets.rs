use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freqcube_core::bitrades::{find_bitrade_avoiding, DEFAULT_NODE_CAP};
use freqcube_core::cubes::{
    count_cubes, enumerate_cubes, indicator_decomposition, indicator_params, is_frequency_cube, reconstruct_baseline,
    FreqParams, PartialCube, DEFAULT_CUBE_NODE_CAP,
};
use freqcube_core::testsets::{
    baseline_set, certify_supertesting, certify_testing_by_enumeration, lift_set, main_theorem_set,
    min_supertesting_search, minimal_three_cube_set, product_set, three_cube_set, MinSearchOptions,
};
use freqcube_core::{canonical_form, CubeArray, GridSig, PointSet, Symmetry};

fn params(q: usize, n: usize, k: usize, lambdas: &[u32]) -> FreqParams {
    FreqParams::new(q, n, k, lambdas.to_vec()).unwrap()
}

fn is_supertesting(set: &PointSet, k: usize) -> bool {
    let out = find_bitrade_avoiding(set.sig(), k, set, DEFAULT_NODE_CAP).unwrap();
    assert!(out.exhausted || out.witness.is_some());
    out.witness.is_none()
}

fn restriction(f: &CubeArray, idx: &[usize]) -> Vec<i32> {
    idx.iter().map(|&i| f.at(i)).collect()
}

/// Unreduced search over every subset of the given size.
fn supertesting_classes(size: usize) -> BTreeSet<PointSet> {
    let sig = GridSig::new(3, 3).unwrap();
    (0..27usize)
        .combinations(size)
        .map(|c| PointSet::from_indices(sig, c).unwrap())
        .filter(|s| is_supertesting(s, 1))
        .map(|s| canonical_form(&s).unwrap())
        .collect()
}

#[test]
fn unreduced_search_agrees_on_lines_of_3x3x3() {
    assert!(supertesting_classes(6).is_empty());
    let seven = supertesting_classes(7);
    assert_eq!(seven.len(), 10);
    assert_eq!(seven.first(), Some(&minimal_three_cube_set()));
    assert!(seven.contains(&canonical_form(&three_cube_set()).unwrap()));
    let found = min_supertesting_search(3, 3, 1, 7, &MinSearchOptions::default()).unwrap().found;
    assert_eq!(found, Some(minimal_three_cube_set()));
}

/// Smallest subset size on which restriction is injective over `family`.
fn min_testing_size(family: &[CubeArray], cells: usize) -> usize {
    (0..=cells)
        .find(|&size| {
            (0..cells).combinations(size).any(|idx| {
                let keys: HashSet<Vec<i32>> = family.iter().map(|f| restriction(f, &idx)).collect();
                keys.len() == family.len()
            })
        })
        .unwrap()
}

#[test]
fn minimum_testing_sizes_for_3x3x3_families() {
    let latin = enumerate_cubes(&params(3, 3, 1, &[1, 1, 1]), DEFAULT_CUBE_NODE_CAP).unwrap();
    assert_eq!(latin.len(), 24);
    assert_eq!(min_testing_size(&latin, 27), 4);
    let binary = enumerate_cubes(&params(3, 3, 1, &[2, 1]), DEFAULT_CUBE_NODE_CAP).unwrap();
    assert_eq!(binary.len(), 12);
    assert_eq!(min_testing_size(&binary, 27), 6);
}

#[test]
fn lifted_set_supertesting() {
    let lifted = lift_set(&three_cube_set(), 4, 1).unwrap();
    let cert = certify_supertesting(&lifted, 1, DEFAULT_NODE_CAP).unwrap();
    assert!(cert.holds());
    assert_eq!(lifted, main_theorem_set(4, 3).unwrap());
}

#[test]
fn products_of_testing_sets_are_testing() {
    let b = baseline_set(3, 2, 1).unwrap();
    let bb = product_set(&b, &b).unwrap();
    let p = params(3, 4, 1, &[1, 1, 1]);
    let cert = certify_testing_by_enumeration(&bb, &p, DEFAULT_CUBE_NODE_CAP).unwrap();
    assert!(cert.holds());
    assert_eq!(cert.evidence.family_size, Some(48));

    let t = three_cube_set();
    let full = PointSet::full(GridSig::new(3, 1).unwrap());
    let tf = product_set(&t, &full).unwrap();
    assert!(certify_testing_by_enumeration(&tf, &p, DEFAULT_CUBE_NODE_CAP).unwrap().holds());
    let p21 = params(3, 4, 1, &[2, 1]);
    assert!(certify_testing_by_enumeration(&tf, &p21, DEFAULT_CUBE_NODE_CAP).unwrap().holds());
}

#[test]
fn counts_bounded_by_testing_sets() {
    let t = three_cube_set();
    for p in [params(3, 3, 1, &[1, 1, 1]), params(3, 3, 1, &[2, 1])] {
        assert!(certify_testing_by_enumeration(&t, &p, DEFAULT_CUBE_NODE_CAP).unwrap().holds());
        let count = count_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert!(count <= (p.m() as u64).pow(t.len() as u32));
    }
}

#[test]
fn baseline_round_trip_on_random_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in
        [params(3, 2, 1, &[1, 1, 1]), params(3, 3, 1, &[1, 1, 1]), params(3, 2, 1, &[2, 1]), params(2, 3, 2, &[2, 2])]
    {
        let all = enumerate_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap();
        let t = baseline_set(p.q, p.n, p.k).unwrap();
        for _ in 0..100 {
            let f = all.choose(&mut rng).unwrap();
            let partial = PartialCube::restrict(f, p.m(), &t).unwrap();
            assert_eq!(&reconstruct_baseline(&partial, &p).unwrap(), f);
        }
    }
}

#[test]
fn indicators_of_latin_cubes() {
    let p = params(3, 3, 1, &[1, 1, 1]);
    for f in enumerate_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap() {
        for (i, g) in indicator_decomposition(&f, &p).unwrap().iter().enumerate() {
            assert!(is_frequency_cube(g, &indicator_params(&p, i).unwrap()).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn supertesting_is_invariant_under_symmetry(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = three_cube_set();
        let g = Symmetry::random(t.sig(), &mut rng);
        let image = g.apply_set(&t).unwrap();
        prop_assert!(is_supertesting(&image, 1));
        prop_assert!(!is_supertesting(&image.without_nth(0), 1));
    }

    #[test]
    fn symmetry_maps_cubes_to_cubes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = params(3, 3, 1, &[2, 1]);
        let sig = p.sig().unwrap();
        let all = enumerate_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap();
        let f = all.choose(&mut rng).unwrap();
        let g = Symmetry::random(sig, &mut rng);
        let mut image = CubeArray::zeros(sig);
        for i in 0..sig.size() {
            image.set(g.apply_index(sig, i), f.at(i));
        }
        prop_assert!(all.contains(&image));
    }
}
