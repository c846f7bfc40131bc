use finsub::groupcoh::{bar_cochain_complex, CoefficientAction};
use finsub::homology::{
    homology, homology_euler_characteristic, les_check_masks, normalized_complex, Coefficients,
};
use finsub::simplicial::{
    product, sphere_model, torus_model, validate, BasedSimplicialSet, SimplexRef, SimplicialSet,
};
use finsub::subsetspace::{
    conf_plus, exp, exp_bar, exp_based, subset_count, tower, ConfModel, TowerVariant,
};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn base_space(kind: u8, trunc: usize) -> BasedSimplicialSet {
    match kind {
        0 => sphere_model(1, trunc),
        1 => sphere_model(2, trunc),
        _ => torus_model(trunc),
    }
}

/// Every construction the engine offers on a small base space.
fn constructions(kind: u8, n: usize, trunc: usize) -> Vec<SimplicialSet> {
    let x = base_space(kind, trunc);
    let mut out = vec![
        x.space.as_ref().clone(),
        exp(&x, n, trunc).unwrap().space.as_ref().clone(),
    ];
    let (based, incl) = exp_based(&x, n, trunc).unwrap();
    assert!(incl.validate().is_valid());
    out.push(based.space.as_ref().clone());
    let (bar, proj) = exp_bar(&x, n, trunc).unwrap();
    assert!(proj.validate().is_valid());
    out.push(bar.space.as_ref().clone());
    for model in [ConfModel::Based, ConfModel::Bar] {
        out.push(conf_plus(&x, n, model).unwrap().space.as_ref().clone());
    }
    out
}

fn check_complex(x: &SimplicialSet) {
    let top = x.trunc().saturating_sub(1);
    for reduced in [false, true] {
        let c = normalized_complex(x, reduced, top);
        assert_eq!(c.square_zero_violation(), None);
        let full = normalized_complex(x, reduced, x.trunc());
        assert_eq!(
            homology_euler_characteristic(&full),
            full.euler_characteristic()
        );
        let z: Vec<usize> = homology(&c, Coefficients::Integer)
            .iter()
            .map(|g| g.rank)
            .collect();
        let q: Vec<usize> = homology(&c, Coefficients::Rational)
            .iter()
            .map(|g| g.rank)
            .collect();
        assert_eq!(z, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructions_satisfy_identities(kind in 0u8..3, n in 1usize..=3, trunc in 1usize..=3) {
        let n = if kind == 2 { n.min(2) } else { n };
        for space in constructions(kind, n, trunc) {
            let report = validate(&space);
            prop_assert!(report.is_valid(), "{:?}", report.violations.first());
            check_complex(&space);
        }
    }

    #[test]
    fn sphere_level_sizes(d in 1usize..=4, trunc in 0usize..=6) {
        let s = sphere_model(d, trunc);
        for k in 0..=trunc {
            prop_assert_eq!(s.space.level_size(k), binomial(k, d) + 1);
        }
        let counts = s.space.nondegenerate_counts();
        for (k, &c) in counts.iter().enumerate() {
            prop_assert_eq!(c, usize::from(k == 0 || k == d));
        }
    }

    #[test]
    fn subset_levels_are_binomial_sums(kind in 0u8..3, n in 1usize..=4, trunc in 0usize..=3) {
        let x = base_space(kind, trunc);
        let e = exp(&x, n, trunc).unwrap();
        for k in 0..=trunc {
            let universe = x.space.level_size(k);
            let expected: usize = (1..=n).map(|j| binomial(universe, j)).sum();
            prop_assert_eq!(e.space.level_size(k), expected);
            prop_assert_eq!(subset_count(universe, n), expected as u128);
        }
    }

    #[test]
    fn products_multiply_euler_characteristics(a in 1usize..=3, b in 1usize..=3, extra in 0usize..=1) {
        // all non-degenerate simplices of the product live in levels <= a + b
        let trunc = a + b + extra;
        let x = sphere_model(a, trunc);
        let y = sphere_model(b, trunc);
        let p = product(&x.space, &y.space);
        prop_assert!(validate(&p).is_valid());
        prop_assert_eq!(p.euler_characteristic(), x.space.euler_characteristic() * y.space.euler_characteristic());
        let (cx, cy, cp) = (x.space.nondegenerate_counts(), y.space.nondegenerate_counts(), p.nondegenerate_counts());
        for k in 0..=trunc {
            prop_assert!(cp[k] >= cx[k].max(cy[k]));
        }
    }

    #[test]
    fn towers_nest(kind in 0u8..2, n in 1usize..=3) {
        let x = base_space(kind, 3);
        for variant in [TowerVariant::Exp, TowerVariant::Based, TowerVariant::Bar] {
            let t = tower(&x, n, variant).unwrap();
            for incl in t.inclusions.iter().chain(&t.embeddings) {
                prop_assert!(incl.is_injective());
                prop_assert!(incl.validate().is_valid());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn long_exact_sequences_of_random_pairs(seeds in prop::collection::vec((0usize..=3, any::<prop::sample::Index>()), 0..5)) {
        let circle = sphere_model(1, 4);
        let e = exp(&circle, 3, 4).unwrap();
        let refs: Vec<SimplexRef> = seeds
            .iter()
            .map(|(k, i)| SimplexRef::new(*k, i.index(e.space.level_size(*k))))
            .collect();
        let mask = e.space.closure(&refs);
        let report = les_check_masks(&e.space, Some(&mask), 3).unwrap();
        prop_assert!(report.exact, "{:?}", report.first_failure);
    }
}

#[test]
fn cochains_square_to_zero_and_keep_euler_consistency() {
    for n in 1..=3 {
        for action in [CoefficientAction::Trivial, CoefficientAction::Sign] {
            let c = bar_cochain_complex(n, action, 2).unwrap();
            assert_eq!(c.square_zero_violation(), None);
            let expected: Vec<usize> = (0..=3)
                .map(|r| (1..=n).product::<usize>().saturating_sub(1).pow(r))
                .collect();
            assert_eq!(c.dims, expected);
        }
    }
}
