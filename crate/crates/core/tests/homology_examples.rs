use std::collections::HashMap;
use std::sync::Arc;

use finsub::homology::{
    connecting_map, connecting_map_regions, homology, homology_euler_characteristic, induced_map,
    les_check, les_check_masks, normalized_complex, relative_complex, Coefficients, HomologyGroup,
};
use finsub::simplicial::{
    product, quotient, sphere_model, torus_model, validate, SimplexRef, SimplicialMap,
    SimplicialSet,
};
use finsub::subsetspace::{conf_plus, exp, exp_bar, exp_based, ConfModel, SubsetSpace};

fn z(rank: usize) -> HomologyGroup {
    HomologyGroup::free(rank)
}

fn groups(
    x: &finsub::simplicial::SimplicialSet,
    reduced: bool,
    maxdeg: usize,
) -> Vec<HomologyGroup> {
    homology(
        &normalized_complex(x, reduced, maxdeg),
        Coefficients::Integer,
    )
}

#[test]
fn minimal_sphere_complex() {
    let s2 = sphere_model(2, 4);
    let c = normalized_complex(&s2.space, false, 3);
    assert_eq!(&c.dims[..3], &[1, 0, 1]);
    assert!(c.differentials.iter().all(|m| m.is_zero()));
    assert_eq!(c.euler_characteristic(), 2);
    assert_eq!(groups(&s2.space, false, 3), vec![z(1), z(0), z(1), z(0)]);
}

#[test]
fn torus_homology() {
    let t = torus_model(3);
    assert_eq!(groups(&t.space, false, 2), vec![z(1), z(2), z(1)]);
    let c = normalized_complex(&t.space, false, 2);
    assert_eq!(&c.dims[..3], &[1, 3, 2]);
    assert_eq!(homology_euler_characteristic(&c), c.euler_characteristic());
    let circle = sphere_model(1, 3);
    let torus = product(&circle.space, &circle.space);
    assert_eq!(groups(&torus, false, 2), vec![z(1), z(2), z(1)]);
}

#[test]
fn circle_quotient_keeps_reduced_homology() {
    let s1 = sphere_model(1, 3);
    let (q, _) = quotient(&s1.space, &s1.basepoint_inclusion()).unwrap();
    assert_eq!(groups(&q.space, true, 1), vec![z(0), z(1)]);
}

#[test]
fn finite_subset_spaces_of_the_circle() {
    let s1 = sphere_model(1, 4);
    let e3 = exp(&s1, 3, 4).unwrap();
    let c = normalized_complex(&e3.space, false, 3);
    assert!(c.square_zero_violation().is_none());
    assert_eq!(
        homology(&c, Coefficients::Integer),
        vec![z(1), z(0), z(0), z(1)]
    );
    assert_eq!(homology_euler_characteristic(&c), c.euler_characteristic());

    let s1 = sphere_model(1, 3);
    let e2 = exp(&s1, 2, 3).unwrap();
    assert_eq!(groups(&e2.space, false, 2), vec![z(1), z(1), z(0)]);
}

#[test]
fn three_point_subsets_of_the_two_sphere() {
    let s2 = sphere_model(2, 7);
    let e3 = exp(&s2, 3, 7).unwrap();
    let c = normalized_complex(&e3.space, false, 6);
    let h = homology(&c, Coefficients::Integer);
    assert_eq!(h[4], HomologyGroup::new(1, [2]));
    assert_eq!(h[5], z(0));
    assert_eq!(h[6], z(1));
    let q: Vec<usize> = homology(&c, Coefficients::Rational)
        .iter()
        .map(|g| g.rank)
        .collect();
    assert_eq!(q, h.iter().map(|g| g.rank).collect::<Vec<_>>());
}

#[test]
fn relative_complex_matches_quotient() {
    let s2 = sphere_model(2, 5);
    let e = exp(&s2, 2, 5).unwrap();
    let (_, based) = exp_based(&s2, 2, 5).unwrap();
    let (bar, _) = exp_bar(&s2, 2, 5).unwrap();
    let rel = homology(
        &relative_complex(&e.space, &based, 4).unwrap(),
        Coefficients::Integer,
    );
    let quo = groups(&bar.space, true, 4);
    assert_eq!(rel, quo);
    assert_eq!(quo[4], z(1));
    assert!(quo[..4].iter().all(HomologyGroup::is_zero));

    let id = SimplicialMap::identity(e.space.clone());
    let c = relative_complex(&e.space, &id, 4).unwrap();
    assert!(c.dims.iter().all(|&d| d == 0));
}

#[test]
fn based_filtration_quotient_is_the_configuration_space() {
    let s2 = sphere_model(2, 5);
    let full = SubsetSpace::build(&s2, 3, 5).unwrap();
    let (top, top_incl) = full.based_part(3).unwrap();
    let keep: Vec<Vec<bool>> = (0..=5)
        .map(|k| {
            top_incl
                .table(k)
                .iter()
                .map(|&s| full.members(k, s as usize).len() <= 2)
                .collect()
        })
        .collect();
    let (_, lower) = top.space.restrict(&keep).unwrap();
    let rel = homology(
        &relative_complex(&top.space, &lower, 4).unwrap(),
        Coefficients::Integer,
    );
    let conf = conf_plus(&s2, 2, ConfModel::Based).unwrap();
    assert_eq!(rel, groups(&conf.space, true, 4));
    assert_eq!(&rel[3..], &[z(1), z(1)]);
}

#[test]
fn identity_induces_identity() {
    let s1 = sphere_model(1, 4);
    let e3 = exp(&s1, 3, 4).unwrap();
    let m = induced_map(&SimplicialMap::identity(e3.space.clone()), 3, false).unwrap();
    assert_eq!(m.matrix, vec![vec![1.into()]]);
    assert!(m.is_iso());
}

#[test]
fn inclusion_of_bar_spaces_hits_the_torsion_class() {
    let s2 = sphere_model(2, 7);
    let full = SubsetSpace::build(&s2, 3, 7).unwrap();
    let (bar3, projection) = full.bar().unwrap();
    // exp̄_2 inside exp̄_3: the collapsed class and subsets of size <= 2 avoiding *
    let keep: Vec<Vec<bool>> = (0..=7)
        .map(|k| {
            let mut mask = vec![false; bar3.space.level_size(k)];
            mask[0] = true;
            for s in 0..full.space.space.level_size(k) {
                if !full.contains_basepoint(k, s) && full.members(k, s).len() <= 2 {
                    mask[projection.apply(k, s)] = true;
                }
            }
            mask
        })
        .collect();
    let (_, incl) = bar3.space.restrict(&keep).unwrap();
    let m = induced_map(&incl, 4, true).unwrap();
    assert_eq!(m.source, z(1));
    assert_eq!(m.target, HomologyGroup::new(0, [2]));
    assert_eq!(m.generator_images[0].order, Some(2.into()));
    assert!(m.cokernel.is_zero());
}

#[test]
fn quotient_map_keeps_the_top_class() {
    let s2 = sphere_model(2, 5);
    let e = exp(&s2, 2, 5).unwrap();
    let (_, q) = exp_bar(&s2, 2, 5).unwrap();
    assert_eq!(q.source.sizes(), e.space.sizes());
    let m = induced_map(&q, 4, true).unwrap();
    assert_eq!(m.free_rank(), 1);
}

#[test]
fn connecting_map_multiplies_by_two() {
    let s2 = sphere_model(2, 7);
    let full = SubsetSpace::build(&s2, 3, 7).unwrap();
    let region =
        |m: usize| full.mask(|k, s| full.contains_basepoint(k, s) || full.members(k, s).len() <= m);
    let d =
        connecting_map_regions(&full.space.space, Some(&region(1)), &region(2), 5, false).unwrap();
    assert_eq!(d.source.rank, 1);
    assert_eq!(d.target, z(1));
    assert_eq!(d.scalar(), Some(2.into()));
}

/// The standard simplex: level `k` holds the monotone maps `[k] -> [m]`.
fn simplex(m: usize, trunc: usize) -> SimplicialSet {
    fn monotone(k: usize, m: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..=k {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    let lo = v.last().copied().unwrap_or(0);
                    (lo..=m as u32).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }
    let levels: Vec<Vec<Vec<u32>>> = (0..=trunc).map(|k| monotone(k, m)).collect();
    let index: Vec<HashMap<Vec<u32>, u32>> = levels
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i as u32))
                .collect()
        })
        .collect();
    let faces = (0..=trunc)
        .map(|k| {
            if k == 0 {
                return vec![];
            }
            (0..=k)
                .map(|i| {
                    levels[k]
                        .iter()
                        .map(|v| {
                            let mut w = v.clone();
                            w.remove(i);
                            index[k - 1][&w]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..trunc)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    levels[k]
                        .iter()
                        .map(|v| {
                            let mut w = v.clone();
                            w.insert(j, v[j]);
                            index[k + 1][&w]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SimplicialSet::from_tables(
        levels.iter().map(Vec::len).collect(),
        faces,
        degeneracies,
        None,
    )
    .unwrap()
}

#[test]
fn connecting_map_of_a_contractible_pair_is_an_isomorphism() {
    let delta = Arc::new(simplex(2, 3));
    assert!(validate(&delta).is_valid());
    // the boundary is generated by the vertices and edges
    let seeds: Vec<SimplexRef> = (0..=1).flat_map(|k| delta.nondegenerate(k)).collect();
    let boundary = delta.closure(&seeds);
    let (_, incl) = delta.restrict(&boundary).unwrap();
    let rel = homology(
        &relative_complex(&delta, &incl, 2).unwrap(),
        Coefficients::Integer,
    );
    assert_eq!(rel, vec![z(0), z(0), z(1)]);
    let d = connecting_map(&delta, &incl, 2).unwrap();
    assert!(d.is_iso());
    let d = connecting_map(&delta, &incl, 1).unwrap();
    assert!(d.source.is_zero() && d.target.is_zero());
}

#[test]
fn connecting_map_into_reduced_degree_zero_vanishes() {
    let s1 = sphere_model(1, 3);
    let d = connecting_map(&s1.space, &s1.basepoint_inclusion(), 1).unwrap();
    assert_eq!(d.source, z(1));
    assert!(d.target.is_zero());
    assert_eq!(d.free_rank(), 0);
}

#[test]
fn exact_sequence_of_based_pair() {
    let s2 = sphere_model(2, 7);
    let e = exp(&s2, 3, 7).unwrap();
    let (_, based) = exp_based(&s2, 3, 7).unwrap();
    let report = les_check(&e.space, &based, 6).unwrap();
    assert!(report.exact, "{:?}", report.first_failure);
    let empty = les_check_masks(&e.space, None, 6).unwrap();
    assert!(empty.exact);
}

#[test]
fn restricted_spaces_share_tables() {
    let s1 = sphere_model(1, 3);
    let e = exp(&s1, 2, 3).unwrap();
    let mask = e.space.closure(&[SimplexRef::new(1, 1)]);
    let (sub, incl) = e.space.restrict(&mask).unwrap();
    assert!(Arc::ptr_eq(&incl.target, &e.space));
    assert!(sub.level_size(0) >= 1);
}
