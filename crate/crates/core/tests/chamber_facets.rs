use toricfan::bipartite::{family_instance, incidence_matrix};
use toricfan::chamber::{
    all_cut_hyperplanes, central_point, chamber_facets, sign_vector, step_across, Arrangement,
};

#[test]
fn k35_central_chamber_has_thirty_facets() {
    let cfg = family_instance(2).unwrap();
    let arr = Arrangement::bonds(&cfg).unwrap();
    let p = central_point(&cfg);
    let sym = chamber_facets(&arr, &p, true).unwrap();
    let full = chamber_facets(&arr, &p, false).unwrap();
    assert_eq!(sym.total, 30);
    assert_eq!(sym.facets, full.facets);
    assert_eq!(sym.orbit_summary, full.orbit_summary);
    for h in sym.facet_planes(&arr) {
        assert_eq!(h.type_rs(), Some((2, 3)));
    }
    assert!(sym.num_lps < full.num_lps);
}

#[test]
fn non_bond_cuts_do_not_add_facets() {
    let cfg = family_instance(2).unwrap();
    let bonds = Arrangement::bonds(&cfg).unwrap();
    let all = Arrangement::bipartite(&cfg, all_cut_hyperplanes(&cfg)).unwrap();
    assert!(all.len() > bonds.len());
    let p = central_point(&cfg);
    let a = chamber_facets(&bonds, &p, true).unwrap();
    let b = chamber_facets(&all, &p, true).unwrap();
    let na: Vec<_> = a
        .facet_planes(&bonds)
        .into_iter()
        .map(|h| h.normal().to_vec())
        .collect();
    let nb: Vec<_> = b
        .facet_planes(&all)
        .into_iter()
        .map(|h| h.normal().to_vec())
        .collect();
    assert_eq!(na, nb);
}

#[test]
fn witnesses_lie_on_their_facet_only() {
    let cfg = family_instance(2).unwrap();
    let arr = Arrangement::bonds(&cfg).unwrap();
    let p = central_point(&cfg);
    let rep = chamber_facets(&arr, &p, false).unwrap();
    let center = sign_vector(&arr, &p).unwrap();
    for (&i, w) in &rep.witnesses {
        let s = sign_vector(&arr, w).unwrap();
        assert_eq!(s.0[i], 0);
        assert_eq!(center.differences(&s), vec![i]);
        let across = step_across(&arr, &p, i, w).unwrap();
        let t = sign_vector(&arr, &across).unwrap();
        assert_eq!(center.differences(&t), vec![i]);
        assert_eq!(t.0[i], -center.0[i]);
    }
}

#[test]
fn k13_chamber_is_bounded_by_three_planes() {
    let cfg = incidence_matrix(1, 3).unwrap();
    let arr = Arrangement::bonds(&cfg).unwrap();
    assert_eq!(arr.len(), 3);
    let rep = chamber_facets(&arr, &central_point(&cfg), true).unwrap();
    assert_eq!(rep.total, 3);
}

#[test]
fn symmetry_refuses_incomplete_orbits() {
    let cfg = family_instance(2).unwrap();
    let mut planes = toricfan::chamber::bond_hyperplanes(&cfg);
    planes.pop();
    let arr = Arrangement::bipartite(&cfg, planes).unwrap();
    assert!(chamber_facets(&arr, &central_point(&cfg), true).is_err());
}

#[test]
#[ignore = "several seconds in release mode; run with --ignored"]
fn k57_central_chamber_facets_are_type_34() {
    let cfg = family_instance(3).unwrap();
    let arr = Arrangement::bonds(&cfg).unwrap();
    let rep = chamber_facets(&arr, &central_point(&cfg), true).unwrap();
    assert_eq!(rep.total, 350);
    for h in rep.facet_planes(&arr) {
        assert_eq!(h.type_rs(), Some((3, 4)));
    }
}
