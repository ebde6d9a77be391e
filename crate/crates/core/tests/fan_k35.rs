use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toricfan::bipartite::{circuits, cocircuits, family_instance, gale_transform, BipartiteConfig};
use toricfan::chamber::{central_point, chamber_facets, Arrangement};
use toricfan::fan::{
    circuit_flips, coherence_certificate, cone_dimension, is_complete_regular,
    primitive_collections, triangulation_from_cost, verify_certificate, Triangulation,
};

fn find(p: &mut [usize], x: usize) -> usize {
    if p[x] != x {
        let r = find(p, p[x]);
        p[x] = r;
    }
    p[x]
}

/// Spanning trees by union-find, independent of any determinant.
fn spanning_trees(cfg: &BipartiteConfig) -> Vec<Vec<usize>> {
    let nodes = cfg.n() + cfg.m();
    (0..cfg.num_edges())
        .combinations(nodes - 1)
        .filter(|t| {
            let mut p: Vec<usize> = (0..nodes).collect();
            t.iter().all(|&e| {
                let (i, j) = cfg.edge(e);
                let (a, b) = (find(&mut p, i), find(&mut p, cfg.n() + j));
                p[a] = b;
                a != b
            })
        })
        .collect()
}

/// Edge weights of the tree flow meeting node demands, by leaf peeling.
fn tree_flow(cfg: &BipartiteConfig, tree: &[usize], demand: &[i64]) -> Vec<i64> {
    let nodes = cfg.n() + cfg.m();
    let mut residual = demand.to_vec();
    let mut remaining: Vec<usize> = tree.to_vec();
    let mut flow = vec![0i64; cfg.num_edges()];
    while !remaining.is_empty() {
        let mut degree = vec![0; nodes];
        for &e in &remaining {
            let (i, j) = cfg.edge(e);
            degree[i] += 1;
            degree[cfg.n() + j] += 1;
        }
        let pos = remaining
            .iter()
            .position(|&e| {
                let (i, j) = cfg.edge(e);
                degree[i] == 1 || degree[cfg.n() + j] == 1
            })
            .unwrap();
        let e = remaining.swap_remove(pos);
        let (i, j) = cfg.edge(e);
        let (leaf, other) = if degree[i] == 1 {
            (i, cfg.n() + j)
        } else {
            (cfg.n() + j, i)
        };
        flow[e] = residual[leaf];
        residual[other] -= residual[leaf];
        residual[leaf] = 0;
    }
    assert!(residual.iter().all(|&r| r == 0));
    flow
}

fn central() -> (
    BipartiteConfig,
    toricfan::bipartite::GaleConfig,
    Triangulation,
) {
    let cfg = family_instance(2).unwrap();
    let gale = gale_transform(&cfg);
    let t = triangulation_from_cost(&gale, &[1; 15]).unwrap();
    (cfg, gale, t)
}

#[test]
fn maximal_simplices_match_tree_oracle() {
    let (cfg, _, t) = central();
    let trees = spanning_trees(&cfg);
    assert_eq!(trees.len(), 2025);
    let demand = vec![5, 5, 5, 3, 3, 3, 3, 3];
    let selected: BTreeSet<Vec<usize>> = trees
        .into_iter()
        .filter(|tr| tr.iter().all(|&e| tree_flow(&cfg, tr, &demand)[e] > 0))
        .map(|tr| (0..15).filter(|e| !tr.contains(e)).collect())
        .collect();
    let ours: BTreeSet<Vec<usize>> = t.to_lists().into_iter().collect();
    assert_eq!(ours, selected);
    assert_eq!(t.used_generators().len(), 15);
}

#[test]
fn central_triangulation_is_regular_and_coherent() {
    let (_, gale, t) = central();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rep = is_complete_regular(&t, &gale, 1000, &mut rng).unwrap();
    assert!(rep.ok(), "{rep:?}");
    assert!(verify_certificate(&t, &gale, &vec![BigInt::from(1); 15]).unwrap());
    let cert = coherence_certificate(&t, &gale).unwrap().expect("regular");
    assert!(verify_certificate(&t, &gale, &cert.weights).unwrap());
    let holed = t.without(3).unwrap();
    let rep = is_complete_regular(&holed, &gale, 1000, &mut rng).unwrap();
    assert!(rep.uncovered > 0);
}

#[test]
fn fifty_primitive_collections_and_thirty_flips() {
    let (cfg, gale, t) = central();
    let pcs = primitive_collections(&t);
    assert_eq!(pcs.len(), 50);
    for p in &pcs {
        assert!(!t.is_face(&p.indices));
        for z in &p.indices {
            let rest: Vec<usize> = p.indices.iter().copied().filter(|x| x != z).collect();
            assert!(t.is_face(&rest));
            assert_eq!(cone_dimension(&gale, &rest), rest.len());
        }
    }
    let arr = Arrangement::bonds(&cfg).unwrap();
    let rep = chamber_facets(&arr, &central_point(&cfg), true).unwrap();
    let circ = circuits(gale.matrix(), 9).unwrap();
    let flips = circuit_flips(&t, &rep.facet_planes(&arr), &circ).unwrap();
    assert_eq!(flips.len(), 30);
    let distinct: BTreeSet<_> = flips.iter().map(|f| f.collection.clone()).collect();
    assert_eq!(distinct.len(), 30);
    let all: BTreeSet<_> = pcs.into_iter().collect();
    assert!(distinct.is_subset(&all));
}

#[test]
fn circuits_of_gale_dual_are_the_bonds() {
    let (cfg, gale, _) = central();
    let mut ours: Vec<Vec<usize>> = circuits(gale.matrix(), 9)
        .unwrap()
        .into_iter()
        .map(|c| c.support)
        .collect();
    let mut expected: Vec<Vec<usize>> = cocircuits(&cfg).into_iter().map(|c| c.support).collect();
    ours.sort();
    expected.sort();
    assert_eq!(ours, expected);
}

#[test]
fn dual_cone_intersection_is_the_bond_chamber() {
    let (cfg, gale, t) = central();
    let walls = toricfan::fan::dual_cone_walls(&gale, &t).unwrap();
    let arr = Arrangement::bipartite(&cfg, walls).unwrap();
    let rep = chamber_facets(&arr, &central_point(&cfg), false).unwrap();
    let bonds = Arrangement::bonds(&cfg).unwrap();
    let brep = chamber_facets(&bonds, &central_point(&cfg), true).unwrap();
    assert_eq!(rep.total, brep.total);
    // same planes on the span: compare edge-value sign patterns up to sign
    let pattern = |h: &toricfan::chamber::Hyperplane| -> Vec<i8> {
        let v: Vec<i8> = h.edge_values(3, 5).iter().map(|x| x.sign() as i8).collect();
        match v.iter().find(|&&x| x != 0) {
            Some(&f) if f < 0 => v.iter().map(|x| -x).collect(),
            _ => v,
        }
    };
    let a: BTreeSet<_> = rep.facet_planes(&arr).into_iter().map(pattern).collect();
    let b: BTreeSet<_> = brep.facet_planes(&bonds).into_iter().map(pattern).collect();
    assert_eq!(a, b);
}

#[test]
fn perturbed_costs_give_the_same_triangulation() {
    let (cfg, gale, t) = central();
    let arr = Arrangement::bonds(&cfg).unwrap();
    let center_signs = toricfan::chamber::sign_vector(&arr, &central_point(&cfg)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tried = 0;
    while tried < 5 {
        use rand::Rng;
        let c: Vec<i64> = (0..15).map(|_| 10 + rng.random_range(-2..=2)).collect();
        let bc = cfg.apply(&c).unwrap();
        let p = toricfan::exact::RationalVector::new(
            bc.into_iter()
                .map(num_rational::BigRational::from_integer)
                .collect(),
        );
        if toricfan::chamber::sign_vector(&arr, &p).unwrap() != center_signs {
            continue;
        }
        tried += 1;
        assert_eq!(triangulation_from_cost(&gale, &c).unwrap(), t);
    }
}
