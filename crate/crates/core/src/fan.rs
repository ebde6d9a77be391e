//! The coherent triangulation of a Gale configuration selected by a cost
//! vector, and the combinatorics read off from it.
//!
//! A basis `T` of `B` contributes the maximal simplex `complement(T)` of
//! `A` exactly when `B c` lies in the interior of `pos(B_T)`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::{bases_of, Circuit, GaleConfig};
use crate::chamber::Hyperplane;
use crate::error::{Error, Result};
use crate::exact::{
    det, lp_feasible, row_basis, solve_rational, unimodular_inverse, LinearConstraint, LpOutcome,
};

/// Sorted generator indices of one maximal cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Simplex {
    pub generators: Vec<usize>,
}

impl Simplex {
    pub fn new(mut generators: Vec<usize>) -> Self {
        generators.sort_unstable();
        generators.dedup();
        Self { generators }
    }
}

fn mask_of(set: &[usize]) -> u128 {
    set.iter().fold(0u128, |m, &i| m | (1u128 << i))
}

fn members(mask: u128) -> Vec<usize> {
    (0..128).filter(|&i| (mask >> i) & 1 == 1).collect()
}

/// A simplicial complex on generators `0..num_generators`, given by its
/// maximal simplices. Faces are stored as bitmasks, so at most 128
/// generators are supported.
#[derive(Clone, Debug)]
pub struct Triangulation {
    num_generators: usize,
    maximal: Vec<Simplex>,
    /// bases of the primal configuration whose complements are `maximal`,
    /// when the complex came from a cost vector
    dual_bases: Vec<Vec<usize>>,
    faces: HashSet<u128>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.num_generators == other.num_generators && self.maximal == other.maximal
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    pub fn new(num_generators: usize, maximal: Vec<Vec<usize>>) -> Result<Self> {
        if num_generators > 128 {
            return Err(Error::InvalidArgument(format!(
                "{num_generators} generators exceed the 128 supported"
            )));
        }
        if maximal.is_empty() {
            return Err(Error::InvalidArgument(
                "a triangulation needs a simplex".into(),
            ));
        }
        let mut simplices: Vec<Simplex> = maximal.into_iter().map(Simplex::new).collect();
        if let Some(bad) = simplices
            .iter()
            .flat_map(|s| &s.generators)
            .find(|&&g| g >= num_generators)
        {
            return Err(Error::InvalidArgument(format!(
                "generator {bad} out of range"
            )));
        }
        simplices.sort();
        simplices.dedup();
        let mut faces = HashSet::new();
        for s in &simplices {
            let full = mask_of(&s.generators);
            // enumerate submasks
            let mut sub = full;
            loop {
                faces.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & full;
            }
        }
        Ok(Self {
            num_generators,
            maximal: simplices,
            dual_bases: Vec::new(),
            faces,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn dual_bases(&self) -> &[Vec<usize>] {
        &self.dual_bases
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_face(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| i < self.num_generators) && self.faces.contains(&mask_of(set))
    }

    /// Generators appearing in some maximal simplex.
    pub fn used_generators(&self) -> BTreeSet<usize> {
        self.maximal
            .iter()
            .flat_map(|s| s.generators.iter().copied())
            .collect()
    }

    /// A copy without the `idx`-th maximal simplex.
    pub fn without(&self, idx: usize) -> Result<Self> {
        let rest: Vec<Vec<usize>> = self
            .maximal
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, s)| s.generators.clone())
            .collect();
        Self::new(self.num_generators, rest)
    }

    /// Maximal simplices as sorted index lists, for export.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|s| s.generators.clone()).collect()
    }
}

/// The triangulation of `A` selected by cost `c` on the columns of `B`.
pub fn triangulation_from_cost(gale: &GaleConfig, c: &[i64]) -> Result<Triangulation> {
    let b = gale.primal();
    if c.len() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: b.cols(),
            found: c.len(),
        });
    }
    let rows = row_basis(b);
    let reduced = b.select_rows(&rows);
    let target = reduced.mul_vec_i64(c)?;
    let all_bases: Vec<Vec<usize>> = bases_of(b).collect();
    let verdicts: Vec<bool> = all_bases
        .par_iter()
        .map(|basis| {
            let lambda = solve_rational(&reduced.select_columns(basis), &target)?;
            if lambda.coords().iter().any(Zero::is_zero) {
                return Err(Error::BoundaryCost(basis.clone()));
            }
            Ok(lambda.all_positive())
        })
        .collect::<Result<_>>()?;
    let n = b.cols();
    let mut maximal = Vec::new();
    let mut dual_bases = Vec::new();
    for (basis, keep) in all_bases.into_iter().zip(verdicts) {
        if keep {
            maximal.push((0..n).filter(|j| !basis.contains(j)).collect());
            dual_bases.push(basis);
        }
    }
    let mut t = Triangulation::new(n, maximal)?;
    dual_bases.sort_by_key(|bs| {
        let comp: Vec<usize> = (0..n).filter(|j| !bs.contains(j)).collect();
        t.maximal
            .binary_search(&Simplex::new(comp))
            .unwrap_or(usize::MAX)
    });
    t.dual_bases = dual_bases;
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub num_simplices: usize,
    /// `(simplex, determinant)` for maximal simplices with `|det| != 1`
    pub det_violations: Vec<(Vec<usize>, String)>,
    pub trials: usize,
    /// sampled vectors contained in no maximal cone
    pub uncovered: usize,
    /// sampled vectors in the interior of more than one maximal cone
    pub overlapping: usize,
    /// samples discarded because they hit a cone boundary
    pub resampled: usize,
}

impl RegularityReport {
    pub fn ok(&self) -> bool {
        self.det_violations.is_empty() && self.uncovered == 0 && self.overlapping == 0
    }
}

/// Determinant test on every maximal cone plus a sampled completeness and
/// proper-intersection test: each random integer vector must lie in the
/// interior of exactly one maximal cone.
pub fn is_complete_regular<R: Rng>(
    t: &Triangulation,
    gale: &GaleConfig,
    trials: usize,
    rng: &mut R,
) -> Result<RegularityReport> {
    let a = gale.matrix();
    let d = a.rows();
    let mut report = RegularityReport {
        num_simplices: t.maximal.len(),
        det_violations: Vec::new(),
        trials,
        uncovered: 0,
        overlapping: 0,
        resampled: 0,
    };
    let mut inverses: Vec<Vec<Vec<i128>>> = Vec::new();
    for s in &t.maximal {
        if s.generators.len() != d {
            report
                .det_violations
                .push((s.generators.clone(), "not square".into()));
            continue;
        }
        let sq = a.select_columns(&s.generators);
        let dv = det(&sq)?;
        if dv.abs() != BigInt::from(1) {
            report
                .det_violations
                .push((s.generators.clone(), dv.to_string()));
            continue;
        }
        let inv = unimodular_inverse(&sq)?.expect("unit determinant");
        let rows = inv
            .to_i64_rows()
            .ok_or(Error::Overflow("cone inverse"))?
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        inverses.push(rows);
    }
    if !report.det_violations.is_empty() {
        return Ok(report);
    }
    const RANGE: i64 = 1_000;
    const MAX_RESAMPLE: usize = 100;
    for _ in 0..trials {
        let mut attempts = 0;
        loop {
            let v: Vec<i128> = (0..d)
                .map(|_| rng.random_range(-RANGE..=RANGE) as i128)
                .collect();
            let mut hits = 0;
            let mut boundary = false;
            for inv in &inverses {
                let mut positive = true;
                for row in inv {
                    let lam: i128 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                    if lam == 0 {
                        boundary = true;
                    }
                    if lam <= 0 {
                        positive = false;
                    }
                }
                if positive {
                    hits += 1;
                }
            }
            if boundary && attempts < MAX_RESAMPLE {
                attempts += 1;
                report.resampled += 1;
                continue;
            }
            match hits {
                0 => report.uncovered += 1,
                1 => {}
                _ => report.overlapping += 1,
            }
            break;
        }
    }
    Ok(report)
}

/// Heights `w`, one per generator, inducing the triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCertificate {
    pub weights: Vec<BigInt>,
}

/// `(normal, j)` pairs: `w_j - phi_sigma(a_j)`, scaled to integers.
fn convexity_rows(t: &Triangulation, gale: &GaleConfig) -> Result<Vec<Vec<BigInt>>> {
    let a = gale.matrix();
    let n = a.cols();
    let mut out = Vec::new();
    for s in &t.maximal {
        let sq = a.select_columns(&s.generators);
        for j in (0..n).filter(|j| !s.generators.contains(j)) {
            // a_j = sum mu_i a_{sigma_i}
            let mu = solve_rational(&sq, &a.column(j))?;
            let den = mu.common_denominator();
            let mut row = vec![BigInt::zero(); n];
            row[j] = den.clone();
            for (&g, q) in s.generators.iter().zip(mu.coords()) {
                row[g] -= q.numer() * (&den / q.denom());
            }
            out.push(row);
        }
    }
    Ok(out)
}

/// Checks `w_j > phi_sigma(a_j)` for every maximal simplex `sigma` and
/// generator `j` outside it, with `phi_sigma` the linear interpolation of
/// `w` on `sigma`.
pub fn verify_certificate(t: &Triangulation, gale: &GaleConfig, w: &[BigInt]) -> Result<bool> {
    if w.len() != gale.matrix().cols() {
        return Err(Error::DimensionMismatch {
            expected: gale.matrix().cols(),
            found: w.len(),
        });
    }
    for row in convexity_rows(t, gale)? {
        let v: BigInt = row.iter().zip(w).map(|(x, y)| x * y).sum();
        if !v.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves for heights with unit convexity gaps; `None` means the complex
/// is not regular (or not a triangulation at all).
pub fn coherence_certificate(
    t: &Triangulation,
    gale: &GaleConfig,
) -> Result<Option<SupportCertificate>> {
    let rows = convexity_rows(t, gale)?;
    let n = gale.matrix().cols();
    if rows.is_empty() {
        return Ok(Some(SupportCertificate {
            weights: vec![BigInt::zero(); n],
        }));
    }
    let cs = rows
        .into_iter()
        .map(|r| LinearConstraint::ge(r, 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(match lp_feasible(&cs)? {
        LpOutcome::Infeasible => None,
        LpOutcome::Feasible(w) => {
            let scale = w.common_denominator();
            let weights: Vec<BigInt> = w
                .coords()
                .iter()
                .map(|q| q.numer() * (&scale / q.denom()))
                .collect();
            debug_assert!(verify_certificate(t, gale, &weights).unwrap_or(false));
            Some(SupportCertificate { weights })
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimitiveCollection {
    pub indices: Vec<usize>,
}

/// Minimal non-faces, by increasing size then lexicographically.
pub fn primitive_collections(t: &Triangulation) -> Vec<PrimitiveCollection> {
    let n = t.num_generators;
    let max_size = t
        .maximal
        .iter()
        .map(|s| s.generators.len())
        .max()
        .unwrap_or(0)
        + 1;
    let mut out = Vec::new();
    let mut layer: Vec<u128> = vec![0];
    for _ in 0..max_size.min(n) {
        // candidates are F + {j} with F a face of size-1 and j above max(F)
        let found: Vec<(Vec<u128>, Vec<u128>)> = layer
            .par_iter()
            .map(|&f| {
                let top = if f == 0 {
                    0
                } else {
                    128 - f.leading_zeros() as usize
                };
                let mut primitive = Vec::new();
                let mut next_faces = Vec::new();
                for j in top..n {
                    let cand = f | (1u128 << j);
                    if t.faces.contains(&cand) {
                        next_faces.push(cand);
                    } else if all_facets_are_faces(t, cand) {
                        primitive.push(cand);
                    }
                }
                (primitive, next_faces)
            })
            .collect();
        let mut next = Vec::new();
        for (p, f) in found {
            out.extend(p);
            next.extend(f);
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let mut cols: Vec<PrimitiveCollection> = out
        .into_iter()
        .map(|m| PrimitiveCollection {
            indices: members(m),
        })
        .collect();
    cols.sort_by(|a, b| {
        a.indices
            .len()
            .cmp(&b.indices.len())
            .then_with(|| a.indices.cmp(&b.indices))
    });
    cols
}

fn all_facets_are_faces(t: &Triangulation, set: u128) -> bool {
    let mut rest = set;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        if !t.faces.contains(&(set & !bit)) {
            return false;
        }
        rest &= !bit;
    }
    true
}

/// The circuit dual to a chamber facet, oriented so that `t_+(Z)` lies in
/// the triangulation, together with its positive part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitFlip {
    pub circuit: Circuit,
    pub facet: Hyperplane,
    pub collection: PrimitiveCollection,
}

fn signed_edges(h: &Hyperplane) -> Result<(Vec<usize>, Vec<i64>)> {
    let cut = h
        .cut()
        .ok_or_else(|| Error::InvalidArgument("facet has no cut to read edges from".into()))?;
    let vals = h.edge_values(cut.n(), cut.m());
    let mut support = Vec::new();
    let mut signs = Vec::new();
    for (e, v) in vals.iter().enumerate() {
        if !v.is_zero() {
            support.push(e);
            signs.push(if v.is_positive() { 1 } else { -1 });
        }
    }
    Ok((support, signs))
}

fn circuit_side_ok(t: &Triangulation, support: &[usize], plus: &[usize]) -> bool {
    !plus.is_empty()
        && !t.is_face(support)
        && plus.iter().all(|z| {
            let rest: Vec<usize> = support.iter().copied().filter(|x| x != z).collect();
            t.is_face(&rest)
        })
}

/// For each facet, the circuit of `A` with the facet's signed edge set as
/// support, oriented so `{Z - z : z in Z+}` are faces of `t`.
pub fn circuit_flips(
    t: &Triangulation,
    facets: &[&Hyperplane],
    circuits: &[Circuit],
) -> Result<Vec<CircuitFlip>> {
    let mut out = Vec::with_capacity(facets.len());
    for &h in facets {
        let (support, signs) = signed_edges(h)?;
        let found = circuits
            .iter()
            .find(|c| c.support == support)
            .ok_or_else(|| Error::MissingCircuit(support.clone()))?;
        let same = found
            .coefficients
            .iter()
            .map(|c| c.signum())
            .eq(signs.iter().copied());
        let opposite = found
            .coefficients
            .iter()
            .map(|c| -c.signum())
            .eq(signs.iter().copied());
        if !same && !opposite {
            return Err(Error::Invariant(format!(
                "circuit on {support:?} has signs inconsistent with its facet"
            )));
        }
        let plus = found.positive_part();
        let minus = found.negative_part();
        let forward = circuit_side_ok(t, &support, &plus);
        let backward = circuit_side_ok(t, &support, &minus);
        let (circuit, positive) = match (forward, backward) {
            (true, false) => (found.clone(), plus),
            (false, true) => (
                Circuit {
                    support: found.support.clone(),
                    coefficients: found.coefficients.iter().map(|c| -c).collect(),
                },
                minus,
            ),
            (false, false) => return Err(Error::OrientationFailure(support)),
            (true, true) => {
                return Err(Error::Invariant(format!(
                    "both orientations of circuit {support:?} fit the triangulation"
                )))
            }
        };
        out.push(CircuitFlip {
            circuit,
            facet: h.clone(),
            collection: PrimitiveCollection { indices: positive },
        });
    }
    Ok(out)
}

/// Rank of the generators in `set` inside `A`; the dimension of the cone
/// they span.
pub fn cone_dimension(gale: &GaleConfig, set: &[usize]) -> usize {
    crate::exact::rank(&gale.matrix().select_columns(set).transpose())
}

/// Whether `pos(B_T)` over all dual bases, intersected, contains `x` in its
/// interior; a cheap consistency test of the basis sweep.
pub fn dual_cones_contain(gale: &GaleConfig, t: &Triangulation, x: &[BigInt]) -> Result<bool> {
    let b = gale.primal();
    let rows = row_basis(b);
    let reduced = b.select_rows(&rows);
    let target: Vec<BigInt> = rows.iter().map(|&i| x[i].clone()).collect();
    for basis in &t.dual_bases {
        let lambda = solve_rational(&reduced.select_columns(basis), &target)?;
        if !lambda.all_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The facet-normal hyperplanes `{x : lambda_e(x) = 0}` of every dual basis
/// cone, which bound the chamber the triangulation corresponds to.
pub fn dual_cone_walls(gale: &GaleConfig, t: &Triangulation) -> Result<Vec<Hyperplane>> {
    let b = gale.primal();
    let rows = row_basis(b);
    let reduced = b.select_rows(&rows);
    let r = rows.len();
    let mut seen = BTreeSet::new();
    for basis in &t.dual_bases {
        let sq = reduced.select_columns(basis);
        for e in 0..r {
            // row e of sq^{-1}, obtained by solving sq^T y = e_e
            let mut unit = vec![BigInt::zero(); r];
            unit[e] = BigInt::from(1);
            let y = solve_rational(&sq.transpose(), &unit)?;
            let mut full = vec![BigInt::zero(); b.rows()];
            let prim = y.primitive_integer();
            for (k, &i) in rows.iter().enumerate() {
                full[i] = prim[k].clone();
            }
            seen.insert(full);
        }
    }
    Ok(seen.into_iter().map(Hyperplane::from_normal).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::gale_transform_of;
    use crate::exact::IntegerMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line() -> GaleConfig {
        gale_transform_of(&IntegerMatrix::from_rows(&[[1, 1]]))
    }

    #[test]
    fn line_fan() {
        let g = line();
        let t = triangulation_from_cost(&g, &[1, 1]).unwrap();
        assert_eq!(t.to_lists(), vec![vec![0], vec![1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = is_complete_regular(&t, &g, 50, &mut rng).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert!(verify_certificate(&t, &g, &[1.into(), 1.into()]).unwrap());
        assert!(coherence_certificate(&t, &g).unwrap().is_some());
        let pc = primitive_collections(&t);
        assert_eq!(
            pc,
            vec![PrimitiveCollection {
                indices: vec![0, 1]
            }]
        );
    }

    #[test]
    fn deleted_cone_leaves_a_hole() {
        let g = line();
        let t = triangulation_from_cost(&g, &[1, 1])
            .unwrap()
            .without(0)
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rep = is_complete_regular(&t, &g, 50, &mut rng).unwrap();
        assert!(rep.uncovered > 0);
    }

    #[test]
    fn overlapping_cones_have_no_certificate() {
        let g = GaleConfig::from_parts(
            IntegerMatrix::from_rows(&[[1, 2, -1]]),
            IntegerMatrix::from_rows(&[[2, -1, 0], [1, 0, 1]]),
        )
        .unwrap();
        let t = Triangulation::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(coherence_certificate(&t, &g).unwrap().is_none());
    }

    #[test]
    fn primitive_collections_of_product_of_lines() {
        let t =
            Triangulation::new(4, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap();
        let pc = primitive_collections(&t);
        assert_eq!(
            pc,
            vec![
                PrimitiveCollection {
                    indices: vec![0, 1]
                },
                PrimitiveCollection {
                    indices: vec![2, 3]
                }
            ]
        );
    }

    #[test]
    fn primitive_collection_of_projective_space() {
        for d in 1..5 {
            let maximal: Vec<Vec<usize>> = (0..=d)
                .map(|skip| (0..=d).filter(|&i| i != skip).collect())
                .collect();
            let t = Triangulation::new(d + 1, maximal).unwrap();
            assert_eq!(
                primitive_collections(&t),
                vec![PrimitiveCollection {
                    indices: (0..=d).collect()
                }]
            );
        }
    }

    #[test]
    fn faces_are_closed_under_subsets() {
        let t = Triangulation::new(4, vec![vec![0, 1, 2]]).unwrap();
        assert!(t.is_face(&[]));
        assert!(t.is_face(&[0, 2]));
        assert!(!t.is_face(&[3]));
        assert_eq!(t.num_faces(), 8);
    }

    #[test]
    fn cost_of_wrong_length_is_rejected() {
        assert!(triangulation_from_cost(&line(), &[1]).is_err());
    }
}
