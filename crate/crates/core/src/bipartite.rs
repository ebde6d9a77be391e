//! The incidence configuration of `K_{n,m}` and its Gale dual.
//!
//! Columns are edges in row-major order: edge `(i, j)` (0-based, left node
//! `i`, right node `j`) is column `i * m + j`. Rows `0..n` are the left
//! nodes, rows `n..n+m` the right nodes.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{det, kernel_lattice, rank, row_basis, EchelonBasis, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteConfig {
    n: usize,
    m: usize,
    b: IntegerMatrix,
}

impl BipartiteConfig {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.b
    }

    pub fn num_edges(&self) -> usize {
        self.n * self.m
    }

    pub fn num_nodes(&self) -> usize {
        self.n + self.m
    }

    #[inline]
    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.m);
        i * self.m + j
    }

    #[inline]
    pub fn edge(&self, col: usize) -> (usize, usize) {
        (col / self.m, col % self.m)
    }

    /// `B * c` for an edge weighting `c`: left node sums then right node sums.
    pub fn apply(&self, c: &[i64]) -> Result<Vec<BigInt>> {
        self.b.mul_vec_i64(c)
    }

    /// Nonnegative integer edge weights with prescribed node sums, built by
    /// the northwest-corner rule. Requires `sum(left) == sum(right)` and all
    /// sums nonnegative.
    pub fn transport(&self, left: &[i64], right: &[i64]) -> Result<Vec<i64>> {
        if left.len() != self.n || right.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.n + self.m,
                found: left.len() + right.len(),
            });
        }
        if left.iter().chain(right).any(|&x| x < 0)
            || left.iter().sum::<i64>() != right.iter().sum::<i64>()
        {
            return Err(Error::InvalidArgument(
                "node sums must be nonnegative and balanced".into(),
            ));
        }
        let (mut l, mut r) = (left.to_vec(), right.to_vec());
        let mut c = vec![0i64; self.num_edges()];
        let (mut i, mut j) = (0, 0);
        while i < self.n && j < self.m {
            let t = l[i].min(r[j]);
            c[self.edge_index(i, j)] = t;
            l[i] -= t;
            r[j] -= t;
            if l[i] == 0 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(c)
    }
}

/// The 0/1 node-edge incidence matrix of `K_{n,m}`.
pub fn incidence_matrix(n: usize, m: usize) -> Result<BipartiteConfig> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "K_{{{n},{m}}} needs both sides nonempty"
        )));
    }
    let mut b = IntegerMatrix::zeros(n + m, n * m);
    for i in 0..n {
        for j in 0..m {
            let col = i * m + j;
            b.set(i, col, BigInt::one());
            b.set(n + j, col, BigInt::one());
        }
    }
    Ok(BipartiteConfig { n, m, b })
}

/// `K_{2k-1, 2k+1}`.
pub fn family_instance(k: usize) -> Result<BipartiteConfig> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    incidence_matrix(2 * k - 1, 2 * k + 1)
}

/// A configuration together with a Gale dual: the rows of `a` are a
/// saturated basis of the integer kernel of `b`, in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleConfig {
    a: IntegerMatrix,
    b: IntegerMatrix,
}

impl GaleConfig {
    /// Pairs an explicit dual `a` with `b`; only `B A^T = 0` is checked,
    /// not saturation or rank.
    pub fn from_parts(a: IntegerMatrix, b: IntegerMatrix) -> Result<Self> {
        if a.cols() != b.cols() {
            return Err(Error::DimensionMismatch {
                expected: b.cols(),
                found: a.cols(),
            });
        }
        if !b.mul(&a.transpose())?.is_zero() {
            return Err(Error::InvalidArgument(
                "rows of A are not in the kernel of B".into(),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.a
    }

    pub fn primal(&self) -> &IntegerMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

pub fn gale_transform(cfg: &BipartiteConfig) -> GaleConfig {
    gale_transform_of(cfg.matrix())
}

pub fn gale_transform_of(b: &IntegerMatrix) -> GaleConfig {
    GaleConfig {
        a: kernel_lattice(b),
        b: b.clone(),
    }
}

/// True iff every `r x r` minor is `0` or `±1`, where `r = rank(M)`.
/// Exhaustive; see [`sample_maximal_minors`] for large matrices.
pub fn is_unimodular(m: &IntegerMatrix) -> bool {
    let r = rank(m);
    if r == 0 {
        return true;
    }
    for rows in (0..m.rows()).combinations(r) {
        let sub = m.select_rows(&rows);
        for cols in (0..m.cols()).combinations(r) {
            let d = det(&sub.select_columns(&cols)).expect("square");
            if d.abs() > BigInt::one() {
                return false;
            }
        }
    }
    true
}

/// Number of `r x r` minors that [`is_unimodular`] would evaluate.
pub fn maximal_minor_count(m: &IntegerMatrix) -> Option<u128> {
    let r = rank(m) as u128;
    binomial(m.rows() as u128, r)?.checked_mul(binomial(m.cols() as u128, r)?)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorSample {
    pub checked: usize,
    pub nonzero: usize,
    /// `(row subset, column subset, value)` for minors outside `{0, ±1}`
    pub violations: Vec<(Vec<usize>, Vec<usize>, String)>,
}

impl MinorSample {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates `samples` uniformly random `r x r` minors.
pub fn sample_maximal_minors<R: Rng>(
    m: &IntegerMatrix,
    samples: usize,
    rng: &mut R,
) -> MinorSample {
    let r = rank(m);
    let mut out = MinorSample {
        checked: 0,
        nonzero: 0,
        violations: Vec::new(),
    };
    if r == 0 {
        return out;
    }
    for _ in 0..samples {
        let mut rows = sample(rng, m.rows(), r).into_vec();
        let mut cols = sample(rng, m.cols(), r).into_vec();
        rows.sort_unstable();
        cols.sort_unstable();
        let d = det(&m.select_rows(&rows).select_columns(&cols)).expect("square");
        out.checked += 1;
        if !d.is_zero() {
            out.nonzero += 1;
        }
        if d.abs() > BigInt::one() {
            out.violations.push((rows, cols, d.to_string()));
        }
    }
    out
}

/// Column subsets of size `rank(M)` that are linearly independent, in
/// lexicographic order. For an incidence matrix these are spanning trees.
pub fn bases_of(m: &IntegerMatrix) -> impl Iterator<Item = Vec<usize>> + '_ {
    let rows = row_basis(m);
    let r = rows.len();
    let reduced = m.select_rows(&rows);
    (0..m.cols()).combinations(r).filter(move |cols| {
        !det(&reduced.select_columns(cols))
            .expect("square")
            .is_zero()
    })
}

pub fn bases(cfg: &BipartiteConfig) -> impl Iterator<Item = Vec<usize>> + '_ {
    bases_of(cfg.matrix())
}

/// A circuit of a column configuration with its primitive signed
/// dependence. The lowest support index carries a positive coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Circuit {
    pub support: Vec<usize>,
    pub coefficients: Vec<i64>,
}

impl Circuit {
    /// Normalizes sign so the lowest index is positive.
    pub fn from_dependence(support: Vec<usize>, mut coefficients: Vec<i64>) -> Self {
        debug_assert_eq!(support.len(), coefficients.len());
        let mut pairs: Vec<(usize, i64)> =
            support.into_iter().zip(coefficients.drain(..)).collect();
        pairs.sort_unstable();
        if pairs.first().is_some_and(|&(_, c)| c < 0) {
            for p in pairs.iter_mut() {
                p.1 = -p.1;
            }
        }
        let (support, coefficients) = pairs.into_iter().unzip();
        Self {
            support,
            coefficients,
        }
    }

    pub fn positive_part(&self) -> Vec<usize> {
        self.signed_part(true)
    }

    pub fn negative_part(&self) -> Vec<usize> {
        self.signed_part(false)
    }

    fn signed_part(&self, positive: bool) -> Vec<usize> {
        self.support
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, &c)| (c > 0) == positive)
            .map(|(&s, _)| s)
            .collect()
    }

    /// The same circuit with the opposite dependence sign.
    pub fn negated(&self) -> (Vec<usize>, Vec<usize>) {
        (self.negative_part(), self.positive_part())
    }

    /// The full dependence vector over `n` columns.
    pub fn dense(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for (&s, &c) in self.support.iter().zip(&self.coefficients) {
            v[s] = c;
        }
        v
    }
}

/// All circuits with support size at most `max_support`, sorted by
/// (size, support). Supports are enumerated in increasing size; this is
/// exponential in the number of columns and meant for desk-scale inputs.
pub fn circuits(m: &IntegerMatrix, max_support: usize) -> Result<Vec<Circuit>> {
    let rows = row_basis(m);
    let reduced = m.select_rows(&rows);
    let r = rows.len();
    let max_support = max_support.min(r + 1).min(m.cols());
    let columns: Vec<Vec<BigInt>> = (0..m.cols()).map(|j| reduced.column(j)).collect();
    let mut found = Vec::new();
    for size in 1..=max_support {
        for support in (0..m.cols()).combinations(size) {
            let mut eb = EchelonBasis::new(r);
            let mut independent_prefix = true;
            for &j in &support[..size - 1] {
                if !eb.insert(columns[j].clone()) {
                    independent_prefix = false;
                    break;
                }
            }
            // a circuit minus any element is independent
            if !independent_prefix || eb.insert(columns[support[size - 1]].clone()) {
                continue;
            }
            let k = kernel_lattice(&reduced.select_columns(&support));
            if k.rows() != 1 || k.row(0).iter().any(Zero::is_zero) {
                continue;
            }
            let coeffs: Vec<i64> = k
                .row(0)
                .iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("circuit coefficients")))
                .collect::<Result<_>>()?;
            found.push(Circuit::from_dependence(support, coeffs));
        }
    }
    Ok(found)
}

/// A node bipartition `S | T` of `K_{n,m}` where both sides induce
/// connected subgraphs, given by the side `S` containing left node 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bond {
    pub left_in_s: Vec<bool>,
    pub right_in_s: Vec<bool>,
}

impl Bond {
    /// Edge coefficient: `+1` for edges from `S`-left to `T`-right, `-1`
    /// for `T`-left to `S`-right, `0` for edges inside a side.
    pub fn edge_sign(&self, i: usize, j: usize) -> i64 {
        match (self.left_in_s[i], self.right_in_s[j]) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        }
    }
}

fn side_connected(left: usize, right: usize) -> bool {
    left + right == 1 || (left >= 1 && right >= 1)
}

/// All bonds (minimal edge cuts) of `K_{n,m}`. A node set induces a
/// connected subgraph iff it is a single node or meets both sides.
pub fn bonds(n: usize, m: usize) -> Vec<Bond> {
    let total = n + m;
    assert!(total <= 62, "bond enumeration limited to 62 nodes");
    let mut out = Vec::new();
    // node 0 (left) always in S
    for mask in 0u64..(1u64 << (total - 1)) {
        let in_s = |v: usize| v == 0 || (mask >> (v - 1)) & 1 == 1;
        let left_in_s: Vec<bool> = (0..n).map(in_s).collect();
        let right_in_s: Vec<bool> = (0..m).map(|j| in_s(n + j)).collect();
        let sl = left_in_s.iter().filter(|&&x| x).count();
        let sr = right_in_s.iter().filter(|&&x| x).count();
        let (tl, tr) = (n - sl, m - sr);
        if tl + tr == 0 {
            continue;
        }
        if side_connected(sl, sr) && side_connected(tl, tr) {
            out.push(Bond {
                left_in_s,
                right_in_s,
            });
        }
    }
    out.sort();
    out
}

/// Cocircuits of the column matroid of `B`, one per bond, signed by the
/// cut functional and normalized like [`Circuit`].
pub fn cocircuits(cfg: &BipartiteConfig) -> Vec<Circuit> {
    let mut out: Vec<Circuit> = bonds(cfg.n, cfg.m)
        .iter()
        .map(|bond| bond_circuit(cfg, bond))
        .collect();
    out.sort();
    out
}

pub(crate) fn bond_circuit(cfg: &BipartiteConfig, bond: &Bond) -> Circuit {
    let mut support = Vec::new();
    let mut coeffs = Vec::new();
    for i in 0..cfg.n {
        for j in 0..cfg.m {
            let s = bond.edge_sign(i, j);
            if s != 0 {
                support.push(cfg.edge_index(i, j));
                coeffs.push(s);
            }
        }
    }
    Circuit::from_dependence(support, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{is_saturated, snf_invariants};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_incidence_matrices() {
        let k11 = incidence_matrix(1, 1).unwrap();
        assert_eq!(k11.matrix(), &IntegerMatrix::from_rows(&[[1], [1]]));
        let k22 = incidence_matrix(2, 2).unwrap();
        assert_eq!(
            k22.matrix(),
            &IntegerMatrix::from_rows(&[[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, 1]])
        );
        assert!(incidence_matrix(0, 3).is_err());
    }

    #[test]
    fn k35_shape_and_rank() {
        let cfg = incidence_matrix(3, 5).unwrap();
        let b = cfg.matrix();
        assert_eq!((b.rows(), b.cols()), (8, 15));
        for j in 0..15 {
            let col = b.column(j);
            assert_eq!(col.iter().sum::<BigInt>(), BigInt::from(2));
            assert_eq!(col[..3].iter().sum::<BigInt>(), BigInt::one());
        }
        assert_eq!(rank(b), 7);
    }

    #[test]
    fn family_instances() {
        let k1 = family_instance(1).unwrap();
        assert_eq!((k1.n(), k1.m()), (1, 3));
        let k2 = family_instance(2).unwrap();
        assert_eq!((k2.n(), k2.m()), (3, 5));
        let k3 = family_instance(3).unwrap();
        assert_eq!((k3.matrix().rows(), k3.matrix().cols()), (12, 35));
        assert!(family_instance(0).is_err());
    }

    #[test]
    fn gale_of_single_row() {
        let g = gale_transform_of(&IntegerMatrix::from_rows(&[[1, 1]]));
        assert_eq!(g.matrix().rows(), 1);
        let row: Vec<i64> = g.matrix().to_i64_rows().unwrap().remove(0);
        assert!(row == vec![1, -1] || row == vec![-1, 1]);
    }

    #[test]
    fn gale_of_k35_is_exact_and_unimodular() {
        let cfg = incidence_matrix(3, 5).unwrap();
        let g = gale_transform(&cfg);
        let a = g.matrix();
        assert_eq!((a.rows(), a.cols()), (8, 15));
        assert!(a.mul(&cfg.matrix().transpose()).unwrap().is_zero());
        assert!(is_saturated(a));
        assert_eq!(snf_invariants(a).len(), 8);
        assert!(is_unimodular(a));
    }

    #[test]
    fn unimodularity_examples() {
        assert!(is_unimodular(incidence_matrix(3, 5).unwrap().matrix()));
        assert!(!is_unimodular(&IntegerMatrix::from_rows(&[[1, 1], [0, 2]])));
        assert!(is_unimodular(&IntegerMatrix::identity(3)));
    }

    #[test]
    fn minor_sampling_flags_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_maximal_minors(&IntegerMatrix::from_rows(&[[1, 1], [0, 2]]), 5, &mut rng);
        assert_eq!(s.checked, 5);
        assert!(!s.ok());
    }

    #[test]
    fn basis_counts_small() {
        assert_eq!(bases(&incidence_matrix(1, 1).unwrap()).count(), 1);
        assert_eq!(bases(&incidence_matrix(2, 2).unwrap()).count(), 4);
    }

    #[test]
    fn circuit_of_forced_dependence() {
        let m = IntegerMatrix::from_rows(&[[1, 0, 1], [0, 1, 1]]);
        let cs = circuits(&m, 3).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support, vec![0, 1, 2]);
        assert_eq!(cs[0].coefficients, vec![1, 1, -1]);
        assert_eq!(cs[0].positive_part(), vec![0, 1]);
        assert_eq!(cs[0].negative_part(), vec![2]);
        assert!(circuits(&IntegerMatrix::identity(3), 4).unwrap().is_empty());
    }

    #[test]
    fn zero_columns_are_loops() {
        let cs = circuits(&IntegerMatrix::zeros(0, 3), 1).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs
            .iter()
            .all(|c| c.support.len() == 1 && c.coefficients == [1]));
    }

    #[test]
    fn k11_has_one_cocircuit() {
        let cs = cocircuits(&incidence_matrix(1, 1).unwrap());
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support, vec![0]);
    }

    #[test]
    fn left_star_is_a_cocircuit() {
        let cfg = incidence_matrix(3, 5).unwrap();
        let stars: Vec<_> = cocircuits(&cfg)
            .into_iter()
            .filter(|c| c.support == vec![0, 1, 2, 3, 4])
            .collect();
        assert_eq!(stars.len(), 1);
        assert!(stars[0].coefficients.iter().all(|&c| c == 1));
    }

    #[test]
    fn transport_meets_margins() {
        let cfg = incidence_matrix(3, 5).unwrap();
        let c = cfg.transport(&[5, 5, 5], &[3, 3, 3, 3, 3]).unwrap();
        assert!(c.iter().all(|&x| x >= 0));
        let bc = cfg.apply(&c).unwrap();
        let expect: Vec<BigInt> = [5, 5, 5, 3, 3, 3, 3, 3].map(BigInt::from).to_vec();
        assert_eq!(bc, expect);
        assert!(cfg.transport(&[1, 1, 1], &[1, 1, 1, 1, 0]).is_err());
    }
}
