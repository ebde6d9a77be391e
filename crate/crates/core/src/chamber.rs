//! Cut hyperplanes of `K_{n,m}` and the central chamber they bound.
//!
//! Points live in the ambient `R^{n+m}` with coordinates `(u_1..u_n;
//! v_1..v_m)`; the span of `B` is cut out by `sum(u) - sum(v) = 0`, which is
//! kept as an explicit equality rather than passing to a quotient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::{bonds, BipartiteConfig};
use crate::error::{Error, Result};
use crate::exact::{lp_feasible, LinearConstraint, LpOutcome, RationalVector};

/// A signed node bipartition `(C+, C-; D+, D-)`: `c_plus[i]` says left node
/// `i` is in `C+`, `d_plus[j]` that right node `j` is in `D+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    c_plus: Vec<bool>,
    d_plus: Vec<bool>,
}

impl Cut {
    /// Rejects the two cuts whose functional vanishes on the span of `B`.
    pub fn new(c_plus: Vec<bool>, d_plus: Vec<bool>) -> Result<Self> {
        let all_c = c_plus.iter().all(|&x| x);
        let all_d = d_plus.iter().all(|&x| x);
        let none_c = c_plus.iter().all(|&x| !x);
        let none_d = d_plus.iter().all(|&x| !x);
        if (all_c && all_d) || (none_c && none_d) {
            return Err(Error::InvalidArgument(
                "trivial cut vanishes on the span of B".into(),
            ));
        }
        Ok(Self { c_plus, d_plus })
    }

    pub fn n(&self) -> usize {
        self.c_plus.len()
    }

    pub fn m(&self) -> usize {
        self.d_plus.len()
    }

    pub fn c_plus(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.c_plus[i]).collect()
    }

    pub fn c_minus(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.c_plus[i]).collect()
    }

    pub fn d_plus(&self) -> Vec<usize> {
        (0..self.m()).filter(|&j| self.d_plus[j]).collect()
    }

    pub fn d_minus(&self) -> Vec<usize> {
        (0..self.m()).filter(|&j| !self.d_plus[j]).collect()
    }

    pub fn contains_left(&self, i: usize) -> bool {
        self.c_plus[i]
    }

    pub fn contains_right(&self, j: usize) -> bool {
        self.d_plus[j]
    }

    /// Swaps `C+ <-> C-` and `D+ <-> D-`; the functional changes sign.
    pub fn negated(&self) -> Self {
        Self {
            c_plus: self.c_plus.iter().map(|&x| !x).collect(),
            d_plus: self.d_plus.iter().map(|&x| !x).collect(),
        }
    }

    /// `(|C+|, |D+|)`
    pub fn type_rs(&self) -> (usize, usize) {
        (
            self.c_plus.iter().filter(|&&x| x).count(),
            self.d_plus.iter().filter(|&&x| x).count(),
        )
    }

    /// `sum_{C+} u - sum_{C-} u - sum_{D+} v + sum_{D-} v`
    pub fn normal(&self) -> Vec<BigInt> {
        let sign = |b: bool| BigInt::from(if b { 1 } else { -1 });
        self.c_plus
            .iter()
            .map(|&b| sign(b))
            .chain(self.d_plus.iter().map(|&b| sign(!b)))
            .collect()
    }

    /// Sign of `r*m - s*n`, the sign of the functional at the balanced
    /// point `(1/n, ..; 1/m, ..)` up to the positive factor `2/(nm)`.
    fn central_balance(&self) -> i64 {
        let (r, s) = self.type_rs();
        let lhs = (r * self.m()) as i64;
        let rhs = (s * self.n()) as i64;
        (lhs - rhs).signum()
    }

    /// The orientation used as canonical representative: positive at the
    /// balanced point, or with left node 0 in `C+` when the balanced point
    /// lies on the plane. Both criteria are preserved by relabelling nodes
    /// within each side except the fallback, which only applies when
    /// `gcd(n, m) > 1`.
    pub fn canonical(&self) -> Self {
        match self.central_balance() {
            1 => self.clone(),
            -1 => self.negated(),
            _ => {
                if self.c_plus[0] {
                    self.clone()
                } else {
                    self.negated()
                }
            }
        }
    }
}

/// A linear hyperplane `normal . x = 0` in the ambient space, optionally
/// remembering the cut it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
    cut: Option<Cut>,
}

impl Hyperplane {
    pub fn from_normal(normal: Vec<BigInt>) -> Self {
        Self { normal, cut: None }
    }

    pub fn from_i64(normal: &[i64]) -> Self {
        Self::from_normal(normal.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The canonical hyperplane of a cut (see [`Cut::canonical`]).
    pub fn from_cut(cut: &Cut) -> Self {
        let c = cut.canonical();
        Self {
            normal: c.normal(),
            cut: Some(c),
        }
    }

    /// The hyperplane of exactly this signed cut, skipping the canonical
    /// orientation.
    pub fn from_signed_cut(cut: &Cut) -> Self {
        Self {
            normal: cut.normal(),
            cut: Some(cut.clone()),
        }
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn cut(&self) -> Option<&Cut> {
        self.cut.as_ref()
    }

    pub fn type_rs(&self) -> Option<(usize, usize)> {
        self.cut.as_ref().map(Cut::type_rs)
    }

    pub fn eval(&self, p: &RationalVector) -> Result<BigRational> {
        p.dot_int(&self.normal)
    }

    /// Values on the edge vectors `e_i + e'_j`, row-major. Two cut
    /// functionals agree on the span of `B` iff these agree.
    pub fn edge_values(&self, n: usize, m: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                out.push(&self.normal[i] + &self.normal[n + j]);
            }
        }
        out
    }
}

fn canonical_order(planes: &mut [Hyperplane]) {
    planes.sort_by(|a, b| {
        a.type_rs()
            .cmp(&b.type_rs())
            .then_with(|| b.normal.cmp(&a.normal))
    });
}

/// One canonical hyperplane per bond of `K_{n,m}`, sorted by type and then
/// by normal (descending lexicographic, so earlier nodes in `C+` first).
pub fn bond_hyperplanes(cfg: &BipartiteConfig) -> Vec<Hyperplane> {
    let mut planes: Vec<Hyperplane> = bonds(cfg.n(), cfg.m())
        .into_iter()
        .map(|b| {
            let cut = Cut::new(b.left_in_s, b.right_in_s).expect("bonds are nontrivial");
            Hyperplane::from_cut(&cut)
        })
        .collect();
    dedup_on_span(&mut planes, cfg.n(), cfg.m());
    canonical_order(&mut planes);
    planes
}

/// One canonical hyperplane for every nontrivial cut, bond or not.
pub fn all_cut_hyperplanes(cfg: &BipartiteConfig) -> Vec<Hyperplane> {
    let (n, m) = (cfg.n(), cfg.m());
    let total = n + m;
    let mut planes = Vec::new();
    for mask in 0u64..(1u64 << (total - 1)) {
        let in_s = |v: usize| v == 0 || (mask >> (v - 1)) & 1 == 1;
        let c: Vec<bool> = (0..n).map(in_s).collect();
        let d: Vec<bool> = (0..m).map(|j| in_s(n + j)).collect();
        if let Ok(cut) = Cut::new(c, d) {
            planes.push(Hyperplane::from_cut(&cut));
        }
    }
    dedup_on_span(&mut planes, n, m);
    canonical_order(&mut planes);
    planes
}

fn dedup_on_span(planes: &mut Vec<Hyperplane>, n: usize, m: usize) {
    let mut seen = std::collections::HashSet::new();
    planes.retain(|h| {
        let mut key = h.edge_values(n, m);
        if key
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(Signed::is_negative)
        {
            key.iter_mut().for_each(|x| *x = -&*x);
        }
        seen.insert(key)
    });
}

/// `(1/n, ..., 1/n; 1/m, ..., 1/m)`
pub fn central_point(cfg: &BipartiteConfig) -> RationalVector {
    let (n, m) = (cfg.n() as i64, cfg.m() as i64);
    let mut v = vec![(1, n); cfg.n()];
    v.extend(std::iter::repeat_n((1, m), cfg.m()));
    RationalVector::from_fractions(&v)
}

/// A central arrangement of hyperplanes together with the linear equalities
/// of the ambient subspace it lives in.
#[derive(Clone, Debug)]
pub struct Arrangement {
    dim: usize,
    planes: Vec<Hyperplane>,
    equalities: Vec<Vec<BigInt>>,
    bipartite: Option<(usize, usize)>,
}

impl Arrangement {
    pub fn new(dim: usize, planes: Vec<Hyperplane>, equalities: Vec<Vec<BigInt>>) -> Result<Self> {
        for v in planes.iter().map(|h| &h.normal).chain(&equalities) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self {
            dim,
            planes,
            equalities,
            bipartite: None,
        })
    }

    /// Planes in `R^{n+m}` restricted to `sum(u) = sum(v)`.
    pub fn bipartite(cfg: &BipartiteConfig, planes: Vec<Hyperplane>) -> Result<Self> {
        let (n, m) = (cfg.n(), cfg.m());
        let span: Vec<BigInt> = (0..n + m)
            .map(|i| BigInt::from(if i < n { 1 } else { -1 }))
            .collect();
        let mut arr = Self::new(n + m, planes, vec![span])?;
        arr.bipartite = Some((n, m));
        Ok(arr)
    }

    pub fn bonds(cfg: &BipartiteConfig) -> Result<Self> {
        Self::bipartite(cfg, bond_hyperplanes(cfg))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.bipartite
    }

    fn check_span(&self, p: &RationalVector) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        for e in &self.equalities {
            if !p.dot_int(e)?.is_zero() {
                return Err(Error::OutsideSpan);
            }
        }
        Ok(())
    }
}

/// Signs in `{-1, 0, 1}`, one per plane in arrangement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn has_zero(&self) -> bool {
        self.0.contains(&0)
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.0.iter().position(|&s| s == 0)
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions where the two sign vectors differ.
    pub fn differences(&self, other: &SignVector) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&i| self.0[i] != other.0[i])
            .collect()
    }
}

pub fn sign_vector(arr: &Arrangement, p: &RationalVector) -> Result<SignVector> {
    arr.check_span(p)?;
    arr.planes
        .iter()
        .map(|h| {
            let v = h.eval(p)?;
            Ok(if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            })
        })
        .collect::<Result<Vec<i8>>>()
        .map(SignVector)
}

/// `C(n, r) * C(m, s)`, the number of cuts of type `(r, s)`.
pub fn type_orbit_size(n: usize, m: usize, r: usize, s: usize) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(r)) * binomial(BigInt::from(m), BigInt::from(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitEntry {
    pub r: usize,
    pub s: usize,
    pub size: usize,
    pub is_facet: bool,
}

#[derive(Clone, Debug)]
pub struct FacetReport {
    /// indices into the arrangement, ascending
    pub facets: Vec<usize>,
    /// LP witness on the relative interior of each facet that was solved for
    pub witnesses: BTreeMap<usize, RationalVector>,
    pub orbit_summary: BTreeMap<(usize, usize), (usize, bool)>,
    pub total: usize,
    pub num_lps: usize,
}

impl FacetReport {
    pub fn orbits(&self) -> Vec<OrbitEntry> {
        self.orbit_summary
            .iter()
            .map(|(&(r, s), &(size, is_facet))| OrbitEntry {
                r,
                s,
                size,
                is_facet,
            })
            .collect()
    }

    pub fn facet_planes<'a>(&self, arr: &'a Arrangement) -> Vec<&'a Hyperplane> {
        self.facets.iter().map(|&i| &arr.planes[i]).collect()
    }

    pub fn summary(&self, arr: &Arrangement, k: Option<usize>) -> FacetSummary {
        let (n, m) = arr.shape().unwrap_or((0, 0));
        FacetSummary {
            k,
            n,
            m,
            num_hyperplanes: arr.len(),
            facet_total: self.total,
            orbits: self.orbits(),
        }
    }
}

/// Serialized facet report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetSummary {
    pub k: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub num_hyperplanes: usize,
    pub facet_total: usize,
    pub orbits: Vec<OrbitEntry>,
}

/// Solves the facet LP for plane `idx` of the chamber whose interior
/// contains `p`: `{x in span, h(x) = 0, sigma_g * g(x) >= 1 for g != h}`.
/// The chamber is a cone, so the strict inequalities `> 0` may be scaled to
/// `>= 1`.
pub fn facet_witness(
    arr: &Arrangement,
    signs: &SignVector,
    idx: usize,
) -> Result<Option<RationalVector>> {
    let mut cs = Vec::with_capacity(arr.planes.len() + arr.equalities.len());
    for e in &arr.equalities {
        cs.push(LinearConstraint::eq(e.clone(), 0)?);
    }
    cs.push(LinearConstraint::eq(arr.planes[idx].normal.clone(), 0)?);
    for (g, h) in arr.planes.iter().enumerate() {
        if g == idx {
            continue;
        }
        let normal: Vec<BigInt> = if signs.0[g] > 0 {
            h.normal.clone()
        } else {
            h.normal.iter().map(|x| -x).collect()
        };
        cs.push(LinearConstraint::ge(normal, 1)?);
    }
    Ok(match lp_feasible(&cs)? {
        LpOutcome::Feasible(w) => Some(w),
        LpOutcome::Infeasible => None,
    })
}

/// Facets of the chamber containing `p` in its interior.
///
/// With `use_symmetry`, one LP is solved per `S_n x S_m` orbit of planes
/// (the orbits are the canonical types) and the answer is propagated to
/// the whole orbit. This needs `p` to be fixed by the group and every orbit
/// to be complete; both are checked.
pub fn chamber_facets(
    arr: &Arrangement,
    p: &RationalVector,
    use_symmetry: bool,
) -> Result<FacetReport> {
    let signs = sign_vector(arr, p)?;
    if let Some(z) = signs.first_zero() {
        return Err(Error::DegeneratePoint(z));
    }

    let mut orbits: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let typed = arr.planes.iter().all(|h| h.cut.is_some());
    if typed {
        for (i, h) in arr.planes.iter().enumerate() {
            orbits
                .entry(h.type_rs().expect("typed"))
                .or_default()
                .push(i);
        }
    }

    let solve: Vec<usize> = if use_symmetry {
        check_symmetric(arr, p, &orbits)?;
        orbits.values().map(|members| members[0]).collect()
    } else {
        (0..arr.planes.len()).collect()
    };
    let results: Vec<(usize, Option<RationalVector>)> = solve
        .par_iter()
        .map(|&i| facet_witness(arr, &signs, i).map(|w| (i, w)))
        .collect::<Result<_>>()?;
    let solved: BTreeMap<usize, Option<RationalVector>> = results.into_iter().collect();

    let mut is_facet = vec![false; arr.planes.len()];
    let mut orbit_summary = BTreeMap::new();
    if use_symmetry {
        for (&t, members) in &orbits {
            let f = solved[&members[0]].is_some();
            for &i in members {
                is_facet[i] = f;
            }
            orbit_summary.insert(t, (members.len(), f));
        }
    } else {
        for (&i, w) in &solved {
            is_facet[i] = w.is_some();
        }
        for (&t, members) in &orbits {
            let flags: Vec<bool> = members.iter().map(|&i| is_facet[i]).collect();
            // a mixed orbit can only happen for a point the group does not fix
            let all = flags.iter().all(|&f| f);
            orbit_summary.insert(t, (members.len(), all));
        }
    }
    let facets: Vec<usize> = (0..arr.planes.len()).filter(|&i| is_facet[i]).collect();
    let witnesses = solved
        .into_iter()
        .filter_map(|(i, w)| w.map(|w| (i, w)))
        .collect();
    Ok(FacetReport {
        total: facets.len(),
        facets,
        witnesses,
        orbit_summary,
        num_lps: solve.len(),
    })
}

fn check_symmetric(
    arr: &Arrangement,
    p: &RationalVector,
    orbits: &BTreeMap<(usize, usize), Vec<usize>>,
) -> Result<()> {
    let (n, m) = arr
        .shape()
        .ok_or_else(|| Error::SymmetryUnavailable("arrangement is not bipartite".into()))?;
    if orbits.is_empty() && !arr.planes.is_empty() {
        return Err(Error::SymmetryUnavailable(
            "planes carry no cut types".into(),
        ));
    }
    let c = p.coords();
    if c[..n].iter().any(|x| *x != c[0]) || c[n..].iter().any(|x| *x != c[n]) {
        return Err(Error::SymmetryUnavailable(
            "interior point is not fixed by S_n x S_m".into(),
        ));
    }
    for (&(r, s), members) in orbits {
        if BigInt::from(members.len()) != type_orbit_size(n, m, r, s) {
            return Err(Error::SymmetryUnavailable(format!(
                "orbit of type ({r},{s}) has {} members, expected {}",
                members.len(),
                type_orbit_size(n, m, r, s)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayHit {
    /// indices of every plane attaining the minimal crossing parameter
    pub planes: Vec<usize>,
    pub t: BigRational,
}

/// The first hyperplanes crossed along `start + t * direction`, `t > 0`.
pub fn ray_shoot(
    arr: &Arrangement,
    start: &RationalVector,
    direction: &RationalVector,
) -> Result<RayHit> {
    let signs = sign_vector(arr, start)?;
    if let Some(z) = signs.first_zero() {
        return Err(Error::DegeneratePoint(z));
    }
    if direction.len() != arr.dim {
        return Err(Error::DimensionMismatch {
            expected: arr.dim,
            found: direction.len(),
        });
    }
    let mut best: Option<RayHit> = None;
    for (i, h) in arr.planes.iter().enumerate() {
        let rate = h.eval(direction)?;
        if rate.is_zero() {
            continue;
        }
        let t = -h.eval(start)? / rate;
        if !t.is_positive() {
            continue;
        }
        match &mut best {
            Some(b) if t == b.t => b.planes.push(i),
            Some(b) if t > b.t => {}
            _ => {
                best = Some(RayHit { planes: vec![i], t });
            }
        }
    }
    best.ok_or(Error::NoCrossing)
}

/// A point of the neighbouring chamber across facet `idx`: the facet
/// witness pushed slightly against `p`, far enough to change the sign of
/// plane `idx` only.
pub fn step_across(
    arr: &Arrangement,
    p: &RationalVector,
    idx: usize,
    witness: &RationalVector,
) -> Result<RationalVector> {
    let mut largest = BigRational::zero();
    for h in &arr.planes {
        let v = h.eval(p)?.abs();
        if v > largest {
            largest = v;
        }
    }
    if largest.is_zero() {
        return Err(Error::DegeneratePoint(idx));
    }
    let eps = (BigRational::from_integer(2.into()) * largest).recip();
    Ok(witness.axpy(&-eps, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetTypeAnalysis {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    /// minimizer of the positive integer `m*r - n*s` over
    /// `1 <= r <= n-1, 0 <= s <= m`, if that range admits one
    pub minimizer: Option<(usize, usize)>,
    pub minimum: Option<i64>,
    pub unique: bool,
    /// `C(2k-1, k) * C(2k+1, k+1)`
    pub orbit_size: String,
    /// `4^k`
    pub bound_4k: String,
    pub exceeds_4k: bool,
    /// `orbit_size >= 2^((4k-1)/2)`, decided as `orbit_size^2 >= 2^(4k-1)`
    pub meets_theorem_bound: bool,
}

/// Exhaustive minimization over the admissible types for `K_{2k-1,2k+1}`.
/// The crossing along the shooting direction happens at `a = s/(m r)`, and
/// the first type crossed below `1/n` is the one with smallest positive
/// `m r - n s`.
pub fn facet_type_analysis(k: usize) -> FacetTypeAnalysis {
    assert!(k >= 1, "k must be positive");
    let (n, m) = (2 * k - 1, 2 * k + 1);
    let mut best: Option<(i64, Vec<(usize, usize)>)> = None;
    for r in 1..n {
        for s in 0..=m {
            let v = (m * r) as i64 - (n * s) as i64;
            if v <= 0 {
                continue;
            }
            match &mut best {
                Some((bv, list)) if v == *bv => list.push((r, s)),
                Some((bv, _)) if v > *bv => {}
                _ => best = Some((v, vec![(r, s)])),
            }
        }
    }
    let orbit = type_orbit_size(n, m, k, k + 1);
    let four_k = BigInt::from(4).pow(k as u32);
    let theorem_sq = BigInt::from(2).pow((4 * k - 1) as u32);
    FacetTypeAnalysis {
        k,
        n,
        m,
        minimizer: best.as_ref().map(|(_, l)| l[0]),
        minimum: best.as_ref().map(|(v, _)| *v),
        unique: best.as_ref().is_some_and(|(_, l)| l.len() == 1),
        exceeds_4k: orbit > four_k,
        meets_theorem_bound: &orbit * &orbit >= theorem_sq,
        orbit_size: orbit.to_string(),
        bound_4k: four_k.to_string(),
    }
}

/// The shooting direction `(-1, ..., -1, n-1; 0, ..., 0)`.
pub fn shooting_direction(cfg: &BipartiteConfig) -> RationalVector {
    let n = cfg.n() as i64;
    let mut d = vec![-1i64; cfg.n()];
    d[cfg.n() - 1] = n - 1;
    d.extend(std::iter::repeat_n(0, cfg.m()));
    RationalVector::from_ints(&d)
}

/// `2^(num/2)` as a check `value >= 2^(num/2)`, i.e. `value^2 >= 2^num`.
pub fn at_least_power_of_sqrt2(value: usize, num: u32) -> bool {
    BigInt::from(value).pow(2) >= BigInt::from(2).pow(num)
}

/// Whether every coordinate of a point equals one of its side's values;
/// used as a cheap invariance test for the `S_n x S_m` action.
pub fn is_balanced(p: &RationalVector, n: usize) -> bool {
    let c = p.coords();
    c[..n].iter().all(|x| *x == c[0]) && c[n..].iter().all(|x| *x == c[n])
}
