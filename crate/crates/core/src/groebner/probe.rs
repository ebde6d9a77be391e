//! Compares reduced Gröbner bases across cost vectors with the chambers
//! their images `B c` fall in: equal chambers must give equal bases and
//! different chambers different ones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::buchberger::{lattice_ideal_gb, Budget, GroebnerBasis};
use super::order::TermOrder;
use crate::bipartite::BipartiteConfig;
use crate::chamber::{
    central_point, facet_witness, ray_shoot, shooting_direction, sign_vector, step_across,
    Arrangement, SignVector,
};
use crate::error::{Error, Result};
use crate::exact::RationalVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    pub label: String,
    pub cost: Vec<i64>,
    /// index of the entry's chamber among the distinct chambers seen
    pub chamber: usize,
    /// index of the entry's basis among the distinct bases seen
    pub basis: usize,
    pub basis_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
    pub distinct_chambers: usize,
    pub distinct_bases: usize,
    pub violations: Vec<String>,
}

impl ProbeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn image(cfg: &BipartiteConfig, c: &[i64]) -> Result<RationalVector> {
    Ok(RationalVector::new(
        cfg.apply(c)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect(),
    ))
}

/// Sign vector of `B c`; a zero entry means `c` lies on a wall.
pub fn cost_signs(cfg: &BipartiteConfig, arr: &Arrangement, c: &[i64]) -> Result<SignVector> {
    let s = sign_vector(arr, &image(cfg, c)?)?;
    let zeros: Vec<usize> = (0..s.len()).filter(|&i| s.0[i] == 0).collect();
    if !zeros.is_empty() {
        return Err(Error::BoundaryCost(zeros));
    }
    Ok(s)
}

fn basis_key(gb: &GroebnerBasis) -> BTreeSet<Vec<i64>> {
    gb.elements().iter().map(|b| b.vector().to_vec()).collect()
}

/// Computes the reduced basis of the lattice ideal of the rows of `B` for
/// each cost (as a weight order refined by the default priority) and checks
/// both directions of the chamber/basis correspondence over all pairs.
pub fn groebner_fan_probe(
    cfg: &BipartiteConfig,
    arr: &Arrangement,
    costs: &[(String, Vec<i64>)],
    budget: Budget,
) -> Result<ProbeReport> {
    let mut chambers: Vec<SignVector> = Vec::new();
    let mut bases: Vec<BTreeSet<Vec<i64>>> = Vec::new();
    let mut entries = Vec::new();
    for (label, c) in costs {
        let signs = cost_signs(cfg, arr, c)?;
        let order = TermOrder::weighted(c.clone(), None)?;
        let (gb, _) = lattice_ideal_gb(cfg.matrix(), &order, budget)?;
        let key = basis_key(&gb);
        let chamber = index_of(&mut chambers, signs);
        let basis = index_of(&mut bases, key);
        entries.push(ProbeEntry {
            label: label.clone(),
            cost: c.clone(),
            chamber,
            basis,
            basis_size: gb.len(),
        });
    }
    let mut violations = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let same_chamber = a.chamber == b.chamber;
            let same_basis = a.basis == b.basis;
            if same_chamber != same_basis {
                violations.push(format!(
                    "{} and {}: {} chamber but {} basis",
                    a.label,
                    b.label,
                    if same_chamber { "same" } else { "different" },
                    if same_basis { "same" } else { "different" },
                ));
            }
        }
    }
    Ok(ProbeReport {
        entries,
        distinct_chambers: chambers.len(),
        distinct_bases: bases.len(),
        violations,
    })
}

fn index_of<T: PartialEq>(seen: &mut Vec<T>, item: T) -> usize {
    match seen.iter().position(|s| *s == item) {
        Some(i) => i,
        None => {
            seen.push(item);
            seen.len() - 1
        }
    }
}

/// A positive integer cost whose image lies strictly on the other side of
/// one facet of the central chamber: the facet first reached by the
/// shooting ray, crossed just past its LP witness.
pub fn crossing_cost(cfg: &BipartiteConfig, arr: &Arrangement) -> Result<Vec<i64>> {
    let p = central_point(cfg);
    let hit = ray_shoot(arr, &p, &shooting_direction(cfg))?;
    let signs = sign_vector(arr, &p)?;
    let (idx, witness) = hit
        .planes
        .iter()
        .find_map(|&i| match facet_witness(arr, &signs, i) {
            Ok(Some(w)) => Some(Ok((i, w))),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?
        .ok_or(Error::NoCrossing)?;
    let target = step_across(arr, &p, idx, &witness)?;
    let want = sign_vector(arr, &target)?;
    cost_for_point(cfg, arr, &target, &want)
}

/// Positive integer `c` with `B c` in the open chamber with sign vector
/// `want`, starting from a point of that chamber.
pub fn cost_for_point(
    cfg: &BipartiteConfig,
    arr: &Arrangement,
    point: &RationalVector,
    want: &SignVector,
) -> Result<Vec<i64>> {
    let (n, m) = (cfg.n(), cfg.m());
    let ints: Vec<BigInt> = point.primitive_integer();
    if ints.iter().any(|x| x.sign() == num_bigint::Sign::Minus) {
        return Err(Error::InvalidArgument("point outside the cone of B".into()));
    }
    let ints: Vec<i64> = ints
        .iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("cost scaling")))
        .collect::<Result<_>>()?;
    let base = cfg.transport(&ints[..n], &ints[n..n + m])?;
    // transport plans may vanish on edges; lift to a positive cost inside
    // the same open chamber
    let mut scale = 1i64;
    for _ in 0..40 {
        let c: Vec<i64> = base
            .iter()
            .map(|&x| x.checked_mul(scale).and_then(|v| v.checked_add(1)))
            .collect::<Option<_>>()
            .ok_or(Error::Overflow("cost scaling"))?;
        if sign_vector(arr, &image(cfg, &c)?)? == *want {
            return Ok(c);
        }
        scale = scale
            .checked_mul(2)
            .ok_or(Error::Overflow("cost scaling"))?;
    }
    Err(Error::Invariant(
        "could not lift point to a positive cost".into(),
    ))
}

/// Random costs with entries in `1..=max_entry`, skipping wall hits.
pub fn random_costs<R: Rng>(
    cfg: &BipartiteConfig,
    arr: &Arrangement,
    count: usize,
    max_entry: i64,
    rng: &mut R,
) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::Invariant(
                "random costs keep landing on walls".into(),
            ));
        }
        let c: Vec<i64> = (0..cfg.num_edges())
            .map(|_| rng.random_range(1..=max_entry))
            .collect();
        match cost_signs(cfg, arr, &c) {
            Ok(_) => out.push(c),
            Err(Error::BoundaryCost(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Perturbations `10 * 1 + delta`, `delta` in `{-1, 0, 1}`, whose images
/// stay in the central chamber.
pub fn central_perturbations<R: Rng>(
    cfg: &BipartiteConfig,
    arr: &Arrangement,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<i64>>> {
    let center = cost_signs(cfg, arr, &vec![1; cfg.num_edges()])?;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::Invariant(
                "no perturbation stays in the central chamber".into(),
            ));
        }
        let c: Vec<i64> = (0..cfg.num_edges())
            .map(|_| 10 + rng.random_range(-1..=1))
            .collect();
        if matches!(cost_signs(cfg, arr, &c), Ok(s) if s == center) && !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// The probe set used by the report: `1`, `2 * 1`, central perturbations,
/// the crossing cost and seeded random costs.
pub fn standard_probe_costs<R: Rng>(
    cfg: &BipartiteConfig,
    arr: &Arrangement,
    random: usize,
    rng: &mut R,
) -> Result<Vec<(String, Vec<i64>)>> {
    let e = cfg.num_edges();
    let mut costs = vec![
        ("ones".to_string(), vec![1; e]),
        ("twice-ones".to_string(), vec![2; e]),
    ];
    for (i, c) in central_perturbations(cfg, arr, 2, rng)?
        .into_iter()
        .enumerate()
    {
        costs.push((format!("perturbed-{i}"), c));
    }
    // instances too small for the ray to meet a wall get no crossing cost
    match crossing_cost(cfg, arr) {
        Ok(c) => costs.push(("crossing".to_string(), c)),
        Err(Error::NoCrossing) => {}
        Err(e) => return Err(e),
    }
    for (i, c) in random_costs(cfg, arr, random, 5, rng)?
        .into_iter()
        .enumerate()
    {
        costs.push((format!("random-{i}"), c));
    }
    Ok(costs)
}
