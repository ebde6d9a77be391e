//! The end-to-end pipeline behind `report` and `verify-example`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use toricfan::bipartite::{
    circuits, cocircuits, gale_transform, is_unimodular, maximal_minor_count,
    sample_maximal_minors, BipartiteConfig, GaleConfig,
};
use toricfan::chamber::{
    bond_hyperplanes, central_point, facet_type_analysis, sign_vector, type_orbit_size,
    Arrangement, FacetReport, FacetTypeAnalysis, Hyperplane, OrbitEntry,
};
use toricfan::exact::{is_saturated, rank};
use toricfan::fan::{
    circuit_flips, coherence_certificate, is_complete_regular, primitive_collections,
    triangulation_from_cost, verify_certificate, PrimitiveCollection, Triangulation,
};
use toricfan::groebner::{
    groebner_fan_probe, initial_ideal, ip_brute_force, ip_solve, is_square_free, lattice_ideal_gb,
    standard_probe_costs, Budget, GroebnerBasis, IPInstance, TermOrder,
};

use crate::args::Fault;
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// Instances whose basis sweep would visit more candidate column sets
/// than this skip the fan stage.
const MAX_BASIS_CANDIDATES: u128 = 1_000_000;
/// Instances with more edges skip the Gröbner stage unless forced.
const MAX_DEFAULT_GB_EDGES: usize = 24;
/// Exhaustive unimodularity up to this many minors, sampling beyond.
const MAX_EXHAUSTIVE_MINORS: u128 = 100_000;
const MINOR_SAMPLES: usize = 10_000;
const COMPLETENESS_TRIALS: usize = 1_000;
const PROBE_RANDOM_COSTS: usize = 16;
const IP_INSTANCES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl From<bool> for CheckStatus {
    fn from(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremBound {
    /// exponent of 2, `codimension / 2`
    pub exponent: String,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeSummary {
    pub costs: usize,
    pub distinct_chambers: usize,
    pub distinct_bases: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpSummary {
    pub instances: usize,
    pub matches: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub k: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub num_generators: usize,
    pub fan_dimension: usize,
    pub codimension: usize,
    pub num_hyperplanes: usize,
    pub facet_total: Option<usize>,
    pub facet_lps: Option<usize>,
    pub facet_orbits: Vec<OrbitEntry>,
    pub facet_type_analysis: Option<FacetTypeAnalysis>,
    pub triangulation_size: Option<usize>,
    pub num_primitive_collections: Option<usize>,
    pub num_circuit_flips: Option<usize>,
    pub gb_size: Option<usize>,
    pub bound_4k: Option<String>,
    pub theorem_bound: TheoremBound,
    pub probe: Option<ProbeSummary>,
    pub ip: Option<IpSummary>,
    pub check_results: BTreeMap<String, CheckStatus>,
    /// one line per failed check
    pub failures: BTreeMap<String, String>,
    /// why a check was skipped, where that is not just instance size
    pub notes: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        !self.check_results.values().any(|s| *s == CheckStatus::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    pub gb: GbMode,
    pub gb_budget: usize,
    pub timings: bool,
    pub fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GbMode {
    Auto,
    Force,
    Off,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            gb: GbMode::Auto,
            gb_budget: Budget::default().max_pairs,
            timings: false,
            fault: None,
        }
    }
}

/// Results kept for callers that need more than the serialized report.
pub struct PipelineArtifacts {
    pub report: Report,
    pub primitive_collections: Option<Vec<PrimitiveCollection>>,
    pub gb: Option<GroebnerBasis>,
    pub flip_collections: Option<Vec<PrimitiveCollection>>,
    pub facet_types: Option<BTreeSet<(usize, usize)>>,
}

struct Recorder {
    checks: BTreeMap<String, CheckStatus>,
    failures: BTreeMap<String, String>,
    notes: BTreeMap<String, String>,
    timings: BTreeMap<String, f64>,
}

impl Recorder {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.insert(name.to_string(), ok.into());
        if !ok {
            self.failures.insert(name.to_string(), detail());
        }
    }

    fn note(&mut self, name: &str, text: String) {
        self.notes.insert(name.to_string(), text);
    }

    fn skip(&mut self, name: &str) {
        self.checks.insert(name.to_string(), CheckStatus::Skipped);
    }

    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings
            .insert(name.to_string(), t.elapsed().as_secs_f64());
        out
    }
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn bond_arrangement(cfg: &BipartiteConfig, fault: Option<Fault>) -> Result<Arrangement, CliError> {
    let mut planes = bond_hyperplanes(cfg);
    if fault == Some(Fault::Orientation) {
        let (n, m) = (cfg.n(), cfg.m());
        planes = planes
            .into_iter()
            .map(|h| {
                let cut = h.cut().expect("bond planes carry cuts").clone();
                let (r, s) = cut.type_rs();
                if (r * m) as i64 - (s * n) as i64 == 1 {
                    Hyperplane::from_signed_cut(&cut.negated())
                } else {
                    h
                }
            })
            .collect();
    }
    Ok(Arrangement::bipartite(cfg, planes)?)
}

/// Runs every stage that fits the instance and records one check per
/// property. Errors are reserved for conditions that make the remaining
/// pipeline meaningless.
pub fn run_pipeline(
    cfg: &BipartiteConfig,
    k: Option<usize>,
    opts: &PipelineOptions,
) -> Result<PipelineArtifacts, CliError> {
    let (n, m) = (cfg.n(), cfg.m());
    let num_edges = n * m;
    let fan_dimension = (n - 1) * (m - 1);
    let codimension = num_edges - fan_dimension;
    let mut rec = Recorder {
        checks: BTreeMap::new(),
        failures: BTreeMap::new(),
        notes: BTreeMap::new(),
        timings: BTreeMap::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    // Gale dual
    let gale = rec.time("gale", || gale_transform(cfg));
    let a = gale.matrix();
    let exact = cfg.matrix().mul(&a.transpose())?.is_zero()
        && (a.rows() == 0 || is_saturated(a))
        && rank(cfg.matrix()) + a.rows() == num_edges;
    rec.check("gale_exact", exact, || {
        "A B^T != 0, A not saturated, or ranks do not add up".into()
    });
    rec.check("fan_dimension", a.rows() == fan_dimension, || {
        format!(
            "Gale dual has {} rows, expected {}",
            a.rows(),
            fan_dimension
        )
    });
    let minors = maximal_minor_count(a).unwrap_or(u128::MAX);
    if minors <= MAX_EXHAUSTIVE_MINORS {
        let ok = rec.time("unimodular", || is_unimodular(a));
        rec.check("unimodular_exhaustive", ok, || {
            "a maximal minor outside {0, ±1}".into()
        });
        rec.skip("unimodular_sampled");
    } else {
        let sample = rec.time("unimodular", || {
            sample_maximal_minors(a, MINOR_SAMPLES, &mut rng)
        });
        rec.skip("unimodular_exhaustive");
        rec.check("unimodular_sampled", sample.ok(), || {
            format!("{} bad minors", sample.violations.len())
        });
    }

    // chamber
    let arr = bond_arrangement(cfg, opts.fault)?;
    let p = central_point(cfg);
    let center_signs = sign_vector(&arr, &p)?;
    rec.check("center_generic", !center_signs.has_zero(), || {
        format!(
            "central point lies on plane {}",
            center_signs.first_zero().unwrap_or(0)
        )
    });
    let facets: Option<FacetReport> = if center_signs.has_zero() {
        None
    } else {
        Some(rec.time("facets", || crate::commands::facets_of(&arr, cfg))?)
    };
    let facet_planes: Vec<&Hyperplane> = facets
        .as_ref()
        .map(|f| f.facet_planes(&arr))
        .unwrap_or_default();
    let facet_types: Option<BTreeSet<(usize, usize)>> = facets
        .as_ref()
        .map(|_| facet_planes.iter().filter_map(|h| h.type_rs()).collect());

    let analysis = k.map(facet_type_analysis);
    let theorem_exponent = codimension as u32;
    let theorem_bound = TheoremBound {
        exponent: if codimension % 2 == 0 {
            format!("{}", codimension / 2)
        } else {
            format!("{codimension}/2")
        },
        approx: 2f64.powf(codimension as f64 / 2.0),
    };
    let bound_4k = k.map(|k| BigInt::from(4).pow(k as u32));

    match (&facets, k, &analysis) {
        (Some(f), Some(k), Some(an)) => {
            let want = (k, k + 1);
            let types = facet_types.clone().unwrap_or_default();
            rec.check(
                "facet_types",
                types.len() == 1 && types.contains(&want),
                || format!("facet types {types:?}, expected only {want:?}"),
            );
            let orbit = type_orbit_size(n, m, k, k + 1);
            rec.check("facet_orbit_size", BigInt::from(f.total) == orbit, || {
                format!("{} facets, orbit formula gives {orbit}", f.total)
            });
            if k >= 2 {
                rec.check(
                    "type_minimizer_unique",
                    an.unique && an.minimizer == Some(want),
                    || format!("minimizer {:?}, unique {}", an.minimizer, an.unique),
                );
            } else {
                rec.skip("type_minimizer_unique");
            }
            let b4 = bound_4k.clone().expect("family");
            if k >= 2 {
                rec.check("facets_at_least_4k", BigInt::from(f.total) >= b4, || {
                    format!("{} facets < 4^{k} = {b4}", f.total)
                });
            } else {
                rec.skip("facets_at_least_4k");
                rec.note(
                    "facets_at_least_4k",
                    format!("bound holds from k = 2; here {} < {b4}", f.total),
                );
            }
        }
        _ => {
            for name in [
                "facet_types",
                "facet_orbit_size",
                "type_minimizer_unique",
                "facets_at_least_4k",
            ] {
                rec.skip(name);
            }
        }
    }
    match &facets {
        Some(f) => {
            let ok = BigInt::from(f.total).pow(2) >= BigInt::from(2).pow(theorem_exponent);
            rec.check("theorem_bound", ok, || {
                format!("{} facets below 2^({})", f.total, theorem_bound.exponent)
            });
        }
        None => rec.skip("theorem_bound"),
    }

    // fan
    let candidates = binomial_u128(num_edges as u128, (n + m - 1) as u128);
    // the all-ones cost lands on a wall exactly when the center does
    let fan_ok = candidates <= MAX_BASIS_CANDIDATES && !center_signs.has_zero();
    let mut triangulation: Option<Triangulation> = None;
    let mut pcs: Option<Vec<PrimitiveCollection>> = None;
    let mut flip_collections: Option<Vec<PrimitiveCollection>> = None;
    if fan_ok {
        let t = rec.time("triangulation", || {
            triangulation_from_cost(&gale, &vec![1; num_edges])
        })?;
        rec.check(
            "generator_coverage",
            t.used_generators().len() == num_edges || a.rows() == 0,
            || {
                format!(
                    "{} of {num_edges} generators used",
                    t.used_generators().len()
                )
            },
        );
        let reg = rec.time("regularity", || {
            is_complete_regular(&t, &gale, COMPLETENESS_TRIALS, &mut rng)
        })?;
        rec.check(
            "simplex_determinants",
            reg.det_violations.is_empty(),
            || format!("{} simplices with |det| != 1", reg.det_violations.len()),
        );
        rec.check(
            "completeness_sampling",
            reg.uncovered == 0 && reg.overlapping == 0,
            || {
                format!(
                    "{} uncovered, {} overlapping of {}",
                    reg.uncovered, reg.overlapping, reg.trials
                )
            },
        );
        let ones = vec![BigInt::from(1); num_edges];
        let cert =
            rec.time("coherence", || -> Result<bool, CliError> {
                Ok(verify_certificate(&t, &gale, &ones)?
                    && coherence_certificate(&t, &gale)?.is_some())
            })?;
        rec.check("coherence_certificate", cert, || {
            "no support function found".into()
        });
        let collections = rec.time("primitive_collections", || primitive_collections(&t));
        if let Some(f) = &facets {
            rec.check(
                "collections_at_least_facets",
                collections.len() >= f.total,
                || format!("{} collections < {} facets", collections.len(), f.total),
            );
            let circ = circuit_list(&gale, cfg)?;
            let flips = rec.time("circuit_flips", || circuit_flips(&t, &facet_planes, &circ));
            match flips {
                Ok(flips) => {
                    let distinct: BTreeSet<_> =
                        flips.iter().map(|f| f.collection.clone()).collect();
                    let all: BTreeSet<_> = collections.iter().cloned().collect();
                    rec.check("flips_injective", distinct.len() == flips.len(), || {
                        format!(
                            "{} flips but {} distinct collections",
                            flips.len(),
                            distinct.len()
                        )
                    });
                    rec.check("flips_are_primitive", distinct.is_subset(&all), || {
                        "a flip collection is not primitive".into()
                    });
                    flip_collections = Some(flips.into_iter().map(|f| f.collection).collect());
                }
                Err(e) => {
                    rec.check("flips_injective", false, || e.to_string());
                    rec.check("flips_are_primitive", false, || e.to_string());
                }
            }
        } else {
            for name in [
                "collections_at_least_facets",
                "flips_injective",
                "flips_are_primitive",
            ] {
                rec.skip(name);
            }
        }
        pcs = Some(collections);
        triangulation = Some(t);
    } else {
        for name in [
            "generator_coverage",
            "simplex_determinants",
            "completeness_sampling",
            "coherence_certificate",
            "collections_at_least_facets",
            "flips_injective",
            "flips_are_primitive",
        ] {
            rec.skip(name);
        }
    }

    // Gröbner basis
    let run_gb = match opts.gb {
        GbMode::Off => false,
        GbMode::Force => true,
        GbMode::Auto => num_edges <= MAX_DEFAULT_GB_EDGES,
    };
    let budget = Budget {
        max_pairs: opts.gb_budget,
        ..Budget::default()
    };
    let mut gb: Option<GroebnerBasis> = None;
    let mut probe = None;
    let mut ip = None;
    if run_gb {
        let order = TermOrder::deglex(num_edges);
        let basis = rec
            .time("groebner", || {
                lattice_ideal_gb(cfg.matrix(), &order, budget)
            })?
            .0;
        let leads = initial_ideal(&basis);
        rec.check(
            "gb_square_free",
            leads.iter().all(|u| is_square_free(u)),
            || "a leading term is not square-free".into(),
        );
        let supports: BTreeSet<Vec<usize>> = leads
            .iter()
            .map(|u| (0..num_edges).filter(|&i| u[i] > 0).collect())
            .collect();
        match &pcs {
            Some(pcs) => {
                let pset: BTreeSet<Vec<usize>> = pcs.iter().map(|p| p.indices.clone()).collect();
                rec.check("gb_supports_are_collections", supports == pset, || {
                    format!(
                        "{} supports vs {} collections, {} in common",
                        supports.len(),
                        pset.len(),
                        supports.intersection(&pset).count()
                    )
                });
            }
            None => rec.skip("gb_supports_are_collections"),
        }
        match &flip_collections {
            Some(fc) => rec.check(
                "gb_contains_flips",
                fc.iter().all(|c| supports.contains(&c.indices)),
                || "a flip collection is not a leading support".into(),
            ),
            None => rec.skip("gb_contains_flips"),
        }
        if fan_ok && facets.is_some() {
            let costs = standard_probe_costs(cfg, &arr, PROBE_RANDOM_COSTS, &mut rng)?;
            let rep = rec.time("probe", || groebner_fan_probe(cfg, &arr, &costs, budget))?;
            rec.check("groebner_fan_probe", rep.ok(), || rep.violations.join("; "));
            probe = Some(ProbeSummary {
                costs: rep.entries.len(),
                distinct_chambers: rep.distinct_chambers,
                distinct_bases: rep.distinct_bases,
                violations: rep.violations.clone(),
            });
            let summary = rec.time("ip", || ip_checks(&gale, &basis, &mut rng))?;
            rec.check("ip_oracle", summary.matches == summary.instances, || {
                format!(
                    "{} of {} instances match",
                    summary.matches, summary.instances
                )
            });
            ip = Some(summary);
        } else {
            rec.skip("groebner_fan_probe");
            rec.skip("ip_oracle");
        }
        gb = Some(basis);
    } else {
        for name in [
            "gb_square_free",
            "gb_supports_are_collections",
            "gb_contains_flips",
            "groebner_fan_probe",
            "ip_oracle",
        ] {
            rec.skip(name);
        }
    }

    let report = Report {
        schema: SCHEMA,
        k,
        n,
        m,
        seed: opts.seed,
        num_generators: num_edges,
        fan_dimension,
        codimension,
        num_hyperplanes: arr.len(),
        facet_total: facets.as_ref().map(|f| f.total),
        facet_lps: facets.as_ref().map(|f| f.num_lps),
        facet_orbits: facets.as_ref().map(|f| f.orbits()).unwrap_or_default(),
        facet_type_analysis: analysis,
        triangulation_size: triangulation.as_ref().map(|t| t.maximal_simplices().len()),
        num_primitive_collections: pcs.as_ref().map(Vec::len),
        num_circuit_flips: flip_collections.as_ref().map(Vec::len),
        gb_size: gb.as_ref().map(GroebnerBasis::len),
        bound_4k: bound_4k.map(|b| b.to_string()),
        theorem_bound,
        probe,
        ip,
        check_results: rec.checks,
        failures: rec.failures,
        notes: rec.notes,
        timings: opts.timings.then_some(rec.timings),
    };
    Ok(PipelineArtifacts {
        report,
        primitive_collections: pcs,
        gb,
        flip_collections,
        facet_types,
    })
}

/// Circuits of `A` by direct enumeration when that is cheap, otherwise the
/// bonds of the graph read as signed edge sets.
fn circuit_list(
    gale: &GaleConfig,
    cfg: &BipartiteConfig,
) -> Result<Vec<toricfan::bipartite::Circuit>, CliError> {
    if cfg.num_edges() <= 15 {
        Ok(circuits(gale.matrix(), gale.matrix().rows() + 1)?)
    } else {
        Ok(cocircuits(cfg))
    }
}

/// Random instances on the kernel lattice of the Gale dual, with costs
/// `1`, each solved by reduction and by fiber enumeration.
fn ip_checks(
    gale: &GaleConfig,
    gb: &GroebnerBasis,
    rng: &mut ChaCha8Rng,
) -> Result<IpSummary, CliError> {
    let n = gale.matrix().cols();
    let mut matches = 0;
    for _ in 0..IP_INSTANCES {
        let start: Vec<i64> = (0..n).map(|_| rng.random_range(0..=3)).collect();
        let inst = IPInstance::new(gale.matrix().clone(), vec![1; n], start)?;
        let solved = ip_solve(&inst, gb)?;
        let oracle = ip_brute_force(&inst, gb.order())?;
        if solved.point == oracle && inst.cost_of(&oracle) == solved.cost {
            matches += 1;
        }
    }
    Ok(IpSummary {
        instances: IP_INSTANCES,
        matches,
    })
}

/// The orbit table as CSV rows.
pub fn orbit_csv(orbits: &[OrbitEntry]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for o in orbits {
        w.serialize(o).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricfan::bipartite::family_instance;

    #[test]
    fn binomial_saturates_instead_of_overflowing() {
        assert_eq!(binomial_u128(15, 7), 6435);
        assert_eq!(binomial_u128(35, 11), 417_225_900);
        assert_eq!(binomial_u128(3, 5), 0);
    }

    #[test]
    fn orbit_table_as_csv() {
        let rows = [OrbitEntry {
            r: 2,
            s: 3,
            size: 30,
            is_facet: true,
        }];
        assert_eq!(
            orbit_csv(&rows).unwrap(),
            "r,s,size,is_facet\n2,3,30,true\n"
        );
    }

    #[test]
    fn gb_off_skips_dependent_checks() {
        let cfg = family_instance(1).unwrap();
        let opts = PipelineOptions {
            gb: GbMode::Off,
            ..PipelineOptions::default()
        };
        let r = run_pipeline(&cfg, Some(1), &opts).unwrap().report;
        assert_eq!(r.gb_size, None);
        for name in ["gb_square_free", "groebner_fan_probe", "ip_oracle"] {
            assert_eq!(r.check_results[name], CheckStatus::Skipped);
        }
        assert!(r.all_passed());
    }
}
