use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;
use toricfan::bipartite::{family_instance, gale_transform, incidence_matrix, BipartiteConfig};
use toricfan::chamber::{central_point, chamber_facets, Arrangement, FacetReport, FacetSummary};
use toricfan::exact::{kernel_lattice, IntegerMatrix};
use toricfan::fan::{primitive_collections, triangulation_from_cost};
use toricfan::groebner::{
    ip_brute_force, ip_solve, lattice_ideal_gb, lattice_ideal_gb_any, Budget, IPInstance, TermOrder,
};
use toricfan::Error;

use crate::args::{
    Command, FacetArgs, Format, GroebnerArgs, InstanceArgs, IpArgs, PrimitiveArgs, ReportArgs,
};
use crate::report::{orbit_csv, run_pipeline, GbMode, PipelineOptions};
use crate::{emit, verify, CliError, EXIT_CHECK_FAILED, EXIT_OK};

pub fn dispatch(cmd: &Command) -> Result<i32, CliError> {
    match cmd {
        Command::Report(a) => report(a),
        Command::VerifyExample(a) => verify::verify_example(a),
        Command::Facets(a) => facets(a),
        Command::Groebner(a) => groebner(a),
        Command::Primitives(a) => primitives(a),
        Command::Ip(a) => ip(a),
    }
}

/// The configuration named by `--k` or `--n/--m`, with its family index.
pub fn resolve_instance(a: &InstanceArgs) -> Result<(BipartiteConfig, Option<usize>), CliError> {
    match (a.k, a.n, a.m) {
        (Some(0), _, _) => Err(CliError::Usage("--k must be at least 1".into())),
        (Some(k), _, _) => Ok((family_instance(k)?, Some(k))),
        (None, Some(n), Some(m)) if n >= 1 && m >= 1 => Ok((incidence_matrix(n, m)?, None)),
        (None, Some(_), Some(_)) => Err(CliError::Usage("--n and --m must be at least 1".into())),
        _ => Err(CliError::Usage("give --k or both --n and --m".into())),
    }
}

/// Facets with the orbit shortcut when the instance allows it.
pub fn facets_of(arr: &Arrangement, cfg: &BipartiteConfig) -> Result<FacetReport, CliError> {
    let p = central_point(cfg);
    match chamber_facets(arr, &p, true) {
        Err(Error::SymmetryUnavailable(_)) => Ok(chamber_facets(arr, &p, false)?),
        other => Ok(other?),
    }
}

fn budget(max_pairs: usize) -> Budget {
    Budget {
        max_pairs,
        ..Budget::default()
    }
}

fn report(a: &ReportArgs) -> Result<i32, CliError> {
    let (cfg, k) = resolve_instance(&a.instance)?;
    let gb = if a.gb.no_gb {
        GbMode::Off
    } else if a.gb.gb {
        GbMode::Force
    } else {
        GbMode::Auto
    };
    let opts = PipelineOptions {
        seed: a.seed,
        gb,
        gb_budget: a.gb.gb_budget,
        timings: a.timings,
        fault: None,
    };
    let report = match run_pipeline(&cfg, k, &opts) {
        Ok(art) => art.report,
        Err(e) => {
            eprintln!("error: pipeline aborted: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Csv => orbit_csv(&report.facet_orbits)?.trim_end().to_string(),
    };
    emit(&text, a.output.out.as_deref())?;
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        for (name, why) in &report.failures {
            eprintln!("check failed: {name}: {why}");
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

#[derive(Serialize)]
struct FacetOutput {
    #[serde(flatten)]
    summary: FacetSummary,
    num_lps: usize,
    facets: Vec<FacetEntry>,
}

#[derive(Serialize)]
struct FacetEntry {
    index: usize,
    r: usize,
    s: usize,
    /// left and right nodes on the positive side of the cut
    c_plus: Vec<usize>,
    d_plus: Vec<usize>,
}

fn facets(a: &FacetArgs) -> Result<i32, CliError> {
    let (cfg, k) = resolve_instance(&a.instance)?;
    let arr = Arrangement::bonds(&cfg)?;
    let rep = if a.no_symmetry {
        chamber_facets(&arr, &central_point(&cfg), false)?
    } else {
        facets_of(&arr, &cfg)?
    };
    let text = match a.output.format {
        Format::Csv => orbit_csv(&rep.orbits())?.trim_end().to_string(),
        Format::Json => {
            let facets = rep
                .facets
                .iter()
                .map(|&i| {
                    let cut = arr.planes()[i].cut().expect("bond planes carry cuts");
                    let (r, s) = cut.type_rs();
                    FacetEntry {
                        index: i,
                        r,
                        s,
                        c_plus: cut.c_plus(),
                        d_plus: cut.d_plus(),
                    }
                })
                .collect();
            serde_json::to_string_pretty(&FacetOutput {
                summary: rep.summary(&arr, k),
                num_lps: rep.num_lps,
                facets,
            })?
        }
    };
    emit(&text, a.output.out.as_deref())?;
    Ok(EXIT_OK)
}

fn groebner(a: &GroebnerArgs) -> Result<i32, CliError> {
    let (cfg, _) = resolve_instance(&a.instance)?;
    let order = TermOrder::deglex(cfg.num_edges());
    let (gb, _) = lattice_ideal_gb(cfg.matrix(), &order, budget(a.gb_budget))?;
    emit(
        &serde_json::to_string_pretty(&gb.to_file())?,
        a.out.as_deref(),
    )?;
    Ok(EXIT_OK)
}

fn primitives(a: &PrimitiveArgs) -> Result<i32, CliError> {
    let (cfg, _) = resolve_instance(&a.instance)?;
    let gale = gale_transform(&cfg);
    let t = triangulation_from_cost(&gale, &vec![1; cfg.num_edges()])?;
    let text = if a.triangulation {
        serde_json::to_string_pretty(&t.to_lists())?
    } else {
        serde_json::to_string_pretty(&primitive_collections(&t))?
    };
    emit(&text, a.out.as_deref())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IpOutput {
    point: Vec<i64>,
    objective: String,
    steps: usize,
    gb_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOutput>,
}

#[derive(Serialize)]
struct OracleOutput {
    point: Vec<i64>,
    objective: String,
    matches: bool,
}

fn read_matrix(path: &Path) -> Result<IntegerMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(IntegerMatrix::parse(&text)?)
}

fn ip(a: &IpArgs) -> Result<i32, CliError> {
    let matrix = read_matrix(&a.matrix)?;
    let inst = match &a.b {
        Some(b) => IPInstance::with_rhs(
            matrix,
            b.iter().map(|&x| BigInt::from(x)).collect(),
            a.c.clone(),
            a.start.clone(),
        )?,
        None => IPInstance::new(matrix, a.c.clone(), a.start.clone())?,
    };
    let order = TermOrder::weighted(a.c.clone(), None)?;
    let lattice = kernel_lattice(inst.matrix());
    // a trivial kernel means the fiber is the start point alone
    let (point, cost, steps, gb_size) = if lattice.rows() == 0 {
        (inst.start().to_vec(), inst.cost_of(inst.start()), 0, 0)
    } else {
        let (gb, _) = lattice_ideal_gb_any(&lattice, &order, budget(a.gb_budget))?;
        let sol = ip_solve(&inst, &gb)?;
        let steps = sol.steps();
        (sol.point, sol.cost, steps, gb.len())
    };
    let oracle = if a.oracle {
        let o = ip_brute_force(&inst, &order)?;
        let oc = inst.cost_of(&o);
        Some(OracleOutput {
            matches: oc == cost && o == point,
            objective: oc.to_string(),
            point: o,
        })
    } else {
        None
    };
    let matched = oracle.as_ref().is_none_or(|o| o.matches);
    let out = IpOutput {
        point,
        objective: cost.to_string(),
        steps,
        gb_size,
        oracle,
    };
    emit(&serde_json::to_string_pretty(&out)?, a.out.as_deref())?;
    Ok(if matched { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(k: Option<usize>, n: Option<usize>, m: Option<usize>) -> InstanceArgs {
        InstanceArgs { k, n, m }
    }

    #[test]
    fn instance_resolution() {
        let (cfg, k) = resolve_instance(&inst(Some(2), None, None)).unwrap();
        assert_eq!((cfg.n(), cfg.m(), k), (3, 5, Some(2)));
        let (cfg, k) = resolve_instance(&inst(None, Some(2), Some(3))).unwrap();
        assert_eq!((cfg.n(), cfg.m(), k), (2, 3, None));
        assert!(matches!(
            resolve_instance(&inst(Some(0), None, None)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            resolve_instance(&inst(None, Some(0), Some(3))),
            Err(CliError::Usage(_))
        ));
    }
}
