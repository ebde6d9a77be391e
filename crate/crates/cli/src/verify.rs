//! `verify-example`: the K_{3,5} instance against its known counts.

use std::collections::BTreeSet;

use toricfan::bipartite::family_instance;

use crate::args::VerifyArgs;
use crate::report::{run_pipeline, CheckStatus, GbMode, PipelineOptions};
use crate::{emit, CliError, EXIT_CHECK_FAILED, EXIT_OK};

const FACETS: usize = 30;
const GB_SIZE: usize = 50;
const COLLECTIONS: usize = 50;
const FACET_TYPE: (usize, usize) = (2, 3);

/// One mismatch between an expected and an observed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub field: &'static str,
    pub expected: String,
    pub found: String,
}

fn expect<T: std::fmt::Debug + PartialEq>(
    out: &mut Vec<Mismatch>,
    field: &'static str,
    expected: T,
    found: T,
) {
    if expected != found {
        out.push(Mismatch {
            field,
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        });
    }
}

pub fn verify_example(a: &VerifyArgs) -> Result<i32, CliError> {
    let cfg = family_instance(2)?;
    let opts = PipelineOptions {
        seed: a.seed,
        gb: GbMode::Force,
        fault: a.inject_fault,
        ..PipelineOptions::default()
    };
    let art = run_pipeline(&cfg, Some(2), &opts)?;
    let r = &art.report;
    let mut diff = Vec::new();
    expect(&mut diff, "facet_total", Some(FACETS), r.facet_total);
    expect(
        &mut diff,
        "facet_types",
        Some(BTreeSet::from([FACET_TYPE])),
        art.facet_types.clone(),
    );
    expect(&mut diff, "gb_size", Some(GB_SIZE), r.gb_size);
    expect(
        &mut diff,
        "num_primitive_collections",
        Some(COLLECTIONS),
        r.num_primitive_collections,
    );
    expect(
        &mut diff,
        "num_circuit_flips",
        Some(FACETS),
        r.num_circuit_flips,
    );
    for (name, status) in &r.check_results {
        if *status == CheckStatus::Fail {
            diff.push(Mismatch {
                field: "check",
                expected: format!("{name}: pass"),
                found: format!(
                    "{name}: fail ({})",
                    r.failures.get(name).map(String::as_str).unwrap_or("")
                ),
            });
        }
    }
    emit(&serde_json::to_string_pretty(r)?, None)?;
    if diff.is_empty() {
        eprintln!("verify-example: K_{{3,5}} matches (30 facets, 50 binomials, supports = primitive collections)");
        return Ok(EXIT_OK);
    }
    eprintln!("verify-example: {} mismatches", diff.len());
    for d in &diff {
        eprintln!("- {}: {}", d.field, d.expected);
        eprintln!("+ {}: {}", d.field, d.found);
    }
    Ok(EXIT_CHECK_FAILED)
}
