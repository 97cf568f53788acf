use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use proxlab::exactla::{max_subdet_all, max_subdet_of_size, SubdetOptions};
use proxlab::ilp::{enumerate_integral_optima, IlpOptions};
use proxlab::instances::{generate, BinPackOptions, Family, IlpInstance};
use proxlab::measures::{
    claim3_evaluate, cook_bounds, fuzz_cook, measure_proximity_lb, measure_sensitivity,
    proximity_certificate, FuzzLimits, MeasureOptions, MeasureReport, CSV_HEADER,
};
use proxlab::petersen::build_matching_system;
use proxlab::polytopish::{integer_points_in_hull, HullOptions, Verdict};
use proxlab::Vector;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::{Check, Kind, MeasureArgs, Status};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn read_instance(path: &Path) -> Result<IlpInstance, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(IlpInstance::from_json(&text)?)
}

/// Pretty JSON with sorted keys.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(&serde_json::to_value(value)?)?)
}

/// Writes to stdout; a closed pipe is not an error.
pub fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "stdout".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    emit(&(to_json(value)? + "\n"))
}

pub fn measure_options(args: &MeasureArgs) -> MeasureOptions {
    MeasureOptions {
        ilp: IlpOptions {
            node_budget: args.budget,
        },
        subdet: SubdetOptions {
            budget: args.subdet_budget,
            force: false,
        },
        hadamard_fallback: !args.no_hadamard_fallback,
    }
}

pub fn gen(
    family: Family,
    delta: u64,
    d: usize,
    out: Option<&Path>,
    budget: usize,
) -> Result<Status, CliError> {
    let inst = generate(
        family,
        delta,
        d,
        &BinPackOptions {
            config_budget: budget,
        },
    )?;
    let text = inst.to_json()?;
    let summary = format!(
        "{family} delta={delta} d={d}: {}x{} matrix, max |a_ij| = {}",
        inst.lp.rows(),
        inst.lp.cols(),
        inst.lp.a.max_abs()
    );
    match out {
        Some(path) => {
            fs::write(path, text).map_err(io_err(path))?;
            emit(&format!("{summary}\n"))?;
        }
        None => {
            emit(&text)?;
            eprintln!("{summary}");
        }
    }
    Ok(Status::Passed)
}

fn need_input(input: Option<&Path>, check: &str) -> Result<IlpInstance, CliError> {
    let path = input.ok_or_else(|| CliError::Usage(format!("--check {check} needs --input")))?;
    read_instance(path)
}

pub fn verify(check: Check, input: Option<&Path>, budget: Option<u64>) -> Result<Status, CliError> {
    match check {
        Check::Matchings => {
            let report = match build_matching_system() {
                Ok(s) => json!({
                    "check": "matchings",
                    "passed": true,
                    "matchings": s.matchings,
                    "edges": s.graph.edges,
                    "row_sums": s.row_sums(),
                    "column_sums": s.column_sums(),
                    "pairwise_overlaps": s.pairwise_overlaps(),
                }),
                Err(proxlab::Error::Construction(witness)) => json!({
                    "check": "matchings",
                    "passed": false,
                    "witness": witness,
                }),
                Err(e) => return Err(e.into()),
            };
            let passed = report["passed"] == true;
            print_json(&report)?;
            Ok(if passed {
                Status::Passed
            } else {
                Status::Failed
            })
        }
        Check::Polytopish => {
            let inst = need_input(input, "polytopish")?;
            let opts = HullOptions {
                lp_budget: budget.unwrap_or(proxlab::polytopish::DEFAULT_LP_BUDGET),
            };
            let report = integer_points_in_hull(&inst.lp.a.columns(), &opts)?;
            let passed = report.verdict == Verdict::Polytopish;
            print_json(&json!({
                "check": "polytopish",
                "passed": passed,
                "report": report,
            }))?;
            if report.verdict == Verdict::Inconclusive {
                return Err(proxlab::Error::Budget {
                    what: "hull search",
                    needed: "more LP calls".into(),
                    limit: opts.lp_budget.to_string(),
                }
                .into());
            }
            Ok(if passed {
                Status::Passed
            } else {
                Status::Failed
            })
        }
        Check::Claims => {
            let inst = need_input(input, "claims")?;
            let opts = IlpOptions {
                node_budget: budget.unwrap_or(proxlab::ilp::DEFAULT_NODE_BUDGET),
            };
            let set = enumerate_integral_optima(&inst.lp, None, &opts)?;
            let checks = set
                .solutions
                .iter()
                .map(|x| claim3_evaluate(&inst, x))
                .collect::<Result<Vec<_>, _>>()?;
            let witness = set
                .solutions
                .iter()
                .zip(&checks)
                .find(|(_, c)| !c.holds)
                .map(|(x, c)| json!({"x": x, "check": c}));
            let passed = witness.is_none();
            print_json(&json!({
                "check": "claims",
                "passed": passed,
                "optima": set.len(),
                "evaluations": checks,
                "witness": witness,
            }))?;
            Ok(if passed {
                Status::Passed
            } else {
                Status::Failed
            })
        }
    }
}

pub fn measure_instance(
    inst: &IlpInstance,
    kind: Kind,
    args: &MeasureArgs,
    certificate: Option<Vector>,
) -> Result<MeasureReport, CliError> {
    let opts = measure_options(args);
    let norm = args.norm.into();
    Ok(match kind {
        Kind::Sens => measure_sensitivity(inst, norm, &opts)?,
        Kind::Prox => {
            let z = match certificate {
                Some(z) => z,
                None => proximity_certificate(inst)?,
            };
            measure_proximity_lb(inst, &z, norm, &opts)?
        }
    })
}

pub fn status_of(report: &MeasureReport) -> &'static str {
    if report.within_bounds() {
        "ok"
    } else {
        "out_of_bounds"
    }
}

pub fn measure(
    input: &Path,
    kind: Kind,
    args: &MeasureArgs,
    certificate: Option<&Path>,
    csv: bool,
) -> Result<Status, CliError> {
    let inst = read_instance(input)?;
    let z = match certificate {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            Some(serde_json::from_str::<Vector>(&text)?)
        }
        None => None,
    };
    let report = measure_instance(&inst, kind, args, z)?;
    let status = status_of(&report);
    if csv {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(CSV_HEADER)?;
        w.write_record(report.csv_row(status))?;
        emit(&csv_text(w)?)?;
    } else {
        print_json(&report)?;
    }
    Ok(if status == "ok" {
        Status::Passed
    } else {
        Status::Failed
    })
}

pub fn fuzz(seed: u64, trials: usize) -> Result<Status, CliError> {
    let summary = fuzz_cook(seed, trials, &FuzzLimits::default())?;
    print_json(&json!({
        "seed": summary.seed,
        "trials": summary.trials,
        "checked": summary.checked,
        "violation_count": summary.violations.len(),
        "violations": summary.violations,
    }))?;
    Ok(if summary.passed() {
        Status::Passed
    } else {
        Status::Failed
    })
}

pub fn bounds(input: &Path, budget: u64, force: bool) -> Result<Status, CliError> {
    let inst = read_instance(input)?;
    let opts = SubdetOptions { budget, force };
    let all = max_subdet_all(&inst.lp.a, &opts)?;
    let k = inst.lp.rows().min(inst.lp.cols());
    let full = max_subdet_of_size(&inst.lp.a, k, &opts)?;
    let cook = cook_bounds(&inst, &opts, false)?;
    print_json(&json!({
        "rows": inst.lp.rows(),
        "cols": inst.lp.cols(),
        "subdet_all_sizes": all,
        "subdet_full_size": full,
        "hadamard": cook.hadamard,
        "prox_upper": cook.prox_upper,
        "sens_upper": cook.sens_upper,
    }))?;
    Ok(Status::Passed)
}

pub fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: "csv buffer".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv fields are utf-8"))
}
