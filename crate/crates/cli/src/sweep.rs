use std::fs;
use std::path::Path;

use proxlab::instances::{generate, BinPackOptions, Family};
use proxlab::measures::CSV_HEADER;
use rayon::prelude::*;

use crate::commands::{csv_text, emit, measure_instance, status_of};
use crate::error::CliError;
use crate::{Kind, MeasureArgs, Status};

/// Parses `1..4`, `2,4,6` or a mix such as `1,3..5`; ranges are inclusive and
/// a reversed range is empty.
pub fn parse_values(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("cannot read values from {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi
                    .trim()
                    .trim_start_matches('=')
                    .parse()
                    .map_err(|_| bad())?;
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn kind_for(family: Family) -> Kind {
    match family {
        Family::Proximity | Family::BinpackProx => Kind::Prox,
        _ => Kind::Sens,
    }
}

fn cell(family: Family, delta: u64, d: usize, args: &MeasureArgs) -> Vec<String> {
    let run = || -> Result<Vec<String>, CliError> {
        let inst = generate(family, delta, d, &BinPackOptions::default())?;
        let report = measure_instance(&inst, kind_for(family), args, None)?;
        Ok(report.csv_row(status_of(&report)))
    };
    run().unwrap_or_else(|e| {
        let norm: proxlab::measures::Norm = args.norm.into();
        let mut row = vec![
            family.to_string(),
            delta.to_string(),
            d.to_string(),
            norm.to_string(),
        ];
        row.extend(std::iter::repeat_n(String::new(), CSV_HEADER.len() - 5));
        row.push(format!("error: {e}"));
        row
    })
}

pub fn sweep(
    family: Family,
    deltas: &str,
    ds: &str,
    args: &MeasureArgs,
    out: Option<&Path>,
) -> Result<Status, CliError> {
    let deltas = parse_values(deltas)?;
    let ds: Vec<usize> = parse_values(ds)?.into_iter().map(|d| d as usize).collect();
    let grid: Vec<(u64, usize)> = deltas
        .iter()
        .flat_map(|&delta| ds.iter().map(move |&d| (delta, d)))
        .collect();
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|&(delta, d)| cell(family, delta, d, args))
        .collect();
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(CSV_HEADER)?;
    for row in &rows {
        w.write_record(row)?;
    }
    let text = csv_text(w)?;
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => emit(&text)?,
    }
    let all_ok = rows.iter().all(|r| r.last().is_some_and(|s| s == "ok"));
    Ok(if all_ok {
        Status::Passed
    } else {
        Status::Failed
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_values("2,4,6").unwrap(), vec![2, 4, 6]);
        assert_eq!(parse_values("1,3..=4").unwrap(), vec![1, 3, 4]);
        assert!(parse_values("3..2").unwrap().is_empty());
        assert!(parse_values("").unwrap().is_empty());
        assert!(parse_values("x").is_err());
    }
}
