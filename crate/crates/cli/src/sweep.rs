//! Grid sweeps over one family, emitted as CSV.

use std::collections::BTreeMap;

use nsbox::{chsh_value, f_pr, generate, is_bell_local, is_genuine_member, witness, ChshLabel, Rational};
use rayon::prelude::*;

use crate::fail::CliError;
use crate::params::{self, FamilyArgs};

pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<Rational>,
}

/// Parses `name=start:stop:step`; the axis holds `start, start + step, ...`
/// up to and including `stop`, and is empty when `start > stop`.
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = |why: &str| CliError::Usage(format!("--grid {spec:?}: {why}"));
    let (name, range) = spec.split_once('=').ok_or_else(|| bad("expected name=start:stop:step"))?;
    let name = name.trim();
    if !params::is_scalar(name) {
        return Err(bad("not a scalar family parameter"));
    }
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad("expected name=start:stop:step"));
    };
    let parse = |t: &str| t.trim().parse::<Rational>().map_err(|e| bad(&e.to_string()));
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !step.is_positive() {
        return Err(bad("step must be positive"));
    }
    let mut values = Vec::new();
    let mut v = start;
    while v <= stop {
        values.push(v.clone());
        v += &step;
    }
    Ok(Axis { name: name.to_string(), values })
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn header(axes: &[Axis]) -> Vec<String> {
    let mut h: Vec<String> = axes.iter().flat_map(|a| [a.name.clone(), format!("{}_dec", a.name)]).collect();
    for c in [
        "b000",
        "b000_dec",
        "f_pr",
        "f_pr_dec",
        "local",
        "genuine",
        "beyond_tsirelson",
        "ic_verdict",
        "quantum_model_known",
    ] {
        h.push(c.to_string());
    }
    h
}

/// Cartesian product in lexicographic order, first axis outermost.
fn grid_points(axes: &[Axis]) -> Vec<Vec<Rational>> {
    if axes.is_empty() || axes.iter().any(|a| a.values.is_empty()) {
        return Vec::new();
    }
    let mut points = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    points
}

pub struct SweepOutput {
    pub csv: Vec<u8>,
    /// Grid points outside the family's parameter domain.
    pub skipped: usize,
}

pub fn run(family: &str, axes: &[Axis], fixed: &FamilyArgs) -> Result<SweepOutput, CliError> {
    if !params::FAMILIES.contains(&family) {
        return Err(CliError::Usage(format!("unknown family {family:?}")));
    }
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("--grid: axis {} given twice", a.name)));
        }
    }
    let base = params::scalars(fixed)?;
    let points = grid_points(axes);

    let assemble = |coords: &[Rational]| -> BTreeMap<String, Rational> {
        let mut values = base.clone();
        for (a, v) in axes.iter().zip(coords) {
            values.insert(a.name.clone(), v.clone());
        }
        values
    };
    let built: Vec<_> = points.iter().map(|c| params::build(family, &assemble(c), fixed)).collect::<Result<_, _>>()?;

    let rows: Vec<Option<Vec<String>>> = points
        .par_iter()
        .zip(&built)
        .map(|(coords, point)| {
            if point.validate().is_err() {
                return Ok(None);
            }
            let b = generate(point)?;
            let b000 = chsh_value(&b, ChshLabel::CANONICAL)?;
            let f = f_pr(&b)?.f_pr;
            let local = is_bell_local(&b)?.is_member();
            let genuine = is_genuine_member(&b)?.is_member();
            let w = witness(&b, Some(point))?;
            let mut row: Vec<String> =
                coords.iter().flat_map(|v| [v.to_string(), v.to_decimal(DECIMAL_DIGITS)]).collect();
            row.extend([
                b000.to_string(),
                b000.to_decimal(DECIMAL_DIGITS),
                f.to_string(),
                f.to_decimal(DECIMAL_DIGITS),
                bit(local).to_string(),
                bit(genuine).to_string(),
                bit(w.beyond_tsirelson).to_string(),
                w.ic_verdict.as_str().to_string(),
                w.quantum_model_known.as_str().to_string(),
            ]);
            Ok(Some(row))
        })
        .collect::<Result<_, nsbox::Error>>()?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    writer.write_record(header(axes)).map_err(io)?;
    let mut written = 0;
    for row in rows.iter().flatten() {
        writer.write_record(row).map_err(io)?;
        written += 1;
    }
    let csv = writer.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(SweepOutput { csv, skipped: points.len() - written })
}
