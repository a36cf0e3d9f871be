//! Family parameters from command-line strings.

use std::collections::BTreeMap;

use clap::Args;
use nsbox::{FamilyPoint, LocalTerm, NoiseVertex, Rational};

use crate::fail::CliError;

/// Names accepted as grid axes.
pub const SCALAR_NAMES: [&str; 10] = ["c0", "c1", "hpr", "h0", "h1", "h2", "h3", "h4", "eps", "nu"];

pub const FAMILIES: [&str; 6] = ["gnstpq", "gnstpq1", "hardy", "noisy-pr", "isotropic", "noise"];

pub fn is_scalar(name: &str) -> bool {
    SCALAR_NAMES.contains(&name)
}

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    #[arg(long)]
    pub c0: Option<String>,
    #[arg(long)]
    pub c1: Option<String>,
    /// Weighted local part, e.g. "D0000:1/2,D0101:1/2".
    #[arg(long)]
    pub local: Option<String>,
    #[arg(long)]
    pub hpr: Option<String>,
    /// Five comma-separated weights h0..h4.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    /// Noise vertex: pr100, pr111 or d0000.
    #[arg(long)]
    pub q: Option<String>,
}

pub fn rational(name: &str, text: &str) -> Result<Rational, CliError> {
    text.trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

/// Scalar parameters named on the command line, with `--h` expanded to
/// `h0..h4`.
pub fn scalars(args: &FamilyArgs) -> Result<BTreeMap<String, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for (name, value) in [("c0", &args.c0), ("c1", &args.c1), ("hpr", &args.hpr), ("eps", &args.eps), ("nu", &args.nu)] {
        if let Some(v) = value {
            out.insert(name.to_string(), rational(name, v)?);
        }
    }
    if let Some(h) = &args.h {
        let parts: Vec<&str> = h.split(',').collect();
        if parts.len() != 5 {
            return Err(CliError::Usage(format!("--h: expected 5 comma-separated weights, got {}", parts.len())));
        }
        for (i, p) in parts.iter().enumerate() {
            out.insert(format!("h{i}"), rational("h", p)?);
        }
    }
    Ok(out)
}

fn local_part(text: &str) -> Result<Vec<LocalTerm>, CliError> {
    text.split(',')
        .map(|term| {
            let (label, weight) = term
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("--local: expected LABEL:WEIGHT, got {term:?}")))?;
            Ok(LocalTerm {
                label: label.trim().parse().map_err(|e| CliError::Usage(format!("--local: {e}")))?,
                weight: rational("local", weight)?,
            })
        })
        .collect()
}

/// Assembles a family point from scalar values plus the non-scalar flags in
/// `args`, without checking the family's parameter domain.
pub fn build(
    family: &str,
    values: &BTreeMap<String, Rational>,
    args: &FamilyArgs,
) -> Result<FamilyPoint, CliError> {
    let get = |name: &str| -> Result<Rational, CliError> {
        values
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("family {family} needs --{name}")))
    };
    let q = || -> Result<NoiseVertex, CliError> {
        let text = args.q.as_deref().ok_or_else(|| CliError::Usage(format!("family {family} needs --q")))?;
        text.parse().map_err(|e| CliError::Usage(format!("--q: {e}")))
    };
    if !FAMILIES.contains(&family) {
        return Err(CliError::Usage(format!("unknown family {family:?}; expected one of {}", FAMILIES.join(", "))));
    }
    let point = match family {
        "gnstpq" => {
            let text = args.local.as_deref().ok_or_else(|| CliError::Usage("family gnstpq needs --local".into()))?;
            FamilyPoint::Gnstpq { c0: get("c0")?, local_part: local_part(text)? }
        }
        "gnstpq1" => FamilyPoint::Gnstpq1 { c0: get("c0")?, c1: get("c1")? },
        "hardy" => FamilyPoint::Hardy {
            h_pr: get("hpr")?,
            h: [get("h0")?, get("h1")?, get("h2")?, get("h3")?, get("h4")?],
        },
        "noisy-pr" => FamilyPoint::NoisyPr { q: q()?, eps: get("eps")?, nu: get("nu")? },
        "isotropic" => FamilyPoint::Isotropic { eps: get("eps")? },
        "noise" => FamilyPoint::Noise { q: q()?, nu: get("nu")? },
        _ => unreachable!(),
    };
    Ok(point)
}

/// [`build`] followed by domain validation.
pub fn point(
    family: &str,
    values: &BTreeMap<String, Rational>,
    args: &FamilyArgs,
) -> Result<FamilyPoint, CliError> {
    let point = build(family, values, args)?;
    point.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(point)
}
