//! Composite analyses: PR-box decomposition, Hardy-paradox detection and
//! postquantumness witnesses.

use serde::{Serialize, Serializer};

use crate::boxes::{BoxTable, PrLabel, Relabeling};
use crate::chsh::{exceeds_tsirelson, f_pr, max_chsh};
use crate::error::{Error, Result};
use crate::polytope::is_bell_local;
use crate::rational::Rational;
use crate::theories::{generate, FamilyPoint, NoiseVertex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecompositionChecks {
    pub residual_nonnegative: bool,
    pub residual_local: bool,
    pub residual_f_pr_zero: bool,
}

impl DecompositionChecks {
    pub fn all(&self) -> bool {
        self.residual_nonnegative && self.residual_local && self.residual_f_pr_zero
    }

    fn score(&self) -> usize {
        self.residual_nonnegative as usize + self.residual_local as usize + self.residual_f_pr_zero as usize
    }
}

/// `box = p_pr · PR + (1 - p_pr) · residual` with `p_pr = F_PR(box)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrDecomposition {
    pub p_pr: Rational,
    pub pr_label: PrLabel,
    /// Absent only when `p_pr = 1`. May have negative entries when
    /// `validated.residual_nonnegative` is false.
    pub residual: Option<BoxTable>,
    pub validated: DecompositionChecks,
    /// PR labels tried before returning.
    pub attempts: usize,
}

impl PrDecomposition {
    pub fn recompose(&self) -> Option<BoxTable> {
        let pr = BoxTable::pr(self.pr_label);
        let residual = self.residual.as_ref()?;
        let rest = Rational::one() - &self.p_pr;
        Some(BoxTable::from_entries_unchecked(std::array::from_fn(|i| {
            &self.p_pr * &pr.entries()[i] + &rest * &residual.entries()[i]
        })))
    }
}

/// Splits off the largest PR component the `F_PR` measure assigns.
///
/// The CHSH-maximizing PR vertex is tried first, then the remaining seven in
/// label order. The first candidate whose residual passes every check is
/// returned; otherwise the candidate passing the most checks.
pub fn pr_decompose(b: &BoxTable) -> Result<PrDecomposition> {
    let p_pr = f_pr(b)?.f_pr;
    let (best, _) = max_chsh(b)?;
    let first = PrLabel::new(best.alpha, best.beta, best.gamma);
    let order: Vec<PrLabel> = std::iter::once(first).chain(PrLabel::all().filter(|&l| l != first)).collect();

    if p_pr.is_one() {
        let label = order.into_iter().find(|&l| BoxTable::pr(l) == *b).ok_or(Error::Degenerate)?;
        return Ok(PrDecomposition {
            p_pr,
            pr_label: label,
            residual: None,
            validated: DecompositionChecks { residual_nonnegative: true, residual_local: true, residual_f_pr_zero: true },
            attempts: 1,
        });
    }

    let rest = Rational::one() - &p_pr;
    let mut best_attempt: Option<PrDecomposition> = None;
    for (k, label) in order.into_iter().enumerate() {
        let pr = BoxTable::pr(label);
        let residual = BoxTable::from_entries_unchecked(std::array::from_fn(|i| {
            (&b.entries()[i] - &(&p_pr * &pr.entries()[i])) / &rest
        }));
        let residual_nonnegative = residual.is_nonnegative();
        let residual_f_pr_zero = f_pr(&residual)?.f_pr.is_zero();
        let residual_local = residual_nonnegative && is_bell_local(&residual)?.is_member();
        let validated = DecompositionChecks { residual_nonnegative, residual_local, residual_f_pr_zero };
        let attempt = PrDecomposition {
            p_pr: p_pr.clone(),
            pr_label: label,
            residual: Some(residual),
            validated,
            attempts: k + 1,
        };
        if validated.all() {
            return Ok(attempt);
        }
        let improves = best_attempt.as_ref().is_none_or(|b| validated.score() > b.validated.score());
        if improves {
            best_attempt = Some(attempt);
        }
    }
    let mut out = best_attempt.expect("eight candidates tried");
    out.attempts = 8;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HardyReport {
    /// `P(01|A0B0) = P(10|A0B1) = P(10|A1B0) = 0`.
    pub satisfies_conditions: bool,
    /// `P(10|A1B1)` of the (relabeled) box.
    pub p_h: Rational,
    pub variant: Relabeling,
}

fn hardy_zeros(b: &BoxTable) -> bool {
    b.get(0, 0, 0, 1).is_zero() && b.get(0, 1, 1, 0).is_zero() && b.get(1, 0, 1, 0).is_zero()
}

/// Checks the canonical Hardy conditions, or with `search_variants` the
/// first relabeling (in group index order) under which they hold.
pub fn hardy_check(b: &BoxTable, search_variants: bool) -> Result<HardyReport> {
    if !b.is_nonsignaling() {
        return Err(Error::Signaling);
    }
    if search_variants {
        for r in Relabeling::all() {
            let rb = b.relabel(&r);
            if hardy_zeros(&rb) {
                return Ok(HardyReport { satisfies_conditions: true, p_h: rb.get(1, 1, 1, 0).clone(), variant: r });
            }
        }
    }
    Ok(HardyReport {
        satisfies_conditions: hardy_zeros(b),
        p_h: b.get(1, 1, 1, 0).clone(),
        variant: Relabeling::identity(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IcVerdict {
    Violated,
    Satisfied,
    NotApplicable,
}

impl IcVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            IcVerdict::Violated => "violated",
            IcVerdict::Satisfied => "satisfied",
            IcVerdict::NotApplicable => "not-applicable",
        }
    }
}

/// Whether a quantum realization is known: `Yes` for regions with an
/// explicit quantum model (including Bell-local boxes), `No` where
/// postquantumness is established, `Unknown` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantumModel {
    Yes,
    No,
    Unknown,
}

impl QuantumModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuantumModel::Yes => "true",
            QuantumModel::No => "false",
            QuantumModel::Unknown => "unknown",
        }
    }
}

impl Serialize for QuantumModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QuantumModel::Yes => s.serialize_bool(true),
            QuantumModel::No => s.serialize_bool(false),
            QuantumModel::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessVerdict {
    pub bell_local: bool,
    /// `F_PR > 0`: the box certifies nonobjective information.
    pub f_pr_positive: bool,
    pub beyond_tsirelson: bool,
    pub ic_verdict: IcVerdict,
    pub quantum_model_known: QuantumModel,
}

fn verdict(violated: bool) -> IcVerdict {
    if violated {
        IcVerdict::Violated
    } else {
        IcVerdict::Satisfied
    }
}

/// Closed-form information-causality criteria for the families that have
/// one. `None` means the family gives no criterion at this point.
fn family_criterion(point: &FamilyPoint, bell_local: bool) -> (Option<IcVerdict>, QuantumModel) {
    let one = Rational::one();
    let half = Rational::new(1, 2);
    let two = Rational::from_integer(2);
    match point {
        FamilyPoint::Gnstpq { .. } if bell_local => (Some(IcVerdict::Satisfied), QuantumModel::Yes),
        // Every nonlocal point is postquantum, but below Tsirelson the
        // criterion does not decide it.
        FamilyPoint::Gnstpq { .. } => (None, QuantumModel::No),
        FamilyPoint::Gnstpq1 { .. } if bell_local => (Some(IcVerdict::Satisfied), QuantumModel::Yes),
        FamilyPoint::Gnstpq1 { .. } => (Some(IcVerdict::Violated), QuantumModel::No),
        FamilyPoint::NoisyPr { q: NoiseVertex::Pr100, eps, nu } => {
            let post = eps.square() + nu.square() > half;
            (Some(verdict(post)), if post { QuantumModel::No } else { QuantumModel::Yes })
        }
        FamilyPoint::NoisyPr { q: NoiseVertex::Pr111, eps, nu } if *nu <= half => {
            let post = &two * &eps.square() > one;
            (Some(verdict(post)), if post { QuantumModel::No } else { QuantumModel::Yes })
        }
        FamilyPoint::NoisyPr { q: NoiseVertex::Pr111, .. } => (None, QuantumModel::Unknown),
        FamilyPoint::NoisyPr { q: NoiseVertex::D0000, eps, nu } => {
            let post = (eps + nu).square() + eps.square() > one;
            (Some(verdict(post)), if post { QuantumModel::No } else { QuantumModel::Unknown })
        }
        FamilyPoint::Isotropic { eps } => {
            let post = &two * &eps.square() > one;
            (Some(verdict(post)), if post { QuantumModel::No } else { QuantumModel::Yes })
        }
        FamilyPoint::Hardy { .. } | FamilyPoint::Noise { .. } => (None, QuantumModel::Unknown),
    }
}

/// Locality, `F_PR > 0`, Tsirelson violation, and, when the box is tagged
/// with a family point, that family's information-causality verdict.
pub fn witness(b: &BoxTable, family_context: Option<&FamilyPoint>) -> Result<WitnessVerdict> {
    if !b.is_nonsignaling() {
        return Err(Error::Signaling);
    }
    if let Some(point) = family_context {
        if generate(point)? != *b {
            return Err(Error::ContextMismatch);
        }
    }
    let bell_local = is_bell_local(b)?.is_member();
    let f_pr_positive = f_pr(b)?.f_pr.is_positive();
    let (_, max_value) = max_chsh(b)?;
    let beyond_tsirelson = exceeds_tsirelson(&max_value);

    let (family_ic, family_qm) = match family_context {
        Some(point) => family_criterion(point, bell_local),
        None => (None, QuantumModel::Unknown),
    };
    let ic_verdict = if beyond_tsirelson { IcVerdict::Violated } else { family_ic.unwrap_or(IcVerdict::NotApplicable) };
    let quantum_model_known = if beyond_tsirelson || ic_verdict == IcVerdict::Violated {
        QuantumModel::No
    } else if bell_local {
        QuantumModel::Yes
    } else {
        family_qm
    };
    Ok(WitnessVerdict { bell_local, f_pr_positive, beyond_tsirelson, ic_verdict, quantum_model_known })
}
