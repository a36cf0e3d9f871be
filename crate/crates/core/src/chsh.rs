//! CHSH functionals, the covariance CHSH functions and the PR-box fraction
//! `F_PR`, plus exact comparisons against the irrational quantum bounds.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::boxes::{BoxTable, CorrelationSummary};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Selects `B_αβγ = (-1)^γ⟨A0B0⟩ + (-1)^{β⊕γ}⟨A0B1⟩ + (-1)^{α⊕γ}⟨A1B0⟩
/// + (-1)^{α⊕β⊕γ⊕1}⟨A1B1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChshLabel {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
}

impl ChshLabel {
    pub const CANONICAL: ChshLabel = ChshLabel { alpha: 0, beta: 0, gamma: 0 };

    pub fn new(alpha: u8, beta: u8, gamma: u8) -> Self {
        assert!(alpha < 2 && beta < 2 && gamma < 2, "label bits must be 0 or 1");
        ChshLabel { alpha, beta, gamma }
    }

    /// Lexicographic order on `(α, β, γ)`.
    pub fn from_index(i: usize) -> Self {
        assert!(i < 8);
        ChshLabel::new((i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1)
    }

    pub fn all() -> impl Iterator<Item = ChshLabel> {
        (0..8).map(ChshLabel::from_index)
    }

    /// Signs applied to `⟨A0B0⟩, ⟨A0B1⟩, ⟨A1B0⟩, ⟨A1B1⟩`.
    pub fn signs(&self) -> [i64; 4] {
        let s = |bit: u8| if bit & 1 == 0 { 1 } else { -1 };
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        [s(g), s(b ^ g), s(a ^ g), s(a ^ b ^ g ^ 1)]
    }

    pub fn bits(&self) -> [u8; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}

impl fmt::Display for ChshLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}{}{}", self.alpha, self.beta, self.gamma)
    }
}

impl Serialize for ChshLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

fn signed_sum(signs: [i64; 4], values: &[Rational; 4]) -> Rational {
    let mut acc = Rational::zero();
    for (s, v) in signs.iter().zip(values) {
        if *s > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    acc
}

fn correlators(b: &BoxTable) -> Result<[Rational; 4]> {
    if !b.is_nonsignaling() {
        return Err(Error::Signaling);
    }
    Ok(std::array::from_fn(|k| b.correlator((k >> 1) as u8, (k & 1) as u8)))
}

pub fn chsh_value(b: &BoxTable, label: ChshLabel) -> Result<Rational> {
    Ok(signed_sum(label.signs(), &correlators(b)?))
}

/// All eight CHSH values in lexicographic label order.
pub fn chsh_values(b: &BoxTable) -> Result<[Rational; 8]> {
    let c = correlators(b)?;
    Ok(std::array::from_fn(|i| signed_sum(ChshLabel::from_index(i).signs(), &c)))
}

/// The largest CHSH value; ties go to the lexicographically smallest label.
pub fn max_chsh(b: &BoxTable) -> Result<(ChshLabel, Rational)> {
    let values = chsh_values(b)?;
    let mut best = 0;
    for i in 1..8 {
        if values[i] > values[best] {
            best = i;
        }
    }
    Ok((ChshLabel::from_index(best), values[best].clone()))
}

/// `covB_{2α+β} = |cov00 + (-1)^β cov01 + (-1)^α cov10 + (-1)^{α⊕β⊕1} cov11|`.
pub fn cov_chsh(summary: &CorrelationSummary, alpha: u8, beta: u8) -> Rational {
    let s = |bit: u8| if bit & 1 == 0 { 1 } else { -1 };
    signed_sum([1, s(beta), s(alpha), s(alpha ^ beta ^ 1)], &summary.covariances).abs()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FprReport {
    /// Indexed `2α + β`.
    pub cov_chsh: [Rational; 4],
    #[serde(rename = "gamma")]
    pub gamma_triad: [Rational; 3],
    pub f_pr: Rational,
}

pub fn f_pr_from_summary(summary: &CorrelationSummary) -> FprReport {
    let cb: [Rational; 4] = std::array::from_fn(|k| cov_chsh(summary, (k >> 1) as u8, (k & 1) as u8));
    let gamma = |i: usize, j: usize, k: usize, l: usize| ((&cb[i] - &cb[j]).abs() - (&cb[k] - &cb[l]).abs()).abs();
    let gamma_triad = [gamma(0, 1, 2, 3), gamma(0, 2, 1, 3), gamma(0, 3, 1, 2)];
    let min = gamma_triad.iter().min().expect("three entries").clone();
    let f_pr = min / Rational::from_integer(4);
    FprReport { cov_chsh: cb, gamma_triad, f_pr }
}

pub fn f_pr(b: &BoxTable) -> Result<FprReport> {
    Ok(f_pr_from_summary(&b.correlation_summary()?))
}

/// `b > 2√2`, decided as `b > 0 ∧ b² > 8`.
pub fn exceeds_tsirelson(b: &Rational) -> bool {
    b.is_positive() && b.square() > 8
}

/// `p > (5√5 − 11)/2`, decided as `(2p + 11)² > 125`. Defined for
/// `0 ≤ p ≤ 1/2`.
pub fn exceeds_hardy_quantum_bound(p: &Rational) -> Result<bool> {
    if p.is_negative() || *p > Rational::new(1, 2) {
        return Err(Error::Range(format!("Hardy probability {p} outside [0, 1/2]")));
    }
    let shifted = Rational::from_integer(2) * p + Rational::from_integer(11);
    Ok(shifted.square() > 125)
}
