//! Parametric state spaces and the reproduction suites over them.

pub mod repro;

use serde::{Deserialize, Serialize};

use crate::boxes::{BoxTable, DetLabel, PrLabel};
use crate::chsh::{chsh_value, ChshLabel};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Deterministic vertices of the Hardy theory, in the order of the `h`
/// weights.
pub const HARDY_LOCAL_LABELS: [DetLabel; 5] = [
    DetLabel { alpha: 0, beta: 0, gamma: 0, epsilon: 0 },
    DetLabel { alpha: 0, beta: 0, gamma: 1, epsilon: 0 },
    DetLabel { alpha: 0, beta: 1, gamma: 0, epsilon: 1 },
    DetLabel { alpha: 1, beta: 1, gamma: 0, epsilon: 1 },
    DetLabel { alpha: 1, beta: 1, gamma: 1, epsilon: 0 },
];

/// The extra vertex `Q` of the noisy-PR families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseVertex {
    Pr100,
    Pr111,
    D0000,
}

impl NoiseVertex {
    pub fn vertex(&self) -> BoxTable {
        match self {
            NoiseVertex::Pr100 => BoxTable::pr(PrLabel::new(1, 0, 0)),
            NoiseVertex::Pr111 => BoxTable::pr(PrLabel::new(1, 1, 1)),
            NoiseVertex::D0000 => BoxTable::deterministic(DetLabel::new(0, 0, 0, 0)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseVertex::Pr100 => "pr100",
            NoiseVertex::Pr111 => "pr111",
            NoiseVertex::D0000 => "d0000",
        }
    }
}

impl std::str::FromStr for NoiseVertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pr100" => Ok(NoiseVertex::Pr100),
            "pr111" => Ok(NoiseVertex::Pr111),
            "d0000" => Ok(NoiseVertex::D0000),
            _ => Err(Error::Param(format!("Q must be one of pr100, pr111, d0000; got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTerm {
    pub label: DetLabel,
    pub weight: Rational,
}

/// A point of one of the parametric families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum FamilyPoint {
    /// `c0 P_PR + (1 - c0) P_L`, `P_L` a mixture of at most four
    /// deterministic boxes with `B_000 = +2`.
    Gnstpq { c0: Rational, local_part: Vec<LocalTerm> },
    /// `c0 P_PR + (1 - c0)(c1 D0000 + (1 - c1) D0101)`.
    Gnstpq1 { c0: Rational, c1: Rational },
    /// `h_pr P_PR + Σ h_i D_i` over [`HARDY_LOCAL_LABELS`].
    Hardy { h_pr: Rational, h: [Rational; 5] },
    /// `ε P_PR + ν Q + (1 - ε - ν) P_N`.
    NoisyPr { q: NoiseVertex, eps: Rational, nu: Rational },
    /// `ε P_PR + (1 - ε) P_N`.
    Isotropic { eps: Rational },
    /// `ν Q + (1 - ν) P_N`.
    Noise { q: NoiseVertex, nu: Rational },
}

fn unit(name: &str, v: &Rational) -> Result<()> {
    if v.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} = {v} is outside [0, 1]")))
    }
}

/// Deterministic labels whose canonical CHSH value is exactly `+2`.
pub fn chsh_plus_two_labels() -> Vec<DetLabel> {
    DetLabel::all()
        .filter(|&l| chsh_value(&BoxTable::deterministic(l), ChshLabel::CANONICAL).expect("nonsignaling") == 2)
        .collect()
}

impl FamilyPoint {
    pub fn id(&self) -> &'static str {
        match self {
            FamilyPoint::Gnstpq { .. } => "gnstpq",
            FamilyPoint::Gnstpq1 { .. } => "gnstpq1",
            FamilyPoint::Hardy { .. } => "hardy",
            FamilyPoint::NoisyPr { .. } => "noisy-pr",
            FamilyPoint::Isotropic { .. } => "isotropic",
            FamilyPoint::Noise { .. } => "noise",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyPoint::Gnstpq { c0, local_part } => {
                unit("c0", c0)?;
                if local_part.is_empty() || local_part.len() > 4 {
                    return Err(Error::Param(format!(
                        "local part needs 1 to 4 deterministic terms, got {}",
                        local_part.len()
                    )));
                }
                let allowed = chsh_plus_two_labels();
                for t in local_part {
                    unit(&format!("weight of {}", t.label), &t.weight)?;
                    if !allowed.contains(&t.label) {
                        return Err(Error::Param(format!("{} does not have B_000 = +2", t.label)));
                    }
                }
                let total: Rational = local_part.iter().map(|t| &t.weight).sum();
                if !total.is_one() {
                    return Err(Error::Param(format!("local weights sum to {total}, not 1")));
                }
            }
            FamilyPoint::Gnstpq1 { c0, c1 } => {
                unit("c0", c0)?;
                unit("c1", c1)?;
            }
            FamilyPoint::Hardy { h_pr, h } => {
                unit("h_pr", h_pr)?;
                for (i, w) in h.iter().enumerate() {
                    unit(&format!("h{i}"), w)?;
                }
                let total = h_pr + &h.iter().sum::<Rational>();
                if !total.is_one() {
                    return Err(Error::Param(format!("h_pr + Σ h_i = {total}, not 1")));
                }
            }
            FamilyPoint::NoisyPr { eps, nu, .. } => {
                unit("eps", eps)?;
                unit("nu", nu)?;
                if eps + nu > Rational::one() {
                    return Err(Error::Param(format!("eps + nu = {} exceeds 1", eps + nu)));
                }
            }
            FamilyPoint::Isotropic { eps } => unit("eps", eps)?,
            FamilyPoint::Noise { nu, .. } => unit("nu", nu)?,
        }
        Ok(())
    }

    /// Named scalar parameters, in a fixed order.
    pub fn params(&self) -> Vec<(String, Rational)> {
        match self {
            FamilyPoint::Gnstpq { c0, local_part } => {
                let mut out = vec![("c0".to_string(), c0.clone())];
                out.extend(local_part.iter().map(|t| (t.label.to_string(), t.weight.clone())));
                out
            }
            FamilyPoint::Gnstpq1 { c0, c1 } => vec![("c0".into(), c0.clone()), ("c1".into(), c1.clone())],
            FamilyPoint::Hardy { h_pr, h } => {
                let mut out = vec![("h_pr".to_string(), h_pr.clone())];
                out.extend(h.iter().enumerate().map(|(i, w)| (format!("h{i}"), w.clone())));
                out
            }
            FamilyPoint::NoisyPr { eps, nu, .. } => vec![("eps".into(), eps.clone()), ("nu".into(), nu.clone())],
            FamilyPoint::Isotropic { eps } => vec![("eps".into(), eps.clone())],
            FamilyPoint::Noise { nu, .. } => vec![("nu".into(), nu.clone())],
        }
    }
}

/// The box a family point denotes. Always nonsignaling.
pub fn generate(point: &FamilyPoint) -> Result<BoxTable> {
    point.validate()?;
    let pr = BoxTable::pr(PrLabel::CANONICAL);
    let one = Rational::one();
    let mixed = BoxTable::maximally_mixed();
    let b = match point {
        FamilyPoint::Gnstpq { c0, local_part } => {
            let dets: Vec<BoxTable> = local_part.iter().map(|t| BoxTable::deterministic(t.label)).collect();
            let local = BoxTable::mix(local_part.iter().map(|t| &t.weight).zip(&dets))?;
            BoxTable::mix_of(&[(c0.clone(), pr), (&one - c0, local)])?
        }
        FamilyPoint::Gnstpq1 { c0, c1 } => {
            let rest = &one - c0;
            BoxTable::mix_of(&[
                (c0.clone(), pr),
                (&rest * c1, BoxTable::deterministic(DetLabel::new(0, 0, 0, 0))),
                (&rest * &(&one - c1), BoxTable::deterministic(DetLabel::new(0, 1, 0, 1))),
            ])?
        }
        FamilyPoint::Hardy { h_pr, h } => {
            let mut terms = vec![(h_pr.clone(), pr)];
            terms.extend(h.iter().zip(HARDY_LOCAL_LABELS).map(|(w, l)| (w.clone(), BoxTable::deterministic(l))));
            BoxTable::mix_of(&terms)?
        }
        FamilyPoint::NoisyPr { q, eps, nu } => {
            BoxTable::mix_of(&[(eps.clone(), pr), (nu.clone(), q.vertex()), (&(&one - eps) - nu, mixed)])?
        }
        FamilyPoint::Isotropic { eps } => BoxTable::mix_of(&[(eps.clone(), pr), (&one - eps, mixed)])?,
        FamilyPoint::Noise { q, nu } => BoxTable::mix_of(&[(nu.clone(), q.vertex()), (&one - nu, mixed)])?,
    };
    debug_assert!(b.is_nonsignaling());
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::hardy_check;
    use crate::rational::q;

    fn d(s: &str) -> BoxTable {
        BoxTable::deterministic(s.parse().unwrap())
    }

    #[test]
    fn plus_two_labels() {
        let labels: Vec<String> = chsh_plus_two_labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, ["D0000", "D0010", "D0101", "D0111", "D1000", "D1011", "D1101", "D1110"]);
    }

    #[test]
    fn isotropic_one_is_pr() {
        let b = generate(&FamilyPoint::Isotropic { eps: q(1, 1) }).unwrap();
        assert_eq!(b, BoxTable::pr(PrLabel::CANONICAL));
    }

    #[test]
    fn gnstpq1_example() {
        let b = generate(&FamilyPoint::Gnstpq1 { c0: q(1, 2), c1: q(1, 2) }).unwrap();
        let expect = BoxTable::mix_of(&[
            (q(1, 2), BoxTable::pr(PrLabel::CANONICAL)),
            (q(1, 4), d("D0000")),
            (q(1, 4), d("D0101")),
        ])
        .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn hardy_vertices_meet_the_zero_conditions() {
        for l in HARDY_LOCAL_LABELS {
            let r = hardy_check(&BoxTable::deterministic(l), false).unwrap();
            assert!(r.satisfies_conditions, "{l}");
            assert!(r.p_h.is_zero());
        }
        let b = generate(&FamilyPoint::Hardy { h_pr: q(1, 5), h: std::array::from_fn(|_| q(4, 25)) }).unwrap();
        let r = hardy_check(&b, false).unwrap();
        assert!(r.satisfies_conditions);
        assert_eq!(r.p_h, q(1, 10));
    }

    #[test]
    fn invalid_points_are_rejected() {
        let bad = [
            FamilyPoint::Isotropic { eps: q(5, 4) },
            FamilyPoint::NoisyPr { q: NoiseVertex::Pr100, eps: q(3, 5), nu: q(1, 2) },
            FamilyPoint::Hardy { h_pr: q(1, 2), h: std::array::from_fn(|_| q(1, 5)) },
            FamilyPoint::Gnstpq {
                c0: q(1, 2),
                local_part: vec![LocalTerm { label: "D0001".parse().unwrap(), weight: q(1, 1) }],
            },
            FamilyPoint::Gnstpq { c0: q(1, 2), local_part: vec![] },
            FamilyPoint::Gnstpq1 { c0: q(-1, 2), c1: q(0, 1) },
        ];
        for p in bad {
            assert!(matches!(generate(&p), Err(Error::Param(_))), "{p:?}");
        }
    }

    #[test]
    fn serializes_with_family_tag() {
        let p = FamilyPoint::NoisyPr { q: NoiseVertex::Pr111, eps: q(3, 5), nu: q(1, 5) };
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"family": "noisy-pr", "q": "pr111", "eps": "3/5", "nu": "1/5"}));
        let back: FamilyPoint = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
