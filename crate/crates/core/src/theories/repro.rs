//! Reproduction suites: exhaustive and seeded checks of the structural claims
//! about each family, reported case by case.
//!
//! Cases are evaluated in parallel and aggregated in parameter order, so a
//! report depends only on its [`ReproConfig`].

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{chsh_plus_two_labels, generate, FamilyPoint, LocalTerm, NoiseVertex};
use crate::analysis::{hardy_check, pr_decompose, witness, IcVerdict};
use crate::boxes::{BoxTable, DetLabel, PrLabel, Relabeling};
use crate::chsh::{chsh_value, exceeds_hardy_quantum_bound, exceeds_tsirelson, f_pr, max_chsh, ChshLabel};
use crate::polytope::{is_bell_local, is_genuine_member, VertexSet};
use crate::rational::Rational;
use crate::sample::{self, derive_seed, product_box, sample_nonsignaling, sample_product, simplex_weights};

pub const SUITES: [&str; 5] = ["lemma1", "lemma2", "lemma3", "theorem", "fpr-properties"];

/// Sample sizes and grid resolution for the suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproConfig {
    pub seed: u64,
    /// Grids step by `1/grid_denominator`.
    pub grid_denominator: i64,
    pub local_parts_per_point: usize,
    pub hardy_samples: usize,
    pub theorem_samples: usize,
    pub corpus_size: usize,
    pub product_samples: usize,
    pub relabel_samples: usize,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            seed: 0,
            grid_denominator: 100,
            local_parts_per_point: 20,
            hardy_samples: 1000,
            theorem_samples: 1000,
            corpus_size: 10_000,
            product_samples: 1000,
            relabel_samples: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub params: Value,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub theory: String,
    pub local_boxes: usize,
    pub local_with_f_pr_positive: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReproReport {
    pub suite: String,
    pub run: usize,
    pub passed: usize,
    /// First failing check of the first failing case.
    pub failure: Option<CaseFailure>,
    /// Failing checks across all cases, by check name.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub failed_checks: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<ClassificationRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<ReproReport>,
}

impl ReproReport {
    pub fn passes(&self) -> bool {
        self.passed == self.run
    }

    fn from_cases(suite: &str, outcomes: Vec<Vec<CaseFailure>>) -> ReproReport {
        let mut failed_checks = BTreeMap::new();
        for f in outcomes.iter().flatten() {
            *failed_checks.entry(f.check.clone()).or_insert(0) += 1;
        }
        ReproReport {
            suite: suite.to_string(),
            run: outcomes.len(),
            passed: outcomes.iter().filter(|o| o.is_empty()).count(),
            failure: outcomes.into_iter().flatten().next(),
            failed_checks,
            table: Vec::new(),
            suites: Vec::new(),
        }
    }

    fn merge(suite: &str, parts: Vec<ReproReport>) -> ReproReport {
        let mut failed_checks = BTreeMap::new();
        for p in &parts {
            for (k, v) in &p.failed_checks {
                *failed_checks.entry(format!("{}/{k}", p.suite)).or_insert(0) += v;
            }
        }
        ReproReport {
            suite: suite.to_string(),
            run: parts.iter().map(|p| p.run).sum(),
            passed: parts.iter().map(|p| p.passed).sum(),
            failure: parts.iter().find_map(|p| p.failure.clone()),
            failed_checks,
            table: Vec::new(),
            suites: parts,
        }
    }
}

/// Collects failing checks for one case.
struct Case {
    params: Value,
    failures: Vec<CaseFailure>,
}

impl Case {
    fn new(params: impl Serialize) -> Self {
        Case { params: serde_json::to_value(params).expect("serializable params"), failures: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, expected: impl Display, actual: impl Display) {
        if !ok {
            self.failures.push(CaseFailure {
                params: self.params.clone(),
                check: name.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn eq<T: PartialEq + Display>(&mut self, name: &str, expected: T, actual: T) {
        let ok = expected == actual;
        self.check(name, ok, expected, actual);
    }

    fn done(self) -> Vec<CaseFailure> {
        self.failures
    }
}

/// `{0, 1/d, ..., 1}`.
pub fn unit_grid(denominator: i64) -> Vec<Rational> {
    (0..=denominator).map(|k| Rational::new(k, denominator)).collect()
}

fn b000(b: &BoxTable) -> Rational {
    chsh_value(b, ChshLabel::CANONICAL).expect("family boxes are nonsignaling")
}

fn fpr_of(b: &BoxTable) -> Rational {
    f_pr(b).expect("family boxes are nonsignaling").f_pr
}

fn local(b: &BoxTable) -> bool {
    is_bell_local(b).expect("family boxes are nonsignaling").is_member()
}

/// Random admissible local part: 1 to 4 labels (with repetition) drawn from
/// the deterministic boxes with `B_000 = +2`, weights on the 1/1000 grid.
pub fn random_local_part(seed: u64) -> Vec<LocalTerm> {
    let allowed = chsh_plus_two_labels();
    let mut rng = sample::rng(seed);
    let k = rng.random_range(1..=4);
    let labels: Vec<DetLabel> = (0..k).map(|_| allowed[rng.random_range(0..allowed.len())]).collect();
    simplex_weights(&mut rng, k)
        .into_iter()
        .zip(labels)
        .map(|(weight, label)| LocalTerm { label, weight })
        .collect()
}

/// Random Hardy-theory weights `(h_pr, h_0..h_4)`. Every tenth sample has
/// `h_pr = 0`; the next one sits on a `h_pr` grid point near the quantum
/// threshold.
pub fn random_hardy_point(seed: u64, i: usize) -> FamilyPoint {
    let mut rng = sample::rng(seed);
    let den = sample::WEIGHT_DENOMINATOR;
    let (h_pr, rest) = match i % 10 {
        0 => (0, den),
        1 => {
            let h = rng.random_range(178..=183);
            (h, den - h)
        }
        _ => {
            let h = rng.random_range(0..=den);
            (h, den - h)
        }
    };
    let parts = sample::composition(&mut rng, 5, rest);
    FamilyPoint::Hardy {
        h_pr: Rational::new(h_pr, den),
        h: std::array::from_fn(|k| Rational::new(parts[k], den)),
    }
}

/// `p > (5√5 - 11)/2` decided from a 40-digit bracket on `√5`, independent
/// of the squared comparison used by the library. `None` if `p` falls inside
/// the bracket.
pub fn hardy_threshold_by_bracket(p: &Rational) -> Option<bool> {
    let scale = BigInt::from(10u32).pow(40);
    let s = (BigInt::from(5u32) * &scale * &scale).sqrt();
    let to_q = |n: BigInt| Rational::from(num_rational::BigRational::new(n, scale.clone()));
    let five = Rational::from_integer(5);
    let eleven = Rational::from_integer(11);
    let half = Rational::new(1, 2);
    let lower = (&five * &to_q(s.clone()) - &eleven) * &half;
    let upper = (&five * &to_q(s + 1) - &eleven) * &half;
    if *p > upper {
        Some(true)
    } else if *p <= lower {
        Some(false)
    } else {
        None
    }
}

pub fn run_lemma1(cfg: &ReproConfig) -> ReproReport {
    let grid = unit_grid(cfg.grid_denominator);
    let mut points = Vec::new();
    for c0 in &grid {
        for _ in 0..cfg.local_parts_per_point {
            let s = derive_seed(cfg.seed ^ 0x11, points.len() as u64);
            points.push(FamilyPoint::Gnstpq { c0: c0.clone(), local_part: random_local_part(s) });
        }
    }
    for c0 in &grid {
        for c1 in &grid {
            points.push(FamilyPoint::Gnstpq1 { c0: c0.clone(), c1: c1.clone() });
        }
    }
    let outcomes = points
        .par_iter()
        .map(|point| {
            let c0 = match point {
                FamilyPoint::Gnstpq { c0, .. } | FamilyPoint::Gnstpq1 { c0, .. } => c0.clone(),
                _ => unreachable!(),
            };
            let mut case = Case::new(point);
            let b = generate(point).expect("valid family point");
            case.eq("B000 = 2 + 2 c0", Rational::from_integer(2) + &c0 * Rational::from_integer(2), b000(&b));
            case.eq("local iff c0 = 0", c0.is_zero(), local(&b));
            if c0.is_one() {
                case.check("c0 = 1 gives P_PR", b == BoxTable::pr(PrLabel::CANONICAL), "P_PR", "other box");
            }
            case.eq("F_PR = c0", c0, fpr_of(&b));
            case.done()
        })
        .collect();
    ReproReport::from_cases("lemma1", outcomes)
}

pub fn run_lemma2(cfg: &ReproConfig) -> ReproReport {
    let mut points: Vec<FamilyPoint> = (0..cfg.hardy_samples)
        .map(|i| random_hardy_point(derive_seed(cfg.seed ^ 0x22, i as u64), i))
        .collect();
    let zero = Rational::zero();
    points.push(FamilyPoint::Hardy {
        h_pr: Rational::one(),
        h: std::array::from_fn(|_| zero.clone()),
    });
    let outcomes = points
        .par_iter()
        .map(|point| {
            let FamilyPoint::Hardy { h_pr, .. } = point else { unreachable!() };
            let mut case = Case::new(point);
            let b = generate(point).expect("valid family point");
            let hardy = hardy_check(&b, false).expect("nonsignaling");
            case.eq("Hardy conditions hold", true, hardy.satisfies_conditions);
            case.eq("p_H = h_pr / 2", h_pr * &Rational::new(1, 2), hardy.p_h.clone());
            case.eq("local iff h_pr = 0", h_pr.is_zero(), local(&b));
            let flag = exceeds_hardy_quantum_bound(&hardy.p_h).expect("p_H in [0, 1/2]");
            match hardy_threshold_by_bracket(&hardy.p_h) {
                Some(expected) => case.eq("Hardy quantum-bound flag", expected, flag),
                None => case.check("Hardy quantum-bound flag", false, "decidable bracket", "undetermined"),
            }
            case.eq("F_PR = h_pr", h_pr.clone(), fpr_of(&b));
            case.done()
        })
        .collect();
    ReproReport::from_cases("lemma2", outcomes)
}

pub fn run_lemma3(cfg: &ReproConfig) -> ReproReport {
    let grid = unit_grid(cfg.grid_denominator);
    let half = Rational::new(1, 2);
    let mut points = Vec::new();
    for eps in &grid {
        points.push(FamilyPoint::Isotropic { eps: eps.clone() });
    }
    for q in [NoiseVertex::Pr100, NoiseVertex::Pr111, NoiseVertex::D0000] {
        for nu in &grid {
            points.push(FamilyPoint::Noise { q, nu: nu.clone() });
        }
    }
    for q in [NoiseVertex::Pr100, NoiseVertex::Pr111] {
        for eps in &grid {
            for nu in &grid {
                if eps + nu <= Rational::one() {
                    points.push(FamilyPoint::NoisyPr { q, eps: eps.clone(), nu: nu.clone() });
                }
            }
        }
    }
    let outcomes = points
        .par_iter()
        .map(|point| {
            let mut case = Case::new(point);
            let b = generate(point).expect("valid family point");
            match point {
                FamilyPoint::Isotropic { eps } => {
                    case.eq("local iff eps <= 1/2", *eps <= half, local(&b));
                    case.eq("F_PR = eps", eps.clone(), fpr_of(&b));
                }
                FamilyPoint::Noise { q, nu } => {
                    let expected = if *q == NoiseVertex::D0000 { Rational::zero() } else { nu.clone() };
                    case.eq("noise F_PR", expected, fpr_of(&b));
                }
                FamilyPoint::NoisyPr { q, eps, nu } => {
                    if *nu <= half {
                        let member = is_genuine_member(&b).expect("nonsignaling").is_member();
                        case.eq("genuine when nu <= 1/2", true, member);
                    } else if !local(&b) {
                        let member = is_genuine_member(&b).expect("nonsignaling").is_member();
                        case.eq("not genuine when nu > 1/2 and nonlocal", false, member);
                    }
                    if *q == NoiseVertex::Pr111 && *nu <= half {
                        let w = witness(&b, Some(point)).expect("consistent context");
                        let tsirelson = exceeds_tsirelson(&b000(&b));
                        let squared = Rational::from_integer(2) * eps.square() > Rational::one();
                        case.eq("IC violated iff B000 > 2√2", tsirelson, w.ic_verdict == IcVerdict::Violated);
                        case.eq("B000 > 2√2 iff 2 eps² > 1", squared, tsirelson);
                    }
                }
                _ => unreachable!(),
            }
            case.done()
        })
        .collect();
    ReproReport::from_cases("lemma3", outcomes)
}

pub fn run_theorem_classification(cfg: &ReproConfig) -> ReproReport {
    let zero = Rational::zero();
    let gnstpq: Vec<FamilyPoint> = (0..cfg.theorem_samples)
        .map(|i| FamilyPoint::Gnstpq {
            c0: zero.clone(),
            local_part: random_local_part(derive_seed(cfg.seed ^ 0x44, i as u64)),
        })
        .collect();
    let hardy: Vec<FamilyPoint> = (0..cfg.theorem_samples)
        .map(|i| random_hardy_point(derive_seed(cfg.seed ^ 0x55, i as u64), 0))
        .collect();
    let genuine: Vec<FamilyPoint> = (1..=cfg.grid_denominator / 2)
        .map(|k| FamilyPoint::Isotropic { eps: Rational::new(k, cfg.grid_denominator) })
        .collect();

    let evaluate = |points: &[FamilyPoint], expect_positive: bool| -> Vec<(Vec<CaseFailure>, bool, bool)> {
        points
            .par_iter()
            .map(|point| {
                let mut case = Case::new(point);
                let b = generate(point).expect("valid family point");
                let is_local = local(&b);
                let f = fpr_of(&b);
                case.eq("sampled box is Bell-local", true, is_local);
                if expect_positive {
                    let member = is_genuine_member(&b).expect("nonsignaling").is_member();
                    case.eq("box lies in the genuine polytope", true, member);
                    case.check("local box has F_PR > 0", f.is_positive(), "> 0", &f);
                } else {
                    case.check("local box has F_PR = 0", f.is_zero(), "0", &f);
                }
                (case.done(), is_local, f.is_positive())
            })
            .collect()
    };

    let mut outcomes = Vec::new();
    let mut table = Vec::new();
    for (name, points, positive) in
        [("gnstpq", &gnstpq, false), ("hardy", &hardy, false), ("genuine (isotropic, 0 < eps <= 1/2)", &genuine, true)]
    {
        let results = evaluate(points, positive);
        table.push(ClassificationRow {
            theory: name.to_string(),
            local_boxes: results.iter().filter(|r| r.1).count(),
            local_with_f_pr_positive: results.iter().filter(|r| r.1 && r.2).count(),
        });
        outcomes.extend(results.into_iter().map(|r| r.0));
    }
    let mut report = ReproReport::from_cases("theorem", outcomes);
    report.table = table;
    report
}

pub fn run_fpr_properties(cfg: &ReproConfig) -> ReproReport {
    enum Probe {
        Range(u64),
        DetProduct(usize, usize),
        Product(u64),
        Pr(PrLabel),
        Relabel(u64),
    }
    let mut probes: Vec<Probe> = (0..cfg.corpus_size as u64).map(|i| Probe::Range(derive_seed(cfg.seed, i))).collect();
    for a in 0..4 {
        for b in 0..4 {
            probes.push(Probe::DetProduct(a, b));
        }
    }
    probes.extend((0..cfg.product_samples as u64).map(|i| Probe::Product(derive_seed(cfg.seed ^ 0x66, i))));
    probes.extend(PrLabel::all().map(Probe::Pr));
    probes.extend((0..cfg.relabel_samples as u64).map(|i| Probe::Relabel(derive_seed(cfg.seed ^ 0x77, i))));

    // single-party deterministic strategy k: P(0|input 0), P(0|input 1)
    let strategy = |k: usize| -> [Rational; 2] { std::array::from_fn(|x| Rational::from_integer(((k >> x) & 1) as i64)) };

    let outcomes = probes
        .par_iter()
        .map(|probe| match probe {
            Probe::Range(seed) => {
                let mut case = Case::new(serde_json::json!({"property": "range", "seed": seed}));
                let f = fpr_of(&sample_nonsignaling(*seed));
                case.check("0 <= F_PR <= 1", f.in_unit_interval(), "[0, 1]", &f);
                case.done()
            }
            Probe::DetProduct(a, b) => {
                let mut case = Case::new(serde_json::json!({"property": "product", "alice": a, "bob": b}));
                let f = fpr_of(&product_box(strategy(*a), strategy(*b)));
                case.check("product box has F_PR = 0", f.is_zero(), "0", &f);
                case.done()
            }
            Probe::Product(seed) => {
                let mut case = Case::new(serde_json::json!({"property": "product", "seed": seed}));
                let f = fpr_of(&sample_product(*seed));
                case.check("product box has F_PR = 0", f.is_zero(), "0", &f);
                case.done()
            }
            Probe::Pr(label) => {
                let mut case = Case::new(serde_json::json!({"property": "pr", "label": label}));
                let f = fpr_of(&BoxTable::pr(*label));
                case.check("PR box has F_PR = 1", f.is_one(), "1", &f);
                case.done()
            }
            Probe::Relabel(seed) => {
                let mut case = Case::new(serde_json::json!({"property": "relabeling", "seed": seed}));
                let b = sample_nonsignaling(*seed);
                let f = fpr_of(&b);
                for r in Relabeling::all() {
                    let g = fpr_of(&b.relabel(&r));
                    if g != f {
                        case.check("F_PR invariant under relabeling", false, &f, format!("{g} under #{}", r.index()));
                        break;
                    }
                }
                case.done()
            }
        })
        .collect();
    ReproReport::from_cases("fpr-properties", outcomes)
}

/// Runs a suite by name, or all of them for `"all"`. `None` for unknown
/// names.
pub fn run_suite(name: &str, cfg: &ReproConfig) -> Option<ReproReport> {
    Some(match name {
        "lemma1" => run_lemma1(cfg),
        "lemma2" => run_lemma2(cfg),
        "lemma3" => run_lemma3(cfg),
        "theorem" => run_theorem_classification(cfg),
        "fpr-properties" => run_fpr_properties(cfg),
        "all" => ReproReport::merge("all", SUITES.iter().map(|s| run_suite(s, cfg).expect("known suite")).collect()),
        _ => return None,
    })
}

/// Cross-check of LP locality against the eight CHSH inequalities on a
/// seeded corpus, including certificate soundness.
pub fn lp_oracle_survey(seed: u64, count: usize) -> ReproReport {
    let outcomes = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let mut case = Case::new(serde_json::json!({"seed": s}));
            let b = sample_nonsignaling(s);
            let cert = is_bell_local(&b).expect("nonsignaling");
            let (_, best) = max_chsh(&b).expect("nonsignaling");
            case.eq("LP member iff max CHSH <= 2", best <= Rational::from_integer(2), cert.is_member());
            if cert.is_member() {
                let back = cert.recompose(VertexSet::local());
                case.check("certificate recomposes", back.as_ref() == Some(&b), "box", "mismatch");
            } else {
                let ok = cert.witness.as_ref().is_some_and(|w| w.value > Rational::from_integer(2));
                case.check("non-member carries CHSH witness > 2", ok, "> 2", format!("{:?}", cert.witness));
            }
            case.done()
        })
        .collect();
    ReproReport::from_cases("lp-oracle", outcomes)
}

/// Summary of PR decompositions over a seeded corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecompositionSurvey {
    pub boxes: usize,
    pub validated: usize,
    /// Validated decompositions that fail an independent recheck.
    pub unsound: usize,
    pub validation_failures: usize,
    pub residual_negative: usize,
    pub residual_nonlocal: usize,
    pub residual_f_pr_nonzero: usize,
    pub degenerate_errors: usize,
    /// A few failing boxes, verbatim.
    pub examples: Vec<Value>,
}

pub fn decomposition_survey(seed: u64, count: usize) -> DecompositionSurvey {
    let results: Vec<(BoxTable, Result<crate::analysis::PrDecomposition, crate::error::Error>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let b = sample_nonsignaling(derive_seed(seed, i));
            let d = pr_decompose(&b);
            (b, d)
        })
        .collect();
    let mut out = DecompositionSurvey { boxes: count, ..Default::default() };
    for (b, d) in results {
        let Ok(d) = d else {
            out.degenerate_errors += 1;
            continue;
        };
        if d.validated.all() {
            out.validated += 1;
            let sound = match &d.residual {
                None => BoxTable::pr(d.pr_label) == b,
                Some(r) => {
                    d.recompose().as_ref() == Some(&b)
                        && r.is_nonnegative()
                        && fpr_of(r).is_zero()
                        && local(r)
                        && fpr_of(&b) == d.p_pr
                }
            };
            if !sound {
                out.unsound += 1;
            }
        } else {
            out.validation_failures += 1;
            out.residual_negative += !d.validated.residual_nonnegative as usize;
            out.residual_nonlocal += (d.validated.residual_nonnegative && !d.validated.residual_local) as usize;
            out.residual_f_pr_nonzero += !d.validated.residual_f_pr_zero as usize;
            if out.examples.len() < 3 {
                out.examples.push(serde_json::json!({"box": b.to_json(), "attempt": d}));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn bracket_oracle_agrees_with_spot_values() {
        assert_eq!(hardy_threshold_by_bracket(&q(9, 100)), Some(false));
        assert_eq!(hardy_threshold_by_bracket(&q(91, 1000)), Some(true));
        assert_eq!(hardy_threshold_by_bracket(&q(1, 2)), Some(true));
        assert_eq!(hardy_threshold_by_bracket(&Rational::zero()), Some(false));
        // (5√5 - 11)/2 = 0.0901699437494742...
        assert_eq!(hardy_threshold_by_bracket(&q(901699437, 10_000_000_000)), Some(false));
        assert_eq!(hardy_threshold_by_bracket(&q(901699438, 10_000_000_000)), Some(true));
    }

    #[test]
    fn random_local_parts_are_admissible() {
        for s in 0..100 {
            let p = FamilyPoint::Gnstpq { c0: q(1, 3), local_part: random_local_part(s) };
            p.validate().unwrap();
        }
    }

    #[test]
    fn random_hardy_points_are_admissible() {
        for i in 0..100 {
            let p = random_hardy_point(i as u64, i);
            p.validate().unwrap();
            if i % 10 == 0 {
                let FamilyPoint::Hardy { h_pr, .. } = &p else { unreachable!() };
                assert!(h_pr.is_zero());
            }
        }
    }

    #[test]
    fn small_suites_are_deterministic() {
        let cfg = ReproConfig {
            grid_denominator: 4,
            local_parts_per_point: 2,
            hardy_samples: 20,
            theorem_samples: 10,
            corpus_size: 20,
            product_samples: 5,
            relabel_samples: 2,
            ..Default::default()
        };
        let a = run_suite("all", &cfg).unwrap();
        let b = run_suite("all", &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.suites.len(), 5);
        assert!(run_suite("lemma9", &cfg).is_none());
        let l3 = run_lemma3(&cfg);
        assert!(l3.passes(), "{l3:?}");
        let fp = run_fpr_properties(&cfg);
        assert!(fp.passes(), "{fp:?}");
    }
}
