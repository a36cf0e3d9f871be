//! Convex-hull membership of a box in an explicit vertex list, with
//! certificates.

use std::sync::OnceLock;

use serde::Serialize;

use crate::boxes::{BoxTable, DetLabel, PrLabel};
use crate::chsh::{max_chsh, ChshLabel};
use crate::error::{Error, Result};
use crate::lp::{self, Feasibility};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct VertexSet {
    labels: Vec<String>,
    vertices: Vec<BoxTable>,
}

impl VertexSet {
    pub fn new(vertices: Vec<(String, BoxTable)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidBox("empty vertex set".into()));
        }
        let (labels, vertices) = vertices.into_iter().unzip();
        Ok(VertexSet { labels, vertices })
    }

    /// The 16 deterministic boxes, in label order.
    pub fn local() -> &'static VertexSet {
        static SET: OnceLock<VertexSet> = OnceLock::new();
        SET.get_or_init(|| VertexSet::from_labels(&[], DetLabel::all()))
    }

    /// `P_PR` followed by the 16 deterministic boxes.
    pub fn genuine() -> &'static VertexSet {
        static SET: OnceLock<VertexSet> = OnceLock::new();
        SET.get_or_init(|| VertexSet::from_labels(&[PrLabel::CANONICAL], DetLabel::all()))
    }

    /// The 16 deterministic boxes followed by the 8 PR boxes.
    pub fn nonsignaling() -> &'static VertexSet {
        static SET: OnceLock<VertexSet> = OnceLock::new();
        SET.get_or_init(|| {
            let mut set = VertexSet::from_labels(&[], DetLabel::all());
            for l in PrLabel::all() {
                set.labels.push(l.to_string());
                set.vertices.push(BoxTable::pr(l));
            }
            set
        })
    }

    fn from_labels(prs: &[PrLabel], dets: impl Iterator<Item = DetLabel>) -> VertexSet {
        let mut labels = Vec::new();
        let mut vertices = Vec::new();
        for &l in prs {
            labels.push(l.to_string());
            vertices.push(BoxTable::pr(l));
        }
        for l in dets {
            labels.push(l.to_string());
            vertices.push(BoxTable::deterministic(l));
        }
        VertexSet { labels, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &BoxTable {
        &self.vertices[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexWeight {
    #[serde(skip)]
    pub index: usize,
    pub vertex: String,
    pub w: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChshWitness {
    pub chsh: ChshLabel,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityCertificate {
    pub verdict: Verdict,
    /// Nonzero vertex weights; empty for non-members.
    pub weights: Vec<VertexWeight>,
    pub witness: Option<ChshWitness>,
}

impl LocalityCertificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    /// Recomposes the weighted vertex sum; `None` for non-members.
    pub fn recompose(&self, vset: &VertexSet) -> Option<BoxTable> {
        if !self.is_member() {
            return None;
        }
        BoxTable::mix(self.weights.iter().map(|w| (&w.w, vset.vertex(w.index)))).ok()
    }
}

/// Exact phase-I feasibility of `Σ q_i V_i = box, Σ q_i = 1, q ≥ 0`.
///
/// Member certificates are recomposed and compared entry-for-entry before
/// they are returned.
pub fn hull_membership(b: &BoxTable, vset: &VertexSet) -> LocalityCertificate {
    let n = vset.len();
    let mut rows: Vec<Vec<Rational>> = (0..16)
        .map(|k| (0..n).map(|i| vset.vertex(i).entries()[k].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); n]);
    let mut rhs: Vec<Rational> = b.entries().to_vec();
    rhs.push(Rational::one());

    match lp::solve(&rows, &rhs) {
        Feasibility::Infeasible => {
            LocalityCertificate { verdict: Verdict::NonMember, weights: Vec::new(), witness: None }
        }
        Feasibility::Feasible { x, .. } => {
            let weights = x
                .into_iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(index, w)| VertexWeight { index, vertex: vset.label(index).to_string(), w })
                .collect();
            let cert = LocalityCertificate { verdict: Verdict::Member, weights, witness: None };
            let back = cert.recompose(vset);
            assert_eq!(back.as_ref(), Some(b), "LP certificate failed recomposition");
            cert
        }
    }
}

/// Membership in the local polytope. Non-members carry the maximal CHSH
/// value as witness.
pub fn is_bell_local(b: &BoxTable) -> Result<LocalityCertificate> {
    if !b.is_nonsignaling() {
        return Err(Error::Signaling);
    }
    let mut cert = hull_membership(b, VertexSet::local());
    if !cert.is_member() {
        let (chsh, value) = max_chsh(b)?;
        cert.witness = Some(ChshWitness { chsh, value });
    }
    Ok(cert)
}

/// Membership in the convex hull of `P_PR` and the 16 deterministic boxes.
/// Non-membership carries no witness.
pub fn is_genuine_member(b: &BoxTable) -> Result<LocalityCertificate> {
    if !b.is_nonsignaling() {
        return Err(Error::Signaling);
    }
    Ok(hull_membership(b, VertexSet::genuine()))
}
