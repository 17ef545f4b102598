//! Non-containment certificates and the per-genus stratification graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, CertificateKind, ComponentBound, ComponentRule, Subject, Thm34Witness, Witness};
use crate::chains::{build_chain_prop31, star_condition};
use crate::error::{Error, Result};
use crate::locus::{canonicalize, serre_dual, trivial_containments, LocusId, PointedLocusId};
use crate::maximal::{conjecture_status, enumerate_expected_maximal, is_expected_maximal, ConjectureStatus};
use crate::prym::prym_edges;
use crate::Int;

/// A pointed divisor is not contained in a pointed locus of codimension at least two.
pub fn rule_divisor_vs_deeper(rho_a: Int, rho_b: Int) -> bool {
    rho_a == -1 && rho_b <= -2
}

/// Codimension two locus against a one-pointed locus of codimension at least three.
pub fn rule_codim2_vs_deeper(l: &LocusId, rho_b: Int) -> bool {
    let (g, r, d) = l.triple();
    l.rho() == -2 && d < g + r && r < g - d + r && rho_b <= -3
}

/// Codimension two locus against a two-pointed locus of codimension at least
/// three after forgetting both markings; no further hypotheses.
pub fn rule_codim2_forgetful(rho_a: Int, rho_b: Int) -> bool {
    rho_a == -2 && rho_b <= -3
}

pub fn pointed_divisor_certificate(from: &PointedLocusId, to: &PointedLocusId) -> Result<Option<Certificate>> {
    let rho_a = crate::locus::adjusted_rho(from)?;
    let rho_b = crate::locus::adjusted_rho(to)?;
    if !rule_divisor_vs_deeper(rho_a, rho_b) || from.marks().len() != 1 || !matches!(to.marks().len(), 1 | 2) {
        return Ok(None);
    }
    Ok(Some(Certificate::new(
        CertificateKind::PointedDivisorRule,
        Subject::PointedNonContainment { from: from.clone(), to: to.clone() },
        Witness::PointedRule { rho_a, rho_b },
    )))
}

pub fn codim2_certificate(from: &LocusId, to: &PointedLocusId) -> Result<Option<Certificate>> {
    let rho_a = from.rho();
    let rho_b = crate::locus::adjusted_rho(to)?;
    let ok = match to.marks().len() {
        1 => rule_codim2_vs_deeper(from, rho_b),
        2 => rule_codim2_forgetful(rho_a, rho_b),
        _ => false,
    };
    if !ok {
        return Ok(None);
    }
    let from = PointedLocusId::new(*from, Vec::new())?;
    Ok(Some(Certificate::new(
        CertificateKind::Codim2Rule,
        Subject::PointedNonContainment { from, to: to.clone() },
        Witness::PointedRule { rho_a, rho_b },
    )))
}

/// Certificate for `A` not contained in `B` when `rho(B) < rho(A)`.
pub fn thm34_certificate(a: &LocusId, b: &LocusId) -> Result<Option<Certificate>> {
    if !is_expected_maximal(a) || !is_expected_maximal(b) {
        return Err(Error::domain(format!("{a} and {b} must both be expected maximal")));
    }
    if a.g() != b.g() {
        return Err(Error::domain(format!("{a} and {b} have different genera")));
    }
    if b.rho() >= a.rho() {
        return Ok(None);
    }
    if !star_condition(a)? {
        // rho(A) would have to be the minimum over the genus, contradicting rho(B) < rho(A)
        return Err(Error::Internal(format!(
            "condition (*) fails for {a} although {b} has smaller rho"
        )));
    }
    let chain = build_chain_prop31(a)?;
    let bounds: Vec<ComponentBound> = chain
        .components
        .iter()
        .enumerate()
        .map(|(index, c)| ComponentBound {
            index,
            genus: c.g,
            degree: c.d,
            rho: c.rho,
            rule: if c.rho == -1 { ComponentRule::Divisor } else { ComponentRule::Codim2 },
            bound: c.rho,
        })
        .collect();
    let bound_sum = bounds.iter().map(|x| x.bound).sum();
    let witness = Thm34Witness {
        chain,
        source_rho: a.rho(),
        target_rho: b.rho(),
        bounds,
        bound_sum,
    };
    let cert = Certificate::new(
        CertificateKind::DimThm34,
        Subject::NonContainment { from: *a, to: *b },
        Witness::Thm34(witness),
    );
    if !cert.verified {
        return Err(Error::Internal(format!("certificate for {a} not in {b} does not re-check")));
    }
    Ok(Some(cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeLabel {
    Contained,
    NotContained,
    Unknown,
}

impl EdgeLabel {
    pub fn tag(&self) -> &'static str {
        match self {
            EdgeLabel::Contained => "contained",
            EdgeLabel::NotContained => "not-contained",
            EdgeLabel::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Provenance {
    /// Index into the graph's certificate list.
    Certificate { index: usize },
    Flag { flag: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: LocusId,
    pub to: LocusId,
    pub label: EdgeLabel,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationGraph {
    pub genus: Int,
    pub status: ConjectureStatus,
    pub nodes: Vec<LocusId>,
    pub edges: Vec<Edge>,
    pub certificates: Vec<Certificate>,
}

impl StratificationGraph {
    pub fn label_counts(&self) -> BTreeMap<EdgeLabel, usize> {
        let mut out = BTreeMap::from([
            (EdgeLabel::Contained, 0),
            (EdgeLabel::NotContained, 0),
            (EdgeLabel::Unknown, 0),
        ]);
        for e in &self.edges {
            *out.entry(e.label).or_default() += 1;
        }
        out
    }

    pub fn edge(&self, from: &LocusId, to: &LocusId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.from == *from && e.to == *to)
    }
}

/// Containment between two expected maximal loci via one trivial step or duality.
fn containment_certificate(a: &LocusId, b: &LocusId) -> Result<Option<Certificate>> {
    if a.rho() < 0 {
        for t in trivial_containments(a)? {
            if t.target == *b {
                return Ok(Some(Certificate::new(
                    CertificateKind::TrivialContainment,
                    Subject::Containment { from: *a, to: *b },
                    Witness::Trivial {
                        rule: t.rule,
                        source_rho: a.rho(),
                        target_rho: t.rho,
                    },
                )));
            }
        }
    }
    if a.d() <= 2 * a.g() - 2 && serre_dual(a).ok() == Some(*b) && canonicalize(a)?.locus() == canonicalize(b)?.locus() {
        return Ok(Some(Certificate::new(
            CertificateKind::SerreIdentification,
            Subject::Containment { from: *a, to: *b },
            Witness::Serre { dual_r: b.r(), dual_d: b.d() },
        )));
    }
    Ok(None)
}

pub fn build_stratification_graph(g: Int) -> Result<StratificationGraph> {
    let status = conjecture_status(g)?;
    let nodes = enumerate_expected_maximal(g)?;
    let mut prym: BTreeMap<(LocusId, LocusId), Certificate> = BTreeMap::new();
    for c in prym_edges(g)? {
        if let Subject::NonContainment { from, to } = c.subject {
            prym.entry((from, to)).or_insert(c);
        }
    }
    let mut edges = Vec::new();
    let mut certificates = Vec::new();
    for a in &nodes {
        for b in &nodes {
            if a == b {
                continue;
            }
            let found = if let Some(c) = containment_certificate(a, b)? {
                Some((EdgeLabel::Contained, c))
            } else if let Some(c) = thm34_certificate(a, b)? {
                Some((EdgeLabel::NotContained, c))
            } else {
                prym.get(&(*a, *b)).cloned().map(|c| (EdgeLabel::NotContained, c))
            };
            let (label, provenance) = match found {
                Some((label, cert)) => {
                    certificates.push(cert);
                    (label, Provenance::Certificate { index: certificates.len() - 1 })
                }
                None => (EdgeLabel::Unknown, Provenance::Flag { flag: "open".to_string() }),
            };
            edges.push(Edge {
                from: *a,
                to: *b,
                label,
                provenance,
            });
        }
    }
    Ok(StratificationGraph {
        genus: g,
        status,
        nodes,
        edges,
        certificates,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub contradictory_pairs: Vec<(LocusId, LocusId)>,
    pub duplicate_edges: Vec<(LocusId, LocusId)>,
    pub self_edges: Vec<LocusId>,
    pub foreign_endpoints: Vec<(LocusId, LocusId)>,
    pub non_maximal_nodes: Vec<LocusId>,
    /// Indices of certificates that do not re-check or do not match their edge.
    pub failed_certificates: Vec<usize>,
    pub mismatched_edges: Vec<(LocusId, LocusId)>,
}

pub fn consistency_check(graph: &StratificationGraph) -> ConsistencyReport {
    let mut rep = ConsistencyReport::default();
    let node_set: BTreeSet<LocusId> = graph.nodes.iter().copied().collect();
    for n in &graph.nodes {
        if n.g() != graph.genus || !is_expected_maximal(n) {
            rep.non_maximal_nodes.push(*n);
        }
    }
    let mut labels: BTreeMap<(LocusId, LocusId), BTreeSet<EdgeLabel>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for e in &graph.edges {
        if e.from == e.to {
            rep.self_edges.push(e.from);
        }
        if !node_set.contains(&e.from) || !node_set.contains(&e.to) {
            rep.foreign_endpoints.push((e.from, e.to));
        }
        if !seen.insert((e.from, e.to, e.label)) {
            rep.duplicate_edges.push((e.from, e.to));
        }
        labels.entry((e.from, e.to)).or_default().insert(e.label);

        let expected_subject = match e.label {
            EdgeLabel::Contained => Some(Subject::Containment { from: e.from, to: e.to }),
            EdgeLabel::NotContained => Some(Subject::NonContainment { from: e.from, to: e.to }),
            EdgeLabel::Unknown => None,
        };
        match (&e.provenance, expected_subject) {
            (Provenance::Certificate { index }, Some(subject)) => match graph.certificates.get(*index) {
                Some(c) if c.subject == subject => {}
                _ => rep.mismatched_edges.push((e.from, e.to)),
            },
            (Provenance::Flag { .. }, None) => {}
            _ => rep.mismatched_edges.push((e.from, e.to)),
        }
    }
    for (pair, set) in &labels {
        if set.contains(&EdgeLabel::Contained) && set.contains(&EdgeLabel::NotContained) {
            rep.contradictory_pairs.push(*pair);
        }
    }
    for (i, c) in graph.certificates.iter().enumerate() {
        if !c.verified || !c.recheck() {
            rep.failed_certificates.push(i);
        }
    }
    rep.passed = rep.contradictory_pairs.is_empty()
        && rep.duplicate_edges.is_empty()
        && rep.self_edges.is_empty()
        && rep.foreign_endpoints.is_empty()
        && rep.non_maximal_nodes.is_empty()
        && rep.failed_certificates.is_empty()
        && rep.mismatched_edges.is_empty();
    rep
}

/// Graphviz rendering; node identifiers are `g_r_d`.
pub fn to_dot(graph: &StratificationGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"genus_{}\" {{", graph.genus);
    for n in &graph.nodes {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"M^{}_{{{},{}}} (ρ={})\"];",
            n.dot_id(),
            n.r(),
            n.g(),
            n.d(),
            n.rho()
        );
    }
    for e in &graph.edges {
        let style = match e.label {
            EdgeLabel::NotContained => "solid",
            EdgeLabel::Unknown => "dashed",
            EdgeLabel::Contained => "bold",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [style={}, label=\"{}\"];",
            e.from.dot_id(),
            e.to.dot_id(),
            style,
            e.label.tag()
        );
    }
    out.push_str("}\n");
    out
}

pub fn to_json(graph: &StratificationGraph) -> String {
    serde_json::to_string_pretty(graph).expect("graph serializes")
}
