//! Plain-text tables for terminal output.

use std::fmt::Write as _;

use bn_atlas_core::certificate::{Certificate, Subject};
use bn_atlas_core::chains::ChainDecomposition;
use bn_atlas_core::maximal::MaximalEntry;
use bn_atlas_core::noncontainment::{ConsistencyReport, EdgeLabel, StratificationGraph};
use bn_atlas_core::prym::PrymParams;

fn join(v: &Option<Vec<i64>>) -> String {
    match v {
        Some(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        None => "-".to_string(),
    }
}

pub fn maximal_table(rows: &[MaximalEntry]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>6} {:>4} {:>6} {:>5}", "g", "r", "d", "rho");
    for e in rows {
        let _ = writeln!(s, "{:>6} {:>4} {:>6} {:>5}", e.g, e.r, e.d, e.rho);
    }
    s
}

pub fn chain_text(c: &ChainDecomposition) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} rho={} mode={} k={}",
        c.source,
        c.source.rho(),
        c.mode.tag(),
        c.k
    );
    let _ = writeln!(s, "{:>3} {:>6} {:>6} {:>5}  {:<16} {:<16}", "i", "g_i", "d_i", "rho", "left", "right");
    for (i, comp) in c.components.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:>3} {:>6} {:>6} {:>5}  {:<16} {:<16}",
            i + 1,
            comp.g,
            comp.d,
            comp.rho,
            join(&comp.left),
            join(&comp.right)
        );
    }
    for (name, ok) in c.report.iter() {
        let _ = writeln!(s, "  {:<24} {}", name, if ok { "pass" } else { "FAIL" });
    }
    s
}

pub fn certificate_line(c: &Certificate) -> String {
    let what = match &c.subject {
        Subject::NonContainment { from, to } => format!("{from} not in {to}"),
        Subject::Containment { from, to } => format!("{from} in {to}"),
        Subject::PointedNonContainment { from, to } => format!("{} not in {}", from.base(), to.base()),
        Subject::Locus { locus } => locus.to_string(),
    };
    format!("{:<22} {}  verified={}", c.kind.tag(), what, c.verified)
}

pub fn graph_text(g: &StratificationGraph, report: &ConsistencyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "genus {}: exceptional={} verified_small={} ckk_family={}",
        g.genus, g.status.exceptional, g.status.verified_small, g.status.ckk_family
    );
    for n in &g.nodes {
        let _ = writeln!(s, "  node {} rho={}", n, n.rho());
    }
    for e in &g.edges {
        let _ = writeln!(s, "  {} -> {} {}", e.from, e.to, e.label.tag());
    }
    let counts = g.label_counts();
    let _ = writeln!(
        s,
        "edges: not-contained={} unknown={} contained={}; consistency: {}",
        counts[&EdgeLabel::NotContained],
        counts[&EdgeLabel::Unknown],
        counts[&EdgeLabel::Contained],
        if report.passed { "pass" } else { "FAIL" }
    );
    s
}

pub fn prym_text(p: &PrymParams, certs: &[Certificate]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "r={} eps={} g_base={} g_tilde={} target={} rho={} expected_maximal={}",
        p.r, p.eps, p.g_base, p.g_tilde, p.target, p.target_rho, p.target_expected_maximal
    );
    if certs.is_empty() {
        let _ = writeln!(s, "no (s, e) satisfies either bullet");
    }
    for c in certs {
        let _ = writeln!(s, "{}", certificate_line(c));
    }
    s
}
