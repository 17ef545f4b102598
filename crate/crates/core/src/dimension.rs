//! Recursion certificates for the existence of a component of expected dimension.
//!
//! Each internal node splits `(g, r, d)` into two loci whose genera add up
//! to `g` and whose Brill-Noether numbers add up to `rho(g, r, d)`. Leaves
//! are base cases settled elsewhere. Verification recomputes everything
//! from the triples and ignores the stored check values.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::locus::{canonicalize, raw_rho, LocusId};
use crate::Int;

/// Unvalidated `(g, r, d)`; children may have genus 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub g: Int,
    pub r: Int,
    pub d: Int,
}

impl Triple {
    pub fn new(g: Int, r: Int, d: Int) -> Self {
        Triple { g, r, d }
    }

    pub fn rho(&self) -> Option<Int> {
        raw_rho(self.g, self.r, self.d).ok()
    }
}

impl From<LocusId> for Triple {
    fn from(l: LocusId) -> Self {
        let (g, r, d) = l.triple();
        Triple { g, r, d }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.g, self.r, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimTag {
    #[serde(rename = "case-I-split")]
    CaseISplit,
    #[serde(rename = "case-II-split")]
    CaseIISplit,
    BaseR1,
    BaseSmallGenus,
    BaseRhoZero,
    BaseHyperelliptic,
    /// Case II would return the node itself; only `(8, 2, 7)` in practice.
    BaseDivisor,
}

impl DimTag {
    pub fn tag(&self) -> &'static str {
        match self {
            DimTag::CaseISplit => "case-I-split",
            DimTag::CaseIISplit => "case-II-split",
            DimTag::BaseR1 => "base-r1",
            DimTag::BaseSmallGenus => "base-small-genus",
            DimTag::BaseRhoZero => "base-rho-zero",
            DimTag::BaseHyperelliptic => "base-hyperelliptic",
            DimTag::BaseDivisor => "base-divisor",
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, DimTag::CaseISplit | DimTag::CaseIISplit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimNode {
    pub locus: Triple,
    /// Serre-canonical form; equal to `locus` when `rho >= 0`.
    pub canonical: Triple,
    pub rho: Int,
    pub tag: DimTag,
    pub checks: BTreeMap<String, bool>,
    pub children: Vec<DimNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimCertificate {
    pub root: Triple,
    pub tree: DimNode,
}

impl DimCertificate {
    pub fn node_count(&self) -> usize {
        fn count(n: &DimNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.tree)
    }

    pub fn depth(&self) -> usize {
        fn depth(n: &DimNode) -> usize {
            1 + n.children.iter().map(depth).max().unwrap_or(0)
        }
        depth(&self.tree)
    }
}

fn ceil_half(g: Int) -> Int {
    arith::ceil_div(g, 2).expect("positive divisor")
}

fn canonical_triple(t: Triple) -> Result<Triple> {
    let l = LocusId::new(t.g, t.r, t.d)?;
    Ok(canonicalize(&l)?.locus().into())
}

fn check_root(t: Triple) -> Result<Int> {
    let rho = raw_rho(t.g, t.r, t.d)?;
    if t.g < 2 || t.r < 1 || t.d < 0 {
        return Err(Error::domain(format!("{t}: need g >= 2, r >= 1, d >= 0")));
    }
    if t.d > 2 * t.g - 2 {
        return Err(Error::domain(format!("{t}: d <= 2g - 2 fails")));
    }
    if t.g - t.d + t.r - 1 < 0 {
        return Err(Error::domain(format!("{t}: g - d + r - 1 >= 0 fails")));
    }
    if -rho > ceil_half(t.g) {
        return Err(Error::domain(format!(
            "{t}: -rho <= ceil(g/2) fails ({} > {})",
            -rho,
            ceil_half(t.g)
        )));
    }
    Ok(rho)
}

/// Case I children of canonical `(g, r, d)`.
pub fn case_one_children(c: Triple) -> (Triple, Triple) {
    (
        Triple::new(c.r + 2, c.r, 2 * c.r),
        Triple::new(c.g - c.r - 2, c.r, c.d - c.r),
    )
}

/// Case II children of canonical `(g, r, d)` with Brill-Noether number `rho`.
pub fn case_two_children(c: Triple, rho: Int) -> (Triple, Triple) {
    (
        Triple::new(3 * c.r + 3 + rho, c.r, 4 * c.r + rho),
        Triple::new(c.g - 3 * c.r - 3 - rho, c.r, c.d - 3 * c.r - rho),
    )
}

fn case_one_checks(c: Triple, rho: Int, kids: (Triple, Triple)) -> BTreeMap<String, bool> {
    let (a, b) = kids;
    let (g, r, d) = (c.g, c.r, c.d);
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: bool| {
        m.insert(k.to_string(), v);
    };
    put("case-selector", -rho >= r);
    put("hyperelliptic-child", a == Triple::new(r + 2, r, 2 * r));
    put("hyperelliptic-rho", a.rho() == Some(-r));
    put("child-formula", b == Triple::new(g - r - 2, r, d - r));
    put("genus-sum", a.g + b.g == g);
    put("rho-sum", a.rho().zip(b.rho()).map(|(x, y)| x + y) == Some(rho));
    put("child-rho", b.rho() == Some(rho + r));
    put("child-degree-bound", b.d <= 2 * b.g - 2);
    put("child-codim-bound", b.g >= 1 && b.rho().is_some_and(|x| -x <= ceil_half(b.g)));
    put("clifford", 2 * r <= d);
    put("not-low-corner", !(g <= r + 4 && d <= r + 3));
    put("genus-decreases", b.g < g && b.g >= 0);
    m
}

fn case_two_checks(c: Triple, rho: Int, kids: (Triple, Triple)) -> BTreeMap<String, bool> {
    let (a, b) = kids;
    let (g, r, d) = (c.g, c.r, c.d);
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: bool| {
        m.insert(k.to_string(), v);
    };
    put("case-selector", -rho < r);
    put("child-formula", a == Triple::new(3 * r + 3 + rho, r, 4 * r + rho));
    put("rho-zero-formula", b == Triple::new(g - 3 * r - 3 - rho, r, d - 3 * r - rho));
    put("genus-sum", a.g + b.g == g);
    put("rho-sum", a.rho().zip(b.rho()).map(|(x, y)| x + y) == Some(rho));
    put("child-rho", a.rho() == Some(rho));
    put("rho-zero-child", b.rho() == Some(0));
    put("rho-zero-genus-nonneg", b.g >= 0);
    put("rho-zero-degree-nonneg", b.d >= 0);
    put("applicability", g > 3 * r + 2 + rho);
    put("child-degree-bound", a.d <= 2 * a.g - 2);
    put("child-codim-bound", a.g >= 1 && -rho <= ceil_half(a.g));
    put("genus-decreases", a.g < g);
    m
}

fn leaf(locus: Triple, canonical: Triple, rho: Int, tag: DimTag) -> DimNode {
    let mut checks = BTreeMap::new();
    checks.insert("leaf".to_string(), leaf_ok(&locus, &canonical, rho, tag));
    DimNode {
        locus,
        canonical,
        rho,
        tag,
        checks,
        children: Vec::new(),
    }
}

fn leaf_ok(locus: &Triple, c: &Triple, rho: Int, tag: DimTag) -> bool {
    match tag {
        DimTag::BaseRhoZero => rho >= 0,
        DimTag::BaseR1 => rho < 0 && c.r == 1,
        DimTag::BaseSmallGenus => rho < 0 && c.g >= 2 && c.g <= 7,
        DimTag::BaseHyperelliptic => {
            *locus == Triple::new(locus.r + 2, locus.r, 2 * locus.r)
                && locus.r >= 1
                && *c == Triple::new(locus.r + 2, 1, 2)
        }
        DimTag::BaseDivisor => rho == -1 && c.g == 3 * c.r + 3 + rho && c.d == 4 * c.r + rho,
        DimTag::CaseISplit | DimTag::CaseIISplit => false,
    }
}

fn build(t: Triple, hyperelliptic: bool) -> Result<DimNode> {
    let rho = raw_rho(t.g, t.r, t.d)?;
    if rho >= 0 {
        return Ok(leaf(t, t, rho, DimTag::BaseRhoZero));
    }
    let c = canonical_triple(t)?;
    if hyperelliptic {
        return Ok(leaf(t, c, rho, DimTag::BaseHyperelliptic));
    }
    if c.r == 1 {
        return Ok(leaf(t, c, rho, DimTag::BaseR1));
    }
    if c.g <= 7 {
        return Ok(leaf(t, c, rho, DimTag::BaseSmallGenus));
    }
    if -rho >= c.r {
        let kids = case_one_children(c);
        let checks = case_one_checks(c, rho, kids);
        let children = vec![build(kids.0, true)?, build(kids.1, false)?];
        return Ok(DimNode {
            locus: t,
            canonical: c,
            rho,
            tag: DimTag::CaseISplit,
            checks,
            children,
        });
    }
    let kids = case_two_children(c, rho);
    if kids.0 == c {
        if rho == -1 {
            return Ok(leaf(t, c, rho, DimTag::BaseDivisor));
        }
        return Err(Error::Internal(format!("case II does not reduce {c}")));
    }
    let checks = case_two_checks(c, rho, kids);
    let children = vec![build(kids.0, false)?, build(kids.1, false)?];
    Ok(DimNode {
        locus: t,
        canonical: c,
        rho,
        tag: DimTag::CaseIISplit,
        checks,
        children,
    })
}

pub fn expected_dim_certificate(l: &LocusId) -> Result<DimCertificate> {
    let root = Triple::from(*l);
    check_root(root)?;
    let tree = build(root, false)?;
    Ok(DimCertificate { root, tree })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimFailure {
    /// Child indices from the root, e.g. `root/1/0`.
    pub path: String,
    pub check: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub passed: bool,
    pub nodes: usize,
    pub failures: Vec<DimFailure>,
}

fn verify_node(n: &DimNode, path: &str, hyperelliptic: bool, out: &mut Vec<DimFailure>, nodes: &mut usize) {
    *nodes += 1;
    let mut fail = |check: &str| {
        out.push(DimFailure {
            path: path.to_string(),
            check: check.to_string(),
        })
    };
    let Some(rho) = n.locus.rho() else {
        fail("rho-overflow");
        return;
    };
    if rho != n.rho {
        fail("stored-rho");
    }
    let canonical = if rho >= 0 {
        Ok(n.locus)
    } else {
        canonical_triple(n.locus)
    };
    match canonical {
        Ok(c) if c == n.canonical => {}
        _ => fail("canonical"),
    }
    let c = n.canonical;
    let expected_tag = if rho >= 0 {
        Some(DimTag::BaseRhoZero)
    } else if hyperelliptic {
        Some(DimTag::BaseHyperelliptic)
    } else if c.r == 1 {
        Some(DimTag::BaseR1)
    } else if c.g <= 7 {
        Some(DimTag::BaseSmallGenus)
    } else {
        None
    };
    if let Some(tag) = expected_tag {
        if n.tag != tag {
            fail("tag");
        }
    }
    if n.tag.is_leaf() {
        if !leaf_ok(&n.locus, &c, rho, n.tag) {
            fail("leaf");
        }
        if !n.children.is_empty() {
            fail("leaf-has-children");
        }
        return;
    }
    if n.children.len() != 2 {
        fail("arity");
        return;
    }
    let kids = (n.children[0].locus, n.children[1].locus);
    let checks = match n.tag {
        DimTag::CaseISplit => case_one_checks(c, rho, kids),
        _ => case_two_checks(c, rho, kids),
    };
    for (k, ok) in &checks {
        if !ok {
            fail(k);
        }
    }
    let is_case_one = n.tag == DimTag::CaseISplit;
    for (i, child) in n.children.iter().enumerate() {
        verify_node(child, &format!("{path}/{i}"), is_case_one && i == 0, out, nodes);
    }
}

pub fn verify_dim_certificate(cert: &DimCertificate) -> DimReport {
    let mut failures = Vec::new();
    let mut nodes = 0;
    if cert.tree.locus != cert.root {
        failures.push(DimFailure {
            path: "root".to_string(),
            check: "root-mismatch".to_string(),
        });
    }
    if let Err(e) = check_root(cert.root) {
        failures.push(DimFailure {
            path: "root".to_string(),
            check: format!("root-hypothesis: {e}"),
        });
    }
    verify_node(&cert.tree, "root", false, &mut failures, &mut nodes);
    DimReport {
        passed: failures.is_empty(),
        nodes,
        failures,
    }
}

/// Indented proof tree, one node per line.
pub fn render_tree(cert: &DimCertificate) -> String {
    fn go(n: &DimNode, depth: usize, out: &mut String) {
        let canon = if n.canonical != n.locus {
            format!(" ~ {}", n.canonical)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{}{}{} rho={} [{}]",
            "  ".repeat(depth),
            n.locus,
            canon,
            n.rho,
            n.tag.tag()
        );
        for c in &n.children {
            go(c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(&cert.tree, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(g: Int, r: Int, d: Int) -> LocusId {
        LocusId::new(g, r, d).unwrap()
    }

    #[test]
    fn genus_twelve_net() {
        let c = expected_dim_certificate(&l(12, 2, 9)).unwrap();
        assert_eq!(c.tree.tag, DimTag::CaseISplit);
        assert_eq!(c.tree.children[0].locus, Triple::new(4, 2, 4));
        assert_eq!(c.tree.children[0].tag, DimTag::BaseHyperelliptic);
        assert_eq!(c.tree.children[0].canonical, Triple::new(4, 1, 2));
        assert_eq!(c.tree.children[1].locus, Triple::new(8, 2, 7));
        assert_eq!(c.tree.children[1].rho, -1);
        assert_eq!(c.tree.children[1].tag, DimTag::BaseDivisor);
        assert!(verify_dim_certificate(&c).passed);
    }

    #[test]
    fn pencil_is_leaf() {
        let c = expected_dim_certificate(&l(9, 1, 5)).unwrap();
        assert_eq!(c.tree.tag, DimTag::BaseR1);
        assert!(c.tree.children.is_empty());
        assert!(verify_dim_certificate(&c).passed);
    }

    #[test]
    fn genus_twenty_canonicalizes_child() {
        let c = expected_dim_certificate(&l(20, 4, 19)).unwrap();
        assert_eq!(c.tree.tag, DimTag::CaseISplit);
        assert_eq!(c.tree.children[0].locus, Triple::new(6, 4, 8));
        let child = &c.tree.children[1];
        assert_eq!(child.locus, Triple::new(14, 4, 15));
        assert_eq!(child.canonical, Triple::new(14, 2, 11));
        assert_eq!(child.rho, -1);
        assert!(verify_dim_certificate(&c).passed);
    }

    #[test]
    fn root_hypotheses() {
        assert_eq!(expected_dim_certificate(&l(12, 2, 23)).unwrap_err().code(), "domain");
        // rho(20, 5, 15) = 20 - 6 * 10 = -40
        let e = expected_dim_certificate(&l(20, 5, 15)).unwrap_err();
        assert!(e.to_string().contains("ceil(g/2)"));
    }

    #[test]
    fn tampered_trees_fail() {
        let c = expected_dim_certificate(&l(20, 4, 19)).unwrap();

        let mut bad = c.clone();
        bad.tree.children[1].locus.g += 1;
        let rep = verify_dim_certificate(&bad);
        assert!(!rep.passed);
        assert!(rep.failures.iter().any(|f| f.path == "root" && f.check == "child-formula"));
        assert!(rep.failures.iter().any(|f| f.path == "root/1"));

        let mut bad = c.clone();
        bad.tree.children[1].tag = DimTag::BaseRhoZero;
        bad.tree.children[1].children.clear();
        let rep = verify_dim_certificate(&bad);
        assert!(!rep.passed);
        assert!(rep.failures.iter().any(|f| f.path == "root/1"));
    }

    #[test]
    fn render_is_indented() {
        let c = expected_dim_certificate(&l(12, 2, 9)).unwrap();
        let text = render_tree(&c);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("(12, 2, 9) rho=-3 [case-I-split]"));
        assert!(lines[1].starts_with("  (4, 2, 4) ~ (4, 1, 2)"));
    }

    #[test]
    fn json_round_trip() {
        let c = expected_dim_certificate(&l(30, 3, 22)).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: DimCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(s.contains("\"case-I-split\"") || s.contains("\"case-II-split\""));
    }
}
