//! Chain-curve decompositions carrying refined limit linear series.
//!
//! A decomposition of `M^r_{g,d}` is a chain `C_1 ∪ ... ∪ C_k` with
//! `sum g_i = g`; every component carries an aspect of degree `d` whose
//! vanishing at the nodes is recorded explicitly. [`verify_chain`] re-derives
//! every number from that raw data, so it also checks chains that were
//! edited or loaded from disk.

mod schedules;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::locus::{raw_rho, vanishing_weight, LocusId};
use crate::Int;

pub use schedules::{
    enumerate_schedules, enumerate_schedules_with, NodeAspects, OracleScale, Schedule,
    ScheduleEnumerator, ScheduleView, DEFAULT_SCHEDULE_CAP, ORACLE_SCALE_ENV,
};
pub use search::{build_chain_search, SEARCH_CANDIDATE_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainMode {
    Prop31Even,
    Prop31Odd,
    Search,
}

impl ChainMode {
    pub fn tag(&self) -> &'static str {
        match self {
            ChainMode::Prop31Even => "prop31-even",
            ChainMode::Prop31Odd => "prop31-odd",
            ChainMode::Search => "search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComponent {
    pub g: Int,
    /// Degree after removing the base points at the nodes.
    pub d: Int,
    /// Vanishing at the node shared with the previous component.
    pub left: Option<Vec<Int>>,
    /// Vanishing at the node shared with the next component.
    pub right: Option<Vec<Int>>,
    /// Adjusted Brill-Noether number of the aspect.
    pub rho: Int,
}

impl ChainComponent {
    /// Sum of the leading vanishing orders at the nodes.
    pub fn node_vanishing(&self) -> Int {
        self.left.as_ref().map_or(0, |v| v[0]) + self.right.as_ref().map_or(0, |v| v[0])
    }
}

/// Named pass/fail checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport(BTreeMap<String, bool>);

impl VerificationReport {
    pub fn record(&mut self, name: &str, ok: bool) {
        let slot = self.0.entry(name.to_string()).or_insert(true);
        *slot &= ok;
    }

    pub fn passed(&self) -> bool {
        !self.0.is_empty() && self.0.values().all(|ok| *ok)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.get(name).copied()
    }

    pub fn failures(&self) -> Vec<&str> {
        self.0
            .iter()
            .filter(|(_, ok)| !**ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

pub mod check {
    pub const STRUCTURE: &str = "structure";
    pub const GENUS_SUM: &str = "genus-sum";
    pub const K_FORMULA: &str = "k-formula";
    pub const CONGRUENCE: &str = "congruence";
    pub const GENUS_FLOOR: &str = "component-genus-floor";
    pub const VANISHING_RANGE: &str = "vanishing-range";
    pub const DEGREE_BOOKKEEPING: &str = "degree-bookkeeping";
    pub const REFINED: &str = "refined-compatibility";
    pub const COMPONENT_RHO: &str = "component-rho";
    pub const RHO_ALLOWED: &str = "component-rho-allowed";
    pub const ADDITIVITY: &str = "additivity";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDecomposition {
    pub source: LocusId,
    pub k: usize,
    pub mode: ChainMode,
    /// Per-component rho values the decomposition is meant to use.
    pub allowed: Vec<Int>,
    pub components: Vec<ChainComponent>,
    pub report: VerificationReport,
}

impl ChainDecomposition {
    pub fn genera(&self) -> Vec<Int> {
        self.components.iter().map(|c| c.g).collect()
    }

    pub fn component_rhos(&self) -> Vec<Int> {
        self.components.iter().map(|c| c.rho).collect()
    }

    pub fn degrees(&self) -> Vec<Int> {
        self.components.iter().map(|c| c.d).collect()
    }
}

/// Left-hand side of condition (*): `(2r+1) floor((m+1)/2) - floor(m/2)` with `m = -rho`.
pub fn star_lhs(l: &LocusId) -> Int {
    let m = -l.rho();
    (2 * l.r() + 1) * ((m + 1) / 2) - m / 2
}

pub fn star_condition(l: &LocusId) -> Result<bool> {
    if l.rho() >= 0 {
        return Err(Error::domain(format!("condition (*) needs rho < 0, {l} has rho = {}", l.rho())));
    }
    Ok(star_lhs(l) <= l.g())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarClass {
    Holds,
    ExceptionCase,
}

/// Literal evaluation of when (*) can fail for an expected maximal locus:
/// `-rho = r + 1 = ceil(sqrt g)` is odd and `g` is not a square.
pub fn star_classification(l: &LocusId) -> Result<StarClass> {
    if !crate::maximal::is_expected_maximal(l) {
        return Err(Error::domain(format!("{l} is not expected maximal")));
    }
    let m = -l.rho();
    let ceil_root = arith::isqrt_ceil(l.g()).ok_or(Error::Overflow("isqrt"))?;
    if m == l.r() + 1 && m == ceil_root && m % 2 == 1 && !arith::is_square(l.g()) {
        Ok(StarClass::ExceptionCase)
    } else {
        Ok(StarClass::Holds)
    }
}

/// Number of components of the codimension 1/2 decomposition.
pub fn prop31_k(l: &LocusId) -> Int {
    (-l.rho() + 1) / 2
}

/// Builds the chain whose components have rho in {-1, -2}, all -2 except a
/// final -1 when rho is odd.
pub fn build_chain_prop31(l: &LocusId) -> Result<ChainDecomposition> {
    let (g, r, d) = l.triple();
    let rho = l.rho();
    if rho >= 0 {
        return Err(Error::domain(format!("{l} has rho = {rho} >= 0")));
    }
    if d >= g + r {
        return Err(Error::domain(format!("{l} needs d < g + r")));
    }
    if !star_condition(l)? {
        return Err(Error::StarViolated(*l, star_lhs(l)));
    }
    let odd = rho % 2 != 0;
    let k = prop31_k(l) as usize;
    let step = r + 1;

    let mut genera = vec![r - 1; k];
    if odd {
        genera[k - 1] = r;
    }
    let mut idx = 0;
    let mut total: Int = genera.iter().sum();
    while total < g {
        genera[idx] += step;
        total += step;
        idx = (idx + 1) % k;
    }
    if total != g {
        return Err(Error::Internal(format!(
            "cyclic increments overshoot g = {g} for {l}"
        )));
    }
    for (index, &genus) in genera.iter().enumerate() {
        if genus < r {
            return Err(Error::EmptyComponent { locus: *l, index, genus });
        }
    }

    let targets: Vec<Int> = (0..k)
        .map(|i| if odd && i == k - 1 { 1 } else { 2 })
        .collect();
    let mut vanishing = Vec::with_capacity(k);
    for (i, (&gi, &c)) in genera.iter().zip(&targets).enumerate() {
        if (gi + c) % step != 0 {
            return Err(Error::Internal(format!(
                "component {i} genus {gi} is not -{c} mod {step}"
            )));
        }
        vanishing.push((gi + c) / step + d - r - gi);
    }

    let components = assemble_runs(r, d, &genera, &vanishing)?;
    let mut chain = ChainDecomposition {
        source: *l,
        k,
        mode: if odd { ChainMode::Prop31Odd } else { ChainMode::Prop31Even },
        allowed: vec![-2, -1],
        components,
        report: VerificationReport::default(),
    };
    chain.report = verify_chain(&chain);
    Ok(chain)
}

/// Lays out consecutive-run node vanishing from the per-component totals:
/// the first component's right run starts at `v_1`, every later left run at
/// `d - r - (previous right start)`, and the right run takes the remainder.
pub(crate) fn assemble_runs(
    r: Int,
    d: Int,
    genera: &[Int],
    totals: &[Int],
) -> Result<Vec<ChainComponent>> {
    let k = genera.len();
    let run = |v: Int| (0..=r).map(|j| v + j).collect::<Vec<Int>>();
    let mut out = Vec::with_capacity(k);
    let mut prev_right: Option<Int> = None;
    for i in 0..k {
        let left = prev_right.map(|p| d - p - r);
        let right = if i + 1 < k {
            Some(totals[i] - left.unwrap_or(0))
        } else {
            None
        };
        let rho = raw_rho(genera[i], r, d - totals[i])?;
        out.push(ChainComponent {
            g: genera[i],
            d: d - totals[i],
            left: left.map(run),
            right: right.map(run),
            rho,
        });
        prev_right = right;
    }
    Ok(out)
}

/// Re-derives every quantity of a chain from its raw data.
pub fn verify_chain(chain: &ChainDecomposition) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let (g, r, d) = chain.source.triple();
    let comps = &chain.components;
    let k = comps.len();
    let width = (r + 1) as usize;

    let shape_ok = k >= 1
        && chain.k == k
        && comps.iter().enumerate().all(|(i, c)| {
            c.left.is_some() == (i > 0)
                && c.right.is_some() == (i + 1 < k)
                && c.left.as_ref().is_none_or(|v| v.len() == width)
                && c.right.as_ref().is_none_or(|v| v.len() == width)
        });
    rep.record(check::STRUCTURE, shape_ok);
    if !shape_ok {
        return rep;
    }

    rep.record(check::GENUS_SUM, comps.iter().map(|c| c.g).sum::<Int>() == g);
    if matches!(chain.mode, ChainMode::Prop31Even | ChainMode::Prop31Odd) {
        rep.record(check::K_FORMULA, k as Int == prop31_k(&chain.source));
    }

    let odd = chain.source.rho() % 2 != 0;
    for (i, c) in comps.iter().enumerate() {
        let target = match chain.mode {
            ChainMode::Prop31Even => -2,
            ChainMode::Prop31Odd if i + 1 == k => -1,
            ChainMode::Prop31Odd => -2,
            ChainMode::Search => c.rho,
        };
        let mode_parity = match chain.mode {
            ChainMode::Prop31Even => !odd,
            ChainMode::Prop31Odd => odd,
            ChainMode::Search => true,
        };
        rep.record(
            check::CONGRUENCE,
            mode_parity && (c.g - target).rem_euclid(r + 1) == 0,
        );
        rep.record(check::GENUS_FLOOR, c.g > r - 1 && c.g >= 1);

        let mut in_range = true;
        for seq in [&c.left, &c.right].into_iter().flatten() {
            in_range &= seq.iter().all(|&a| (0..=d).contains(&a))
                && seq.windows(2).all(|w| w[0] < w[1]);
        }
        rep.record(check::VANISHING_RANGE, in_range);
        rep.record(check::DEGREE_BOOKKEEPING, c.d == d - c.node_vanishing());

        let adjusted = raw_rho(c.g, r, d).ok().map(|base| {
            base - [&c.left, &c.right]
                .into_iter()
                .flatten()
                .map(|s| vanishing_weight(s))
                .sum::<Int>()
        });
        rep.record(check::COMPONENT_RHO, adjusted == Some(c.rho));
        rep.record(check::RHO_ALLOWED, chain.allowed.contains(&c.rho) && c.rho == target);
    }

    let mut refined = true;
    for pair in comps.windows(2) {
        let (Some(a), Some(b)) = (&pair[0].right, &pair[1].left) else {
            refined = false;
            continue;
        };
        refined &= (0..width).all(|j| a[j] + b[width - 1 - j] == d);
    }
    rep.record(check::REFINED, refined);
    rep.record(
        check::ADDITIVITY,
        comps.iter().map(|c| c.rho).sum::<Int>() == chain.source.rho(),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::enumerate_expected_maximal;

    fn l(g: Int, r: Int, d: Int) -> LocusId {
        LocusId::new(g, r, d).unwrap()
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_condition(&l(42, 6, 41)), Ok(false));
        assert_eq!(star_condition(&l(12, 2, 9)), Ok(true));
        assert_eq!(star_condition(&l(9, 1, 3)), Ok(true));
        assert_eq!(star_lhs(&l(9, 1, 3)), 7);
        assert_eq!(star_lhs(&l(20, 4, 19)), 25);
        assert_eq!(star_condition(&l(12, 1, 7)).unwrap_err().code(), "domain");
    }

    #[test]
    fn star_classification_examples() {
        assert_eq!(star_classification(&l(42, 6, 41)), Ok(StarClass::ExceptionCase));
        assert_eq!(star_classification(&l(12, 2, 9)), Ok(StarClass::Holds));
        assert_eq!(star_classification(&l(20, 4, 19)), Ok(StarClass::ExceptionCase));
        assert_eq!(star_condition(&l(20, 4, 19)), Ok(false));
        assert!(star_classification(&l(12, 3, 10)).is_err());
    }

    #[test]
    fn holds_implies_star() {
        for g in 3..=2000 {
            for x in enumerate_expected_maximal(g).unwrap() {
                if star_classification(&x).unwrap() == StarClass::Holds {
                    assert!(star_condition(&x).unwrap(), "{x}");
                }
            }
        }
    }

    #[test]
    fn prop31_genus_twelve() {
        let c = build_chain_prop31(&l(12, 2, 9)).unwrap();
        assert_eq!(c.mode, ChainMode::Prop31Odd);
        assert_eq!(c.k, 2);
        assert_eq!(c.genera(), vec![7, 5]);
        assert_eq!(c.degrees(), vec![6, 5]);
        assert_eq!(c.components[0].right.as_deref(), Some(&[3, 4, 5][..]));
        assert_eq!(c.components[1].left.as_deref(), Some(&[4, 5, 6][..]));
        assert_eq!(c.component_rhos(), vec![-2, -1]);
        assert!(c.report.passed(), "{:?}", c.report);
    }

    #[test]
    fn prop31_genus_nine_pencil() {
        let c = build_chain_prop31(&l(9, 1, 3)).unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(c.genera(), vec![4, 2, 3]);
        assert_eq!(c.degrees(), vec![2, 1, 2]);
        assert_eq!(c.component_rhos(), vec![-2, -2, -1]);
        let v: Vec<Int> = c.components.iter().map(|x| x.node_vanishing()).collect();
        assert_eq!(v, vec![1, 2, 1]);
        assert_eq!(c.components[1].left.as_deref(), Some(&[1, 2][..]));
        assert_eq!(c.components[1].right.as_deref(), Some(&[1, 2][..]));
        assert!(c.report.passed());
    }

    #[test]
    fn prop31_single_component_when_rho_is_minus_one() {
        for x in [l(7, 1, 4), l(15, 3, 14), l(8, 2, 7)] {
            assert_eq!(x.rho(), -1);
            let c = build_chain_prop31(&x).unwrap();
            assert_eq!(c.k, 1);
            assert_eq!(c.components[0].g, x.g());
            assert_eq!(c.components[0].d, x.d());
            assert!(c.components[0].left.is_none() && c.components[0].right.is_none());
            assert!(c.report.passed());
        }
    }

    #[test]
    fn prop31_rejects_star_violation() {
        let err = build_chain_prop31(&l(42, 6, 41)).unwrap_err();
        assert_eq!(err.code(), "star-violated");
        assert_eq!(build_chain_prop31(&l(12, 1, 7)).unwrap_err().code(), "domain");
    }

    #[test]
    fn perturbed_vanishing_breaks_compatibility() {
        let mut c = build_chain_prop31(&l(12, 2, 9)).unwrap();
        c.components[1].left.as_mut().unwrap()[2] += 1;
        let rep = verify_chain(&c);
        assert_eq!(rep.get(check::REFINED), Some(false));
        assert!(!rep.passed());
    }

    #[test]
    fn crude_node_makes_additivity_strict() {
        // same genera as the g = 12 chain but the node is crude: 3 + 7 > 9
        let mut c = build_chain_prop31(&l(12, 2, 9)).unwrap();
        c.components[1].left = Some(vec![4, 5, 7]);
        c.components[1].rho = raw_rho(5, 2, 9).unwrap() - vanishing_weight(&[4, 5, 7]);
        let rep = verify_chain(&c);
        assert_eq!(rep.get(check::COMPONENT_RHO), Some(true));
        assert_eq!(rep.get(check::REFINED), Some(false));
        assert_eq!(rep.get(check::ADDITIVITY), Some(false));
        assert!(c.component_rhos().iter().sum::<Int>() < c.source.rho());
    }

    #[test]
    fn prop31_on_all_maximal_loci_up_to_500() {
        let mut built = 0;
        for g in 3..=500 {
            for x in enumerate_expected_maximal(g).unwrap() {
                if star_classification(&x).unwrap() != StarClass::Holds {
                    continue;
                }
                let c = build_chain_prop31(&x).unwrap();
                assert!(c.report.passed(), "{x}: {:?}", c.report.failures());
                assert_eq!(c.k as Int, prop31_k(&x));
                let odd = x.rho() % 2 != 0;
                for (i, comp) in c.components.iter().enumerate() {
                    assert_eq!(comp.d, x.d() - comp.node_vanishing());
                    let want = if odd && i + 1 == c.k { -1 } else { -2 };
                    assert_eq!(comp.rho, want);
                    assert_eq!(raw_rho(comp.g, x.r(), comp.d).unwrap(), want);
                }
                built += 1;
            }
        }
        assert!(built > 6000);
    }

    #[test]
    fn chain_json_shape() {
        let c = build_chain_prop31(&l(12, 2, 9)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["mode"], "prop31-odd");
        assert_eq!(v["components"][0]["right"], serde_json::json!([3, 4, 5]));
        assert_eq!(v["components"][0]["left"], serde_json::Value::Null);
        assert_eq!(v["report"]["refined-compatibility"], true);
        let back: ChainDecomposition = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
