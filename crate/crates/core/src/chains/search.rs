//! Deterministic search for chain decompositions with prescribed component rho.
//!
//! Component `i` is parametrized by `m_i >= 2` and `c_i = -rho_i`:
//! `g_i = (r + 1) m_i - c_i` with `sum m_i = g - d + r` and `sum c_i = -rho`.
//! The node runs then follow from the same bookkeeping as the codimension
//! one/two construction.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::locus::LocusId;
use crate::maximal::is_expected_maximal;
use crate::Int;

use super::{assemble_runs, verify_chain, ChainDecomposition, ChainMode, VerificationReport};

/// Upper bound on (c, m) candidate pairs tried before giving up.
pub const SEARCH_CANDIDATE_BUDGET: u64 = 2_000_000;

/// Compositions of `total` into `k` parts from `parts`, larger leading parts first.
fn rho_compositions(total: Int, k: usize, parts: &[Int]) -> Vec<Vec<Int>> {
    fn go(total: Int, k: usize, parts: &[Int], cur: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
        if cur.len() == k {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for &p in parts {
            if p <= total {
                cur.push(p);
                go(total - p, k, parts, cur, out);
                cur.pop();
            }
        }
    }
    let mut desc = parts.to_vec();
    desc.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    go(total, k, &desc, &mut Vec::new(), &mut out);
    out
}

/// Visits compositions of `total` into `k` parts `>= 2` in colex order.
fn colex_compositions<F>(total: Int, k: usize, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Int]) -> ControlFlow<()>,
{
    fn go<F>(rest: Int, slot: usize, m: &mut [Int], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Int]) -> ControlFlow<()>,
    {
        if slot == 0 {
            m[0] = rest;
            return f(m);
        }
        let reserve = 2 * slot as Int;
        for v in 2..=rest - reserve {
            m[slot] = v;
            go(rest - v, slot - 1, m, f)?;
        }
        ControlFlow::Continue(())
    }
    if k == 0 || total < 2 * k as Int {
        return ControlFlow::Continue(());
    }
    let mut m = vec![0; k];
    go(total, k - 1, &mut m, f)
}

fn balanced(total: Int, k: usize) -> Option<Vec<Int>> {
    let base = total / k as Int;
    let extra = (total % k as Int) as usize;
    if base < 2 {
        return None;
    }
    Some((0..k).map(|i| base + Int::from(i < extra)).collect())
}

fn check_allowed(l: &LocusId, allowed: &[Int]) -> Result<Vec<Int>> {
    let mut set: Vec<Int> = allowed.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() || set.iter().any(|c| !(-3..=-1).contains(c)) {
        return Err(Error::domain(format!(
            "allowed component rho must be a non-empty subset of {{-1, -2, -3}}, got {allowed:?}"
        )));
    }
    let (g, r, _) = l.triple();
    let rho = l.rho();
    if rho >= 0 {
        return Err(Error::domain(format!("{l} has rho = {rho} >= 0")));
    }
    if set == [-1] && -rho * (2 * r + 1) > g {
        return Err(Error::domain(format!(
            "{l}: -rho (2r+1) = {} > g, divisor-only chains are not guaranteed",
            -rho * (2 * r + 1)
        )));
    }
    if set.contains(&-3) && !is_expected_maximal(l) {
        return Err(Error::domain(format!(
            "{l} is not expected maximal; chains with rho = -3 components need that hypothesis"
        )));
    }
    Ok(set)
}

pub fn build_chain_search(l: &LocusId, allowed: &[Int]) -> Result<ChainDecomposition> {
    let set = check_allowed(l, allowed)?;
    let (g, r, d) = l.triple();
    let target = -l.rho();
    let h = g - d + r;
    let costs: Vec<Int> = set.iter().map(|c| -c).collect();
    let max_cost = *costs.iter().max().expect("non-empty");
    let k_min = ((target + max_cost - 1) / max_cost) as usize;
    let k_max = target as usize;

    let mut tried: u64 = 0;
    let mut found: Option<ChainDecomposition> = None;
    let mut try_candidate = |cs: &[Int], ms: &[Int], tried: &mut u64| -> ControlFlow<()> {
        *tried += 1;
        if *tried > SEARCH_CANDIDATE_BUDGET {
            return ControlFlow::Break(());
        }
        let genera: Vec<Int> = ms.iter().zip(cs).map(|(m, c)| (r + 1) * m - c).collect();
        let totals: Vec<Int> = genera
            .iter()
            .zip(ms)
            .map(|(gi, m)| d - gi - r + m)
            .collect();
        let Ok(components) = assemble_runs(r, d, &genera, &totals) else {
            return ControlFlow::Continue(());
        };
        let mut chain = ChainDecomposition {
            source: *l,
            k: genera.len(),
            mode: ChainMode::Search,
            allowed: set.clone(),
            components,
            report: VerificationReport::default(),
        };
        chain.report = verify_chain(&chain);
        if chain.report.passed() {
            found = Some(chain);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    };

    'outer: for k in k_min..=k_max {
        if h < 2 * k as Int {
            break;
        }
        for cs in rho_compositions(target, k, &costs) {
            if let Some(ms) = balanced(h, k) {
                if try_candidate(&cs, &ms, &mut tried).is_break() {
                    break 'outer;
                }
            }
            let flow = colex_compositions(h, k, &mut |ms: &[Int]| try_candidate(&cs, ms, &mut tried));
            if flow.is_break() {
                break 'outer;
            }
        }
    }
    found.ok_or_else(|| Error::NoDecompositionFound {
        locus: *l,
        allowed: set,
        candidates: tried.min(SEARCH_CANDIDATE_BUDGET),
    })
}
