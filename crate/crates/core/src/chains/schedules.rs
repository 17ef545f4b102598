//! Exhaustive enumeration of limit linear series schedules on small chains.
//!
//! A schedule fixes, at every node of a chain, the vanishing sequence of the
//! aspect on each side. This is an oracle: it knows nothing about the
//! constructions in the parent module and simply lists every admissible
//! assignment.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locus::{raw_rho, vanishing_weight};
use crate::Int;

pub const DEFAULT_SCHEDULE_CAP: usize = 1_000_000;

/// Integer factor applied to both oracle bounds.
pub const ORACLE_SCALE_ENV: &str = "BN_ATLAS_ORACLE_SCALE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleScale {
    pub max_components: usize,
    pub max_degree: Int,
}

impl Default for OracleScale {
    fn default() -> Self {
        OracleScale {
            max_components: 6,
            max_degree: 30,
        }
    }
}

impl OracleScale {
    pub fn scaled(factor: u32) -> Result<Self> {
        if factor == 0 || factor > 1000 {
            return Err(Error::OracleScale(format!("scale factor {factor} outside 1..=1000")));
        }
        let base = OracleScale::default();
        Ok(OracleScale {
            max_components: base.max_components * factor as usize,
            max_degree: base.max_degree * Int::from(factor),
        })
    }

    /// Reads the scale factor from the environment, defaulting to 1.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ORACLE_SCALE_ENV) {
            Ok(raw) => {
                let factor: u32 = raw.trim().parse().map_err(|_| {
                    Error::OracleScale(format!("{ORACLE_SCALE_ENV}={raw:?} is not a positive integer"))
                })?;
                OracleScale::scaled(factor)
            }
            Err(_) => Ok(OracleScale::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeAspects {
    /// Vanishing on the component to the left of the node.
    pub before: Vec<Int>,
    /// Vanishing on the component to the right of the node.
    pub after: Vec<Int>,
}

impl NodeAspects {
    pub fn is_refined(&self, d: Int) -> bool {
        let n = self.before.len();
        (0..n).all(|j| self.before[j] + self.after[n - 1 - j] == d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub nodes: Vec<NodeAspects>,
    pub refined: bool,
    pub component_rhos: Vec<Int>,
    pub total: Int,
}

#[derive(Debug, Clone)]
struct NodeChoice {
    aspects: NodeAspects,
    before_weight: Int,
    after_weight: Int,
    refined: bool,
}

/// Borrowed view of one schedule during a visit.
pub struct ScheduleView<'a> {
    enumerator: &'a ScheduleEnumerator,
    picks: &'a [usize],
    pub component_rhos: &'a [Int],
    pub total: Int,
    pub refined: bool,
}

impl ScheduleView<'_> {
    pub fn node(&self, i: usize) -> &NodeAspects {
        &self.enumerator.choices[self.picks[i]].aspects
    }

    pub fn to_schedule(&self) -> Schedule {
        Schedule {
            nodes: (0..self.picks.len()).map(|i| self.node(i).clone()).collect(),
            refined: self.refined,
            component_rhos: self.component_rhos.to_vec(),
            total: self.total,
        }
    }
}

pub struct ScheduleEnumerator {
    genera: Vec<Int>,
    r: Int,
    d: Int,
    base_rhos: Vec<Int>,
    choices: Vec<NodeChoice>,
}

/// All strictly increasing sequences of length `len` in `lo..=hi`, lexicographically.
fn increasing_sequences(len: usize, lo: Int, hi: Int) -> Vec<Vec<Int>> {
    fn go(len: usize, start: Int, hi: Int, cur: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let remaining = (len - cur.len()) as Int;
        for a in start..=hi - remaining + 1 {
            cur.push(a);
            go(len, a + 1, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, lo, hi, &mut Vec::with_capacity(len), &mut out);
    out
}

impl ScheduleEnumerator {
    pub fn new(genera: &[Int], r: Int, d: Int, refined_only: bool, scale: &OracleScale) -> Result<Self> {
        if genera.is_empty() || genera.len() > scale.max_components {
            return Err(Error::OracleScale(format!(
                "{} components outside 1..={}",
                genera.len(),
                scale.max_components
            )));
        }
        if d > scale.max_degree {
            return Err(Error::OracleScale(format!("degree {d} above {}", scale.max_degree)));
        }
        if r < 0 || d < r {
            return Err(Error::domain(format!("need 0 <= r <= d, got r = {r}, d = {d}")));
        }
        if let Some(bad) = genera.iter().find(|&&gi| gi < 1) {
            return Err(Error::domain(format!("component genus {bad} < 1")));
        }
        let len = (r + 1) as usize;
        let all = increasing_sequences(len, 0, d);
        let mut choices = Vec::new();
        for before in &all {
            if refined_only {
                let after: Vec<Int> = before.iter().rev().map(|a| d - a).collect();
                choices.push(NodeChoice {
                    before_weight: vanishing_weight(before),
                    after_weight: vanishing_weight(&after),
                    aspects: NodeAspects { before: before.clone(), after },
                    refined: true,
                });
            } else {
                for after in &all {
                    let ok = (0..len).all(|j| before[j] + after[len - 1 - j] >= d);
                    if !ok {
                        continue;
                    }
                    let aspects = NodeAspects {
                        before: before.clone(),
                        after: after.clone(),
                    };
                    choices.push(NodeChoice {
                        before_weight: vanishing_weight(before),
                        after_weight: vanishing_weight(after),
                        refined: aspects.is_refined(d),
                        aspects,
                    });
                }
            }
        }
        let base_rhos = genera
            .iter()
            .map(|&gi| raw_rho(gi, r, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScheduleEnumerator {
            genera: genera.to_vec(),
            r,
            d,
            base_rhos,
            choices,
        })
    }

    pub fn genera(&self) -> &[Int] {
        &self.genera
    }

    pub fn r(&self) -> Int {
        self.r
    }

    pub fn d(&self) -> Int {
        self.d
    }

    /// Number of admissible aspect pairs at a single node.
    pub fn choices_per_node(&self) -> usize {
        self.choices.len()
    }

    pub fn count(&self) -> u128 {
        (self.choices.len() as u128).pow(self.genera.len() as u32 - 1)
    }

    /// Visits every schedule in lexicographic order of the node choices,
    /// first node outermost.
    pub fn visit<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&ScheduleView<'_>) -> ControlFlow<()>,
    {
        let k = self.genera.len();
        let nodes = k - 1;
        let mut picks = vec![0usize; nodes];
        let mut rhos = self.base_rhos.clone();
        if nodes == 0 {
            let total = rhos.iter().sum();
            return f(&ScheduleView {
                enumerator: self,
                picks: &picks,
                component_rhos: &rhos,
                total,
                refined: true,
            });
        }
        if self.choices.is_empty() {
            return ControlFlow::Continue(());
        }
        // rhos[i] holds the adjusted value including every node already placed
        let apply = |rhos: &mut [Int], node: usize, c: &NodeChoice, sign: Int| {
            rhos[node] -= sign * c.before_weight;
            rhos[node + 1] -= sign * c.after_weight;
        };
        for i in 0..nodes {
            apply(&mut rhos, i, &self.choices[0], 1);
        }
        loop {
            let refined = picks.iter().all(|&p| self.choices[p].refined);
            let view = ScheduleView {
                enumerator: self,
                picks: &picks,
                component_rhos: &rhos,
                total: rhos.iter().sum(),
                refined,
            };
            f(&view)?;
            // odometer step, last node fastest
            let mut i = nodes;
            loop {
                if i == 0 {
                    return ControlFlow::Continue(());
                }
                i -= 1;
                apply(&mut rhos, i, &self.choices[picks[i]], -1);
                picks[i] += 1;
                if picks[i] < self.choices.len() {
                    apply(&mut rhos, i, &self.choices[picks[i]], 1);
                    break;
                }
                picks[i] = 0;
                apply(&mut rhos, i, &self.choices[0], 1);
            }
        }
    }

    pub fn collect(&self, cap: usize) -> Result<Vec<Schedule>> {
        let mut out = Vec::new();
        let mut overflow = false;
        let _ = self.visit(|v| {
            if out.len() == cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            out.push(v.to_schedule());
            ControlFlow::Continue(())
        });
        if overflow {
            return Err(Error::OracleScale(format!(
                "more than {cap} schedules for genera {:?}, r = {}, d = {}",
                self.genera, self.r, self.d
            )));
        }
        Ok(out)
    }
}

pub fn enumerate_schedules(
    genera: &[Int],
    r: Int,
    d: Int,
    refined_only: bool,
    cap: usize,
) -> Result<Vec<Schedule>> {
    enumerate_schedules_with(genera, r, d, refined_only, cap, &OracleScale::from_env()?)
}

pub fn enumerate_schedules_with(
    genera: &[Int],
    r: Int,
    d: Int,
    refined_only: bool,
    cap: usize,
    scale: &OracleScale,
) -> Result<Vec<Schedule>> {
    ScheduleEnumerator::new(genera, r, d, refined_only, scale)?.collect(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::build_chain_prop31;
    use crate::locus::LocusId;

    #[test]
    fn two_genus_two_pencils() {
        let all = enumerate_schedules_with(&[2, 2], 1, 2, true, 100, &OracleScale::default()).unwrap();
        let befores: Vec<Vec<Int>> = all.iter().map(|s| s.nodes[0].before.clone()).collect();
        assert_eq!(befores, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        for s in &all {
            assert!(s.refined);
            assert_eq!(s.total, -2);
            assert_eq!(s.component_rhos.iter().sum::<Int>(), -2);
        }
        let runs = all
            .iter()
            .filter(|s| s.nodes[0].before[1] == s.nodes[0].before[0] + 1)
            .count();
        assert_eq!(runs, 2);
    }

    #[test]
    fn contains_prop31_chain() {
        let chain = build_chain_prop31(&LocusId::new(12, 2, 9).unwrap()).unwrap();
        let all = enumerate_schedules_with(&[7, 5], 2, 9, true, DEFAULT_SCHEDULE_CAP, &OracleScale::default()).unwrap();
        let hit = all.iter().find(|s| {
            Some(&s.nodes[0].before) == chain.components[0].right.as_ref()
                && Some(&s.nodes[0].after) == chain.components[1].left.as_ref()
        });
        let hit = hit.expect("prop31 schedule present");
        assert_eq!(hit.component_rhos, chain.component_rhos());
    }

    #[test]
    fn crude_is_superset_and_strictly_lower() {
        let refined = enumerate_schedules_with(&[3, 4], 2, 6, true, DEFAULT_SCHEDULE_CAP, &OracleScale::default()).unwrap();
        let crude = enumerate_schedules_with(&[3, 4], 2, 6, false, DEFAULT_SCHEDULE_CAP, &OracleScale::default()).unwrap();
        let target = raw_rho(7, 2, 6).unwrap();
        assert!(crude.len() > refined.len());
        assert_eq!(crude.iter().filter(|s| s.refined).count(), refined.len());
        for s in &crude {
            if s.refined {
                assert_eq!(s.total, target);
            } else {
                assert!(s.total < target);
            }
        }
    }

    #[test]
    fn scale_limits() {
        let s = OracleScale::default();
        let e = enumerate_schedules_with(&[1; 7], 1, 3, true, 10, &s).unwrap_err();
        assert_eq!(e.code(), "oracle-scale");
        let e = enumerate_schedules_with(&[3, 3], 1, 31, true, 10, &s).unwrap_err();
        assert_eq!(e.code(), "oracle-scale");
        let big = OracleScale::scaled(2).unwrap();
        assert_eq!(big.max_components, 12);
        assert_eq!(big.max_degree, 60);
        assert!(enumerate_schedules_with(&[3, 3], 1, 31, true, 1000, &big).is_ok());
        let e = enumerate_schedules_with(&[3, 3, 3], 2, 9, true, 10, &s).unwrap_err();
        assert_eq!(e.code(), "oracle-scale");
    }

    #[test]
    fn single_component_has_one_schedule() {
        let all = enumerate_schedules_with(&[5], 1, 3, true, 10, &OracleScale::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].total, raw_rho(5, 1, 3).unwrap());
    }

    #[test]
    fn visit_matches_collect() {
        let e = ScheduleEnumerator::new(&[2, 3, 2], 1, 4, false, &OracleScale::default()).unwrap();
        let listed = e.collect(DEFAULT_SCHEDULE_CAP).unwrap();
        assert_eq!(listed.len() as u128, e.count());
        let mut i = 0;
        let _ = e.visit(|v| {
            assert_eq!(v.to_schedule(), listed[i]);
            i += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(i, listed.len());
    }
}
