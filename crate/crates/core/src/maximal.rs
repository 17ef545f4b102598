//! Expected maximal Brill-Noether loci and conjecture bookkeeping per genus.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::locus::LocusId;
use crate::Int;

/// Genera for which maximality of the expected maximal loci is settled in the literature.
pub const VERIFIED_SMALL_GENUS_BOUND: Int = 23;

/// Genera with known unexpected containments.
pub const EXCEPTIONAL_GENERA: [Int; 3] = [7, 8, 9];

fn require_genus(g: Int) -> Result<()> {
    if g < 3 {
        return Err(Error::domain(format!("expected maximal loci need g >= 3, got {g}")));
    }
    if g > crate::locus::MAX_GENUS {
        return Err(Error::domain(format!("genus {g} exceeds the supported range")));
    }
    Ok(())
}

/// Largest `r` carrying an expected maximal locus in genus `g`.
pub fn r_max(g: Int) -> Result<Int> {
    require_genus(g)?;
    let s = arith::isqrt(g).ok_or(Error::Overflow("isqrt"))?;
    if g >= s * s + s {
        let c = arith::isqrt_ceil(g).ok_or(Error::Overflow("isqrt"))?;
        Ok(c - 1)
    } else {
        Ok(s - 1)
    }
}

/// `r + ceil(gr / (r + 1)) - 1`.
pub fn d_max(g: Int, r: Int) -> Result<Int> {
    let top = r_max(g)?;
    if r < 1 || r > top {
        return Err(Error::domain(format!("r = {r} outside 1..={top} for g = {g}")));
    }
    let q = arith::ceil_div(g * r, r + 1).ok_or(Error::Overflow("d_max"))?;
    Ok(r + q - 1)
}

pub fn enumerate_expected_maximal(g: Int) -> Result<Vec<LocusId>> {
    let top = r_max(g)?;
    (1..=top)
        .map(|r| LocusId::new(g, r, d_max(g, r)?))
        .collect()
}

pub fn is_expected_maximal(l: &LocusId) -> bool {
    let g = l.g();
    match r_max(g) {
        Ok(top) => l.r() >= 1 && l.r() <= top && d_max(g, l.r()).ok() == Some(l.d()),
        Err(_) => false,
    }
}

/// Sufficient criterion: `2r <= d <= g - 1`, `r <= r_max(g)` and `-r - 1 <= rho <= -1`.
pub fn small_rho_criterion(l: &LocusId) -> bool {
    let (g, r, d) = l.triple();
    let Ok(top) = r_max(g) else {
        return false;
    };
    let rho = l.rho();
    r >= 1 && r <= top && 2 * r <= d && d < g && -r - 1 <= rho && rho <= -1
}

/// Closed form for rho of the expected maximal locus with parameter `r`.
pub fn exp_max_rho(g: Int, r: Int) -> Result<Int> {
    let top = r_max(g)?;
    if r < 1 || r > top {
        return Err(Error::domain(format!("r = {r} outside 1..={top} for g = {g}")));
    }
    let m = arith::mod_floor(g, r + 1).ok_or(Error::Overflow("mod"))?;
    Ok(-(r + 1 - m))
}

/// One row of an enumeration listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalEntry {
    pub g: Int,
    pub r: Int,
    pub d: Int,
    pub rho: Int,
}

impl From<LocusId> for MaximalEntry {
    fn from(l: LocusId) -> Self {
        MaximalEntry {
            g: l.g(),
            r: l.r(),
            d: l.d(),
            rho: l.rho(),
        }
    }
}

pub fn expected_maximal_entries(g: Int) -> Result<Vec<MaximalEntry>> {
    Ok(enumerate_expected_maximal(g)?
        .into_iter()
        .map(MaximalEntry::from)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureStatus {
    pub genus: Int,
    pub exceptional: bool,
    pub verified_small: bool,
    pub ckk_family: bool,
    /// Smallest `n >= 3` with `lcm(1..=n)` equal to `g + 1` or `g + 2`.
    pub ckk_witness: Option<Int>,
}

pub fn conjecture_status(g: Int) -> Result<ConjectureStatus> {
    require_genus(g)?;
    let mut witness = None;
    let mut acc: Int = 2;
    let mut n: Int = 3;
    loop {
        acc = arith::lcm(acc, n).ok_or(Error::Overflow("lcm"))?;
        if acc > g + 2 {
            break;
        }
        if acc == g + 1 || acc == g + 2 {
            witness = Some(n);
            break;
        }
        n += 1;
    }
    Ok(ConjectureStatus {
        genus: g,
        exceptional: EXCEPTIONAL_GENERA.contains(&g),
        verified_small: g <= VERIFIED_SMALL_GENUS_BOUND,
        ckk_family: witness.is_some(),
        ckk_witness: witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::{canonicalize, trivial_containments};
    use std::collections::{BTreeMap, BTreeSet, VecDeque};

    fn l(g: Int, r: Int, d: Int) -> LocusId {
        LocusId::new(g, r, d).unwrap()
    }

    /// Scan all (r, d) with 2r <= d <= g - 1 for the three defining conditions.
    fn brute_force_maximal(g: Int) -> Vec<LocusId> {
        let mut out = Vec::new();
        for r in 1..=g {
            for d in 2 * r..g {
                let here = crate::locus::raw_rho(g, r, d).unwrap();
                let up = crate::locus::raw_rho(g, r, d + 1).unwrap();
                let down = crate::locus::raw_rho(g, r - 1, d - 1).unwrap();
                if here < 0 && up >= 0 && down >= 0 {
                    out.push(l(g, r, d));
                }
            }
        }
        out
    }

    #[test]
    fn r_max_examples() {
        assert_eq!(r_max(12), Ok(3));
        assert_eq!(r_max(20), Ok(4));
        assert_eq!(r_max(42), Ok(6));
        assert_eq!(r_max(3), Ok(1));
        assert!(r_max(2).is_err());
    }

    #[test]
    fn d_max_examples() {
        assert_eq!(d_max(42, 6), Ok(41));
        assert_eq!(d_max(12, 2), Ok(9));
        for g in 3..200 {
            assert_eq!(d_max(g, 1), Ok((g + 1) / 2));
        }
        assert!(d_max(12, 4).is_err());
        assert!(d_max(12, 0).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_expected_maximal(12).unwrap(), vec![l(12, 1, 6), l(12, 2, 9), l(12, 3, 11)]);
        assert_eq!(enumerate_expected_maximal(7).unwrap(), vec![l(7, 1, 4), l(7, 2, 6)]);
        assert_eq!(enumerate_expected_maximal(4).unwrap(), vec![l(4, 1, 2)]);
    }

    #[test]
    fn membership_examples() {
        assert!(is_expected_maximal(&l(12, 3, 11)));
        assert!(!is_expected_maximal(&l(12, 3, 10)));
        assert!(is_expected_maximal(&l(42, 6, 41)));
        assert!(!is_expected_maximal(&l(2, 1, 1)));
    }

    #[test]
    fn exp_max_rho_examples() {
        assert_eq!(exp_max_rho(20, 4), Ok(-5));
        assert_eq!(l(20, 4, 19).rho(), -5);
        assert_eq!(exp_max_rho(12, 2), Ok(-3));
        assert_eq!(l(12, 2, 9).rho(), -3);
        assert_eq!(exp_max_rho(43, 6), Ok(-6));
        assert!(exp_max_rho(43, 7).is_err());
    }

    #[test]
    fn conjecture_status_examples() {
        let s = conjecture_status(8).unwrap();
        assert!(s.exceptional && s.verified_small);
        let s = conjecture_status(59).unwrap();
        assert!(s.ckk_family);
        assert_eq!(s.ckk_witness, Some(5));
        let s = conjecture_status(24).unwrap();
        assert!(!s.verified_small && !s.exceptional && !s.ckk_family);
        assert_eq!(conjecture_status(10).unwrap().ckk_witness, Some(4));
        assert_eq!(conjecture_status(4).unwrap().ckk_witness, Some(3));
        assert_eq!(conjecture_status(418).unwrap().ckk_witness, Some(7));
        assert!(conjecture_status(2).is_err());
    }

    #[test]
    fn no_proper_trivial_containment_out_of_maximal_loci() {
        for g in 3..=2000 {
            for x in enumerate_expected_maximal(g).unwrap() {
                let (g, r, d) = x.triple();
                assert!(x.rho() < 0);
                assert!(2 * r <= d && d < g, "{x}");
                assert!(l(g, r, d + 1).rho() >= 0);
                assert!(crate::locus::raw_rho(g, r - 1, d - 1).unwrap() >= 0);
                assert_eq!(x.rho(), exp_max_rho(g, r).unwrap());
                assert!(small_rho_criterion(&x));
            }
        }
    }

    #[test]
    fn small_rho_criterion_implies_maximal() {
        for g in 3..=400 {
            for r in 1..=r_max(g).unwrap() {
                for d in 2 * r..g {
                    let x = l(g, r, d);
                    if small_rho_criterion(&x) {
                        assert!(is_expected_maximal(&x), "{x}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for g in 3..=300 {
            assert_eq!(enumerate_expected_maximal(g).unwrap(), brute_force_maximal(g), "g = {g}");
        }
    }

    #[test]
    fn every_proper_locus_reaches_a_maximal_one() {
        for g in 3..=100 {
            let mut proper = BTreeSet::new();
            for d in 0..=2 * g - 2 {
                for r in 1..=d {
                    if g - d + r - 1 < 0 {
                        continue;
                    }
                    let x = l(g, r, d);
                    if x.rho() < 0 {
                        proper.insert(canonicalize(&x).unwrap().locus());
                    }
                }
            }
            // reverse edges of the trivial containment graph
            let mut into: BTreeMap<LocusId, Vec<LocusId>> = BTreeMap::new();
            for x in &proper {
                for t in trivial_containments(x).unwrap() {
                    if t.rho >= 0 || t.target.d() > 2 * g - 2 {
                        continue;
                    }
                    let next = canonicalize(&t.target).unwrap().locus();
                    into.entry(next).or_default().push(*x);
                }
            }
            let mut reached: BTreeSet<LocusId> = enumerate_expected_maximal(g).unwrap().into_iter().collect();
            let mut queue: VecDeque<LocusId> = reached.iter().copied().collect();
            while let Some(y) = queue.pop_front() {
                for x in into.get(&y).into_iter().flatten() {
                    if reached.insert(*x) {
                        queue.push_back(*x);
                    }
                }
            }
            for x in &proper {
                assert!(reached.contains(x), "{x} reaches no expected maximal locus");
            }
        }
    }
}
