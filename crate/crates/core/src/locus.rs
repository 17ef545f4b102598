//! Brill-Noether loci, ramification data, Serre duality and trivial containments.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::Int;

/// Largest genus accepted anywhere in the crate.
pub const MAX_GENUS: Int = 1_000_000_000;
/// Bound on `r` and `d`; with `g <= MAX_GENUS` every Brill-Noether number fits in 63 bits.
pub const MAX_PARAM: Int = 2 * MAX_GENUS;

/// `g - (r + 1)(g - d + r)` for arbitrary integers, checked.
///
/// Unlike [`rho`] this accepts genus 0 and 1, which occur as chain
/// components and as children in dimension certificates.
pub fn raw_rho(g: Int, r: Int, d: Int) -> Result<Int> {
    arith::brill_noether_number(g, r, d).ok_or(Error::Overflow("rho"))
}

fn validate_triple(g: Int, r: Int, d: Int) -> Result<()> {
    if g < 2 {
        return Err(Error::domain(format!("genus must be >= 2, got {g}")));
    }
    if r < 0 || d < 0 {
        return Err(Error::domain(format!(
            "r and d must be non-negative, got r = {r}, d = {d}"
        )));
    }
    if g > MAX_GENUS || r > MAX_PARAM || d > MAX_PARAM {
        return Err(Error::domain(format!(
            "(g, r, d) = ({g}, {r}, {d}) exceeds the supported range g <= {MAX_GENUS}, r, d <= {MAX_PARAM}"
        )));
    }
    Ok(())
}

/// The Brill-Noether number of a validated triple.
pub fn rho(g: Int, r: Int, d: Int) -> Result<Int> {
    validate_triple(g, r, d)?;
    raw_rho(g, r, d)
}

/// A Brill-Noether locus `M^r_{g,d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLocus")]
pub struct LocusId {
    g: Int,
    r: Int,
    d: Int,
}

#[derive(Deserialize)]
struct RawLocus {
    g: Int,
    r: Int,
    d: Int,
}

impl TryFrom<RawLocus> for LocusId {
    type Error = Error;
    fn try_from(raw: RawLocus) -> Result<Self> {
        LocusId::new(raw.g, raw.r, raw.d)
    }
}

impl LocusId {
    pub fn new(g: Int, r: Int, d: Int) -> Result<Self> {
        validate_triple(g, r, d)?;
        Ok(LocusId { g, r, d })
    }

    pub fn g(&self) -> Int {
        self.g
    }

    pub fn r(&self) -> Int {
        self.r
    }

    pub fn d(&self) -> Int {
        self.d
    }

    pub fn triple(&self) -> (Int, Int, Int) {
        (self.g, self.r, self.d)
    }

    pub fn rho(&self) -> Int {
        raw_rho(self.g, self.r, self.d).expect("validated triples cannot overflow")
    }

    /// `max(0, -rho)`: the only codimension the crate ever reports.
    pub fn expected_codimension(&self) -> Int {
        (-self.rho()).max(0)
    }

    pub fn is_canonical(&self) -> bool {
        self.d < self.g
    }

    /// Node identifier used by the DOT export.
    pub fn dot_id(&self) -> String {
        format!("{}_{}_{}", self.g, self.r, self.d)
    }
}

impl fmt::Display for LocusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M^{}_{{{},{}}}", self.r, self.g, self.d)
    }
}

/// A locus in canonical form, `d <= g - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CanonicalLocus(LocusId);

impl CanonicalLocus {
    pub fn locus(&self) -> LocusId {
        self.0
    }
}

impl std::ops::Deref for CanonicalLocus {
    type Target = LocusId;
    fn deref(&self) -> &LocusId {
        &self.0
    }
}

impl From<CanonicalLocus> for LocusId {
    fn from(c: CanonicalLocus) -> LocusId {
        c.0
    }
}

/// Ramification sequence `0 <= b_0 <= ... <= b_r <= d - r` of type `(r, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamificationSequence {
    d: Int,
    entries: Vec<Int>,
}

impl RamificationSequence {
    pub fn new(entries: Vec<Int>, d: Int) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("ramification sequence needs r + 1 >= 1 entries"));
        }
        let r = entries.len() as Int - 1;
        if entries[0] < 0 {
            return Err(Error::domain(format!("ramification entry {} < 0", entries[0])));
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain(format!(
                "ramification sequence {entries:?} is not non-decreasing"
            )));
        }
        if entries[entries.len() - 1] > d - r {
            return Err(Error::domain(format!(
                "ramification sequence {entries:?} exceeds d - r = {}",
                d - r
            )));
        }
        Ok(RamificationSequence { d, entries })
    }

    pub fn r(&self) -> Int {
        self.entries.len() as Int - 1
    }

    pub fn d(&self) -> Int {
        self.d
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn weight(&self) -> Int {
        self.entries.iter().sum()
    }

    pub fn to_vanishing(&self) -> VanishingSequence {
        VanishingSequence {
            d: self.d,
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, b)| b + i as Int)
                .collect(),
        }
    }
}

/// Vanishing sequence `0 <= a_0 < ... < a_r <= d` of type `(r, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VanishingSequence {
    d: Int,
    entries: Vec<Int>,
}

impl VanishingSequence {
    pub fn new(entries: Vec<Int>, d: Int) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("vanishing sequence needs r + 1 >= 1 entries"));
        }
        if entries[0] < 0 || entries[entries.len() - 1] > d {
            return Err(Error::domain(format!(
                "vanishing sequence {entries:?} leaves [0, {d}]"
            )));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "vanishing sequence {entries:?} is not strictly increasing"
            )));
        }
        Ok(VanishingSequence { d, entries })
    }

    /// Base point of order `v`: the run `(v, v + 1, ..., v + r)`.
    pub fn consecutive(v: Int, r: Int, d: Int) -> Result<Self> {
        VanishingSequence::new((0..=r).map(|i| v + i).collect(), d)
    }

    pub fn r(&self) -> Int {
        self.entries.len() as Int - 1
    }

    pub fn d(&self) -> Int {
        self.d
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    /// Weight of the associated ramification sequence.
    pub fn weight(&self) -> Int {
        vanishing_weight(&self.entries)
    }

    pub fn to_ramification(&self) -> RamificationSequence {
        RamificationSequence {
            d: self.d,
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, a)| a - i as Int)
                .collect(),
        }
    }
}

/// `sum a_i - r(r+1)/2` for a raw vanishing vector.
pub fn vanishing_weight(entries: &[Int]) -> Int {
    let r = entries.len() as Int - 1;
    entries.iter().sum::<Int>() - r * (r + 1) / 2
}

/// A locus with marked points carrying imposed ramification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointedLocusId {
    base: LocusId,
    marks: Vec<RamificationSequence>,
}

impl PointedLocusId {
    pub fn new(base: LocusId, marks: Vec<RamificationSequence>) -> Result<Self> {
        for (i, m) in marks.iter().enumerate() {
            if m.r() != base.r() || m.d() != base.d() {
                return Err(Error::domain(format!(
                    "mark {i} has type ({}, {}) but the locus has type ({}, {})",
                    m.r(),
                    m.d(),
                    base.r(),
                    base.d()
                )));
            }
        }
        Ok(PointedLocusId { base, marks })
    }

    pub fn from_vanishing(base: LocusId, marks: Vec<VanishingSequence>) -> Result<Self> {
        PointedLocusId::new(base, marks.iter().map(|v| v.to_ramification()).collect())
    }

    pub fn base(&self) -> LocusId {
        self.base
    }

    pub fn marks(&self) -> &[RamificationSequence] {
        &self.marks
    }
}

/// `rho(g, r, d) - sum_i w(b^i)`.
pub fn adjusted_rho(p: &PointedLocusId) -> Result<Int> {
    let mut acc = p.base.rho();
    for m in &p.marks {
        if m.r() != p.base.r() || m.d() != p.base.d() {
            return Err(Error::domain("mark type does not match the base locus"));
        }
        acc = acc
            .checked_sub(m.weight())
            .ok_or(Error::Overflow("adjusted rho"))?;
    }
    Ok(acc)
}

/// `M^r_{g,d} = M^{g-d+r-1}_{g,2g-2-d}`.
pub fn serre_dual(l: &LocusId) -> Result<LocusId> {
    let (g, r, d) = l.triple();
    if d > 2 * g - 2 {
        return Err(Error::domain(format!(
            "Serre duality needs d <= 2g - 2, got d = {d} for g = {g}"
        )));
    }
    let dual_r = g - d + r - 1;
    if dual_r < 0 {
        return Err(Error::domain(format!(
            "Serre dual of {l} would have r = {dual_r} < 0"
        )));
    }
    LocusId::new(g, dual_r, 2 * g - 2 - d)
}

pub fn canonicalize(l: &LocusId) -> Result<CanonicalLocus> {
    if l.d() > 2 * l.g() - 2 {
        return Err(Error::domain(format!(
            "canonical form needs d <= 2g - 2, got {l}"
        )));
    }
    if l.is_canonical() {
        Ok(CanonicalLocus(*l))
    } else {
        serre_dual(l).map(CanonicalLocus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainmentRule {
    AddBasepoint,
    RemoveNonBasepoint,
}

impl ContainmentRule {
    pub fn tag(&self) -> &'static str {
        match self {
            ContainmentRule::AddBasepoint => "add-basepoint",
            ContainmentRule::RemoveNonBasepoint => "remove-non-basepoint",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialContainment {
    pub target: LocusId,
    pub rule: ContainmentRule,
    pub rho: Int,
}

/// Targets of the basepoint containments out of a locus with `rho < 0`.
///
/// The `d + 1` target is always listed, annotated with its rho, so a caller
/// sees directly whether the locus is maximal in the degree direction.
pub fn trivial_containments(l: &LocusId) -> Result<Vec<TrivialContainment>> {
    if l.rho() >= 0 {
        return Err(Error::domain(format!(
            "{l} has rho = {} >= 0; it is not a proper locus",
            l.rho()
        )));
    }
    let (g, r, d) = l.triple();
    let mut out = Vec::with_capacity(2);
    let up = LocusId::new(g, r, d + 1)?;
    out.push(TrivialContainment {
        target: up,
        rule: ContainmentRule::AddBasepoint,
        rho: up.rho(),
    });
    if r >= 1 && d >= 1 {
        let down = LocusId::new(g, r - 1, d - 1)?;
        if down.rho() < 0 {
            out.push(TrivialContainment {
                target: down,
                rule: ContainmentRule::RemoveNonBasepoint,
                rho: down.rho(),
            });
        }
    }
    Ok(out)
}
