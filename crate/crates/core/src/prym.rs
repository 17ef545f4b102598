//! Non-containments coming from the image of the Prym map `R_g -> M_{2g-1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, CertificateKind, Subject, Witness};
use crate::error::{Error, Result};
use crate::locus::{canonicalize, raw_rho, LocusId};
use crate::maximal::{is_expected_maximal, r_max, small_rho_criterion};
use crate::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymParams {
    pub r: Int,
    pub eps: Int,
    pub g_base: Int,
    pub g_tilde: Int,
    /// `M^r_{g~, 2 g_base - 2}`, which contains the image of the Prym map.
    pub target: LocusId,
    pub target_rho: Int,
    pub target_expected_maximal: bool,
}

pub fn prym_params(r: Int, eps: Int) -> Result<PrymParams> {
    if !(1..=40_000).contains(&r) {
        return Err(Error::domain(format!("r = {r} outside 1..=40000")));
    }
    if eps < 0 || 2 * eps >= r {
        return Err(Error::domain(format!("need 0 <= eps < r/2, got r = {r}, eps = {eps}")));
    }
    let g_base = 1 + r * (r + 1) / 2 + eps;
    let g_tilde = 2 * g_base - 1;
    let target = LocusId::new(g_tilde, r, 2 * g_base - 2)?;
    Ok(PrymParams {
        r,
        eps,
        g_base,
        g_tilde,
        target,
        target_rho: target.rho(),
        target_expected_maximal: is_expected_maximal(&target),
    })
}

/// Inverts `g~ = 1 + r(r+1) + 2 eps` with `0 <= eps < r/2`; at most one `r` fits.
pub fn prym_params_for_genus(g_tilde: Int) -> Option<PrymParams> {
    if g_tilde < 3 || g_tilde % 2 == 0 {
        return None;
    }
    let mut r: Int = 1;
    while r * (r + 1) < g_tilde {
        let rest = g_tilde - 1 - r * (r + 1);
        if rest % 2 == 0 && rest / 2 < r - rest / 2 {
            return prym_params(r, rest / 2).ok();
        }
        r += 1;
    }
    None
}

/// `rho(g~, s, e) = -s - 1`.
pub fn schwarz_predicate(g_tilde: Int, s: Int, e: Int) -> bool {
    raw_rho(g_tilde, s, e).is_ok_and(|rho| rho == -s - 1)
}

/// `rho(g~, s, e) = -s`, `e` odd and `s` not congruent to 3 mod 4.
pub fn parity_predicate(g_tilde: Int, s: Int, e: Int) -> bool {
    raw_rho(g_tilde, s, e).is_ok_and(|rho| rho == -s)
        && e.rem_euclid(2) == 1
        && s.rem_euclid(4) != 3
}

/// The two-bullet phrasing: `s` even with `e` odd, or `s = 1 mod 4` with `e` odd.
pub fn parity_predicate_case_list(g_tilde: Int, s: Int, e: Int) -> bool {
    let rho_ok = raw_rho(g_tilde, s, e).is_ok_and(|rho| rho == -s);
    let e_odd = e.rem_euclid(2) == 1;
    rho_ok && ((s.rem_euclid(2) == 0 && e_odd) || (s.rem_euclid(4) == 1 && e_odd))
}

/// True when the two parity phrasings give different answers.
pub fn parity_forms_disagree(g_tilde: Int, s: Int, e: Int) -> bool {
    parity_predicate(g_tilde, s, e) != parity_predicate_case_list(g_tilde, s, e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrymBullet {
    Schwarz,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymWitness {
    pub r: Int,
    pub eps: Int,
    pub g_base: Int,
    pub g_tilde: Int,
    pub s: Int,
    pub e: Int,
    pub rho: Int,
    pub schwarz: bool,
    pub parity: bool,
    pub bullet: PrymBullet,
}

impl PrymWitness {
    /// Re-derives every number and the bullet from `r`, `eps`, `s`, `e`.
    pub fn recheck(&self, subject_from: &LocusId, subject_to: &LocusId) -> bool {
        let Ok(p) = prym_params(self.r, self.eps) else {
            return false;
        };
        let g = p.g_tilde;
        let Ok(rho) = raw_rho(g, self.s, self.e) else {
            return false;
        };
        let schwarz = schwarz_predicate(g, self.s, self.e);
        let parity = parity_predicate(g, self.s, self.e);
        let bullet_ok = match self.bullet {
            PrymBullet::Schwarz => schwarz && !parity,
            PrymBullet::Parity => parity && !schwarz,
        };
        p.g_base == self.g_base
            && g == self.g_tilde
            && rho == self.rho
            && schwarz == self.schwarz
            && parity == self.parity
            && bullet_ok
            && subject_from.triple() == (g, self.r, g - 1)
            && subject_to.triple() == (g, self.s, self.e)
    }
}

fn prym_certificate(p: &PrymParams, s: Int, e: Int) -> Result<Option<Certificate>> {
    let g = p.g_tilde;
    let schwarz = schwarz_predicate(g, s, e);
    let parity = parity_predicate(g, s, e);
    let bullet = match (schwarz, parity) {
        (true, _) => PrymBullet::Schwarz,
        (false, true) => PrymBullet::Parity,
        (false, false) => return Ok(None),
    };
    let witness = PrymWitness {
        r: p.r,
        eps: p.eps,
        g_base: p.g_base,
        g_tilde: g,
        s,
        e,
        rho: raw_rho(g, s, e)?,
        schwarz,
        parity,
        bullet,
    };
    let kind = match bullet {
        PrymBullet::Schwarz => CertificateKind::PrymSchwarz,
        PrymBullet::Parity => CertificateKind::PrymParity,
    };
    let subject = Subject::NonContainment {
        from: LocusId::new(g, p.r, g - 1)?,
        to: LocusId::new(g, s, e)?,
    };
    Ok(Some(Certificate::new(kind, subject, Witness::Prym(witness))))
}

/// Scans canonical `(s, e)` with `1 <= s <= r_max(g~)` and `2s <= e <= g~ - 1`.
pub fn cor54_certificates(r: Int, eps: Int) -> Result<Vec<Certificate>> {
    let p = prym_params(r, eps)?;
    let g = p.g_tilde;
    let mut out = Vec::new();
    for s in 1..=r_max(g)? {
        for e in 2 * s..=g - 1 {
            let l = LocusId::new(g, s, e)?;
            if canonicalize(&l)?.locus() != l {
                continue;
            }
            if let Some(c) = prym_certificate(&p, s, e)? {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisGap {
    pub r: Int,
    pub g: Int,
    pub s: Int,
    pub d: Int,
    pub rho_source: Int,
    pub rho_target: Int,
    /// Every clause of the non-containment criterion with its literal truth value.
    pub clauses: BTreeMap<String, bool>,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Cor55Outcome {
    Certificate(Certificate),
    HypothesisGap(HypothesisGap),
}

/// Checks `M^r_{g,g-1}` against `M^{r-1}_{g,g-3}` for `g = r^2 + r + 1`.
pub fn cor55_check(r: Int) -> Result<Cor55Outcome> {
    if r < 2 || r % 2 != 0 || r % 4 == 0 {
        return Err(Error::domain(format!("r = {r} must be even and not divisible by 4")));
    }
    let p = prym_params(r, 0)?;
    let g = p.g_tilde;
    debug_assert_eq!(g, r * r + r + 1);
    let (s, d) = (r - 1, g - 3);
    let rho_source = raw_rho(g, r, g - 1)?;
    let rho_target = raw_rho(g, s, d)?;
    if rho_source != -r || rho_target != -r + 1 {
        return Err(Error::Internal(format!(
            "rho values ({rho_source}, {rho_target}) differ from (-{r}, {})",
            -r + 1
        )));
    }
    if let Some(cert) = prym_certificate(&p, s, d)? {
        return Ok(Cor55Outcome::Certificate(cert));
    }
    let mut clauses = BTreeMap::new();
    clauses.insert("schwarz-rho".to_string(), rho_target == -s - 1);
    clauses.insert("parity-rho".to_string(), rho_target == -s);
    clauses.insert("d-odd".to_string(), d.rem_euclid(2) == 1);
    clauses.insert("s-not-3-mod-4".to_string(), s.rem_euclid(4) != 3);
    // the parity bullet is the one whose rho clause holds, so report its failures
    let failing = if rho_target == -s {
        ["d-odd", "s-not-3-mod-4"]
            .iter()
            .filter(|k| !clauses[**k])
            .map(|k| k.to_string())
            .collect()
    } else {
        clauses.iter().filter(|(_, v)| !**v).map(|(k, _)| k.clone()).collect()
    };
    Ok(Cor55Outcome::HypothesisGap(HypothesisGap {
        r,
        g,
        s,
        d,
        rho_source,
        rho_target,
        clauses,
        failing,
    }))
}

/// Prym certificates between expected maximal loci of genus `g`.
pub fn prym_edges(g: Int) -> Result<Vec<Certificate>> {
    let Some(p) = prym_params_for_genus(g) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for c in cor54_certificates(p.r, p.eps)? {
        if let Subject::NonContainment { from, to } = &c.subject {
            if is_expected_maximal(from) && is_expected_maximal(to) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// `-r - 1 <= rho(target) <= -1`, so the small-rho criterion applies.
pub fn target_is_small_rho(p: &PrymParams) -> bool {
    small_rho_criterion(&p.target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(g: Int, r: Int, d: Int) -> LocusId {
        LocusId::new(g, r, d).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = prym_params(2, 0).unwrap();
        assert_eq!((p.g_base, p.g_tilde, p.target, p.target_rho), (4, 7, l(7, 2, 6), -2));
        let p = prym_params(3, 1).unwrap();
        assert_eq!((p.g_base, p.g_tilde, p.target, p.target_rho), (8, 15, l(15, 3, 14), -1));
        let p = prym_params(6, 0).unwrap();
        assert_eq!((p.g_base, p.g_tilde, p.target, p.target_rho), (22, 43, l(43, 6, 42), -6));
        assert!(prym_params(2, 1).is_err());
        assert!(prym_params(3, -1).is_err());
        assert!(prym_params(0, 0).is_err());
    }

    #[test]
    fn params_invariants() {
        for r in 1..=60 {
            for eps in 0..r {
                if 2 * eps >= r {
                    continue;
                }
                let p = prym_params(r, eps).unwrap();
                assert_eq!(p.target_rho, 2 * eps - r);
                assert!(-r - 1 <= p.target_rho && p.target_rho <= -1);
                assert!(target_is_small_rho(&p));
                assert!(p.target_expected_maximal);
                assert_eq!(prym_params_for_genus(p.g_tilde), Some(p));
            }
        }
    }

    #[test]
    fn predicate_examples() {
        assert!(schwarz_predicate(15, 2, 11));
        assert!(!schwarz_predicate(15, 3, 14));
        assert!(!schwarz_predicate(43, 6, 41));
        assert!(!parity_predicate(15, 2, 12));
        for g in (3..200).step_by(2) {
            for s in 1..8 {
                for e in (0..2 * g).step_by(2) {
                    assert!(!parity_predicate(g, s, e));
                }
            }
        }
    }

    #[test]
    fn parity_instances() {
        // at g~ = 43 every rho = -s pair with s <= 6 has e even
        for s in 1..=6 {
            for e in 2 * s..=42 {
                if raw_rho(43, s, e).unwrap() == -s {
                    assert_eq!(e % 2, 0);
                }
                assert!(!parity_predicate(43, s, e));
            }
        }
        assert!(parity_predicate(61, 5, 55));
        assert_eq!(raw_rho(61, 5, 55).unwrap(), -5);
        assert!(parity_predicate(13, 1, 7));
        assert!(!parity_predicate(61, 3, 55));
    }

    #[test]
    fn phrasings_agree() {
        for g in (3..400).step_by(2) {
            for s in 0..30 {
                for e in 0..2 * g {
                    assert!(!parity_forms_disagree(g, s, e), "({g}, {s}, {e})");
                }
            }
        }
    }

    #[test]
    fn cor54_examples() {
        let certs = cor54_certificates(3, 1).unwrap();
        let hit = certs.iter().find(|c| {
            c.subject == Subject::NonContainment { from: l(15, 3, 14), to: l(15, 2, 11) }
        });
        let hit = hit.expect("schwarz pair present");
        assert_eq!(hit.kind, CertificateKind::PrymSchwarz);
        assert!(hit.verified && hit.recheck());
        assert_eq!(certs.len(), 1);

        // (43, 5, 40) is only reachable through the parity bullet, which needs e odd
        let certs = cor54_certificates(6, 0).unwrap();
        assert!(certs.is_empty());

        let certs = cor54_certificates(7, 2).unwrap();
        let kinds: Vec<(CertificateKind, Int, Int)> = certs
            .iter()
            .map(|c| match &c.witness {
                Witness::Prym(w) => (c.kind, w.s, w.e),
                _ => panic!(),
            })
            .collect();
        assert_eq!(kinds, vec![(CertificateKind::PrymParity, 1, 31), (CertificateKind::PrymParity, 5, 55)]);

        assert!(cor54_certificates(2, 0).unwrap().is_empty());
    }

    #[test]
    fn cor54_certificates_are_exclusive_and_verified() {
        for r in 1..=12 {
            for eps in 0..r {
                if 2 * eps >= r {
                    continue;
                }
                for c in cor54_certificates(r, eps).unwrap() {
                    assert!(c.verified && c.recheck());
                    let Witness::Prym(w) = &c.witness else { panic!() };
                    assert!(w.schwarz != w.parity);
                    if w.parity {
                        // sum of r+1 vanishing orders of one parity cannot be (s+1)e/2
                        let twice = (w.s + 1) * w.e;
                        let impossible = twice % 2 == 1 || (twice / 2) % 2 == 1;
                        assert!(impossible);
                    }
                }
            }
        }
    }

    #[test]
    fn cor55_findings() {
        for r in [2, 6] {
            let Cor55Outcome::HypothesisGap(gap) = cor55_check(r).unwrap() else {
                panic!("expected a gap for r = {r}");
            };
            assert_eq!(gap.failing, vec!["d-odd".to_string()]);
            assert_eq!(gap.rho_source, -r);
            assert_eq!(gap.rho_target, -r + 1);
            assert_eq!(gap.g, r * r + r + 1);
        }
        assert_eq!(cor55_check(4).unwrap_err().code(), "domain");
        assert_eq!(cor55_check(3).unwrap_err().code(), "domain");
        for r in (2..200).step_by(4) {
            assert!(matches!(cor55_check(r).unwrap(), Cor55Outcome::HypothesisGap(_)));
        }
    }

    #[test]
    fn no_prym_edges_at_43() {
        assert!(prym_edges(43).unwrap().is_empty());
    }
}
