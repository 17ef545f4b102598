//! Serializable proof records that can be re-checked by arithmetic alone.

use serde::{Deserialize, Serialize};

use crate::chains::{verify_chain, ChainDecomposition};
use crate::dimension::{verify_dim_certificate, DimCertificate};
use crate::locus::{adjusted_rho, raw_rho, serre_dual, ContainmentRule, LocusId, PointedLocusId};
use crate::maximal::is_expected_maximal;
use crate::noncontainment::{rule_codim2_forgetful, rule_codim2_vs_deeper, rule_divisor_vs_deeper};
use crate::prym::PrymWitness;
use crate::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    DimThm34,
    PointedDivisorRule,
    Codim2Rule,
    TrivialContainment,
    SerreIdentification,
    PrymSchwarz,
    PrymParity,
    ExpDimComponent,
}

impl CertificateKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CertificateKind::DimThm34 => "dim-thm34",
            CertificateKind::PointedDivisorRule => "pointed-divisor-rule",
            CertificateKind::Codim2Rule => "codim2-rule",
            CertificateKind::TrivialContainment => "trivial-containment",
            CertificateKind::SerreIdentification => "serre-identification",
            CertificateKind::PrymSchwarz => "prym-schwarz",
            CertificateKind::PrymParity => "prym-parity",
            CertificateKind::ExpDimComponent => "exp-dim-component",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Subject {
    /// `from` is not contained in `to`.
    NonContainment { from: LocusId, to: LocusId },
    /// `from` is contained in `to`.
    Containment { from: LocusId, to: LocusId },
    /// `from` (pulled back to the pointed space) is not contained in `to`.
    PointedNonContainment { from: PointedLocusId, to: PointedLocusId },
    Locus { locus: LocusId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentRule {
    /// A rho = -1 component admits no aspect of adjusted rho <= -2.
    Divisor,
    /// A rho = -2 component admits no aspect of adjusted rho <= -3.
    Codim2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBound {
    pub index: usize,
    pub genus: Int,
    pub degree: Int,
    pub rho: Int,
    pub rule: ComponentRule,
    /// Lower bound on the adjusted rho of any aspect on this component.
    pub bound: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm34Witness {
    pub chain: ChainDecomposition,
    pub source_rho: Int,
    pub target_rho: Int,
    pub bounds: Vec<ComponentBound>,
    /// `sum bounds`; additivity forces `target_rho >= bound_sum`.
    pub bound_sum: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Thm34(Thm34Witness),
    PointedRule { rho_a: Int, rho_b: Int },
    Trivial { rule: ContainmentRule, source_rho: Int, target_rho: Int },
    Serre { dual_r: Int, dual_d: Int },
    Prym(PrymWitness),
    ExpDim(DimCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject: Subject,
    pub witness: Witness,
    pub verified: bool,
}

impl Certificate {
    /// Builds a certificate and records whether it re-checks.
    pub fn new(kind: CertificateKind, subject: Subject, witness: Witness) -> Self {
        let mut c = Certificate {
            kind,
            subject,
            witness,
            verified: false,
        };
        c.verified = c.recheck();
        c
    }

    /// Recomputes every claim from the subject and witness.
    pub fn recheck(&self) -> bool {
        use CertificateKind as K;
        match (&self.kind, &self.subject, &self.witness) {
            (K::DimThm34, Subject::NonContainment { from, to }, Witness::Thm34(w)) => {
                recheck_thm34(from, to, w)
            }
            (K::PointedDivisorRule, Subject::PointedNonContainment { from, to }, Witness::PointedRule { rho_a, rho_b }) => {
                pointed_rhos_match(from, to, *rho_a, *rho_b)
                    && from.marks().len() == 1
                    && matches!(to.marks().len(), 1 | 2)
                    && rule_divisor_vs_deeper(*rho_a, *rho_b)
            }
            (K::Codim2Rule, Subject::PointedNonContainment { from, to }, Witness::PointedRule { rho_a, rho_b }) => {
                let rule_ok = match to.marks().len() {
                    1 => rule_codim2_vs_deeper(&from.base(), *rho_b),
                    2 => rule_codim2_forgetful(*rho_a, *rho_b),
                    _ => false,
                };
                pointed_rhos_match(from, to, *rho_a, *rho_b) && from.marks().is_empty() && rule_ok
            }
            (K::TrivialContainment, Subject::Containment { from, to }, Witness::Trivial { rule, source_rho, target_rho }) => {
                let (g, r, d) = from.triple();
                let target_ok = match rule {
                    ContainmentRule::AddBasepoint => to.triple() == (g, r, d + 1),
                    ContainmentRule::RemoveNonBasepoint => r >= 1 && d >= 1 && to.triple() == (g, r - 1, d - 1),
                };
                target_ok && from.rho() == *source_rho && to.rho() == *target_rho && *source_rho < 0
            }
            (K::SerreIdentification, Subject::Containment { from, to }, Witness::Serre { dual_r, dual_d }) => {
                serre_dual(from).ok() == Some(*to) && to.r() == *dual_r && to.d() == *dual_d
            }
            (K::PrymSchwarz | K::PrymParity, Subject::NonContainment { from, to }, Witness::Prym(w)) => {
                let bullet_matches = match self.kind {
                    K::PrymSchwarz => w.schwarz,
                    _ => w.parity && !w.schwarz,
                };
                bullet_matches && w.recheck(from, to)
            }
            (K::ExpDimComponent, Subject::Locus { locus }, Witness::ExpDim(cert)) => {
                cert.root == (*locus).into() && verify_dim_certificate(cert).passed
            }
            _ => false,
        }
    }
}

fn pointed_rhos_match(from: &PointedLocusId, to: &PointedLocusId, rho_a: Int, rho_b: Int) -> bool {
    adjusted_rho(from).ok() == Some(rho_a)
        && adjusted_rho(to).ok() == Some(rho_b)
        && from.base().g() == to.base().g()
}

fn recheck_thm34(from: &LocusId, to: &LocusId, w: &Thm34Witness) -> bool {
    let chain = &w.chain;
    if chain.source != *from || from.g() != to.g() || from == to {
        return false;
    }
    if !is_expected_maximal(from) || !is_expected_maximal(to) {
        return false;
    }
    if from.rho() != w.source_rho || to.rho() != w.target_rho {
        return false;
    }
    if !verify_chain(chain).passed() {
        return false;
    }
    if w.bounds.len() != chain.components.len() {
        return false;
    }
    let r = from.r();
    for (i, (b, c)) in w.bounds.iter().zip(&chain.components).enumerate() {
        let Ok(comp_rho) = raw_rho(c.g, r, c.d) else {
            return false;
        };
        let rule_ok = match b.rule {
            ComponentRule::Divisor => comp_rho == -1 && rule_divisor_vs_deeper(comp_rho, b.bound - 1),
            ComponentRule::Codim2 => comp_rho == -2 && rule_codim2_forgetful(comp_rho, b.bound - 1),
        };
        if b.index != i || b.genus != c.g || b.degree != c.d || b.rho != comp_rho || b.bound != comp_rho || !rule_ok {
            return false;
        }
    }
    let sum: Int = w.bounds.iter().map(|b| b.bound).sum();
    sum == w.bound_sum && sum == w.source_rho && w.target_rho < sum
}
