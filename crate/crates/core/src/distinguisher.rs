//! Pairwise inequivalence certificates for the flows `Z^1 … Z^{2n−1}`, and
//! non-R-covered certificates for every `Z^m`.
//!
//! An orbit equivalence `h: Z^{m1} → Z^{m2}` either preserves or reverses
//! orientation. Each branch is refuted by a handedness table cell: a
//! preserving `h` keeps the handedness of a unique old annulus, and a
//! reversing `h` forces some old annulus to extend to an even one, which
//! the intersection-number test forbids for one sign of `k`.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::gluing::{locate_periodic_orbit, CrossingModel, GluingMap};
use crate::handedness::{extendable_to_even, old_handedness, Extension, SAAnnulus};
use crate::homology::NewLozengeData;
use crate::model_torus::{annulus_of, period, TorusPoint};
use crate::orbit_space::{classify_maximal, extended_fan, Classification, ShapeTag};
use crate::plug_model::{BoundaryOrbit, LaminationAnnulus};
use crate::types::{Foliation, Handedness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// A hypothetical orbit equivalence `Z^{m1} → Z^{m2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceHypothesis {
    pub m1: u32,
    pub m2: u32,
    pub orientation: Orientation,
}

impl EquivalenceHypothesis {
    pub fn new(n: u32, m1: u32, m2: u32, orientation: Orientation) -> Result<Self> {
        GluingMap::new(n, m1)?;
        GluingMap::new(n, m2)?;
        if m1 >= m2 {
            return Err(Error::Precondition(format!("hypothesis needs m1 < m2, got {m1}, {m2}")));
        }
        Ok(EquivalenceHypothesis { m1, m2, orientation })
    }
}

/// Where `h` sends the old annulus `Σ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HotebOutcome {
    /// Onto the unique old `(4i+3)`-SA annulus of the target.
    MapsToUniqueOld,
    /// Onto a `(4i+4)`-SA annulus, i.e. an even extension.
    ForcesEvenExtension,
}

pub fn hoteb_outcome(n: u32, i: u32, hyp: &EquivalenceHypothesis) -> Result<HotebOutcome> {
    check_range("i", i as i64, 1, 4 * n as i64)?;
    let j = i.div_ceil(2);
    Ok(match hyp.orientation {
        Orientation::Preserving => HotebOutcome::MapsToUniqueOld,
        Orientation::Reversing if hyp.m1 < j && j <= hyp.m2 => HotebOutcome::MapsToUniqueOld,
        Orientation::Reversing => HotebOutcome::ForcesEvenExtension,
    })
}

/// The two ways `h` may act on the old fan `C_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum HActionCase {
    /// `h(C_i^{m1}) = C_i^{m2}`.
    Case1,
    /// `h` sends `C_i^{m1}` into the end-extended cluster of the same type
    /// in `Z^{m2}`; `feasible` records whether that cluster passes the filters.
    Case2 { end: Foliation, feasible: bool },
}

pub fn h_action_cases(n: u32, i: u32, m1: u32, m2: u32, k: i64) -> Result<Vec<HActionCase>> {
    check_range("i", i as i64, 1, 4 * n as i64)?;
    GluingMap::new(n, m1)?;
    GluingMap::new(n, m2)?;
    let data = NewLozengeData::unit(i.div_ceil(2), n)?;
    let mut cases = vec![HActionCase::Case1];
    for (end, tag) in [(Foliation::U, ShapeTag::Cu), (Foliation::S, ShapeTag::Cs)] {
        let fan = extended_fan(i, end == Foliation::U, end == Foliation::S, &data)?;
        let feasible = matches!(
            classify_maximal(&fan.lozenges, k)?,
            Classification::Shape(s) if s.tag == tag && s.i == i
        );
        cases.push(HActionCase::Case2 { end, feasible });
    }
    Ok(cases)
}

/// One handedness table entry used by a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub i: u32,
    pub m: u32,
    pub handedness: Handedness,
    /// Even-extension answer, recorded for reversing-branch cells.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extension: Option<Extension>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub orientation: Orientation,
    pub witness_torus: u32,
    pub lemma: String,
    pub table_cells: Vec<TableCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub n: u32,
    pub k: i64,
    pub m1: u32,
    pub m2: u32,
}

pub const LEMMA_PRESERVING: &str = "unique-old-annulus-keeps-handedness";
pub const LEMMA_REVERSING: &str = "no-even-extension";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum VerdictTag {
    Inequivalent,
    Inconclusive { reason: String },
}

/// Certificate document for one pair of flows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pair: Pair,
    pub branches: Vec<Branch>,
    pub verdict: VerdictTag,
}

impl Certificate {
    pub fn is_inequivalent(&self) -> bool {
        self.verdict == VerdictTag::Inequivalent
    }

    /// Recompute every cited cell and check that it refutes its branch.
    pub fn verify(&self) -> Result<bool> {
        let Pair { n, k, m1, m2 } = self.pair;
        if !self.is_inequivalent() {
            return Ok(self.branches.is_empty());
        }
        let refuted = |o| self.branches.iter().any(|b| b.orientation == o);
        if !refuted(Orientation::Preserving) || !refuted(Orientation::Reversing) {
            return Ok(false);
        }
        for b in &self.branches {
            for cell in &b.table_cells {
                if old_handedness(n, cell.i, cell.m)? != cell.handedness {
                    return Ok(false);
                }
            }
            let hyp = EquivalenceHypothesis::new(n, m1, m2, b.orientation)?;
            let i = b.witness_torus;
            let ok = match b.orientation {
                Orientation::Preserving => {
                    hoteb_outcome(n, i, &hyp)? == HotebOutcome::MapsToUniqueOld
                        && (2 * m1 < i && i <= 2 * m2)
                        && old_handedness(n, i, m1)? != old_handedness(n, i, m2)?
                }
                Orientation::Reversing => {
                    let sa = SAAnnulus::old(n, i, m1)?;
                    let ext = extendable_to_even(&sa, k)?;
                    let cited = b.table_cells.iter().find(|c| c.i == i && c.m == m1);
                    hoteb_outcome(n, i, &hyp)? == HotebOutcome::ForcesEvenExtension
                        && !ext.is_yes()
                        && cited.and_then(|c| c.extension.as_ref()) == Some(&ext)
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decide whether `Z^{m1}` and `Z^{m2}` are orbit equivalent.
///
/// Pairs touching `m = 0` or `m = 2n` are returned as inconclusive.
pub fn distinguish(n: u32, m1: u32, m2: u32, k: i64) -> Result<Certificate> {
    GluingMap::new(n, m1)?;
    GluingMap::new(n, m2)?;
    if m1 == m2 {
        return Err(Error::Precondition(format!("the pair ({m1}, {m2}) names a single flow")));
    }
    if k == 0 {
        return Err(Error::Precondition("surgery coefficient k must be nonzero".into()));
    }
    let (m1, m2) = (m1.min(m2), m1.max(m2));
    let pair = Pair { n, k, m1, m2 };
    if m1 == 0 || m2 == 2 * n {
        return Ok(Certificate {
            pair,
            branches: Vec::new(),
            verdict: VerdictTag::Inconclusive {
                reason: "outside proven range".into(),
            },
        });
    }

    let preserving = (2 * m1 + 1..=2 * m2)
        .find_map(|i| {
            let (a, b) = (old_handedness(n, i, m1), old_handedness(n, i, m2));
            match (a, b) {
                (Ok(a), Ok(b)) if a != b => Some(Ok(Branch {
                    orientation: Orientation::Preserving,
                    witness_torus: i,
                    lemma: LEMMA_PRESERVING.into(),
                    table_cells: vec![
                        TableCell { i, m: m1, handedness: a, extension: None },
                        TableCell { i, m: m2, handedness: b, extension: None },
                    ],
                })),
                (Err(e), _) | (_, Err(e)) => Some(Err(e)),
                _ => None,
            }
        })
        .transpose()?
        .ok_or_else(|| Error::Precondition(format!("no handedness change between m={m1} and m={m2}")))?;

    let cells = [1, 4 * n - 1]
        .into_iter()
        .map(|i| {
            let sa = SAAnnulus::old(n, i, m1)?;
            Ok(TableCell {
                i,
                m: m1,
                handedness: sa.tag.handedness.expect("old annuli carry a handedness"),
                extension: Some(extendable_to_even(&sa, k)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = cells
        .iter()
        .find(|c| matches!(c.extension, Some(Extension::No { .. })))
        .map(|c| c.i)
        .ok_or_else(|| Error::Precondition("neither end annulus is obstructed".into()))?;
    let reversing = Branch {
        orientation: Orientation::Reversing,
        witness_torus: witness,
        lemma: LEMMA_REVERSING.into(),
        table_cells: cells,
    };

    Ok(Certificate {
        pair,
        branches: vec![preserving, reversing],
        verdict: VerdictTag::Inequivalent,
    })
}

/// All pairs `1 ≤ m1 < m2 ≤ 2n−1`.
pub fn proven_pairs(n: u32) -> Vec<(u32, u32)> {
    let top = 2 * n - 1;
    (1..=top).flat_map(|a| (a + 1..=top).map(move |b| (a, b))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivingAnnulus {
    pub annulus: LaminationAnnulus,
    pub lower: BoundaryOrbit,
    pub upper: BoundaryOrbit,
}

/// The punctured torus `T_i′` and the stable Reeb annuli it keeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturedTorus {
    pub i: u32,
    pub puncture: TorusPoint<f64>,
    pub punctured_annulus: u32,
    pub surviving: Vec<SurvivingAnnulus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonRCoveredCertificate {
    pub n: u32,
    pub m: u32,
    pub tori: Vec<PuncturedTorus>,
}

impl NonRCoveredCertificate {
    /// Every torus keeps `2i+1` annuli bounded by two distinct orbits.
    pub fn verify(&self) -> bool {
        self.tori.iter().all(|t| {
            t.surviving.len() as i64 == period(t.i) - 1
                && t.surviving.iter().all(|a| a.lower != a.upper && a.annulus.j != t.punctured_annulus)
        })
    }
}

pub fn non_r_covered_certificate(n: u32, m: u32) -> Result<NonRCoveredCertificate> {
    GluingMap::new(n, m)?;
    let model = CrossingModel::default();
    let tori = (1..=4 * n)
        .map(|i| {
            let orbit = locate_periodic_orbit(&model, n, m, i.div_ceil(2), 0)?;
            let puncture = orbit.points[((i + 1) % 2) as usize];
            let punctured_annulus = annulus_of(&puncture, Foliation::S).annulus.j;
            let surviving = (0..period(i) as u32)
                .filter(|&j| j != punctured_annulus)
                .map(|j| {
                    let annulus = LaminationAnnulus { i, j, foliation: Foliation::S };
                    SurvivingAnnulus {
                        annulus,
                        lower: annulus.lower_leaf().orbit(),
                        upper: annulus.upper_leaf().orbit(),
                    }
                })
                .collect();
            Ok(PuncturedTorus {
                i,
                puncture,
                punctured_annulus,
                surviving,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonRCoveredCertificate { n, m, tori })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_example() {
        let c = distinguish(2, 1, 2, 7).unwrap();
        assert!(c.is_inequivalent());
        assert!(c.verify().unwrap());
        let pres = &c.branches[0];
        assert!(pres.witness_torus == 3 || pres.witness_torus == 4);
        let rev = &c.branches[1];
        assert_eq!(rev.witness_torus, 7);
        assert_eq!(rev.table_cells[0].handedness, Handedness::L);
        assert_eq!(rev.table_cells[1].handedness, Handedness::R);
        assert_eq!(distinguish(2, 1, 2, -7).unwrap().branches[1].witness_torus, 1);
    }

    #[test]
    fn endpoint_pairs_are_inconclusive() {
        let c = distinguish(1, 0, 1, 7).unwrap();
        assert!(!c.is_inequivalent());
        assert!(c.verify().unwrap());
        assert!(!distinguish(2, 3, 4, 7).unwrap().is_inequivalent());
        assert!(distinguish(2, 2, 2, 7).is_err());
        assert!(distinguish(2, 1, 2, 0).is_err());
        assert!(distinguish(2, 1, 5, 1).is_err());
    }

    #[test]
    fn all_pairs_n3() {
        for k in [7, -7] {
            let pairs = proven_pairs(3);
            assert_eq!(pairs.len(), 10);
            for (a, b) in pairs {
                let c = distinguish(3, a, b, k).unwrap();
                assert!(c.is_inequivalent() && c.verify().unwrap());
                let d = distinguish(3, b, a, k).unwrap();
                assert_eq!(c.verdict, d.verdict);
            }
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut c = distinguish(2, 1, 3, 7).unwrap();
        c.branches[0].table_cells[0].handedness = c.branches[0].table_cells[0].handedness.flip();
        assert!(!c.verify().unwrap());
        let mut c = distinguish(2, 1, 3, 7).unwrap();
        c.branches[1].witness_torus = 1;
        assert!(!c.verify().unwrap());
        let mut c = distinguish(2, 1, 3, 7).unwrap();
        c.branches.pop();
        assert!(!c.verify().unwrap());
    }

    #[test]
    fn hoteb_examples() {
        let rev = EquivalenceHypothesis::new(2, 1, 2, Orientation::Reversing).unwrap();
        let pres = EquivalenceHypothesis::new(2, 1, 2, Orientation::Preserving).unwrap();
        assert_eq!(hoteb_outcome(2, 1, &rev).unwrap(), HotebOutcome::ForcesEvenExtension);
        assert_eq!(hoteb_outcome(2, 3, &rev).unwrap(), HotebOutcome::MapsToUniqueOld);
        assert_eq!(hoteb_outcome(2, 4, &rev).unwrap(), HotebOutcome::MapsToUniqueOld);
        assert_eq!(hoteb_outcome(2, 7, &rev).unwrap(), HotebOutcome::ForcesEvenExtension);
        for i in 1..=8 {
            assert_eq!(hoteb_outcome(2, i, &pres).unwrap(), HotebOutcome::MapsToUniqueOld);
        }
        assert!(hoteb_outcome(2, 9, &pres).is_err());
        assert!(EquivalenceHypothesis::new(2, 2, 1, Orientation::Preserving).is_err());
    }

    #[test]
    fn h_action_lists_both_cases() {
        for i in 1..=4 {
            let cases = h_action_cases(1, i, 1, 2, 7).unwrap();
            assert_eq!(cases[0], HActionCase::Case1);
            assert_eq!(cases.len(), 3);
            assert!(cases[1..].iter().all(|c| matches!(c, HActionCase::Case2 { feasible: true, .. })));
        }
    }

    #[test]
    fn non_r_covered_small() {
        let c = non_r_covered_certificate(1, 0).unwrap();
        assert!(c.verify());
        assert_eq!(c.tori[0].surviving.len(), 3);
        assert_eq!(c.tori[0].punctured_annulus, 1);
        for t in &c.tori {
            assert_eq!(t.surviving.len() as u32, 2 * t.i + 1);
        }
    }
}
