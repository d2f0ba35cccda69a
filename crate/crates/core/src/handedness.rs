//! Separatrix-adjacent (SA) annuli and their L/R handedness.
//!
//! The boundary frame `(e_h, e_p, e_in)` is never built in coordinates. Its
//! orientation class is a sign assembled from the frame table of the plug
//! boundary and the chirality of the rectangles picked by the gluing.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::gluing::gluing_restriction;
use crate::homology::{decide_sa_extension, Decision, H1Vector, NewLozengeData, Witness};
use crate::orbit_space::{check_alternation, old_fan_cluster, CornerId, PieceId};
use crate::plug_model::{dynamical_e2, frame_sign};
use crate::types::{Chirality, Foliation, Handedness, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "i", rename_all = "lowercase")]
pub enum SaOrigin {
    /// The `(4i+3)`-annulus built from the torus `T_i′`.
    Old(u32),
    /// An old annulus lengthened by new components.
    Extended(u32),
}

/// Provenance and handedness carried alongside an SA annulus and its photo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaTag {
    pub n: u32,
    pub origin: SaOrigin,
    pub handedness: Option<Handedness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaComponent {
    pub piece: PieceId,
    pub new_data: Option<NewLozengeData>,
}

/// A chain of `k` fundamental Birkhoff annuli glued along the orbits
/// `β_1 … β_{k−1}`, with boundary orbits `β_0` and `β_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SAAnnulus {
    pub components: Vec<SaComponent>,
    pub orbits: Vec<CornerId>,
    /// Separatrix type of each interior orbit `β_1 … β_{k−1}`.
    pub labels: Vec<Foliation>,
    pub tag: SaTag,
}

impl SAAnnulus {
    /// The annulus `Σ_i` of the flow `Z^m`, tagged with its handedness.
    pub fn old(n: u32, i: u32, m: u32) -> Result<SAAnnulus> {
        let handedness = old_handedness(n, i, m)?;
        let fan = old_fan_cluster(i)?;
        let mut orbits = vec![fan.lozenges[0].corner_a];
        orbits.extend(fan.lozenges.iter().map(|l| l.corner_b));
        Ok(SAAnnulus {
            components: fan
                .lozenges
                .iter()
                .map(|l| SaComponent {
                    piece: l.id,
                    new_data: None,
                })
                .collect(),
            orbits,
            labels: fan.labels,
            tag: SaTag {
                n,
                origin: SaOrigin::Old(i),
                handedness: Some(handedness),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn boundary(&self) -> (CornerId, CornerId) {
        (self.orbits[0], *self.orbits.last().expect("validated annuli have orbits"))
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.components.len();
        if k == 0 {
            return Err(Error::Malformed("SA annulus without components".into()));
        }
        if self.orbits.len() != k + 1 || self.labels.len() != k - 1 {
            return Err(Error::Malformed(format!(
                "{k} components need {} orbits and {} labels, got {} and {}",
                k + 1,
                k - 1,
                self.orbits.len(),
                self.labels.len()
            )));
        }
        check_alternation(&self.labels)?;
        if let SaOrigin::Old(i) = self.tag.origin {
            if k != 4 * i as usize + 3 {
                return Err(Error::Malformed(format!("old annulus of T_{i} has {k} components")));
            }
        }
        Ok(())
    }

    /// The same annulus traversed from `β_k` to `β_0`.
    pub fn reversed(&self) -> SAAnnulus {
        let mut out = self.clone();
        out.components.reverse();
        out.orbits.reverse();
        out.labels.reverse();
        out
    }
}

/// Sign contributed by the interior orbit `β_l` of separatrix type `t`.
fn junction_sign(l: usize, t: Foliation) -> i64 {
    let chi = match t {
        Foliation::S => 1,
        Foliation::U => -1,
    };
    if l.is_multiple_of(2) {
        chi
    } else {
        -chi
    }
}

/// Whether the frames at the two boundary orbits define the same orientation.
///
/// Each interior orbit flips `e_in` across the annulus; the flips of `e_h`
/// and `e_p` cancel over an odd number of components.
pub fn frame_consistency(sa: &SAAnnulus) -> Result<bool> {
    let k = sa.components.len();
    if k.is_multiple_of(2) {
        return Err(Error::EvenLength(k));
    }
    if sa.labels.len() + 1 != k {
        return Err(Error::Malformed(format!("{k} components need {} labels", k - 1)));
    }
    let product: i64 = sa
        .labels
        .iter()
        .enumerate()
        .map(|(idx, t)| junction_sign(idx + 1, *t))
        .product();
    Ok(product == 1)
}

/// Sign of a rectangle chirality in the frame product.
// Calibrated once so that an odd torus glued by τ_{−1/2}∘σ gives L.
fn chirality_sign(c: Chirality) -> Sign {
    match c {
        Chirality::L => Sign::Plus,
        Chirality::R => Sign::Minus,
    }
}

/// Handedness of the old annulus `Σ_i` in the flow `Z^m`.
pub fn old_handedness(n: u32, i: u32, m: u32) -> Result<Handedness> {
    check_range("i", i as i64, 1, 4 * n as i64)?;
    let chirality = gluing_restriction(n, m, i)?.chirality();
    let frame = frame_sign(i, Foliation::S, dynamical_e2(Foliation::S));
    Ok(if frame.as_i64() * chirality_sign(chirality).as_i64() > 0 {
        Handedness::L
    } else {
        Handedness::R
    })
}

/// The lemma clause that rules out an even extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionClause {
    /// R-type with `k > 0`.
    RightPositive,
    /// L-type with `k < 0`.
    LeftNegative,
}

impl fmt::Display for ExtensionClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionClause::RightPositive => "no-even-extension (R-type, k>0)",
            ExtensionClause::LeftNegative => "no-even-extension (L-type, k<0)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "lowercase")]
pub enum Extension {
    Yes,
    No { clause: ExtensionClause, witness: Witness },
}

impl Extension {
    pub fn is_yes(&self) -> bool {
        matches!(self, Extension::Yes)
    }
}

/// Whether the old annulus can be lengthened to a `(4i+4)`-SA annulus in
/// the surgered flow with coefficient `k`.
///
/// The added component is crossed once by `α_{⌈i/2⌉}`, whose crossing
/// punctures `T_i′`.
pub fn extendable_to_even(sa: &SAAnnulus, k: i64) -> Result<Extension> {
    let i = match sa.tag.origin {
        SaOrigin::Old(i) => i,
        SaOrigin::Extended(_) => return Err(Error::Precondition("only old SA annuli are extended".into())),
    };
    let handedness = sa
        .tag
        .handedness
        .ok_or_else(|| Error::Precondition("SA annulus has no handedness".into()))?;
    let k_sign = Sign::of(k).ok_or_else(|| Error::Precondition("surgery coefficient k must be nonzero".into()))?;
    let n = sa.tag.n;
    let s = NewLozengeData::unit(i.div_ceil(2), n)?;
    Ok(match decide_sa_extension(handedness, k_sign, &s, &H1Vector::zero(n))? {
        Decision::Consistent => Extension::Yes,
        Decision::Forbidden(witness) => Extension::No {
            clause: match handedness {
                Handedness::R => ExtensionClause::RightPositive,
                Handedness::L => ExtensionClause::LeftNegative,
            },
            witness,
        },
    })
}
