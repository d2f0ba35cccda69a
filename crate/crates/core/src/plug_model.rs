//! Symbolic model of the hyperbolic plug `(U, X)`.
//!
//! `U` has two components `U^+` and `U^-`, exchanged by an involution `σ`
//! that reverses the flow. Its boundary is the union of `8n` tori
//! `T_i^{in}`, `T_i^{out}` for `i = 1..4n`. The entrance torus `T_i^{in}`
//! carries the stable lamination, made of `2i+2` Reeb lamination annuli
//! `A_i^{j,s}`; the exit torus carries the unstable one.
//!
//! Hyperbolicity, transitivity and the Nielsen-type rigidity of the plug
//! are analytic inputs. They are recorded in [`PlugAxioms`] and never checked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_torus::period;
use crate::types::{Foliation, Side, Sign};

/// A boundary torus `T_i^{side}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusRef {
    pub i: u32,
    pub side: Side,
}

impl TorusRef {
    /// `T_i^{in}` lies in `U^-` for odd `i` and in `U^+` for even `i`.
    pub fn component(&self) -> Sign {
        let in_component = if self.i % 2 == 1 { Sign::Minus } else { Sign::Plus };
        match self.side {
            Side::In => in_component,
            Side::Out => in_component.flip(),
        }
    }

    /// The lamination carried by the torus.
    pub fn lamination(&self) -> Foliation {
        match self.side {
            Side::In => Foliation::S,
            Side::Out => Foliation::U,
        }
    }
}

/// The Reeb lamination annulus `A_i^{j,ν}`, bounded by `c_i^{j,ν}` and `c_i^{j+1,ν}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaminationAnnulus {
    pub i: u32,
    pub j: u32,
    pub foliation: Foliation,
}

impl LaminationAnnulus {
    pub fn torus(&self) -> TorusRef {
        TorusRef {
            i: self.i,
            side: side_of(self.foliation),
        }
    }

    pub fn lower_leaf(&self) -> CompactLeafId {
        CompactLeafId {
            i: self.i,
            j: self.j,
            foliation: self.foliation,
        }
    }

    pub fn upper_leaf(&self) -> CompactLeafId {
        CompactLeafId {
            i: self.i,
            j: ((self.j as i64 + 1) % period(self.i)) as u32,
            foliation: self.foliation,
        }
    }
}

fn side_of(foliation: Foliation) -> Side {
    match foliation {
        Foliation::S => Side::In,
        Foliation::U => Side::Out,
    }
}

/// The compact leaf `c_i^{j,ν}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompactLeafId {
    pub i: u32,
    pub j: u32,
    pub foliation: Foliation,
}

impl CompactLeafId {
    /// The boundary orbit whose free separatrix cuts the torus along this leaf.
    pub fn orbit(&self) -> BoundaryOrbit {
        let torus = TorusRef {
            i: self.i,
            side: side_of(self.foliation),
        };
        BoundaryOrbit::new(self.i, self.j, torus.component())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    /// Free stable separatrix meets the entrance torus.
    UBoundary,
    /// Free unstable separatrix meets the exit torus.
    SBoundary,
}

/// The boundary periodic orbit `γ_i^{j,±}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryOrbit {
    pub i: u32,
    pub j: u32,
    pub sign: Sign,
    pub kind: OrbitKind,
}

impl BoundaryOrbit {
    pub fn new(i: u32, j: u32, sign: Sign) -> Self {
        let in_component = TorusRef { i, side: Side::In }.component();
        let kind = if sign == in_component {
            OrbitKind::UBoundary
        } else {
            OrbitKind::SBoundary
        };
        BoundaryOrbit { i, j, sign, kind }
    }
}

/// How the dynamical orientation of a compact leaf compares with the
/// orientation making its holonomy contracting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HolonomyAgreement {
    Same,
    Opposite,
}

/// Orientation data of a compact leaf, precomputed from (O3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactLeafData {
    pub leaf: CompactLeafId,
    pub orbit: BoundaryOrbit,
    pub holonomy: HolonomyAgreement,
    /// Sign of intersection with the fibers of `U^±`, for the contracting orientation.
    pub fiber_intersection: Sign,
}

impl CompactLeafData {
    fn new(leaf: CompactLeafId) -> Self {
        let (holonomy, fiber_intersection) = match leaf.foliation {
            Foliation::S => (HolonomyAgreement::Same, Sign::Minus),
            Foliation::U => (HolonomyAgreement::Opposite, Sign::Plus),
        };
        CompactLeafData {
            leaf,
            orbit: leaf.orbit(),
            holonomy,
            fiber_intersection,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryTorus {
    pub i: u32,
    pub side: Side,
    pub component: Sign,
    pub lamination: Foliation,
    pub annuli: Vec<LaminationAnnulus>,
    pub compact_leaves: Vec<CompactLeafData>,
}

impl BoundaryTorus {
    pub fn torus_ref(&self) -> TorusRef {
        TorusRef {
            i: self.i,
            side: self.side,
        }
    }
}

/// Properties of the plug taken as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlugAxioms {
    pub maximal_invariant_set_hyperbolic: bool,
    pub transitive: bool,
    pub boundary_orbits_not_freely_homotopic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlugSpec {
    pub n: u32,
    pub tori: Vec<BoundaryTorus>,
    pub orbits: Vec<BoundaryOrbit>,
    pub axioms: PlugAxioms,
}

impl PlugSpec {
    pub fn torus(&self, r: TorusRef) -> Option<&BoundaryTorus> {
        self.tori.iter().find(|t| t.i == r.i && t.side == r.side)
    }

    pub fn orbits_in(&self, component: Sign) -> impl Iterator<Item = &BoundaryOrbit> {
        self.orbits.iter().filter(move |o| o.sign == component)
    }
}

pub fn build_plug(n: u32) -> Result<PlugSpec> {
    if n == 0 {
        return Err(Error::OutOfRange("plug requires n >= 1".into()));
    }
    let mut tori = Vec::with_capacity(8 * n as usize);
    let mut orbits = Vec::new();
    for i in 1..=4 * n {
        for side in [Side::In, Side::Out] {
            let r = TorusRef { i, side };
            let foliation = r.lamination();
            let annuli = (0..period(i) as u32)
                .map(|j| LaminationAnnulus { i, j, foliation })
                .collect();
            let compact_leaves = (0..period(i) as u32)
                .map(|j| CompactLeafData::new(CompactLeafId { i, j, foliation }))
                .collect();
            tori.push(BoundaryTorus {
                i,
                side,
                component: r.component(),
                lamination: foliation,
                annuli,
                compact_leaves,
            });
        }
        for sign in [Sign::Plus, Sign::Minus] {
            orbits.extend((0..period(i) as u32).map(|j| BoundaryOrbit::new(i, j, sign)));
        }
    }
    Ok(PlugSpec {
        n,
        tori,
        orbits,
        axioms: PlugAxioms {
            maximal_invariant_set_hyperbolic: true,
            transitive: true,
            boundary_orbits_not_freely_homotopic: true,
        },
    })
}

/// The involution `σ` acting on plug objects.
pub trait Sigma {
    fn sigma(&self) -> Self;
}

impl Sigma for TorusRef {
    fn sigma(&self) -> Self {
        TorusRef {
            i: self.i,
            side: self.side.flip(),
        }
    }
}

impl Sigma for LaminationAnnulus {
    fn sigma(&self) -> Self {
        LaminationAnnulus {
            foliation: self.foliation.other(),
            ..*self
        }
    }
}

impl Sigma for CompactLeafId {
    fn sigma(&self) -> Self {
        CompactLeafId {
            foliation: self.foliation.other(),
            ..*self
        }
    }
}

impl Sigma for BoundaryOrbit {
    fn sigma(&self) -> Self {
        BoundaryOrbit::new(self.i, self.j, self.sign.flip())
    }
}

/// Genus of the fiber surface whose pseudo-Anosov map has `4n` singular
/// points, the `i`-th with `2i+2` prongs.
///
/// Solves `Σ_{i=1}^{4n} (2 − (2i+2)) = 4 − 4g`.
pub fn genus_of_surface(n: u32) -> u64 {
    let index_sum: i64 = (1..=4 * n as i64).map(|i| 2 - (2 * i + 2)).sum();
    let four_g = 4 - index_sum;
    debug_assert_eq!(four_g % 4, 0);
    (four_g / 4) as u64
}

/// Along-leaf direction used for `e2` in the boundary frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum E2Choice {
    Contracting,
    Expanding,
}

/// Orientation sign of the frame `(e1, e2, e3)` at a compact leaf of `T_i`.
///
/// `e1` points toward `A_i^{j+1}`, `e3` along the flow. The frame is
/// positive when `e2` follows the contracting holonomy direction for odd
/// `i` and the expanding one for even `i`, whatever the foliation.
pub fn frame_sign(i: u32, _foliation: Foliation, e2: E2Choice) -> Sign {
    let positive = if i % 2 == 1 {
        E2Choice::Contracting
    } else {
        E2Choice::Expanding
    };
    if e2 == positive {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// The `e2` choice matching the dynamical orientation of a compact leaf.
pub fn dynamical_e2(foliation: Foliation) -> E2Choice {
    match CompactLeafData::new(CompactLeafId { i: 1, j: 0, foliation }).holonomy {
        HolonomyAgreement::Same => E2Choice::Contracting,
        HolonomyAgreement::Opposite => E2Choice::Expanding,
    }
}
