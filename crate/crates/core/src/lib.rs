//! Combinatorial and numerical core for the flows `Z^m` obtained by gluing
//! a hyperbolic plug to itself and doing Fried surgery along the orbits `α_j`.
//!
//! The crate is organized bottom-up: the model torus and its two Reeb
//! foliations, the plug boundary, the gluing maps and periodic orbits, the
//! first-homology engine, lozenge chains in the orbit space, the handedness
//! invariant and finally the pairwise distinguisher.

pub mod distinguisher;
pub mod error;
pub mod gluing;
pub mod handedness;
pub mod homology;
pub mod model_torus;
pub mod orbit_space;
pub mod plug_model;
pub mod types;

pub use distinguisher::{distinguish, non_r_covered_certificate, Certificate, VerdictTag};
pub use error::{Error, Result};
pub use gluing::{CrossingModel, FlowDescriptor};
pub use handedness::{old_handedness, SAAnnulus};
pub use homology::{Decision, H1Vector, NewLozengeData};
pub use model_torus::TorusPoint;
pub use plug_model::{build_plug, PlugSpec};
pub use types::{Chirality, Foliation, Handedness, Side, Sign};
