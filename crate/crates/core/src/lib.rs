//! Exact computations on generalised probabilistic theories.
//!
//! States are stacked outcome distributions of a list of fiducial
//! measurements, all arithmetic outside [`qubit`] is exact rational, and a
//! [`Theory`] is validated once at construction. On top of that sit the
//! automorphism search ([`symmetry`]), phase groups and phase dynamics
//! ([`phase`]) and interferometer tables ([`interference`]).

pub mod error;
pub mod interference;
pub mod layout;
pub mod library;
pub mod linalg;
pub mod phase;
pub mod qubit;
pub mod rational;
pub mod state;
pub mod symmetry;
pub mod theory;
pub mod transform;

pub use error::{Error, Result};
pub use layout::{Block, CoordLabel, MeasurementLayout};
pub use linalg::Matrix;
pub use rational::Rational;
pub use state::{apply_effect, Effect, Measurement, State};
pub use symmetry::{Exec, Group, GroupName, SearchConfig, Signature};
pub use theory::{Facet, MeasurementSpec, Theory, TheoryDefinition, TransformPolicy};
pub use transform::{compose, Transform};
