//! Combinatorial dynamics of expanding Thurston maps presented by two-tile
//! subdivision rules.
//!
//! A rule fixes the level-1 cell structure of a postcritically finite branched
//! cover with an invariant Jordan curve. From that single datum the crate
//! derives cell complexes of every level, the tile / edge / edge-color
//! subshifts coding the dynamics, exact periodic-orbit ledgers with local
//! degree weights, transfer operators and pressure, dynamical zeta functions
//! with their four-system factorization, and a desk-scale prime-orbit-counting
//! harness.

pub mod error;
pub mod geometry;
pub mod rule;
pub mod lattes;
pub mod validate;
pub mod words;
pub mod level;
pub mod shifts;
pub mod point;
pub mod potential;
pub mod metric;
pub mod temporal;
pub mod thermo;
pub mod curve;
pub mod zeta;
pub mod orbits;

pub use error::*;
pub use geometry::{Cell1, Color, Geometry, Zero};
pub use rule::SubdivisionRule;
pub use validate::{validate_rule, ValidationReport};
