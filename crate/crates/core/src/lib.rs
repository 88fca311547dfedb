//! Finite-radius approximations of horofunction and Busemann boundaries of
//! Cayley graphs and general graphs, computed with exact integer arithmetic.
//!
//! The pipeline is: build a group ([`group`]), grow a word-metric ball
//! ([`cayley`]), approximate the boundary by Busemann-function restrictions
//! ([`horo`]), then study the group action on it ([`action`]). General graphs
//! are handled by [`graphs`]; [`pipeline`] runs the fixture verification.

pub mod action;
pub mod cayley;
pub mod error;
pub mod graphs;
pub mod group;
pub mod horo;
pub mod pipeline;
pub mod space;

pub use cayley::{Ball, GeodesicTree};
pub use error::{Error, Result};
pub use group::{make_group, symmetrize_generators, Element, Family, GeneratingSet, Group, GroupSpec, Word};
pub use space::PointedSpace;
