//! Finite rings, finite modules over them, and decision procedures for
//! when the free, projective and flat module classes are elementary and
//! when the theory of infinitely generated free modules is categorical.
//!
//! The engine is enumerative: rings and modules carry explicit carriers,
//! and every structural claim is checked by exhaustive search below
//! configurable caps (see [`Caps`]).

pub mod caps;
pub mod classify;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod group;
pub mod ideal;
pub mod module;
pub mod pp;
pub mod property;
pub mod ring;
pub mod suite;

pub use caps::Caps;
pub use error::{Error, Result};
pub use ring::{build_ring, FiniteRing, RingElement};
