//! Uniformity checks for finite relational structures, and exact order
//! algebra on the rational line: shifts, tilings, localized field
//! operations, cyclic order on the projective line and Dedekind cuts.

pub mod autgroup;
pub mod cli;
pub mod cuts;
pub mod cyclic;
pub mod fieldgen;
pub mod formulas;
pub mod ordline;
pub mod rational;
pub mod structures;
pub mod uniformity;

pub use rational::Rational;
