//! Computability-logic engine: formulas as games, EPM strategies,
//! CL2 and INT proof checking, and compilation of INT proofs into strategies.

pub mod formula;
pub mod game;
pub mod epm;
pub mod par;
pub mod strategies;
pub mod cl2;
pub mod int;
pub mod suites;
