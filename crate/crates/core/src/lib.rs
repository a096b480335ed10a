//! Rigorous verification of disjunctive nonlinear inequalities over boxes.

pub mod cert;
mod checks;
pub mod corpus;
mod decimal;
pub mod domain;
pub mod dsl;
pub mod expr;
pub mod hexfloat;
pub mod interval;
pub mod solver;
pub mod spec;
pub mod taylor;
