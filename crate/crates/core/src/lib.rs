//! Finite-state morphology toolkit: lexicons, two-level rules and lookup.

pub mod fst;
pub mod lexc;
pub mod lookup;
pub mod symtab;
pub mod testkit;
pub mod twol;
