//! Turing machines valued in lattice-ordered QMV algebras.

pub mod algebra;
pub mod harness;
pub mod io;
pub mod machine;
pub mod semantics;
pub mod transforms;
