//! Modal many-valued logics over FL_ew chains: algebras, formulas, Kripke
//! semantics, the PCP reduction for FL_ew-chain modal logics, and a decision
//! procedure for the Łukasiewicz modal logic K over `[0,1]`.

pub mod algebra;
pub mod experiments;
pub mod kripke;
pub mod lukdecide;
pub mod pcp;
pub mod syntax;
