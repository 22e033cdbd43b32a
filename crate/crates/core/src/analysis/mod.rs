//! `θ_F`, `θ^F` with witnesses, syntactic congruences, the determination
//! checkers and the law verifiers built on them.

mod determine;
mod laws;
mod lower;
mod syn;
mod upper;

pub use determine::{
    check_dpsc_witness, confirm_principal_failure, confirm_subcongruence_failure,
    confirm_syntactic_failure, determines_principal, determines_principal_subcongruences,
    determines_syntactic, FormulaFamily, PrincipalFailure, SyntacticFailure, SyntacticMode,
    Verdict,
};
pub(crate) use determine::{determines_principal_with, determines_syntactic_exhaustive};
pub(crate) use laws::{upper_within_theta_with, verify_quotient_transfer_with};
pub use laws::{
    verify_composition_law, verify_quotient_transfer, verify_subcongruence_implication,
    verify_upper_within_theta, Implication,
};
pub use lower::{theta_lower, theta_lower_maps, theta_lower_partition};
pub use syn::{syn, syn_oracle, PairGraph};
pub use upper::{
    theta_upper, theta_upper_graph, verify_witness, BrokenLink, MalcevWitness, StepGraph,
    UpperClosure, WitnessStep,
};
