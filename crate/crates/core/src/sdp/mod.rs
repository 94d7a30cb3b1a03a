//! Dense semidefinite programming for the invariant-state problems: a log-det
//! barrier interior-point solver over Hermitian matrix inequalities, plus the
//! concrete formulations (PPT relaxation, invariant boundaries, the GME
//! decision program, and the PPT-GME coefficient search).

mod problems;
mod solver;

pub use problems::{
    find_ppt_gme, flip_conjugate_conditional, gme_decide, invariant_boundary,
    invariant_boundary_point, ppt_relaxed_overlap, ppt_state_boundary, GmeDecision, GmeVerdict,
    InvariantState, PptFamily, PptGmePoint,
};
pub use solver::{solve_lmi, AffineMap, LmiBlock, LmiProblem, SdpSolution, SdpStatus};
