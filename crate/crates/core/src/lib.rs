//! Information transfer and fidelity of quantum copiers acting on two
//! equiprobable, nonorthogonal qubit signal states.
//!
//! The crate is organised bottom-up:
//!
//! * [`qstate`] – exact 2- and 4-dimensional state algebra (partial traces,
//!   Bloch vectors, entropy, fidelity).
//! * [`copiers`] – the six copier families and the reduced copies they produce.
//! * [`infomeasures`] – one-state and Holevo information, baselines for the
//!   uncopied signal, and a measurement-scan oracle for accessible information.
//! * [`optimizer`] – quartic root selection and the 1-D maximisation that
//!   defines the ultimate-information copier.
//! * [`sweep`] and [`verify`] – parameter sweeps over the input overlap `f`
//!   and the invariant suite run by the command-line tool.

pub mod copiers;
pub mod error;
pub mod infomeasures;
mod numeric;
pub mod optimizer;
pub mod qstate;
pub mod search;
pub mod sweep;
pub mod tolerance;
pub mod verify;

pub use copiers::{copy, make_ensemble, CopierFamily, CopierOutput, InputEnsemble};
pub use error::{Error, Result};
pub use infomeasures::{
    accessible_info_oracle, binary_info_from_q, holevo_two_state, i1_baseline, ih_baseline,
    mutual_information, one_state_info, ultimate_info_from_bloch, MeasurementStatistics,
};
pub use optimizer::{
    build_basis_matrix, cos_phi_of_r, feasibility_check, maximize_ih, quartic_coeffs,
    FeasibilityWitness, QuarticCoefficients, UltimateCopierSolution,
};
pub use qstate::{
    fidelity_mixed, overlap_sq, partial_trace, von_neumann_entropy, BlochVector, DensityMatrix2,
    JointPureState, Subsystem,
};
pub use sweep::{Format, Series, SweepConfig, SweepRecord};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
