//! Flows, heat smoothing, inf-convolution and their Trotter compositions.

mod flow;
mod fnhandle;
mod heat;
mod hjb;
mod hopf_lax;
mod oracle;
mod potential;
pub mod quadrature;
mod trotter;

pub use flow::{default_flow_steps, ode_flow, ode_flow_picard};
pub use fnhandle::{affine, FnHandle, Provenance};
pub use heat::{apply_p, apply_p_with_grad, p_handle, Estimate, PRule};
pub use hjb::{trotter_r, trotter_r_grid, GridConfig, GridSolution, RConfig, RResult};
pub use hopf_lax::{apply_q, q_handle, QResult, Q_MAX_ITER, Q_TOL};
pub use oracle::{heat_potential_oracle, OracleValue};
pub use potential::{poly_eval, Convexity, PotentialSpec};
pub use trotter::{
    expectation_via_t, lipschitz_trotter_bound, trotter_t, ExpectationReport, Schedule, TrotterConfig,
};
