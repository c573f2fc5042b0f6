//! Conjugate variables, Fisher information, entropy and Schwinger–Dyson checks.

mod chi;
mod fisher;
mod integral;
mod regularity;
mod score;
mod sd;

pub use chi::{chi_star_estimate, ChiStarReport};
pub use fisher::{
    fisher_curve, fisher_curve_from_batch, fisher_from_batch, fisher_info, FisherConfig, FisherCurve, FisherPoint,
};
pub use integral::{entropy_via_fisher, log_grid, report_from_curve, tail_bracket, EntropyReport};
pub use regularity::{fisher_regularity_check, RegularityReport, SlopeCheck};
pub use score::{conjugate_score, ScoreEstimate, ESS_FLOOR};
pub use sd::sd_residual;
