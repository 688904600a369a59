//! Stage-gated trading-system development workflow, executable.
//!
//! Three pieces work together:
//!
//! * [`pricing`] — a pure Black-Scholes call kernel with two normal-CDF
//!   paths: a high-accuracy reference and a three-term polynomial
//!   approximation, interchangeable per call.
//! * [`lifecycle`] — an event-sourced state machine for the four-stage,
//!   four-step K|V workflow: spiral iteration inside stages, Go/Kill/Hold/
//!   Return gates between them, an intra-stage gate at prototype delivery,
//!   and waterfall restart, all persisted as append-only journals.
//! * [`harness`] — golden-file regression, dual-path (reference versus
//!   polynomial) regression, and timestamped tape replay with deviation
//!   statistics.

pub mod harness;
pub mod lifecycle;
pub mod pricing;
pub mod render;

pub use harness::{
    load_golden, load_tape, replay_tape, run_dual_path_regression, run_golden_regression,
    DualPathSource, GoldenCase, HarnessError, RegressionReport, ReplayStats, Tape, TapeRecord,
};
pub use lifecycle::{
    GateCriteria, GateDecision, GateId, JournalError, JournalEvent, JournalStore, LifecycleError,
    LockMode, Position, ProjectId, ProjectState, Score, StageId, StepAddress, StepNumber,
    TemplateId,
};
pub use pricing::{
    black_scholes_call, compute_d1, compute_d2, discounted_intrinsic, normal_cdf_polynomial,
    normal_cdf_reference, payoff_series, CdfMode, PiMode, PayoffPoint, PriceBreakdown,
    PricingError, PricingInputs,
};
