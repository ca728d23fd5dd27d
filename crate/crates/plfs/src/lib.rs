//! Partially linear functional score (PLFS) regression with Mallows-type
//! model averaging.
//!
//! A scalar response is modeled as a linear effect of scalar predictors plus
//! a nonparametric effect of transformed functional principal component
//! scores. Candidate models differ in which predictors and scores they use;
//! this crate fits each candidate by kernel smoothing, combines them with
//! weights chosen by a Mallows-type criterion on the unit simplex, and ships
//! the information-criterion selection/averaging baselines, a simulation
//! harness, and CSV ingestion for real datasets.

//TEMP pub mod averaging;
//TEMP pub mod candidate;
//TEMP pub mod cli;
pub mod error;
//TEMP pub mod fpca;
//TEMP pub mod ingest;
pub mod kernel;
pub mod numerics;
pub mod qp;
//TEMP pub mod simulate;

pub use error::{Error, Result};
