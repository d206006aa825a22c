#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN
#![cfg_attr(test, allow(clippy::excessive_precision))] // reference values keep their quoted digits

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exec;
pub mod helix;
pub mod io;
pub mod optimize;
pub mod oracle;
pub mod region;
