//! Feasibility toolkit for retrofitting a building towards nearly-zero energy use.
//!
//! The pipeline runs lighting redesign ([`lighting`]), cooling sizing ([`psychro`],
//! [`hvac`]), load aggregation ([`loads`]), grid-tied PV design ([`pvdesign`]),
//! hourly yield simulation ([`simproduction`]), life-cycle economics ([`finance`]) and
//! avoided-emission accounting ([`carbon`]). [`project`] reads the declarative project
//! file and [`report`] wires the stages together.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carbon;
pub mod error;
pub mod finance;
pub mod hvac;
pub mod lighting;
pub mod loads;
pub mod project;
pub mod psychro;
pub mod pvdesign;
pub mod report;
pub mod simproduction;

pub use error::{Error, Result};
