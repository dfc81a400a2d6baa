//! Lumped thermo-electrical model of fluid-heated pyroelectric high-voltage
//! generators.
//!
//! A chain of generator units sits along a fluid loop. Each unit is a thermal
//! RC ladder (channel wall, adhesive, crystal) driving a pyroelectric current
//! source that charges the crystal capacitance through a leakage path. A
//! pull-in switch hands the charge to a storage capacitor or a capacitive
//! actuator. [`engine::run_scenario`] couples the pieces into a hybrid
//! simulation with localized switch events; [`calibrate`] fits the unknown
//! parameters to measured points.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibrate;
pub mod electro;
pub mod engine;
pub mod error;
pub mod fluid;
pub mod ode;
pub mod thermal;
pub mod units;

pub use error::{Error, Result};
