//! Weight-reducing transforms and distance balancing.
//!
//! Every transform returns the new code together with a provenance map that
//! ties new qubits and checks back to the input; the schedule constructors
//! consume these maps.

mod balance;
mod copy;
mod gauge;

pub mod audit;

pub use balance::{
    balance_x, balance_z, choose_heights, greedy_heights, thicken, BalanceMap, HeightChoice, Region, ZRowKind,
};
pub use copy::{copy_code, copy_code_with, greedy_assignment, CopyMap};
pub use gauge::{gauge_code, GaugeMap};
