//! Schedules for the bipartite traveling tournament problem: two leagues of
//! `n` teams, every inter-league pair meets twice on `2n` days.

pub mod bounds;
pub mod construction;
pub mod error;
pub mod instance;
pub mod io;
pub mod localsearch;
pub mod packing;
pub mod schedule;
pub mod solve;

pub use error::{Error, Result};
pub use instance::Instance;
pub use schedule::Schedule;
