//! Command line and HTTP front ends for the Aggression engine.

pub mod commands;
pub mod server;
pub mod session;
