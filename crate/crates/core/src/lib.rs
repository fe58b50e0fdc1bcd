//! Exact algebra for the unicritical families `z^n + c`.

pub mod dynamics;
pub mod factor;
pub mod numfield;
pub mod poly;
pub mod verify;
pub mod wire;
