//! Bounds on product multicommodity flow in wired and wireless networks.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod fading;
pub mod flow;
pub mod geometry;
pub mod graph;
pub mod interference;
pub mod limits;
pub mod lp;
pub mod network;
pub mod random_net;
pub mod report;
pub mod rng;
pub mod traffic;

pub use error::{Error, Result};
