//! Asynchronous quantized gossip averaging.
//!
//! Nodes hold integer multiples of a quantization step and repeatedly pair
//! up with a neighbor, moving their values toward each other while keeping
//! the network sum fixed. The crate covers:
//!
//! - [`graph`]: topologies (named families, Erdős–Rényi sampling) and
//!   time-varying [`schedule::GraphSchedule`]s.
//! - [`quantization`]: the uniform quantizer and exact integer state vectors.
//! - [`dynamics`]: the fixed-graph (AF) and switching-graph (AS) gossip steps
//!   and full runs to quantized consensus.
//! - [`randwalk`]: walk transition matrices, exact hitting/meeting times via
//!   absorbing-chain solves, and Monte-Carlo estimators.
//! - [`bounds`]: closed-form convergence-time bounds.
//! - [`harness`]: experiment configs, presets, batch execution and output.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod harness;
pub mod quantization;
pub mod randwalk;
pub mod schedule;
pub mod seeds;

pub use error::{Error, Result};
pub use graph::Graph;
pub use quantization::{QState, QuantizerSpec};
pub use schedule::GraphSchedule;
