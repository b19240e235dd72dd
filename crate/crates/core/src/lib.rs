//! Network protection codes: systematic binary erasure codes laid across
//! `n` disjoint connections, and a round-based simulator of the encoding,
//! failure and recovery protocol that uses them.
//!
//! - [`gf2`]: bit vectors and matrices over the two-element field.
//! - [`codes`]: single-parity, Hamming and BCH protection codes, shortening,
//!   erasure decoding and exhaustive protection checks.
//! - [`netmodel`]: connections, packets and exact capacity accounting.
//! - [`protocol`]: rotation schedule, per-round encoding, failure injection
//!   and query-based recovery.
//! - [`cli`]: the `netprotect` command-line tool.

pub mod cli;
pub mod codes;
pub mod gf2;
pub mod netmodel;
pub mod protocol;

pub use codes::{DistanceKind, ErasurePattern, ProtectionCode};
pub use gf2::{Bit, BitMatrix, BitVector};
pub use netmodel::{Capacity, Network, Packet, PacketKind};
pub use protocol::{build_schedule, FailureScenario, Outcome, RecoveryReport, Schedule};
