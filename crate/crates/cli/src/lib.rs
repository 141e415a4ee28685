//! File formats, benchmark harness and self-test for the `oppm` binary.

pub mod bench;
pub mod clock;
pub mod io;
pub mod selftest;
