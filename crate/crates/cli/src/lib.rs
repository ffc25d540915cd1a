//! Front-end pieces of the `iotacurve` binary: input parsing, SVG output and
//! the seeded verification harness.

pub mod input;
pub mod render;
pub mod term;
pub mod verify;
