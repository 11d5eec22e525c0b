//! Exact arithmetic for Breuil windows over truncated power-series frames.
//!
//! The crate is organised bottom-up:
//!
//! * [`frame`], [`poly`], [`series`], [`matrix`]: the rings `𝔖_a`, `R/p^aR`
//!   and matrices over them;
//! * [`witt`], [`witt_poly`]: truncated p-typical Witt vectors, `δ`, `κ`, `τ`;
//! * [`window`], [`rigidity`]: windows in normal form and their invariants;
//! * [`display`]: the functor to Dieudonné displays;
//! * [`tframe`]: the ring `𝒯_a`, the unique-lifting solver and `ν`;
//! * [`module`]: Breuil modules as cokernels of isogenies;
//! * [`blocks`], [`cli`], [`selftest`]: text input and the command line.

pub mod blocks;
pub mod cli;
pub mod display;
pub mod frame;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod random;
pub mod rigidity;
pub mod selftest;
pub mod series;
pub mod tframe;
pub mod witt;
pub mod window;
pub mod witt_poly;

pub use frame::{Frame, FrameSpec};
pub use matrix::Matrix;
pub use poly::IntPoly;
pub use series::{Ring, RingTag, SeriesElem};
pub use window::Window;
