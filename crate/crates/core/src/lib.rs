//! Exact d-invariants of lens spaces and the obstruction pipeline deciding
//! which `L(n,1)` arise from a distance one surgery on `L(3,1)`.

pub mod band;
pub mod classify;
pub mod cli;
pub mod exactnum;
pub mod lens;
pub mod linkform;
pub mod surgery;

pub use classify::{classify, scan, ObstructionReport, Verdict, REALIZABLE};
pub use exactnum::Rational;
pub use lens::{d_invariant, LensSpace, SpinC};
