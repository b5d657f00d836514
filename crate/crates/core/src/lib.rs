//! Exact operator algebra for the trigonometric Ruijsenaars-Schneider system
//! of type C_n.

pub mod arith;
pub mod operator;
pub mod root_system;
pub mod hecke;
pub mod report;
pub mod hamiltonian;
pub mod verification;
pub mod spin_shift;

pub use arith::{Mono, Poly, RatFn};
pub use hamiltonian::SpinPair;
pub use hecke::HeckeContext;
pub use operator::{AffElem, FactoredWeight, NormalOp, OpError, ParamMode};
pub use report::{CheckResult, Report};
pub use root_system::{HalfVec, RootSystemCn, WeylElem};
pub use spin_shift::SpinShiftBundle;
pub use verification::probe::ProbeConfig;
pub use verification::targets::{CheckConfig, CheckError, Target, TargetRun};
