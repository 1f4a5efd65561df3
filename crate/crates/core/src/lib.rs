pub mod angle;
pub mod error;
pub mod numkernel;
pub mod numrange;
pub mod rng;
pub mod sip;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, Subspace, ToleranceConfig};
