//! Joint moments of derivatives of characteristic polynomials of Haar-random
//! unitary matrices, evaluated by several independent routes, together with
//! the matching arithmetic coefficients on the Riemann zeta side.

pub mod combinatorics;
pub mod cue_asymptotic;
pub mod cue_exact;
pub mod error;
pub mod exact;
pub mod haar_mc;
mod moment;
pub mod numeric;
pub mod zeta_side;

pub use combinatorics::{ContingencyTable, DerivativeIndex, PartitionShape};
pub use error::{Error, Result};
pub use exact::{ExactInteger, ExactRational};
pub use moment::{MomentValue, Normalization, Regime, SpectralPoint};
