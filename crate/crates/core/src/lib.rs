//! Minimum Hamming distance of linear block codes via integer lattices.
//!
//! The pipeline embeds a code over GF(2) or GF(3) into an integer lattice,
//! reduces the basis (LLL / block Korkin-Zolotarev), harvests low-weight
//! codewords from the reduced rows, and certifies minimality with a
//! Kannan-Fincke-Pohst enumeration of every lattice vector below the best
//! weight found. Binary images bring GF(2^m) codes into scope.

pub mod code;
pub mod distance;
pub mod embed;
pub mod error;
pub mod gf;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod svp;

pub use code::{Codeword, LinearCode, OracleConfig};
pub use distance::{DistanceConfig, DistanceResult, Status};
pub use error::{Error, Result};
pub use gf::{Field, FieldElem};
pub use lattice::{LatticeBasis, ReductionParams};
