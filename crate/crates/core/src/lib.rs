//! Finite-field Fourier analysis, Salem certification, edge and
//! intersection counting, and VC-dimension shattering search over F_p^d.

pub mod analysis;
pub mod bits;
pub mod curves;
pub mod error;
pub mod field;
pub mod fourier;
pub mod pointset;
pub mod presets;
pub mod random;
pub mod shatter;
pub mod sums;

pub use error::{Error, Result};
pub use field::{CharacterEvaluator, FieldContext, FieldMatrix};
pub use fourier::{fourier_spectrum, salem_report, SalemParams, SalemReport, SpectrumTable};
pub use pointset::PointSet;
