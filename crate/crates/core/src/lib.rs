//! Linear codes with extremal weight spectra, studied through projective
//! systems over PG(k-1, q).

pub mod error;
pub mod cli;
pub mod construct;
pub mod field;
pub mod geometry;
pub mod lincode;
pub mod oracle;
pub mod projsys;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use geometry::{theta, GeometrySpec, Hyperplane, Point};
pub use lincode::GeneratorMatrix;
pub use projsys::{ProjectiveSystem, WeightSpectrum};
