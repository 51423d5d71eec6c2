pub mod array;
pub mod bitrades;
pub mod cubes;
pub mod error;
pub mod face;
pub mod grid;
pub mod lincodes;
pub mod pointset;
pub mod symmetry;
pub mod testsets;

pub use array::{CubeArray, CubeDoc};
pub use cubes::{is_frequency_cube, FreqParams, PartialCube};
pub use error::{Error, Result};
pub use face::{enumerate_faces, Face, FaceTable};
pub use grid::{ball_count, sigma, weight, GridSig, Point};
pub use pointset::PointSet;
pub use symmetry::{canonical_form, Symmetry};
pub use testsets::{Certificate, ConstructionSpec};
