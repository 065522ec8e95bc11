//! Complex linear algebra and quantum primitives.
//!
//! Everything is dense: states are `2^n` complex vectors and operators are
//! `2^n × 2^n` complex matrices. The dimension cap comes from
//! [`crate::config::max_dim`].

mod density;
mod linalg;
mod montecarlo;
mod projector;
mod rng;
mod state;

pub use density::{tensor_power, DensityMatrix};
pub use linalg::{eigen_hermitian, hermiticity_defect, kron, max_norm, HermitianEigen};
pub use montecarlo::{estimate_mean_overlap, haar_overlaps, OverlapEstimate};
pub use projector::{overlap, project_into_image, random_elementary_projector, Projector};
pub use rng::QRng;
pub use state::{haar_sample, haar_stream_sample, PureState};
pub(crate) use state::draw as state_draw;

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;
