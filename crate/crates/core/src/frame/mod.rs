//! Adapted orthonormal frames for a unit Killing field and their
//! connection coefficients.

mod adapted;
mod coefficients;

pub use adapted::{align_frame, construct_frame, validate_frame, AdaptedFrame};
#[allow(unused_imports)]
pub(crate) use coefficients::{adapted_frame_from, frame_jet_from};
pub use coefficients::{
    adapted_frame_at, coefficients_from, frame_coeffs_at, frame_jet_at, FrameCoefficients,
    FrameJet,
};
