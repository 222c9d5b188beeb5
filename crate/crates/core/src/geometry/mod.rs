//! Zero counting, nodal length, and the deterministic lemmas as executable
//! certificates.

pub mod certificates;
pub mod lines;
pub mod nodal;
pub mod zeros;

pub use certificates::{
    cascade_check, no_more_than_n_zeros_check, nodal_box_certificate, CascadeCertificate,
    NodalBoxCertificate, Polynomial, SmoothField2d, SmoothFn1d,
};
pub use lines::{line_intersection_bound_field, line_intersection_bound_fn};
pub use nodal::{nodal_length, nodal_length_fn, NodalLength};
pub use zeros::{count_zeros, count_zeros_fast, GridEval, ZeroCount};
