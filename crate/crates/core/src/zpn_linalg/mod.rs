//! Exact linear algebra over Z/p^n.

mod arith;
mod howell;
mod module;
mod present;

pub use arith::{binomial, factorial, is_prime, Modulus, Zpn};
pub use howell::{howell_form, left_kernel, mat_mul, smith_valuations, transpose, vec_mat, Howell, Mat, Pivot, Solver};
pub use module::{double_dual_map, dual_map, is_exact, pontryagin_dual, DualModule, ExactnessCertificate, ModuleMap, ZpnModule};
pub use present::GroupPresentation;
