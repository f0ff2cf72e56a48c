//! Group algebra, compressions of the left regular representation, norm
//! bounds, and seeded verifiers for the Haagerup-type inequalities.

mod algebra;
mod norm;
mod verify;

pub use algebra::{convolve, AlgebraElement};
pub use norm::{
    ball2_constant, compression, compression_on, dense_spectral_norm, haagerup_constant, moment_lower_bound,
    operator_norm, power_iteration, window, Compression, Frame, NormBound, NormOptions, PowerResult, SparseOperator,
};
pub use verify::{
    power_support, row_norm_function, verify_freeprod_inequality, verify_power_inequality, verify_product_inequality,
    VerificationReport, VerifyOptions, Witness, VERIFY_TOL,
};
