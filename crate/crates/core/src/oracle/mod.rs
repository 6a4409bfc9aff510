//! Independent numerical oracles for the closed forms in [`crate::kld`].
//!
//! Nothing here calls the closed-form derivative code, with the single
//! exception of [`checks`], which compares the two.

pub mod checks;
pub mod extended;
pub mod fd;
pub mod identities;
pub mod mc;
pub mod random;
pub mod report;

pub use checks::{check_pair, CheckConfig};
pub use extended::kld_extended;
pub use fd::{fd_gradient, fd_gradient_fn, fd_hessian, fd_hessian_fn, FdConfig, FdScheme, PackedPoint};
pub use identities::identity_suite;
pub use mc::{mc_kld, McEstimate};
pub use report::CheckReport;
