//! Exact combinatorics and finite-rank oracles for stable Harish-Chandra bimodules
//! of `gl`, `o` and `sp`.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`]: partitions, bipartitions, skew shapes and the `[α, β, γ]` cut.
//! * [`lr`]: Littlewood–Richardson coefficients and skew Schur expansions.
//! * [`weyl`]: characters and tensor products of `gl_n`, `so_{2n+1}`, `sp_{2n}`.
//! * [`stable`]: finite and stable multiplicities of `Hom(μ, λ)`.
//! * [`central`]: exponential central characters over formal generators.
//! * [`annihilator`]: operator actions on symmetric and exterior tensor spaces.
//! * [`slz`]: the `sl_Z` box operators on wedge, Fock and Grothendieck modules.

pub mod annihilator;
pub mod central;
mod error;
pub mod lr;
pub mod partition;
pub mod rational;
pub mod slz;
pub mod stable;
pub mod weyl;

pub use error::{Error, Result};
pub use partition::{Bipartition, Cell, CutDecomposition, Partition, SkewShape};
