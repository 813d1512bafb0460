//! Universal entanglement concentration by Schur-Weyl measurement.
//!
//! `n` copies of a pure bipartite state are measured in the isotypic blocks of
//! `(C^d)^{⊗n}`. The outcome `λ` occurs with probability `dim V_λ · s_λ(p)` and
//! leaves a maximally entangled state of dimension `dim V_λ`.
//!
//! - [`young`]: partitions, dimensions, characters, RSK.
//! - [`schur`]: Schur polynomials at a Schmidt spectrum, entropies.
//! - [`measure`]: the outcome law, failure probabilities, sampling.
//! - [`exponent`]: the failure exponent and its finite-`n` checks.
//! - [`oracle`]: dense simulation of the measurement.
//! - [`verify`]: residual reports comparing the two.
//!
//! ```
//! use schurweyl::measure::distribution;
//! use schurweyl::schur::SchmidtSpectrum;
//!
//! let law = distribution(3, &SchmidtSpectrum::uniform(2)?)?;
//! assert_eq!(law.entries().len(), 2);
//! # Ok::<(), schurweyl::Error>(())
//! ```

pub mod error;
pub mod exact;
pub mod exponent;
pub mod measure;
pub mod numeric;
pub mod oracle;
pub mod schur;
pub mod verify;
pub mod young;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/partitions.md")]
    struct Partitions;
    #[doc = include_str!("../../../book/src/law.md")]
    struct Law;
    #[doc = include_str!("../../../book/src/exponent.md")]
    struct Exponent;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
