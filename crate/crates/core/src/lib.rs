pub mod error;
pub mod expsum;
pub mod gammaapp;
pub mod laplace;
pub mod padecf;
pub mod polyrat;
pub mod targets;

pub use error::{Error, PipelineStep, Result};

/// The guide under `book/`, compiled so its snippets run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/method.md")]
    mod method {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/targets.md")]
    mod targets {}
    #[doc = include_str!("../../../book/src/errors.md")]
    mod errors {}
    #[doc = include_str!("../../../book/src/parameters.md")]
    mod parameters {}
    #[doc = include_str!("../../../book/src/gamma.md")]
    mod gamma {}
    #[doc = include_str!("../../../book/src/cdf.md")]
    mod cdf {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
