pub mod error;
pub mod expr;
pub mod linalg;
pub mod oracle;
pub mod rootsys;
pub mod weyl;
pub mod chevalley;
pub mod cohomology;
pub mod context;
pub mod deform;
pub mod repn;
pub mod resonance;

pub use error::{Error, Result};
