pub mod arith;
pub mod capitulation;
pub mod catalog;
pub mod cohomology;
pub mod context;
pub mod error;
pub mod gross;
pub mod kummer;
pub mod numfield;
pub mod padic;
pub mod ser;
pub mod suite;
pub mod symbols;

pub use context::{CertifiedField, Completion};
pub use error::{Error, Result};
