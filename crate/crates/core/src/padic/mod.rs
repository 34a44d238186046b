//! p-adic numbers, Hensel factors and completions of number fields.

pub mod hensel;
pub mod local;
pub mod number;
pub mod unitmap;

pub use hensel::{hensel_factor, HenselFactor};
pub use local::{LocalElem, LocalField};
pub use number::PadicNumber;
pub use unitmap::UnitClassMap;
