//! Global arithmetic in number fields.

pub mod bundle;
pub mod characters;
pub mod classgroup;
pub mod field;
pub mod maps;
pub mod prime;
pub mod pthroot;
pub mod sunits;

pub use bundle::{Bundle, ExtensionSpec};
pub use classgroup::{class_group, ClassGroupData};
pub use field::{FieldElement, NumberField};
pub use maps::FieldMap;
pub use prime::{factor_prime, factor_principal, PrimeIdeal};
pub use pthroot::is_pth_power;
pub use sunits::{validate_sunits, SUnitData, SUnitReport};
