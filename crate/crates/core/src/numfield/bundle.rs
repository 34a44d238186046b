//! The JSON field bundle: defining data, integral basis, class group and S-units.
//! Rationals are "num/den" strings; element coordinates are over the integral basis.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::classgroup::{ClassGroupData, ClassGroupSource};
use crate::numfield::field::{FieldElement, NumberField};
use crate::numfield::prime::factor_prime;
use crate::numfield::sunits::SUnitData;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassGroupSpec {
    pub invariants: Vec<i64>,
    #[serde(default)]
    pub generators: Vec<String>,
    /// "relations": recomputed and compared on load; "bundle": taken as given.
    pub source: String,
    #[serde(default)]
    pub p_part_only: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SUnitSpec {
    pub torsion: Vec<String>,
    pub torsion_order: u64,
    #[serde(rename = "n_F")]
    pub n_f: u32,
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bundle {
    pub name: String,
    pub p: u64,
    pub poly: Vec<i64>,
    pub integral_basis: Vec<Vec<String>>,
    pub signature: [usize; 2],
    pub class_group: ClassGroupSpec,
    pub sunits: SUnitSpec,
    pub provenance: String,
    /// Whether p divides the class number of the maximal real subfield, for CM fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_class_number_p_free: Option<bool>,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::BadInput(format!("bad rational {s:?}")))
}

pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Bundle {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn field(&self) -> Result<NumberField> {
        let poly: Vec<BigInt> = self.poly.iter().map(|&c| BigInt::from(c)).collect();
        let basis = self
            .integral_basis
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let nf = NumberField::with_basis(&self.name, poly, basis)?;
        if nf.signature != (self.signature[0], self.signature[1]) {
            return Err(Error::Certification(format!(
                "signature {:?} differs from bundle {:?}",
                nf.signature, self.signature
            )));
        }
        Ok(nf)
    }

    pub fn element(nf: &NumberField, coords: &[String]) -> Result<FieldElement> {
        if coords.len() != nf.n {
            return Err(Error::BadInput(format!("expected {} coordinates", nf.n)));
        }
        let c = coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(nf.from_ib(&c))
    }

    pub fn coords(nf: &NumberField, a: &FieldElement) -> Vec<String> {
        nf.to_ib(a).iter().map(rational_string).collect()
    }

    pub fn sunit_data(&self, nf: &NumberField) -> Result<SUnitData> {
        let s = factor_prime(nf, &BigInt::from(self.p))?;
        Ok(SUnitData {
            torsion: Self::element(nf, &self.sunits.torsion)?,
            torsion_order: self.sunits.torsion_order,
            n_f: self.sunits.n_f,
            generators: self.sunits.generators.iter().map(|g| Self::element(nf, g)).collect::<Result<_>>()?,
            s,
        })
    }

    /// Class group as recorded; for "relations" the caller recomputes and compares.
    pub fn class_group_data(&self) -> ClassGroupData {
        let exact = self.class_group.source == "relations" && self.class_group.invariants.is_empty();
        ClassGroupData {
            invariants: self.class_group.invariants.iter().map(|&d| BigInt::from(d)).collect(),
            generators: self.class_group.generators.clone(),
            exact: exact || (self.class_group.source == "bundle" && !self.class_group.p_part_only),
            source: ClassGroupSource::Bundle { p_part_only: self.class_group.p_part_only },
        }
    }
}

/// A cyclic degree-p extension E = F(b^(1/p)), optionally with a bundle for E and the
/// data tying the two together.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub name: String,
    /// Bundle file (or catalog name) of the base field.
    pub base: String,
    /// Radicand, coordinates over the base integral basis.
    pub radicand: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    /// Image of the base theta in E, over E's integral basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<String>>,
    /// sigma(theta_E) over E's integral basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<String>>,
    /// Integer matrix: row i holds the exponents of sigma(b_i) over E's (torsion, generators).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_action: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub provenance: String,
}

impl ExtensionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        for s in ["3", "-7/2", "0"] {
            assert_eq!(rational_string(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/x").is_err());
    }
}
