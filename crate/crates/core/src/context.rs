//! A field with certified S-unit and class-group data, and its completions above p.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::int::max_precision;
use crate::arith::zlattice;
use crate::error::{Error, Result};
use crate::numfield::prime::valuation;
use crate::numfield::{class_group, validate_sunits, Bundle, ClassGroupData, FieldElement, NumberField, PrimeIdeal, SUnitData, SUnitReport};
use crate::padic::hensel::hensel_factor;
use crate::padic::local::{LocalElem, LocalField};
use crate::padic::unitmap::UnitClassMap;

/// Minkowski-bound ceiling for class groups recomputed on load.
pub const CLASS_GROUP_CEILING: u64 = 50_000;

#[derive(Clone, Debug)]
pub struct CertifiedField {
    pub bundle: Bundle,
    pub nf: NumberField,
    pub p: u64,
    pub sunits: SUnitData,
    pub report: SUnitReport,
    pub class_group: ClassGroupData,
    /// dim Cl_S[p], with a flag for whether it is exact.
    pub s_class_p_rank: usize,
    pub s_class_exact: bool,
    pub zeta_p: FieldElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeInfo {
    pub label: String,
    pub e: u32,
    pub f: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub name: String,
    pub degree: usize,
    pub signature: [usize; 2],
    #[serde(serialize_with = "crate::ser::bigint")]
    pub discriminant: BigInt,
    pub p: u64,
    pub primes_above_p: Vec<PrimeInfo>,
    pub sunit_rank: usize,
    pub n_f: u32,
    pub saturation: String,
    pub class_group: ClassGroupData,
    pub s_class_p_rank: usize,
    pub s_class_exact: bool,
    pub provenance: String,
}

impl CertifiedField {
    /// Re-certifies everything in the bundle that can be checked.
    pub fn from_bundle(bundle: Bundle) -> Result<Self> {
        let nf = bundle.field()?;
        let p = bundle.p;
        if p == 2 || !crate::arith::int::is_prime_u64(p) {
            return Err(Error::BadInput(format!("p = {p} must be an odd prime")));
        }
        let sunits = bundle.sunit_data(&nf)?;
        let report = validate_sunits(&nf, p, &sunits)?;
        let zeta_p = sunits.zeta_p(&nf, p)?;
        let mut cg = bundle.class_group_data();
        if bundle.class_group.source == "relations" {
            let computed = class_group(&nf, &[], CLASS_GROUP_CEILING)?;
            if computed.invariants != cg.invariants {
                return Err(Error::Certification(format!(
                    "class group invariants {:?} differ from the bundle {:?}",
                    computed.invariants, cg.invariants
                )));
            }
            cg = computed;
        }
        // Cl_S = Cl / <S>; the S-primes are principal when the S-unit valuations
        // at S span Z^S.
        let s = &sunits.s;
        let (s_rank, s_exact) = if cg.p_free(p) {
            (0, true)
        } else {
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for g in &sunits.generators {
                rows.push(s.iter().map(|pr| valuation(&nf, pr, g).map(BigInt::from)).collect::<Result<_>>()?);
            }
            let full: Vec<Vec<BigInt>> =
                (0..s.len()).map(|i| (0..s.len()).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
            let idx = zlattice::index(&rows, &full, s.len())?;
            if idx == Some(BigInt::from(1)) {
                (cg.p_rank(p), cg.exact || matches!(cg.source, crate::numfield::classgroup::ClassGroupSource::Bundle { .. }))
            } else {
                (cg.p_rank(p), false)
            }
        };
        Ok(CertifiedField { bundle, nf, p, sunits, report, class_group: cg, s_class_p_rank: s_rank, s_class_exact: s_exact, zeta_p })
    }

    pub fn load(key: &str) -> Result<Self> {
        Self::from_bundle(crate::catalog::load_bundle(key)?)
    }

    pub fn s(&self) -> &[PrimeIdeal] {
        &self.sunits.s
    }

    pub fn name(&self) -> &str {
        &self.nf.name
    }

    pub fn plus_p_free(&self) -> Option<bool> {
        self.bundle.plus_class_number_p_free
    }

    pub fn element(&self, coords: &[String]) -> Result<FieldElement> {
        Bundle::element(&self.nf, coords)
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            name: self.nf.name.clone(),
            degree: self.nf.n,
            signature: [self.nf.signature.0, self.nf.signature.1],
            discriminant: self.nf.disc.clone(),
            p: self.p,
            primes_above_p: self.s().iter().map(|pr| PrimeInfo { label: pr.label(), e: pr.e, f: pr.f }).collect(),
            sunit_rank: self.report.rank,
            n_f: self.report.n_f,
            saturation: format!("{:?}", self.report.saturation),
            class_group: self.class_group.clone(),
            s_class_p_rank: self.s_class_p_rank,
            s_class_exact: self.s_class_exact,
            provenance: self.bundle.provenance.clone(),
        }
    }
}

/// The completion at a prime above p with its unit-class coordinates.
#[derive(Clone, Debug)]
pub struct Completion {
    pub prime: PrimeIdeal,
    pub lf: LocalField,
    pub um: UnitClassMap,
}

impl Completion {
    pub fn local(&self, a: &FieldElement) -> Result<LocalElem> {
        self.lf.from_global(&a.num, &a.den)
    }

    pub fn eta(&self, a: &FieldElement) -> Result<Vec<u64>> {
        self.um.eta(&self.lf, &self.local(a)?)
    }
}

/// Default p-adic precision: 30 digits per unit of ramification, capped at the word size.
pub fn default_precision(cf: &CertifiedField) -> u32 {
    let e = cf.s().iter().map(|pr| pr.e).max().unwrap_or(1);
    (30 * e).min(max_precision(cf.p))
}

/// Completions at the primes of S, in the order of `cf.s()`.
pub fn completions(cf: &CertifiedField, n: u32) -> Result<Vec<Completion>> {
    let cap = max_precision(cf.p);
    if n > cap {
        return Err(Error::PrecisionExhausted { context: "requested precision".into(), precision: n, cap });
    }
    let factors = hensel_factor(&cf.nf.poly, cf.p, n)?;
    let mut out = Vec::with_capacity(cf.s().len());
    for pr in cf.s() {
        let hf = factors
            .iter()
            .find(|hf| hf.h == pr.h && hf.e == pr.e)
            .ok_or_else(|| Error::Certification(format!("no Hensel factor for {}", pr.label())))?;
        let lf = LocalField::new(hf, cf.p, n)?;
        let um = UnitClassMap::new(&lf)?;
        out.push(Completion { prime: pr.clone(), lf, um });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_fields_certify() {
        for (name, _) in crate::catalog::FIELDS {
            let cf = CertifiedField::load(name).unwrap();
            assert_eq!(cf.report.rank, cf.report.expected_rank, "{name}");
        }
    }

    #[test]
    fn three_in_q257() {
        let cf = CertifiedField::load("q257").unwrap();
        let s = cf.s();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].e, s[0].f), (2, 2));
        assert_eq!(cf.s_class_p_rank, 2);
    }

    #[test]
    fn completions_match_primes() {
        let cf = CertifiedField::load("q13").unwrap();
        let c = completions(&cf, 20).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| x.lf.e == 2 && x.lf.d == 2));
    }
}
