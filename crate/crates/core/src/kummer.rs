//! The F_p-space F^x / (F^x)^p: subspaces, B_F, power residues and Kummer extensions.

use serde::Serialize;

use crate::arith::matmod::MatModM;
use crate::context::{CertifiedField, Completion};
use crate::error::{Error, Result};
use crate::numfield::characters::CharacterSet;
use crate::numfield::prime::{dlog_mu_p, residue_unit, split};
use crate::numfield::{factor_principal, is_pth_power, FieldElement, NumberField, PrimeIdeal};
use crate::padic::number::prec_err;

/// prod elems_i^{e_i}.
pub fn product(nf: &NumberField, elems: &[FieldElement], exps: &[u64]) -> FieldElement {
    let mut x = nf.one();
    for (b, &e) in elems.iter().zip(exps) {
        if e != 0 {
            x = nf.mul(&x, &nf.pow_u(b, e));
        }
    }
    x
}

/// k with w^((Nv-1)/p) = zeta_p^k mod v.
pub fn power_residue(cf: &CertifiedField, w: &FieldElement, v: &PrimeIdeal) -> Result<u64> {
    if v.q == cf.p {
        return Err(Error::WildPrime);
    }
    let (val, r) = split(&cf.nf, v, w)?;
    if val != 0 {
        return Err(Error::NotAUnit);
    }
    let z = residue_unit(&cf.nf, v, &cf.zeta_p)?;
    dlog_mu_p(v, &r, &z, cf.p)
}

/// True iff p divides v(a) at every prime v not above p.
pub fn in_bf(cf: &CertifiedField, a: &FieldElement) -> Result<bool> {
    Ok(factor_principal(&cf.nf, a)?.iter().all(|(pr, e)| pr.q == cf.p || e.rem_euclid(cf.p as i64) == 0))
}

/// Characters that are injective on the span of `elems` modulo p-th powers: every
/// kernel vector of the character matrix is checked to be an exact p-th power.
fn certified_characters(cf: &CertifiedField, elems: &[FieldElement]) -> Result<(CharacterSet, MatModM)> {
    let nf = &cf.nf;
    let mut cs = CharacterSet::empty(cf.p);
    cs.extend(nf, &cf.zeta_p, elems, elems.len() + 4)?;
    for _ in 0..40 {
        let m = cs.matrix(nf, elems)?;
        let mut spurious = false;
        for c in m.left_kernel()? {
            if is_pth_power(nf, &product(nf, elems, &c), cf.p)?.is_none() {
                spurious = true;
                break;
            }
        }
        if !spurious {
            return Ok((cs, m));
        }
        cs.extend(nf, &cf.zeta_p, elems, 4)?;
    }
    Err(Error::Undetermined("characters do not separate the span".into()))
}

/// A subspace of F^x/(F^x)^p given by independent representatives.
#[derive(Clone, Debug)]
pub struct SelmerSubspace {
    pub field: String,
    pub p: u64,
    pub basis: Vec<FieldElement>,
}

impl SelmerSubspace {
    pub fn span(cf: &CertifiedField, gens: &[FieldElement]) -> Result<Self> {
        if gens.iter().any(|g| cf.nf.is_zero(g)) {
            return Err(Error::ZeroElement);
        }
        let (_, m) = certified_characters(cf, gens)?;
        let (_, pivots) = m.transpose().rref()?;
        Ok(SelmerSubspace { field: cf.nf.name.clone(), p: cf.p, basis: pivots.iter().map(|&i| gens[i].clone()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn check(&self, cf: &CertifiedField) -> Result<()> {
        if self.field != cf.nf.name || self.p != cf.p {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, cf: &CertifiedField, a: &FieldElement) -> Result<bool> {
        self.check(cf)?;
        let mut all = self.basis.clone();
        all.push(a.clone());
        let (_, m) = certified_characters(cf, &all)?;
        Ok(m.rank()? == self.dim())
    }

    pub fn contains_space(&self, cf: &CertifiedField, other: &SelmerSubspace) -> Result<bool> {
        Ok(self.join(cf, other)?.dim() == self.dim())
    }

    pub fn join(&self, cf: &CertifiedField, other: &SelmerSubspace) -> Result<Self> {
        self.check(cf)?;
        other.check(cf)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(cf, &all)
    }

    pub fn intersect(&self, cf: &CertifiedField, other: &SelmerSubspace) -> Result<Self> {
        self.check(cf)?;
        other.check(cf)?;
        let d1 = self.dim();
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        let (_, m) = certified_characters(cf, &all)?;
        let reps: Vec<FieldElement> =
            m.left_kernel()?.iter().map(|c| product(&cf.nf, &self.basis, &c[..d1])).collect();
        Self::span(cf, &reps)
    }

    /// dim(self / sub); sub must lie inside self.
    pub fn quotient_dim(&self, cf: &CertifiedField, sub: &SelmerSubspace) -> Result<usize> {
        if !self.contains_space(cf, sub)? {
            return Err(Error::BadInput("quotient by a space that is not a subspace".into()));
        }
        Ok(self.dim() - sub.dim())
    }

    /// U^S (F^x)^p / (F^x)^p.
    pub fn sunits(cf: &CertifiedField) -> Result<Self> {
        Self::span(cf, &cf.sunits.basis())
    }

    /// B_F / (F^x)^p when Cl_S[p] = 0; otherwise the class-group representatives
    /// would be needed and are not part of the bundle format.
    pub fn bf(cf: &CertifiedField) -> Result<Self> {
        if cf.s_class_p_rank != 0 || !cf.s_class_exact {
            return Err(Error::Certification(format!(
                "B_F needs representatives of Cl_S[p] (p-rank {}), which the bundle does not supply",
                cf.s_class_p_rank
            )));
        }
        Self::sunits(cf)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum WildStatus {
    Split,
    Unramified,
    Ramified,
    Undetermined(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct WildPrime {
    pub prime: String,
    pub status: WildStatus,
}

#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub radicand: FieldElement,
    pub ram_tame: Vec<PrimeIdeal>,
    pub ram_wild: Vec<(PrimeIdeal, WildStatus)>,
}

impl ExtensionData {
    /// Ramified primes of F, tame and wild; undetermined wild primes are not counted.
    pub fn ramified_count(&self) -> usize {
        self.ram_tame.len() + self.ram_wild.iter().filter(|(_, s)| *s == WildStatus::Ramified).count()
    }

    pub fn wild_report(&self) -> Vec<WildPrime> {
        self.ram_wild.iter().map(|(pr, s)| WildPrime { prime: pr.label(), status: s.clone() }).collect()
    }
}

fn classify_wild(cf: &CertifiedField, comp: &Completion, b: &FieldElement) -> Result<WildStatus> {
    let lf = &comp.lf;
    let lb = comp.local(b)?;
    let v = lf.valuation(&lb)?;
    if v.rem_euclid(cf.p as i64) != 0 {
        return Ok(WildStatus::Ramified);
    }
    let eb = comp.um.eta(lf, &lb)?;
    if eb.iter().all(|&x| x == 0) {
        return Ok(WildStatus::Split);
    }
    // U_{pe/(p-1)} maps onto the line of the unramified degree-p extension.
    let level = cf.p as u32 * lf.e / (cf.p as u32 - 1);
    let mut rows: Vec<Vec<u64>> =
        comp.um.level_units(lf, level).iter().map(|u| comp.um.eta(lf, u)).collect::<Result<_>>()?;
    let d = eb.len();
    let r0 = MatModM::from_u64_rows(cf.p, &rows, d).rank()?;
    if r0 != 1 {
        return Err(prec_err("unramified line", lf.n, cf.p));
    }
    rows.push(eb);
    let r1 = MatModM::from_u64_rows(cf.p, &rows, d).rank()?;
    Ok(if r1 == r0 { WildStatus::Unramified } else { WildStatus::Ramified })
}

/// E = F(b^(1/p)): tame ramification from the factorization of b, wild status from
/// the local class of b at each prime above p.
pub fn build_extension(cf: &CertifiedField, comps: &[Completion], b: &FieldElement) -> Result<ExtensionData> {
    if cf.nf.is_zero(b) {
        return Err(Error::ZeroElement);
    }
    if is_pth_power(&cf.nf, b, cf.p)?.is_some() {
        return Err(Error::PthPower);
    }
    let ram_tame = factor_principal(&cf.nf, b)?
        .into_iter()
        .filter(|(pr, e)| pr.q != cf.p && e.rem_euclid(cf.p as i64) != 0)
        .map(|(pr, _)| pr)
        .collect();
    let mut ram_wild = Vec::new();
    for comp in comps {
        let status = match classify_wild(cf, comp, b) {
            Ok(s) => s,
            Err(e @ Error::PrecisionExhausted { .. }) => WildStatus::Undetermined(e.to_string()),
            Err(e) => return Err(e),
        };
        ram_wild.push((comp.prime.clone(), status));
    }
    Ok(ExtensionData { radicand: b.clone(), ram_tame, ram_wild })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::completions;
    use num_bigint::BigInt;

    #[test]
    fn power_residue_at_seven() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let ps = crate::numfield::factor_prime(&cf.nf, &BigInt::from(7)).unwrap();
        // (7, t+5) is (7, zeta - 2).
        let v = ps.iter().find(|p| p.h == vec![5, 1]).unwrap();
        assert_eq!(power_residue(&cf, &cf.nf.theta(), v).unwrap(), 2);
        assert_eq!(power_residue(&cf, &cf.nf.one(), v).unwrap(), 0);
        assert!(matches!(power_residue(&cf, &cf.nf.from_int(7), v), Err(Error::NotAUnit)));
    }

    #[test]
    fn bf_membership() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let k = &cf.nf;
        assert!(in_bf(&cf, &k.sub(&k.one(), &k.theta())).unwrap());
        assert!(!in_bf(&cf, &k.from_int(7)).unwrap());
        assert!(in_bf(&cf, &k.from_int(343)).unwrap());
    }

    #[test]
    fn subspace_operations() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let k = &cf.nf;
        let u = SelmerSubspace::sunits(&cf).unwrap();
        assert_eq!(u.dim(), 2);
        let w = u.intersect(&cf, &u).unwrap();
        assert_eq!(w.dim(), 2);
        let x = k.mul(&k.sub(&k.one(), &k.theta()), &k.theta());
        assert!(u.contains(&cf, &x).unwrap());
        assert!(!u.contains(&cf, &k.from_int(7)).unwrap());
        let seven = SelmerSubspace::span(&cf, &[k.from_int(7), k.theta()]).unwrap();
        assert_eq!(u.join(&cf, &seven).unwrap().dim(), 3);
        assert_eq!(u.intersect(&cf, &seven).unwrap().dim(), 1);
        let z = SelmerSubspace::span(&cf, &[k.theta()]).unwrap();
        assert_eq!(u.quotient_dim(&cf, &z).unwrap(), 1);
    }

    #[test]
    fn extensions_of_qzeta3() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let comps = completions(&cf, 20).unwrap();
        let k = &cf.nf;
        let e = build_extension(&cf, &comps, &k.from_int(7)).unwrap();
        assert_eq!(e.ram_tame.len(), 2);
        let e = build_extension(&cf, &comps, &k.theta()).unwrap();
        assert!(e.ram_tame.is_empty());
        assert_eq!(e.ram_wild[0].1, WildStatus::Ramified);
        // A unit times a cube has the tame set of the unit.
        let c = k.elem(&[2, 5]);
        let b = k.mul(&k.theta(), &k.pow_u(&c, 3));
        let e2 = build_extension(&cf, &comps, &b).unwrap();
        assert!(e2.ram_tame.is_empty());
        assert!(matches!(build_extension(&cf, &comps, &k.from_int(8)), Err(Error::PthPower)));
    }
}
