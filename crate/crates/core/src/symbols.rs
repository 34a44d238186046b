//! Tame and wild Hilbert symbols, the product formula, and the Tate kernel.
//!
//! Values are exponents k in F_p for zeta_p^k. At a prime above p the symbol is an
//! alternating form on F_v^x/F_v^xp in eta-coordinates. Its kernel structure comes
//! from norm groups of the local Kummer extensions; the scalar is fixed by reciprocity.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::int::{inv_mod, max_precision};
use crate::arith::matmod::MatModM;
use crate::context::{completions, default_precision, CertifiedField, Completion};
use crate::error::{Error, Result};
use crate::kummer::{product, SelmerSubspace};
use crate::numfield::prime::{dlog_mu_p, res_mul, res_pow, residue_unit, split};
use crate::numfield::{factor_principal, FieldElement, NumberField, PrimeIdeal};
use crate::padic::local::{LocalElem, LocalField};
use crate::padic::unitmap::UnitClassMap;

/// (a, b)_v at a prime v not above p:
/// [(-1)^(v(a)v(b)) b^v(a) / a^v(b)]^((Nv-1)/p), so that (pi, u)_v is the power residue of u.
pub fn tame_symbol(nf: &NumberField, p: u64, zeta_p: &FieldElement, a: &FieldElement, b: &FieldElement, v: &PrimeIdeal) -> Result<u64> {
    if v.q == p {
        return Err(Error::WildPrime);
    }
    let (al, ra) = split(nf, v, a)?;
    let (be, rb) = split(nf, v, b)?;
    if al == 0 && be == 0 {
        return Ok(0);
    }
    let order = v.norm() - 1u32;
    let exp = |e: i64| -> BigUint {
        let m = BigUint::from(e.unsigned_abs()) % &order;
        if e < 0 {
            (&order - m) % &order
        } else {
            m
        }
    };
    let mut x = res_mul(v, &res_pow(v, &rb, &exp(al)), &res_pow(v, &ra, &exp(-be)));
    if (al * be).rem_euclid(2) == 1 {
        let mut minus = vec![v.q - 1];
        minus.resize(v.f as usize, 0);
        x = res_mul(v, &x, &minus);
    }
    let z = residue_unit(nf, v, zeta_p)?;
    dlog_mu_p(v, &x, &z, p)
}

/// Functional phi on eta-space whose kernel is eta of the norm group of F_v(b^(1/p)).
fn norm_hyperplane(lf: &LocalField, um: &UnitClassMap, b: &LocalElem, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let p = lf.p;
    let d = um.dim + 1;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rank = 0;
    let mut failures = 0;
    for trial in 0..2000 {
        let z: Vec<LocalElem> = (0..p)
            .map(|k| {
                if k > 0 && rng.gen_range(0..4) == 0 {
                    return lf.elem(vec![0; lf.d], 0, lf.n);
                }
                let r = rng.gen_range(0..3u64);
                lf.mul(&lf.random_integral(rng), &lf.pow(&lf.pi, r))
            })
            .collect();
        let nz = lf.kummer_norm(b, &z);
        if lf.is_zero(&nz) {
            continue;
        }
        match um.eta(lf, &nz) {
            Ok(row) => rows.push(row),
            Err(Error::PrecisionExhausted { .. }) => {
                failures += 1;
                if failures > 200 {
                    return Err(crate::padic::number::prec_err("norm sampling", lf.n, p));
                }
                continue;
            }
            Err(e) => return Err(e),
        }
        if rows.len() >= d - 1 && (rows.len() % 4 == 0 || trial > 1000) {
            rank = MatModM::from_u64_rows(p, &rows, d).rank()?;
            if rank >= d - 1 {
                break;
            }
        }
    }
    if rank == d {
        return Err(Error::Certification("norms fill F_v^x/p: radicand is a local p-th power".into()));
    }
    if rank < d - 1 {
        return Err(Error::Undetermined("norm group sampling did not reach a hyperplane".into()));
    }
    let (_, ker) = MatModM::from_u64_rows(p, &rows, d).rank_kernel()?;
    Ok(ker.into_iter().next().unwrap())
}

/// Unnormalized alternating form A with s(x, y) = eta(x)^T A eta(y).
fn alternating_form(lf: &LocalField, um: &UnitClassMap, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<u64>>> {
    let p = lf.p;
    let d = um.dim + 1;
    let mut basis = vec![lf.pi.clone()];
    basis.extend(um.free_units());
    let prow: Vec<Vec<u64>> = basis.iter().map(|b| um.eta(lf, b)).collect::<Result<_>>()?;
    let pt_inv = MatModM::from_u64_rows(p, &prow, d)
        .transpose()
        .inverse()?
        .ok_or_else(|| Error::Certification("local basis is not a basis of F_v^x/p".into()))?;
    let phis: Vec<Vec<u64>> = basis.iter().map(|b| norm_hyperplane(lf, um, b, rng)).collect::<Result<_>>()?;
    let mut c = vec![1u64; d];
    for k in 1..d {
        let prod = lf.mul(&basis[0], &basis[k]);
        let phi = norm_hyperplane(lf, um, &prod, rng)?;
        let two = MatModM::from_u64_rows(p, &[phis[0].clone(), phis[k].clone()], d);
        let ab = two
            .solve_left(&phi)?
            .ok_or_else(|| Error::Certification("norm hyperplanes are not compatible with a pairing".into()))?;
        if ab[0] == 0 || ab[1] == 0 {
            return Err(Error::Certification("degenerate hyperplane combination".into()));
        }
        c[k] = ab[1] * inv_mod(ab[0], p).unwrap() % p;
    }
    // X = Phi^T C, A = X (P^T)^(-1).
    let mut x = MatModM::zeros(p, d, d);
    for i in 0..d {
        for k in 0..d {
            x.set(i, k, phis[k][i] * c[k]);
        }
    }
    let a = x.mul(&pt_inv)?;
    for i in 0..d {
        for j in 0..d {
            if (a.get(i, j) + a.get(j, i)) % p != 0 {
                return Err(Error::Certification("local symbol form is not alternating".into()));
            }
        }
    }
    Ok(a.row_vecs())
}

#[derive(Clone, Debug)]
pub struct WildPlace {
    pub comp: Completion,
    form: Vec<Vec<u64>>,
    pub lambda: u64,
}

impl WildPlace {
    fn raw(&self, a: &FieldElement, b: &FieldElement) -> Result<u64> {
        let p = self.comp.lf.p;
        let ea = self.comp.eta(a)?;
        let eb = self.comp.eta(b)?;
        let mut s = 0u64;
        for (i, x) in ea.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in eb.iter().enumerate() {
                s = (s + x * self.form[i][j] % p * y) % p;
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSymbol {
    pub place: String,
    pub wild: bool,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductFormula {
    pub values: Vec<LocalSymbol>,
    pub residual: u64,
}

/// Local symbols of a certified field at every prime, with wild tables built once.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    pub p: u64,
    pub precision: u32,
    pub places: Vec<WildPlace>,
    pub zeta_p: FieldElement,
}

impl SymbolTable {
    /// Builds the wild tables, escalating the precision on exhaustion.
    pub fn build(cf: &CertifiedField, precision: Option<u32>, seed: u64) -> Result<Self> {
        let cap = max_precision(cf.p);
        let mut n = precision.unwrap_or_else(|| default_precision(cf));
        loop {
            match Self::build_at(cf, n, seed) {
                Err(Error::PrecisionExhausted { .. }) if n < cap => n = (n + 10).min(cap),
                Err(Error::PrecisionExhausted { context, precision, .. }) => {
                    return Err(Error::PrecisionExhausted { context, precision, cap })
                }
                r => return r,
            }
        }
    }

    fn build_at(cf: &CertifiedField, n: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut places = Vec::new();
        for comp in completions(cf, n)? {
            let form = alternating_form(&comp.lf, &comp.um, &mut rng)?;
            places.push(WildPlace { comp, form, lambda: 1 });
        }
        let mut table = SymbolTable { p: cf.p, precision: n, places, zeta_p: cf.zeta_p.clone() };
        table.normalize(cf, &mut rng)?;
        Ok(table)
    }

    /// Fix each lambda_v by the product formula on pairs with computable tame parts,
    /// then check reciprocity on fresh random pairs.
    fn normalize(&mut self, cf: &CertifiedField, rng: &mut ChaCha8Rng) -> Result<()> {
        let p = self.p;
        let nf = &cf.nf;
        let s = self.places.len();
        let mut firsts = vec![cf.zeta_p.clone()];
        firsts.extend(cf.sunits.generators.iter().cloned());
        let mut seconds: Vec<FieldElement> =
            crate::arith::int::primes_up_to(60).into_iter().filter(|&l| l != p).map(|l| nf.from_int(l)).collect();
        for _ in 0..16 {
            let x = nf.random_small(rng, 5);
            if !nf.is_zero(&x) {
                seconds.push(x);
            }
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        'outer: for a in &firsts {
            for b in &seconds {
                let row: Vec<u64> = self.places.iter().map(|w| w.raw(a, b)).collect::<Result<_>>()?;
                if row.iter().all(|&x| x == 0) {
                    continue;
                }
                let mut trial = rows.clone();
                trial.push(row.clone());
                if MatModM::from_u64_rows(p, &trial, s).rank()? > rows.len() {
                    let t = self.tame_sum(cf, a, b)?;
                    rows.push(row);
                    rhs.push((p - t) % p);
                    if rows.len() == s {
                        break 'outer;
                    }
                }
            }
        }
        if rows.len() < s {
            return Err(Error::Certification("no spanning family of pairs for the wild normalization".into()));
        }
        let lambda = MatModM::from_u64_rows(p, &rows, s)
            .transpose()
            .solve_left(&rhs)?
            .ok_or_else(|| Error::Certification("wild normalization is inconsistent".into()))?;
        if lambda.contains(&0) {
            return Err(Error::Certification("wild normalization vanishes".into()));
        }
        for (w, l) in self.places.iter_mut().zip(lambda) {
            w.lambda = l;
        }
        for _ in 0..12 {
            let a = nf.random_small(rng, 6);
            let b = nf.random_small(rng, 6);
            if nf.is_zero(&a) || nf.is_zero(&b) {
                continue;
            }
            if self.product_formula(cf, &a, &b)?.residual != 0 {
                return Err(Error::Certification("product formula fails after normalization".into()));
            }
        }
        Ok(())
    }

    fn tame_primes(&self, cf: &CertifiedField, a: &FieldElement, b: &FieldElement) -> Result<Vec<PrimeIdeal>> {
        let mut out: Vec<PrimeIdeal> = Vec::new();
        for x in [a, b] {
            for (pr, _) in factor_principal(&cf.nf, x)? {
                if pr.q != self.p && !out.contains(&pr) {
                    out.push(pr);
                }
            }
        }
        out.sort_by(|x, y| (x.q, x.index).cmp(&(y.q, y.index)));
        Ok(out)
    }

    fn tame_sum(&self, cf: &CertifiedField, a: &FieldElement, b: &FieldElement) -> Result<u64> {
        let mut t = 0;
        for v in self.tame_primes(cf, a, b)? {
            t = (t + tame_symbol(&cf.nf, self.p, &self.zeta_p, a, b, &v)?) % self.p;
        }
        Ok(t)
    }

    pub fn wild(&self, idx: usize, a: &FieldElement, b: &FieldElement) -> Result<u64> {
        let w = &self.places[idx];
        Ok(w.raw(a, b)? * w.lambda % self.p)
    }

    /// Every nonzero-eligible local symbol: tame primes in the supports, then the primes above p.
    pub fn local_symbols(&self, cf: &CertifiedField, a: &FieldElement, b: &FieldElement) -> Result<Vec<LocalSymbol>> {
        if cf.nf.is_zero(a) || cf.nf.is_zero(b) {
            return Err(Error::ZeroElement);
        }
        let mut out = Vec::new();
        for v in self.tame_primes(cf, a, b)? {
            out.push(LocalSymbol { place: v.label(), wild: false, value: tame_symbol(&cf.nf, self.p, &self.zeta_p, a, b, &v)? });
        }
        for (i, w) in self.places.iter().enumerate() {
            out.push(LocalSymbol { place: w.comp.prime.label(), wild: true, value: self.wild(i, a, b)? });
        }
        Ok(out)
    }

    pub fn product_formula(&self, cf: &CertifiedField, a: &FieldElement, b: &FieldElement) -> Result<ProductFormula> {
        let values = self.local_symbols(cf, a, b)?;
        let residual = values.iter().fold(0, |acc, v| (acc + v.value) % self.p);
        Ok(ProductFormula { values, residual })
    }

    /// (a, b)_v at an arbitrary prime.
    pub fn symbol_at(&self, cf: &CertifiedField, a: &FieldElement, b: &FieldElement, v: &PrimeIdeal) -> Result<u64> {
        match self.places.iter().position(|w| w.comp.prime == *v) {
            Some(i) => self.wild(i, a, b),
            None => tame_symbol(&cf.nf, self.p, &self.zeta_p, a, b, v),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TateKernel {
    pub dim: usize,
    pub expected: usize,
    pub certificate: String,
    pub bf_dim: usize,
    pub equals_sunits: bool,
    #[serde(skip)]
    pub space: SelmerSubspace,
}

/// C^loc = {a in B_F : (a, zeta_p)_v = 0 for v | p}. Exact when its dimension is 1 + r2.
pub fn tate_kernel(cf: &CertifiedField, table: &SymbolTable) -> Result<TateKernel> {
    let bf = SelmerSubspace::bf(cf)?;
    let p = cf.p;
    let rows: Vec<Vec<u64>> = bf
        .basis
        .iter()
        .map(|b| (0..table.places.len()).map(|i| table.wild(i, b, &cf.zeta_p)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let m = MatModM::from_u64_rows(p, &rows, table.places.len());
    let ker = if table.places.is_empty() { vec![] } else { m.left_kernel()? };
    let gens: Vec<FieldElement> = if table.places.is_empty() {
        bf.basis.clone()
    } else {
        ker.iter().map(|c| product(&cf.nf, &bf.basis, c)).collect()
    };
    let space = SelmerSubspace::span(cf, &gens)?;
    let expected = 1 + cf.nf.signature.1;
    let us = SelmerSubspace::sunits(cf)?;
    let equals_sunits = us.dim() == space.dim() && us.contains_space(cf, &space)?;
    Ok(TateKernel {
        dim: space.dim(),
        expected,
        certificate: if space.dim() == expected { "exact".into() } else { "upper-bound".into() },
        bf_dim: bf.dim(),
        equals_sunits,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn tame_symbol_basics() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let k = &cf.nf;
        let v = crate::numfield::factor_prime(k, &BigInt::from(7)).unwrap().into_iter().find(|p| p.h == vec![5, 1]).unwrap();
        let z = &cf.zeta_p;
        // zeta - 2 is a uniformizer at v.
        let pi = k.sub(&k.theta(), &k.from_int(2));
        assert_eq!(factor_principal(k, &pi).unwrap().len(), 1);
        assert_eq!(tame_symbol(k, 3, z, &pi, &k.theta(), &v).unwrap(), 2);
        assert_eq!(tame_symbol(k, 3, z, &k.theta(), &k.from_int(2), &v).unwrap(), 0);
        let a = k.elem(&[4, 9]);
        assert_eq!(tame_symbol(k, 3, z, &a, &k.neg(&a), &v).unwrap(), 0);
    }

    #[test]
    fn reciprocity_over_qzeta3() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let t = SymbolTable::build(&cf, None, 1).unwrap();
        let k = &cf.nf;
        let pf = t.product_formula(&cf, &k.from_int(7), &cf.zeta_p).unwrap();
        assert_eq!(pf.residual, 0);
        assert!(pf.values.iter().any(|v| v.wild && v.value != 0));
    }

    #[test]
    fn two_wild_places() {
        let cf = CertifiedField::load("q13").unwrap();
        let t = SymbolTable::build(&cf, None, 2).unwrap();
        assert_eq!(t.places.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = cf.nf.random_small(&mut rng, 4);
            let b = cf.nf.random_small(&mut rng, 4);
            if cf.nf.is_zero(&a) || cf.nf.is_zero(&b) {
                continue;
            }
            assert_eq!(t.product_formula(&cf, &a, &b).unwrap().residual, 0);
        }
    }

    #[test]
    fn tate_kernel_of_qzeta3() {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let t = SymbolTable::build(&cf, None, 1).unwrap();
        let tk = tate_kernel(&cf, &t).unwrap();
        assert_eq!((tk.dim, tk.certificate.as_str(), tk.equals_sunits), (2, "exact", true));
    }
}
