//! Prime ideals of Z[theta] at primes q not dividing the index (Kummer-Dedekind),
//! valuations, residues and factorization of principal ideals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::ff::PrimeField;
use crate::arith::ffpoly;
use crate::arith::int::{big_mod, factor_integer, inv_mod};
use crate::arith::matmod::MatModM;
use crate::error::{Error, Result};
use crate::numfield::field::{FieldElement, NumberField};

/// The prime (q, h(theta)) with h irreducible mod q.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeIdeal {
    pub q: u64,
    pub e: u32,
    pub f: u32,
    pub h: Vec<u64>,
    /// Position among the primes above q.
    pub index: usize,
    #[serde(skip)]
    ghat: FieldElement,
    /// Residue of q * (ghat/q)^e, a unit at this prime.
    #[serde(skip)]
    w_res: Vec<u64>,
    /// Set for primes dividing the index, where Z[theta] does not see the prime.
    #[serde(skip)]
    general: Option<GeneralPrime>,
}

/// A prime of O_F described through the integral basis: beta in qP^(-1) \ qO, so that
/// beta/q has valuation -1 at P and is integral elsewhere, and the residue map
/// O -> O/P = F_q[t]/h given on integral-basis coordinates.
#[derive(Clone, Debug)]
struct GeneralPrime {
    beta: Vec<Vec<BigInt>>,
    res: Vec<Vec<u64>>,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.index == other.index && self.h == other.h
    }
}

impl Eq for PrimeIdeal {}

impl PrimeIdeal {
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.q).pow(self.f)
    }

    pub fn label(&self) -> String {
        format!("({}, {})", self.q, poly_label(&self.h))
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.q).expect("prime")
    }
}

fn poly_label(h: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in h.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}t^{i}"),
        };
        terms.push(t);
    }
    terms.join("+")
}

pub fn factor_prime(nf: &NumberField, q: &BigInt) -> Result<Vec<PrimeIdeal>> {
    let qq = q.to_u64().filter(|&x| x < (1 << 62)).ok_or_else(|| Error::PrimeTooLarge(q.clone()))?;
    if (&nf.index % q).is_zero() {
        return factor_prime_general(nf, qq);
    }
    let fp = PrimeField::new(qq)?;
    let fbar: Vec<u64> = nf.poly.iter().map(|c| big_mod(c, qq)).collect();
    let fac = ffpoly::factor(&fp, &fbar)?;
    let mut out = Vec::with_capacity(fac.len());
    for (i, (h, e)) in fac.iter().enumerate() {
        let (ghat_bar, r) = ffpoly::divrem(&fp, &fbar, h);
        debug_assert!(r.is_empty());
        let lift = |v: &[u64]| nf.elem(&v.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let ghat = lift(&ghat_bar);
        let mut ideal =
            PrimeIdeal { q: qq, e: *e, f: (h.len() - 1) as u32, h: h.clone(), index: i, ghat, w_res: vec![], general: None };
        // w = ghat^e / q^(e-1)
        let ge = nf.pow_u(&ideal.ghat, *e as u64);
        let qe1 = BigInt::from(qq).pow(e - 1);
        let w = FieldElement { num: ge.num.iter().map(|x| x / &qe1).collect(), den: BigInt::one() };
        if ge.num.iter().any(|x| !(x % &qe1).is_zero()) {
            return Err(Error::Certification("Kummer-Dedekind unit not integral".into()));
        }
        ideal.w_res = residue_integral(&ideal, &w.num, &BigInt::one())?;
        out.push(ideal);
    }
    let deg: u32 = out.iter().map(|x| x.e * x.f).sum();
    if deg as usize != nf.n {
        return Err(Error::Certification("sum e*f differs from degree".into()));
    }
    Ok(out)
}

/// Residue of num/den with num integral and den prime to q.
fn residue_integral(pr: &PrimeIdeal, num: &[BigInt], den: &BigInt) -> Result<Vec<u64>> {
    let fp = pr.field();
    let q = pr.q;
    let dinv = inv_mod(big_mod(den, q), q).ok_or_else(|| Error::Certification("denominator divisible by q".into()))?;
    let v: Vec<u64> = num.iter().map(|x| crate::arith::int::mul_mod(big_mod(x, q), dinv, q)).collect();
    let mut r = ffpoly::rem(&fp, &ffpoly::trim(&fp, v), &pr.h);
    r.resize(pr.f as usize, 0);
    Ok(r)
}

/// Strip the prime from an integral numerator: returns (k, num * gamma^k) with
/// gamma = ghat/q, so the result is integral and prime to the ideal.
fn strip(nf: &NumberField, pr: &PrimeIdeal, num: &[BigInt]) -> (i64, Vec<BigInt>) {
    let q = BigInt::from(pr.q);
    let mut cur = FieldElement { num: num.to_vec(), den: BigInt::one() };
    let mut k = 0;
    loop {
        let t = nf.mul(&cur, &pr.ghat);
        // t is integral (den 1) since both factors are; test divisibility by q.
        let raw: Vec<BigInt> = t.num.iter().map(|x| x * &t.den).collect();
        if raw.iter().all(|x| (x % &q).is_zero()) {
            cur = FieldElement { num: raw.iter().map(|x| x / &q).collect(), den: BigInt::one() };
            k += 1;
        } else {
            return (k, cur.num);
        }
    }
}

/// Valuation of a nonzero element.
pub fn valuation(nf: &NumberField, pr: &PrimeIdeal, a: &FieldElement) -> Result<i64> {
    Ok(split(nf, pr, a)?.0)
}

/// a = (uniformizer)^v * u with u a unit at the prime; returns v and the residue of u
/// for the implicit uniformizer q/ghat. The tame symbol is independent of that choice.
pub fn split(nf: &NumberField, pr: &PrimeIdeal, a: &FieldElement) -> Result<(i64, Vec<u64>)> {
    if nf.is_zero(a) {
        return Err(Error::ZeroElement);
    }
    if let Some(g) = &pr.general {
        return split_general(nf, pr, g, a);
    }
    let q = BigInt::from(pr.q);
    let (vn, unum) = strip(nf, pr, &a.num);
    let mut dprime = a.den.clone();
    let mut k = 0i64;
    while (&dprime % &q).is_zero() {
        dprime /= &q;
        k += 1;
    }
    let fp = pr.field();
    let r_num = residue_integral(pr, &unum, &dprime)?;
    let wk = ffpoly::powmod(&fp, &pr.w_res, &BigUint::from(k as u64), &pr.h);
    let wk_inv = res_inv(pr, &wk)?;
    let mut r = ffpoly::mulmod(&fp, &r_num, &wk_inv, &pr.h);
    r.resize(pr.f as usize, 0);
    Ok((vn - pr.e as i64 * k, r))
}

/// Integer coordinates c and denominator d with a = (sum c_i w_i) / d over the integral basis.
fn ib_integral(nf: &NumberField, a: &FieldElement) -> (Vec<BigInt>, BigInt) {
    let r = nf.to_ib(a);
    let d = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let c = r.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect();
    (c, d)
}

fn strip_general(g: &GeneralPrime, q: u64, mut c: Vec<BigInt>) -> (i64, Vec<BigInt>) {
    let qb = BigInt::from(q);
    let mut k = 0;
    loop {
        let t = int_vec_mat(&c, &g.beta);
        if t.iter().all(|x| (x % &qb).is_zero()) {
            c = t.iter().map(|x| x / &qb).collect();
            k += 1;
        } else {
            return (k, c);
        }
    }
}

fn int_vec_mat(v: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

fn residue_general(pr: &PrimeIdeal, g: &GeneralPrime, c: &[BigInt]) -> Vec<u64> {
    let q = pr.q;
    let mut r = vec![0u64; pr.f as usize];
    for (x, row) in c.iter().zip(&g.res) {
        let xm = big_mod(x, q);
        for (o, &y) in r.iter_mut().zip(row) {
            *o = (*o + crate::arith::int::mul_mod(xm, y, q)) % q;
        }
    }
    r
}

fn split_general(nf: &NumberField, pr: &PrimeIdeal, g: &GeneralPrime, a: &FieldElement) -> Result<(i64, Vec<u64>)> {
    let (c, d) = ib_integral(nf, a);
    let (vc, uc) = strip_general(g, pr.q, c);
    let dvec: Vec<BigInt> = ib_integral(nf, &nf.one()).0.iter().map(|x| x * &d).collect();
    let (vd, ud) = strip_general(g, pr.q, dvec);
    let rc = residue_general(pr, g, &uc);
    let rd = residue_general(pr, g, &ud);
    let r = res_mul(pr, &rc, &res_inv(pr, &rd)?);
    Ok((vc - vd, r))
}

/// Multiplication matrix of x (integral-basis coordinates mod q): row j = x * w_j.
fn alg_mult(table: &[Vec<Vec<u64>>], x: &[u64], q: u64) -> MatModM {
    let n = x.len();
    let mut m = MatModM::zeros(q, n, n);
    for (k, &xk) in x.iter().enumerate() {
        if xk == 0 {
            continue;
        }
        for j in 0..n {
            for l in 0..n {
                let v = (m.get(j, l) + crate::arith::int::mul_mod(xk, table[k][j][l], q)) % q;
                m.set(j, l, v);
            }
        }
    }
    m
}

fn alg_mul(table: &[Vec<Vec<u64>>], x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    alg_mult(table, y, q).apply_row(x)
}

fn alg_pow(table: &[Vec<Vec<u64>>], one: &[u64], x: &[u64], e: &BigUint, q: u64) -> Vec<u64> {
    let mut acc = one.to_vec();
    for i in (0..e.bits()).rev() {
        acc = alg_mul(table, &acc, &acc, q);
        if e.bit(i) {
            acc = alg_mul(table, &acc, x, q);
        }
    }
    acc
}

/// Minimal polynomial of x acting on A/J, J given by spanning rows.
fn min_poly_mod(table: &[Vec<Vec<u64>>], one: &[u64], j: &[Vec<u64>], x: &[u64], q: u64) -> Result<Vec<u64>> {
    let n = one.len();
    let mut rows = j.to_vec();
    let mut cur = one.to_vec();
    let mut k = 0;
    loop {
        if !rows.is_empty() {
            if let Some(c) = MatModM::from_u64_rows(q, &rows, n).solve_left(&cur)? {
                let mut mu: Vec<u64> = c[j.len()..].iter().map(|&v| (q - v) % q).collect();
                mu.push(1);
                return Ok(mu);
            }
        }
        rows.push(cur.clone());
        cur = alg_mul(table, &cur, x, q);
        k += 1;
        if k > n + 1 {
            return Err(Error::Certification("minimal polynomial degree overflow".into()));
        }
    }
}

fn poly_at(table: &[Vec<Vec<u64>>], one: &[u64], h: &[u64], x: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![0u64; one.len()];
    let mut pw = one.to_vec();
    for &c in h {
        for (g, a) in acc.iter_mut().zip(&pw) {
            *g = (*g + crate::arith::int::mul_mod(c, *a, q)) % q;
        }
        pw = alg_mul(table, &pw, x, q);
    }
    acc
}

/// Echelon basis of the span of the rows.
fn span(rows: &[Vec<u64>], n: usize, q: u64) -> Result<Vec<Vec<u64>>> {
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let (r, piv) = MatModM::from_u64_rows(q, rows, n).rref()?;
    Ok((0..piv.len()).map(|i| r.row(i).to_vec()).collect())
}

/// Decomposition of q through the F_q-algebra O/qO: radical by Frobenius, then
/// splitting of O/rad by minimal polynomials of random elements.
fn factor_prime_general(nf: &NumberField, q: u64) -> Result<Vec<PrimeIdeal>> {
    let n = nf.n;
    let fp = PrimeField::new(q)?;
    let basis: Vec<FieldElement> = nf.integral_basis.iter().map(|r| nf.from_rational(r)).collect();
    let to_int = |a: &FieldElement| -> Result<Vec<BigInt>> {
        let r = nf.to_ib(a);
        if r.iter().any(|x| !x.is_integer()) {
            return Err(Error::Certification("integral basis is not a ring".into()));
        }
        Ok(r.iter().map(|x| x.to_integer()).collect())
    };
    // table[k][j] = coordinates of w_k w_j mod q
    let mut table = vec![vec![vec![0u64; n]; n]; n];
    for k in 0..n {
        for j in 0..n {
            let c = to_int(&nf.mul(&basis[k], &basis[j]))?;
            table[k][j] = c.iter().map(|x| big_mod(x, q)).collect();
        }
    }
    let one: Vec<u64> = to_int(&nf.one())?.iter().map(|x| big_mod(x, q)).collect();
    let mut qk = BigUint::from(q);
    while qk < BigUint::from(n) {
        qk *= q;
    }
    let frob: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            alg_pow(&table, &one, &e, &qk, q)
        })
        .collect();
    let rad = span(&MatModM::from_u64_rows(q, &frob, n).left_kernel()?, n, q)?;
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut random_elem = || -> Vec<u64> {
        (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed % q
            })
            .collect()
    };
    let theta: Vec<u64> = to_int(&nf.theta())?.iter().map(|x| big_mod(x, q)).collect();
    // Ideals J containing rad; each is an intersection of maximal ideals.
    let mut pending = vec![rad.clone()];
    let mut maximal: Vec<(Vec<Vec<u64>>, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut tries = 0;
    while let Some(j) = pending.pop() {
        let codim = n - j.len();
        let mut done = false;
        for attempt in 0..200 {
            tries += 1;
            let x = if attempt == 0 { theta.clone() } else { random_elem() };
            let mu = min_poly_mod(&table, &one, &j, &x, q)?;
            let fac = ffpoly::factor(&fp, &mu)?;
            if fac.iter().any(|(_, e)| *e != 1) {
                return Err(Error::Certification("O/rad is not reduced".into()));
            }
            if fac.len() > 1 {
                for (h, _) in &fac {
                    let g = poly_at(&table, &one, h, &x, q);
                    let mut rows = j.clone();
                    rows.extend(alg_mult(&table, &g, q).row_vecs());
                    pending.push(span(&rows, n, q)?);
                }
                done = true;
                break;
            }
            if mu.len() - 1 == codim {
                maximal.push((j.clone(), x, mu));
                done = true;
                break;
            }
        }
        if !done || tries > 10_000 {
            return Err(Error::Certification(format!("could not split the algebra O/{q}O")));
        }
    }
    maximal.sort_by(|a, b| a.2.cmp(&b.2).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    for (i, (pbasis, alpha, h)) in maximal.into_iter().enumerate() {
        let f = h.len() - 1;
        // beta: beta * y = 0 mod q for all y in P.
        let mut big = MatModM::zeros(q, n, n * pbasis.len());
        for (t, y) in pbasis.iter().enumerate() {
            let my = alg_mult(&table, y, q);
            for jj in 0..n {
                for l in 0..n {
                    big.set(jj, t * n + l, my.get(jj, l));
                }
            }
        }
        let ker = big.left_kernel()?;
        let beta_res = ker.first().ok_or_else(|| Error::Certification("no anti-uniformizer".into()))?;
        let beta_elem = nf.from_ib(&beta_res.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>());
        let beta: Vec<Vec<BigInt>> = basis.iter().map(|w| to_int(&nf.mul(w, &beta_elem))).collect::<Result<_>>()?;
        // Residue map: w_j = sum c_k alpha^k mod P.
        let mut sys: Vec<Vec<u64>> = Vec::new();
        let mut apow = one.clone();
        for _ in 0..f {
            sys.push(apow.clone());
            apow = alg_mul(&table, &apow, &alpha, q);
        }
        sys.extend(pbasis.iter().cloned());
        let sysm = MatModM::from_u64_rows(q, &sys, n);
        let mut res = Vec::with_capacity(n);
        for jj in 0..n {
            let mut e = vec![0u64; n];
            e[jj] = 1;
            let x = sysm.solve_left(&e)?.ok_or_else(|| Error::Certification("residue map not surjective".into()))?;
            res.push(x[..f].to_vec());
        }
        let g = GeneralPrime { beta, res };
        let (e, _) = strip_general(&g, q, to_int(&nf.from_int(q))?);
        out.push(PrimeIdeal { q, e: e as u32, f: f as u32, h, index: i, ghat: nf.zero(), w_res: vec![], general: Some(g) });
    }
    let deg: u32 = out.iter().map(|x| x.e * x.f).sum();
    if deg as usize != n {
        return Err(Error::Certification("sum e*f differs from degree".into()));
    }
    Ok(out)
}

pub fn res_inv(pr: &PrimeIdeal, a: &[u64]) -> Result<Vec<u64>> {
    let fp = pr.field();
    let a = ffpoly::trim(&fp, a.to_vec());
    let (g, s, _) = ffpoly::xgcd(&fp, &a, &pr.h);
    if g != vec![1] {
        return Err(Error::ZeroElement);
    }
    let mut s = ffpoly::rem(&fp, &s, &pr.h);
    s.resize(pr.f as usize, 0);
    Ok(s)
}

pub fn res_mul(pr: &PrimeIdeal, a: &[u64], b: &[u64]) -> Vec<u64> {
    let fp = pr.field();
    let mut r = ffpoly::mulmod(&fp, &ffpoly::trim(&fp, a.to_vec()), &ffpoly::trim(&fp, b.to_vec()), &pr.h);
    r.resize(pr.f as usize, 0);
    r
}

pub fn res_pow(pr: &PrimeIdeal, a: &[u64], e: &BigUint) -> Vec<u64> {
    let fp = pr.field();
    let mut r = ffpoly::powmod(&fp, &ffpoly::trim(&fp, a.to_vec()), e, &pr.h);
    r.resize(pr.f as usize, 0);
    r
}

/// Residue of an element that is a unit at the prime.
pub fn residue_unit(nf: &NumberField, pr: &PrimeIdeal, a: &FieldElement) -> Result<Vec<u64>> {
    let (v, r) = split(nf, pr, a)?;
    if v != 0 {
        return Err(Error::NotAUnit);
    }
    Ok(r)
}

/// Prime factorization of the principal ideal (a), verified against the norm.
pub fn factor_principal(nf: &NumberField, a: &FieldElement) -> Result<Vec<(PrimeIdeal, i64)>> {
    if nf.is_zero(a) {
        return Err(Error::ZeroElement);
    }
    let nnum = nf.norm(&FieldElement { num: a.num.clone(), den: BigInt::one() }).to_integer();
    let mut qs: Vec<BigUint> = factor_integer(&nnum).into_iter().map(|(q, _)| q).collect();
    if !a.den.is_one() {
        qs.extend(factor_integer(&a.den).into_iter().map(|(q, _)| q));
    }
    qs.sort();
    qs.dedup();
    let mut out = Vec::new();
    for q in qs {
        let q = BigInt::from(q);
        for pr in factor_prime(nf, &q)? {
            let v = valuation(nf, &pr, a)?;
            if v != 0 {
                out.push((pr, v));
            }
        }
    }
    // Norm check: prod N(p)^v = |N(a)|.
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (pr, v) in &out {
        let nv = BigInt::from(pr.norm()).pow(v.unsigned_abs() as u32);
        if *v > 0 {
            num *= nv;
        } else {
            den *= nv;
        }
    }
    let n = nf.norm(a);
    let abs = if n < BigRational::zero() { -n } else { n };
    if abs != BigRational::new(num, den) {
        return Err(Error::Certification("factorization does not reproduce the norm".into()));
    }
    Ok(out)
}

/// Exponent k with res(w)^((Nv-1)/p) = res(zeta)^k; `zeta_res` is the residue of a primitive p-th root of unity.
pub fn dlog_mu_p(pr: &PrimeIdeal, x: &[u64], zeta_res: &[u64], p: u64) -> Result<u64> {
    let e = (pr.norm() - 1u32) / BigUint::from(p);
    let y = res_pow(pr, x, &e);
    let mut cur = {
        let mut one = vec![1u64];
        one.resize(pr.f as usize, 0);
        one
    };
    for k in 0..p {
        if cur == y {
            return Ok(k);
        }
        cur = res_mul(pr, &cur, zeta_res);
    }
    Err(Error::Certification(format!("power residue at {} is not a p-th root of unity", pr.label())))
}

/// Primes q^f with q below a bound, all of them (used for factor bases).
pub fn primes_below_norm(nf: &NumberField, bound: &BigInt) -> Result<Vec<PrimeIdeal>> {
    let b = bound.to_u64().unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for q in crate::arith::int::primes_up_to(b) {
        for pr in factor_prime(nf, &BigInt::from(q))? {
            if BigInt::from(pr.norm()) <= *bound {
                out.push(pr);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn splitting_examples() {
        let k = NumberField::cyclotomic(3).unwrap();
        let ps = factor_prime(&k, &BigInt::from(7)).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.e == 1 && p.f == 1));
        let k9 = NumberField::cyclotomic(9).unwrap();
        let ps = factor_prime(&k9, &BigInt::from(3)).unwrap();
        assert_eq!((ps.len(), ps[0].e, ps[0].f), (1, 6, 1));
    }

    #[test]
    fn sum_ef_for_small_primes() {
        for m in [3u64, 5, 9] {
            let k = NumberField::cyclotomic(m).unwrap();
            for q in crate::arith::int::primes_up_to(100) {
                let ps = factor_prime(&k, &BigInt::from(q)).unwrap();
                assert_eq!(ps.iter().map(|p| p.e * p.f).sum::<u32>() as usize, k.n);
            }
        }
    }

    #[test]
    fn primes_dividing_the_index() {
        let basis = |rows: &[[&str; 4]]| -> crate::arith::qmat::QMat {
            rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()
        };
        // Q(sqrt -3, sqrt 13): 2 is a common index divisor with two primes of degree 2.
        let k = NumberField::with_basis(
            "Q(sqrt -3, sqrt 13)",
            vec![16.into(), 0.into(), (-5).into(), 0.into(), 1.into()],
            basis(&[["1", "0", "0", "0"], ["1/2", "9/8", "0", "-1/8"], ["-1/2", "-1/8", "0", "1/8"], ["-3/2", "-5/8", "1/2", "1/8"]]),
        )
        .unwrap();
        let ps = factor_prime(&k, &BigInt::from(2)).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.e == 1 && p.f == 2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = k.random_small(&mut rng, 6);
            if k.is_zero(&a) {
                continue;
            }
            factor_principal(&k, &a).unwrap();
            let b = k.random_small(&mut rng, 6);
            if k.is_zero(&b) {
                continue;
            }
            for pr in &ps {
                let (va, ra) = split(&k, pr, &a).unwrap();
                let (vb, rb) = split(&k, pr, &b).unwrap();
                let (vab, rab) = split(&k, pr, &k.mul(&a, &b)).unwrap();
                assert_eq!(va + vb, vab);
                assert_eq!(res_mul(pr, &ra, &rb), rab);
            }
        }
    }

    #[test]
    fn principal_factorizations() {
        let k = NumberField::cyclotomic(3).unwrap();
        let f = factor_principal(&k, &k.elem(&[1, -1])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].0.q, f[0].1), (3, 1));
        let f = factor_principal(&k, &k.from_int(7)).unwrap();
        assert_eq!(f.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1]);
        assert!(factor_principal(&k, &k.elem(&[0, 1])).unwrap().is_empty());
        // (3 + zeta) / (3 + zeta^2) has norm 1 but nonzero valuations.
        let a = k.div(&k.elem(&[3, 1]), &k.elem(&[2, -1])).unwrap();
        let f = factor_principal(&k, &a).unwrap();
        assert_eq!(f.iter().map(|x| x.1).sum::<i64>(), 0);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn valuation_is_additive() {
        let k = NumberField::cyclotomic(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ps = factor_prime(&k, &BigInt::from(19)).unwrap();
        for _ in 0..30 {
            let a = k.random_small(&mut rng, 3);
            let b = k.inv(&k.random_small(&mut rng, 3)).unwrap();
            for pr in &ps {
                let (va, ra) = split(&k, pr, &a).unwrap();
                let (vb, rb) = split(&k, pr, &b).unwrap();
                let (vab, rab) = split(&k, pr, &k.mul(&a, &b)).unwrap();
                assert_eq!(vab, va + vb);
                assert_eq!(rab, res_mul(pr, &ra, &rb));
            }
        }
    }

    #[test]
    fn power_residue_example() {
        // zeta_3 at (7, theta - 2): 2^2 = 4 = zeta^2.
        let k = NumberField::cyclotomic(3).unwrap();
        let ps = factor_prime(&k, &BigInt::from(7)).unwrap();
        let pr = ps.iter().find(|p| p.h == vec![5, 1]).unwrap();
        let z = residue_unit(&k, pr, &k.theta()).unwrap();
        assert_eq!(z, vec![2]);
        assert_eq!(dlog_mu_p(pr, &z, &z, 3).unwrap(), 2);
    }
}
