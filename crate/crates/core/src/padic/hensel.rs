//! Polynomials over Z/p^N and Hensel lifting of the factorization of f mod p.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::ff::PrimeField;
use crate::arith::ffpoly;
use crate::arith::int::{add_mod, big_mod, ipow, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Polynomial arithmetic over Z/m, coefficients ascending.
pub mod zp {
    use super::*;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m)).collect())
    }

    pub fn sub(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m)).collect())
    }

    pub fn scale(a: &[u64], c: u64, m: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| mul_mod(x, c, m)).collect())
    }

    pub fn mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u128; a.len() + b.len() - 1];
        let mm = m as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u128 * y as u128) % mm;
            }
        }
        trim(out.into_iter().map(|x| x as u64).collect())
    }

    /// Division by a monic polynomial.
    pub fn divrem_monic(a: &[u64], b: &[u64], m: u64) -> (Vec<u64>, Vec<u64>) {
        debug_assert_eq!(b.last(), Some(&1));
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (vec![], trim(r));
        }
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + b.len() - 1];
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = sub_mod(r[i + j], mul_mod(c, y, m), m);
            }
        }
        r.truncate(b.len() - 1);
        (trim(q), trim(r))
    }

    pub fn rem_monic(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        divrem_monic(a, b, m).1
    }

    pub fn reduce(a: &[u64], m: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| x % m).collect())
    }

    pub fn from_big(a: &[BigInt], m: u64) -> Vec<u64> {
        trim(a.iter().map(|x| big_mod(x, m)).collect())
    }

    pub fn pow_monic_mod(a: &[u64], mut e: u64, g: &[u64], m: u64) -> Vec<u64> {
        let mut base = rem_monic(a, g, m);
        let mut r = rem_monic(&[1], g, m);
        while e > 0 {
            if e & 1 == 1 {
                r = rem_monic(&mul(&r, &base, m), g, m);
            }
            base = rem_monic(&mul(&base, &base, m), g, m);
            e >>= 1;
        }
        r
    }
}

/// One p-adic factor g of f: g = h^e mod p with h irreducible of degree f.
#[derive(Clone, Debug, Serialize)]
pub struct HenselFactor {
    pub g: Vec<u64>,
    pub h: Vec<u64>,
    pub e: u32,
    pub f: u32,
}

/// Lift f = a*b mod p (a, b monic, coprime mod p) to mod p^n.
fn lift_pair(f: &[u64], a: &[u64], b: &[u64], p: u64, n: u32) -> Result<(Vec<u64>, Vec<u64>)> {
    let fp = PrimeField::new(p)?;
    let (g, _, t) = ffpoly::xgcd(&fp, a, b);
    if g != vec![1] {
        return Err(Error::Certification("Hensel factors not coprime mod p".into()));
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let mut pk = 1u64;
    for _ in 1..n {
        pk *= p;
        let m = pk * p;
        let diff = zp::sub(&zp::reduce(f, m), &zp::mul(&a, &b, m), m);
        // diff is divisible by pk
        let e: Vec<u64> = diff.iter().map(|&x| (x / pk) % p).collect();
        let e = zp::trim(e);
        // da = e t mod a, db = (e - da b)/a over F_p
        let da = ffpoly::rem(&fp, &ffpoly::mul(&fp, &e, &t), &a.iter().map(|x| x % p).collect::<Vec<_>>());
        let num = ffpoly::sub(&fp, &e, &ffpoly::mul(&fp, &da, &b.iter().map(|x| x % p).collect::<Vec<_>>()));
        let (db, r) = ffpoly::divrem(&fp, &num, &a.iter().map(|x| x % p).collect::<Vec<_>>());
        if !r.is_empty() {
            return Err(Error::Certification("Hensel step not exact".into()));
        }
        a = zp::add(&a, &zp::scale(&da, pk, m), m);
        b = zp::add(&b, &zp::scale(&db, pk, m), m);
    }
    Ok((a, b))
}

/// Factor a monic integer polynomial over Z_p to precision p^n.
///
/// Fails with `BadIndex` when Dedekind's criterion fails at p, since then the
/// factors do not describe the completions of Z[theta].
pub fn hensel_factor(f: &[BigInt], p: u64, n: u32) -> Result<Vec<HenselFactor>> {
    if f.last().map(|x| x != &BigInt::from(1)).unwrap_or(true) {
        return Err(Error::NotMonic);
    }
    let fp = PrimeField::new(p)?;
    let fbar: Vec<u64> = zp::from_big(f, p);
    let fac = ffpoly::factor(&fp, &fbar)?;
    dedekind_check(f, p, &fac)?;
    let m = ipow(p, n);
    let mut rest = zp::from_big(f, m);
    let mut out = Vec::new();
    for (idx, (h, e)) in fac.iter().enumerate() {
        let mut he = vec![1u64];
        for _ in 0..*e {
            he = ffpoly::mul(&fp, &he, h);
        }
        if idx + 1 == fac.len() {
            out.push(HenselFactor { g: rest.clone(), h: h.clone(), e: *e, f: (h.len() - 1) as u32 });
            break;
        }
        let rest_bar = zp::reduce(&rest, p);
        let (other, r) = ffpoly::divrem(&fp, &rest_bar, &he);
        if !r.is_empty() {
            return Err(Error::Certification("factor does not divide f mod p".into()));
        }
        let (g, o) = lift_pair(&rest, &he, &other, p, n)?;
        out.push(HenselFactor { g, h: h.clone(), e: *e, f: (h.len() - 1) as u32 });
        rest = o;
    }
    let deg: u32 = out.iter().map(|x| x.e * x.f).sum();
    if deg as usize + 1 != f.len() {
        return Err(Error::Certification("sum e*f differs from degree".into()));
    }
    Ok(out)
}

/// Dedekind's criterion at p for Z[theta].
pub fn dedekind_check(f: &[BigInt], p: u64, fac: &[(Vec<u64>, u32)]) -> Result<()> {
    if fac.iter().all(|(_, e)| *e == 1) {
        return Ok(());
    }
    let m = p * p;
    let mut prod = vec![1u64];
    for (h, e) in fac {
        for _ in 0..*e {
            prod = zp::mul(&prod, h, m);
        }
    }
    let diff = zp::sub(&zp::from_big(f, m), &prod, m);
    let big_f: Vec<u64> = zp::trim(diff.iter().map(|&x| (x / p) % p).collect());
    let fp = PrimeField::new(p)?;
    for (h, e) in fac {
        if *e >= 2 {
            let g = ffpoly::gcd(&fp, &big_f, h);
            if g.len() > 1 {
                return Err(Error::BadIndex { q: BigInt::from(p) });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn product(fs: &[HenselFactor], m: u64) -> Vec<u64> {
        fs.iter().fold(vec![1], |acc, x| zp::mul(&acc, &x.g, m))
    }

    #[test]
    fn seven_splits_in_qzeta3() {
        let f = big(&[1, 1, 1]);
        let fs = hensel_factor(&f, 7, 10).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|x| x.e == 1 && x.f == 1));
        let m = 7u64.pow(10);
        assert_eq!(product(&fs, m), zp::from_big(&f, m));
    }

    #[test]
    fn three_ramifies_in_qzeta3() {
        let fs = hensel_factor(&big(&[1, 1, 1]), 3, 10).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!((fs[0].e, fs[0].f), (2, 1));
    }

    #[test]
    fn three_in_biquadratic_257() {
        let fs = hensel_factor(&big(&[4225, 0, -127, 0, 1]), 3, 20).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!((fs[0].e, fs[0].f), (2, 2));
    }

    #[test]
    fn three_splits_in_biquadratic_13() {
        let f = big(&[16, 0, -5, 0, 1]);
        let fs = hensel_factor(&f, 3, 30).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|x| x.e == 2 && x.f == 1));
        let m = 3u64.pow(30);
        assert_eq!(product(&fs, m), zp::from_big(&f, m));
    }

    #[test]
    fn bad_index_detected() {
        // x^2 - 5 at p = 2: Z[sqrt 5] is not 2-maximal.
        assert!(matches!(hensel_factor(&big(&[-5, 0, 1]), 2, 8), Err(Error::BadIndex { .. })));
    }
}
