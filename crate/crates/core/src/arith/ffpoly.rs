//! Univariate polynomials over a finite field, and their factorization.
//!
//! Polynomials are coefficient vectors in ascending degree order, always trimmed
//! so that the leading coefficient is nonzero (the zero polynomial is empty).

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ff::FiniteField;
use crate::error::{Error, Result};

/// Seed of the equal-degree splitting generator; factorizations are reproducible.
pub const FACTOR_SEED: u64 = 0x6b75_6d6d_6572;

pub type FPoly<E> = Vec<E>;

pub fn trim<F: FiniteField>(f: &F, mut a: FPoly<F::Elem>) -> FPoly<F::Elem> {
    while let Some(&c) = a.last() {
        if f.is_zero(c) {
            a.pop();
        } else {
            break;
        }
    }
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn from_i64<F: FiniteField>(f: &F, c: &[i64]) -> FPoly<F::Elem> {
    trim(f, c.iter().map(|&x| f.from_i64(x)).collect())
}

pub fn x_poly<F: FiniteField>(f: &F) -> FPoly<F::Elem> {
    vec![f.zero(), f.one()]
}

pub fn add<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> FPoly<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(f.zero());
            let y = b.get(i).copied().unwrap_or(f.zero());
            f.add(x, y)
        })
        .collect();
    trim(f, out)
}

pub fn sub<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> FPoly<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(f.zero());
            let y = b.get(i).copied().unwrap_or(f.zero());
            f.sub(x, y)
        })
        .collect();
    trim(f, out)
}

pub fn scale<F: FiniteField>(f: &F, a: &[F::Elem], c: F::Elem) -> FPoly<F::Elem> {
    trim(f, a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> FPoly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (FPoly<F::Elem>, FPoly<F::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Vec<F::Elem> = a.to_vec();
    if r.len() < b.len() {
        return (vec![], trim(f, r));
    }
    let lead_inv = f.inv(*b.last().unwrap()).unwrap();
    let mut q = vec![f.zero(); r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = f.mul(r[i + b.len() - 1], lead_inv);
        q[i] = c;
        if f.is_zero(c) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.sub(r[i + j], f.mul(c, y));
        }
    }
    r.truncate(b.len() - 1);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> FPoly<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: FiniteField>(f: &F, a: &[F::Elem]) -> FPoly<F::Elem> {
    match a.last() {
        None => vec![],
        Some(&l) => scale(f, a, f.inv(l).unwrap()),
    }
}

pub fn gcd<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> FPoly<F::Elem> {
    let (mut x, mut y) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g monic.
pub fn xgcd<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (FPoly<F::Elem>, FPoly<F::Elem>, FPoly<F::Elem>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let li = f.inv(*r0.last().unwrap()).unwrap();
    (scale(f, &r0, li), scale(f, &s0, li), scale(f, &t0, li))
}

pub fn derivative<F: FiniteField>(f: &F, a: &[F::Elem]) -> FPoly<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.from_i64((i as u64 % f.characteristic()) as i64)))
        .collect();
    trim(f, out)
}

pub fn mulmod<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
    m: &[F::Elem],
) -> FPoly<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    e: &BigUint,
    m: &[F::Elem],
) -> FPoly<F::Elem> {
    let base = rem(f, a, m);
    let mut r = rem(f, &[f.one()], m);
    for i in (0..e.bits()).rev() {
        r = mulmod(f, &r, &r, m);
        if e.bit(i) {
            r = mulmod(f, &r, &base, m);
        }
    }
    r
}

pub fn eval<F: FiniteField>(f: &F, a: &[F::Elem], x: F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

/// Squarefree decomposition of a monic polynomial: pairs (s_i, i) with f = prod s_i^i.
pub fn squarefree<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<(FPoly<F::Elem>, u32)> {
    let mut out = Vec::new();
    let a = monic(f, a);
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let p = f.characteristic() as usize;
    let d = derivative(f, &a);
    let mut c = gcd(f, &a, &d);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        // c is a p-th power: c(x) = sum c_{pj} x^{pj}.
        let root: Vec<F::Elem> = c.iter().step_by(p).map(|&x| f.pth_root(x)).collect();
        for (s, m) in squarefree(f, &root) {
            out.push((s, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<(FPoly<F::Elem>, usize)> {
    let q = f.order();
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let x = x_poly(f);
    let mut h = rem(f, &x, &rest);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &sub(f, &h, &x), &rest);
        if degree(&g).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let dd = degree(&rest).unwrap();
        out.push((rest, dd));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a product of degree-`d` irreducibles.
pub fn equal_degree<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<FPoly<F::Elem>> {
    let n = degree(a).unwrap();
    if n == d {
        return vec![monic(f, a)];
    }
    let q = f.order();
    let p = f.characteristic();
    loop {
        let r: FPoly<F::Elem> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map to F_2: r + r^2 + ... + r^(2^(k d - 1)).
            let steps = f.degree() as usize * d;
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..steps {
                t = mulmod(f, &t, &t, a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            sub(f, &powmod(f, &r, &e, a), &[f.one()])
        };
        let g = gcd(f, &b, a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities.
///
/// Output is sorted by (degree, coefficients) so that results are reproducible.
pub fn factor<F: FiniteField>(f: &F, a: &[F::Elem]) -> Result<Vec<(FPoly<F::Elem>, u32)>> {
    let a = trim(f, a.to_vec());
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let mut out = Vec::new();
    for (s, mult) in squarefree(f, &a) {
        for (g, d) in distinct_degree(f, &s) {
            for h in equal_degree(f, &g, d, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|(x, _), (y, _)| x.len().cmp(&y.len()).then_with(|| x.iter().rev().cmp(y.iter().rev())));
    Ok(out)
}

pub fn is_irreducible<F: FiniteField>(f: &F, a: &[F::Elem]) -> bool {
    match factor(f, a) {
        Ok(fac) => fac.len() == 1 && fac[0].1 == 1 && fac[0].0.len() == a.len(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ff::{GaloisField, PrimeField};
    use rand::Rng;

    fn expand<F: FiniteField>(f: &F, fac: &[(FPoly<F::Elem>, u32)]) -> FPoly<F::Elem> {
        let mut acc = vec![f.one()];
        for (g, m) in fac {
            for _ in 0..*m {
                acc = mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn cyclotomic_three_over_f7_splits() {
        let f = PrimeField::new(7).unwrap();
        let fac = factor(&f, &from_i64(&f, &[1, 1, 1])).unwrap();
        // roots 2 and 4: (x - 2)(x - 4)
        assert_eq!(fac, vec![(vec![3, 1], 1), (vec![5, 1], 1)]);
    }

    #[test]
    fn cyclotomic_three_over_f2_is_irreducible() {
        let f = PrimeField::new(2).unwrap();
        let fac = factor(&f, &from_i64(&f, &[1, 1, 1])).unwrap();
        assert_eq!(fac, vec![(vec![1, 1, 1], 1)]);
    }

    #[test]
    fn square_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let fac = factor(&f, &from_i64(&f, &[0, 0, 1])).unwrap();
        assert_eq!(fac, vec![(vec![0, 1], 2)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(factor(&f, &[]), Err(Error::ZeroPolynomial)));
    }

    fn roundtrip<F: FiniteField>(f: &F, trials: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let deg = rng.gen_range(1..=8);
            let mut a: Vec<F::Elem> = (0..deg).map(|_| f.random(&mut rng)).collect();
            a.push(f.one());
            let fac = factor(f, &a).unwrap();
            assert_eq!(expand(f, &fac), a);
            for (g, _) in &fac {
                assert!(f.is_zero(f.sub(*g.last().unwrap(), f.one())));
                // irreducible: no proper factor found by distinct-degree splitting
                let dd = distinct_degree(f, g);
                assert_eq!(dd.len(), 1);
                assert_eq!(dd[0].1, g.len() - 1);
            }
        }
    }

    /// Round-trip over every F_q with q <= 49; 1000 polynomials in total.
    #[test]
    fn factorization_roundtrip_small_fields() {
        let prime_qs = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        for (i, &p) in prime_qs.iter().enumerate() {
            roundtrip(&PrimeField::new(p).unwrap(), 45, i as u64);
        }
        let powers = [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)];
        for (i, &(p, k)) in powers.iter().enumerate() {
            roundtrip(&GaloisField::new(p, k).unwrap(), 41, 100 + i as u64);
        }
    }
}
