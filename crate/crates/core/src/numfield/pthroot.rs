//! Exact p-th power testing: character witnesses for non-powers, and root
//! reconstruction by q-adic lifting at a completely split prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::int::{is_prime_u64, pow_mod};
use crate::error::{Error, Result};
use crate::numfield::characters::witness_non_power;
use crate::numfield::field::{FieldElement, NumberField};
use crate::numfield::prime::factor_prime;

const MAX_COMBINATIONS: usize = 20_000;

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn derivative(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

fn inv_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Newton lift of a simple root of f from mod q to mod q^k.
fn lift_root(f: &[BigInt], r: u64, q: u64, k: u32) -> Option<BigInt> {
    let df = derivative(f);
    let mut x = BigInt::from(r);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = BigInt::from(q).pow(prec);
        let fx = eval_mod(f, &x, &m);
        let d = inv_big(&eval_mod(&df, &x, &m), &m)?;
        x = (&x - fx * d).mod_floor(&m);
    }
    Some(x)
}

/// Newton lift of a p-th root y of a from mod q to mod q^k.
fn lift_pth_root(a: &BigInt, y: u64, p: u64, q: u64, k: u32) -> Option<BigInt> {
    let mut x = BigInt::from(y);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = BigInt::from(q).pow(prec);
        let fx = (x.modpow(&BigInt::from(p), &m) - a).mod_floor(&m);
        let d = inv_big(&(BigInt::from(p) * x.modpow(&BigInt::from(p - 1), &m)), &m)?;
        x = (&x - fx * d).mod_floor(&m);
    }
    Some(x)
}

/// Lagrange basis polynomials for the points r_j modulo m.
fn lagrange_basis(roots: &[BigInt], m: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let n = roots.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut poly = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for (k, rk) in roots.iter().enumerate() {
            if k == j {
                continue;
            }
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * rk;
            }
            poly = next.into_iter().map(|x| x.mod_floor(m)).collect();
            denom = (denom * (&roots[j] - rk)).mod_floor(m);
        }
        let di = inv_big(&denom, m)?;
        out.push(poly.into_iter().map(|x| (x * &di).mod_floor(m)).collect());
    }
    Some(out)
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// A p-th root of `a`, `None` when `a` is certified not to be a p-th power.
pub fn is_pth_power(nf: &NumberField, a: &FieldElement, p: u64) -> Result<Option<FieldElement>> {
    if nf.is_zero(a) {
        return Err(Error::ZeroElement);
    }
    if witness_non_power(nf, a, p, 24)? {
        return Ok(None);
    }
    // Integral model: A = a * den^p = num * den^(p-1); Y = index * den * x has Y^p = index^p A.
    let den_pow = a.den.pow((p - 1) as u32);
    let big_a: Vec<BigInt> = a.num.iter().map(|c| c * &den_pow).collect();
    let norm_a = nf.norm(&FieldElement { num: big_a.clone(), den: BigInt::one() }).to_integer();
    let bad = &norm_a * &nf.index * &nf.poly_disc;
    let n = nf.n;
    let mut q = 10u64;
    let (q, roots) = loop {
        q += 1;
        if q > 1 << 20 {
            return Err(Error::Undetermined("no completely split prime found".into()));
        }
        if !is_prime_u64(q) || (&bad % q).is_zero() {
            continue;
        }
        let prs = factor_prime(nf, &BigInt::from(q))?;
        if prs.len() == n {
            let roots: Vec<u64> = prs.iter().map(|pr| (q - pr.h[0]) % q).collect();
            break (q, roots);
        }
    };
    // p-th roots of A(r_j) mod q.
    let mut choices: Vec<Vec<u64>> = Vec::with_capacity(n);
    let qb = BigInt::from(q);
    for &r in &roots {
        let v = eval_mod(&big_a, &BigInt::from(r), &qb).to_u64().unwrap();
        let ys: Vec<u64> = (1..q).filter(|&y| pow_mod(y, p, q) == v).collect();
        if ys.is_empty() {
            return Ok(None);
        }
        choices.push(ys);
    }
    let total: usize = choices.iter().map(|c| c.len()).product();
    if total > MAX_COMBINATIONS {
        return Err(Error::Undetermined(format!("{total} root combinations exceed the search cap")));
    }
    let index_scale = &nf.index * &a.den;
    let mut k = 8u32;
    while k <= 512 {
        let m = qb.pow(k);
        let lifted_roots: Vec<BigInt> =
            roots.iter().map(|&r| lift_root(&nf.poly, r, q, k)).collect::<Option<_>>().ok_or_else(|| {
                Error::Certification("root lifting failed at a split prime".into())
            })?;
        let basis = lagrange_basis(&lifted_roots, &m)
            .ok_or_else(|| Error::Certification("interpolation nodes collide".into()))?;
        let mut lifted: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for (j, ys) in choices.iter().enumerate() {
            let aj = eval_mod(&big_a, &lifted_roots[j], &m);
            let l: Vec<BigInt> = ys
                .iter()
                .map(|&y| lift_pth_root(&aj, y, p, q, k).map(|x| (x * &nf.index).mod_floor(&m)))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Certification("p-th root lifting failed".into()))?;
            lifted.push(l);
        }
        let size_cap = qb.pow(3 * k / 4);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let mut c = vec![BigInt::zero(); n];
            for j in 0..n {
                let y = &lifted[j][idx[j]];
                for (ci, lj) in c.iter_mut().zip(&basis[j]) {
                    *ci += y * lj;
                }
            }
            let c: Vec<BigInt> = c.iter().map(|x| symmetric(x, &m)).collect();
            if c.iter().all(|x| x.abs() <= size_cap) {
                let x = crate::numfield::field::normalize(FieldElement { num: c, den: index_scale.clone() });
                if nf.pow_u(&x, p) == *a {
                    return Ok(Some(x));
                }
            }
            for j in 0..n {
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
        k *= 2;
    }
    Err(Error::Undetermined("p-th root reconstruction did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cube_roots_in_qzeta3() {
        let k = NumberField::cyclotomic(3).unwrap();
        let x = k.elem(&[1, 1]);
        let a = k.pow_u(&x, 3);
        let r = is_pth_power(&k, &a, 3).unwrap().unwrap();
        assert_eq!(k.pow_u(&r, 3), a);
        assert!(is_pth_power(&k, &k.theta(), 3).unwrap().is_none());
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (m, p) in [(9u64, 3u64), (5, 5)] {
            let k = NumberField::cyclotomic(m).unwrap();
            for _ in 0..6 {
                let x = k.div(&k.random_small(&mut rng, 4), &k.random_small(&mut rng, 3)).unwrap();
                let a = k.pow_u(&x, p);
                let r = is_pth_power(&k, &a, p).unwrap().unwrap();
                assert_eq!(k.pow_u(&r, p), a);
            }
        }
    }
}
