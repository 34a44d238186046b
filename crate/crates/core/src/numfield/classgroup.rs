//! Desk-scale class groups from relations among primes below the Minkowski bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::int::factor_integer;
use crate::arith::zlattice::{hnf, smith_invariants};
use crate::error::{Error, Result};
use crate::numfield::field::{FieldElement, NumberField};
use crate::numfield::prime::{factor_principal, primes_below_norm, PrimeIdeal};

#[derive(Clone, Debug, Serialize)]
pub enum ClassGroupSource {
    /// Relation search; the group is a quotient-upper-bound, exact when trivial.
    Relations { factor_base: usize, relations: usize },
    Bundle { p_part_only: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupData {
    /// Invariants d_1 | d_2 | ... (trivial factors dropped).
    #[serde(serialize_with = "crate::ser::bigints")]
    pub invariants: Vec<BigInt>,
    /// Labels of generator ideals, when known.
    pub generators: Vec<String>,
    /// True when the invariants are the exact group, false for an upper bound.
    pub exact: bool,
    pub source: ClassGroupSource,
}

impl ClassGroupData {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// The p-part invariants.
    pub fn p_part(&self, p: u64) -> Vec<BigInt> {
        let pb = BigInt::from(p);
        self.invariants
            .iter()
            .filter_map(|d| {
                let mut x = BigInt::one();
                let mut r = d.clone();
                while (&r % &pb).is_zero() {
                    r /= &pb;
                    x *= &pb;
                }
                (!x.is_one()).then_some(x)
            })
            .collect()
    }

    /// dim Cl[p] over F_p.
    pub fn p_rank(&self, p: u64) -> usize {
        self.p_part(p).len()
    }

    /// True when p does not divide the order; rigorous even for an upper bound.
    pub fn p_free(&self, p: u64) -> bool {
        self.p_rank(p) == 0
    }
}

/// Class group (or S-class group when `s` is nonempty) by exhaustive relation search
/// over small elements of the integral basis. Refuses fields whose Minkowski bound
/// exceeds `ceiling`.
pub fn class_group(nf: &NumberField, s: &[PrimeIdeal], ceiling: u64) -> Result<ClassGroupData> {
    let bound = nf.minkowski_bound();
    let b = bound.to_u64().unwrap_or(u64::MAX);
    if b > ceiling {
        return Err(Error::BoundTooLarge { bound: b, ceiling });
    }
    let mut base = primes_below_norm(nf, &bound)?;
    for pr in s {
        if !base.contains(pr) {
            base.push(pr.clone());
        }
    }
    let k = base.len();
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for (i, pr) in base.iter().enumerate() {
        if s.contains(pr) {
            let mut v = vec![BigInt::zero(); k];
            v[i] = BigInt::one();
            rels.push(v);
        }
    }
    let base_q: Vec<u64> = {
        let mut v: Vec<u64> = base.iter().map(|p| p.q).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut found = 0usize;
    let add = |a: &FieldElement, rels: &mut Vec<Vec<BigInt>>| -> Result<bool> {
        let n = nf.norm(a).to_integer();
        if n.is_zero() {
            return Ok(false);
        }
        let smooth = n.is_one()
            || n == -BigInt::one()
            || factor_integer(&n).iter().all(|(q, _)| q.to_u64().is_some_and(|q| base_q.contains(&q)));
        if !smooth {
            return Ok(false);
        }
        let mut v = vec![BigInt::zero(); k];
        for (pr, e) in factor_principal(nf, a)? {
            match base.iter().position(|b| *b == pr) {
                Some(i) => v[i] = BigInt::from(e),
                None => return Ok(false),
            }
        }
        rels.push(v);
        Ok(true)
    };
    for &q in &base_q {
        add(&nf.from_int(q), &mut rels)?;
    }
    let order_of = |rels: &[Vec<BigInt>]| -> Option<BigInt> {
        if k == 0 {
            return Some(BigInt::one());
        }
        let h = hnf(rels, k);
        if h.len() < k {
            return None;
        }
        Some((0..k).fold(BigInt::one(), |acc, i| acc * h[i][i].abs()))
    };
    let n = nf.n;
    'outer: for radius in 1i64..=3 {
        if order_of(&rels).is_some_and(|o| o.is_one()) {
            break;
        }
        let width = (2 * radius + 1) as u64;
        let total = width.checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > 2_000_000 {
            break;
        }
        for t in 0..total {
            let mut c = Vec::with_capacity(n);
            let mut x = t;
            for _ in 0..n {
                c.push((x % width) as i64 - radius);
                x /= width;
            }
            if c.iter().all(|v| v.abs() < radius) {
                continue;
            }
            let coords: Vec<BigRational> = c.iter().map(|&v| BigRational::from_integer(v.into())).collect();
            let a = nf.from_ib(&coords);
            if nf.is_zero(&a) {
                continue;
            }
            if add(&a, &mut rels)? {
                found += 1;
                if found % 16 == 0 {
                    rels = hnf(&rels, k);
                    if order_of(&rels).is_some_and(|o| o.is_one()) {
                        break 'outer;
                    }
                }
            }
        }
    }
    rels = hnf(&rels, k);
    if order_of(&rels).is_none() {
        return Err(Error::Certification("relations do not reach full rank".into()));
    }
    let invariants: Vec<BigInt> = smith_invariants(&rels, k).into_iter().filter(|d| !d.is_one()).collect();
    let exact = invariants.is_empty();
    Ok(ClassGroupData {
        invariants,
        generators: base.iter().map(|p| p.label()).collect(),
        exact,
        source: ClassGroupSource::Relations { factor_base: k, relations: found },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_fields_are_trivial() {
        for m in [3u64, 9, 5] {
            let k = NumberField::cyclotomic(m).unwrap();
            let cg = class_group(&k, &[], 1000).unwrap();
            assert!(cg.exact && cg.invariants.is_empty(), "{m}");
        }
    }

    #[test]
    fn imaginary_quadratic_class_numbers() {
        // Q(sqrt -23) has class number 3; Q(sqrt -5) has class number 2.
        let k = NumberField::new("Q(sqrt -23)", vec![6.into(), (-1).into(), 1.into()]).unwrap();
        let cg = class_group(&k, &[], 1000).unwrap();
        assert_eq!(cg.invariants, vec![BigInt::from(3)]);
        assert!(!cg.p_free(3) && cg.p_free(5));
        let k = NumberField::new("Q(sqrt -5)", vec![5.into(), 0.into(), 1.into()]).unwrap();
        let cg = class_group(&k, &[], 1000).unwrap();
        assert_eq!(cg.invariants, vec![BigInt::from(2)]);
    }

    #[test]
    fn ceiling_is_enforced() {
        let k = NumberField::cyclotomic(9).unwrap();
        assert!(matches!(class_group(&k, &[], 2), Err(Error::BoundTooLarge { .. })));
    }
}
