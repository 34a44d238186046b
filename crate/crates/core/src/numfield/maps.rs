//! Field homomorphisms given by the image of theta.

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::qmat::{inverse, vec_mul, QMat};
use crate::error::{Error, Result};
use crate::numfield::field::{FieldElement, NumberField};

/// phi: source -> target with phi(theta_source) = image.
#[derive(Clone, Debug)]
pub struct FieldMap {
    pub image: FieldElement,
    /// Rows: phi(theta^i) in target power-basis coordinates.
    rows: QMat,
    /// Left inverse on the image: target coords -> source coords.
    pinv: QMat,
    /// Target columns used for the left inverse.
    cols: Vec<usize>,
}

impl FieldMap {
    /// Checks that the image satisfies the source polynomial.
    pub fn new(source: &NumberField, target: &NumberField, image: FieldElement) -> Result<Self> {
        let val = target.substitute(&source.poly, &num_bigint::BigInt::from(1), &image);
        if !target.is_zero(&val) {
            return Err(Error::Certification("image of theta is not a root of the source polynomial".into()));
        }
        let mut rows = Vec::with_capacity(source.n);
        let mut cur = target.one();
        for _ in 0..source.n {
            rows.push(target.to_rational(&cur));
            cur = target.mul(&cur, &image);
        }
        // Choose source.n independent target columns greedily.
        let mut cols: Vec<usize> = Vec::new();
        for j in 0..target.n {
            let mut trial = cols.clone();
            trial.push(j);
            let sub: QMat = trial.iter().map(|&c| rows.iter().map(|r| r[c].clone()).collect()).collect();
            if rank_q(&sub) == trial.len() {
                cols = trial;
            }
            if cols.len() == source.n {
                break;
            }
        }
        if cols.len() < source.n {
            return Err(Error::Certification("field map is not injective".into()));
        }
        let square: QMat = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let pinv = inverse(&square).ok_or_else(|| Error::Certification("singular embedding".into()))?;
        Ok(FieldMap { image, rows, pinv, cols })
    }

    pub fn apply(&self, source: &NumberField, target: &NumberField, x: &FieldElement) -> FieldElement {
        let c = vec_mul(&source.to_rational(x), &self.rows);
        target.from_rational(&c)
    }

    /// The preimage of y, if y lies in the image.
    pub fn pullback(&self, source: &NumberField, target: &NumberField, y: &FieldElement) -> Option<FieldElement> {
        let yc = target.to_rational(y);
        let sel: Vec<BigRational> = self.cols.iter().map(|&c| yc[c].clone()).collect();
        let xc = vec_mul(&sel, &self.pinv);
        let x = source.from_rational(&xc);
        (self.apply(source, target, &x) == *y).then_some(x)
    }
}

fn rank_q(m: &[Vec<BigRational>]) -> usize {
    let mut a: QMat = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        let src = a[r].clone();
        for i in (r + 1)..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &src[c];
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// An automorphism sigma of nf as a field map, with order check.
pub fn automorphism(nf: &NumberField, image: FieldElement, order: u64) -> Result<FieldMap> {
    let map = FieldMap::new(nf, nf, image)?;
    let mut x = nf.theta();
    for k in 1..=order {
        x = map.apply(nf, nf, &x);
        if (x == nf.theta()) != (k == order) {
            return Err(Error::Certification(format!("automorphism does not have order {order}")));
        }
    }
    Ok(map)
}

/// N_{E/F}(x) = prod_k sigma^k(x) inside E.
pub fn relative_norm(nf: &NumberField, sigma: &FieldMap, order: u64, x: &FieldElement) -> FieldElement {
    let mut acc = x.clone();
    let mut cur = x.clone();
    for _ in 1..order {
        cur = sigma.apply(nf, nf, &cur);
        acc = nf.mul(&acc, &cur);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta9_over_zeta3() {
        let f = NumberField::cyclotomic(3).unwrap();
        let e = NumberField::cyclotomic(9).unwrap();
        let emb = FieldMap::new(&f, &e, e.pow_u(&e.theta(), 3)).unwrap();
        let sigma = automorphism(&e, e.pow_u(&e.theta(), 4), 3).unwrap();
        let x = e.sub(&e.one(), &e.theta());
        let n = relative_norm(&e, &sigma, 3, &x);
        let back = emb.pullback(&f, &e, &n).unwrap();
        assert_eq!(back, f.sub(&f.one(), &f.theta()));
        assert!(emb.pullback(&f, &e, &e.theta()).is_none());
    }
}
