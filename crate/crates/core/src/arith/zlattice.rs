//! Integer lattices given by row generators: Hermite form, kernels, Smith invariants, indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ZMat = Vec<Vec<BigInt>>;

pub fn zmat(rows: &[Vec<i64>]) -> ZMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn row_combine(a: &[BigInt], ca: &BigInt, b: &[BigInt], cb: &BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

/// Row Hermite normal form: nonzero rows only, pivots positive, entries above a pivot reduced.
pub fn hnf(rows: &[Vec<BigInt>], cols: usize) -> ZMat {
    let mut a: ZMat = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        // Fold every row below into row r via extended gcd on column c.
        for i in (r + 1)..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let (x, y) = (a[r][c].clone(), a[i][c].clone());
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            let new_r = row_combine(&a[r], &eg.x, &a[i], &eg.y);
            let new_i = row_combine(&a[r], &(-(&y / &g)), &a[i], &(&x / &g));
            a[r] = new_r;
            a[i] = new_i;
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let piv = a[r][c].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&piv);
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Basis of the left kernel {y in Z^m : y M = 0}.
pub fn left_kernel(m: &[Vec<BigInt>], cols: usize) -> ZMat {
    let rows = m.len();
    let aug: ZMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let h = hnf(&aug, cols + rows);
    h.into_iter()
        .filter(|r| r[..cols].iter().all(|x| x.is_zero()))
        .map(|r| r[cols..].to_vec())
        .collect()
}

/// Nonzero Smith invariants of the row lattice, nondecreasing, plus its rank.
pub fn smith_invariants(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let is_diag = |a: &ZMat| a.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()));
    let mut a: ZMat = hnf(rows, cols);
    let mut width = cols;
    // Alternate row and column Hermite reductions until diagonal.
    while !is_diag(&a) {
        let t = hnf(&transpose(&a, width), a.len());
        width = t.len();
        a = hnf(&transpose(&t, a.len()), width);
    }
    let mut d: Vec<BigInt> = a.iter().enumerate().map(|(i, r)| r[i].abs()).collect();
    // Enforce the divisibility chain.
    let k = d.len();
    for i in 0..k {
        for j in (i + 1)..k {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

pub fn transpose(a: &[Vec<BigInt>], cols: usize) -> ZMat {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Coordinates of `v` in the echelon basis `h`, if it lies in the lattice.
pub fn coordinates(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = vec![BigInt::zero(); h.len()];
    for (i, row) in h.iter().enumerate() {
        let c = row.iter().position(|x| !x.is_zero())?;
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
        coords[i] = q;
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Index [sup : sub] for lattices given by generators; `None` when infinite.
pub fn index(sub: &[Vec<BigInt>], sup: &[Vec<BigInt>], cols: usize) -> Result<Option<BigInt>> {
    let h = hnf(sup, cols);
    let mut coords = Vec::with_capacity(sub.len());
    for v in sub {
        match coordinates(&h, v) {
            Some(c) => coords.push(c),
            None => return Err(Error::Certification("sublattice not contained in lattice".into())),
        }
    }
    let inv = smith_invariants(&coords, h.len());
    if inv.len() < h.len() {
        return Ok(None);
    }
    Ok(Some(inv.iter().fold(BigInt::one(), |acc, d| acc * d)))
}

/// Rank of the row lattice.
pub fn rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    hnf(rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn hnf_small() {
        let h = hnf(&zmat(&[vec![2, 4], vec![3, 5]]), 2);
        assert_eq!(h.iter().map(|r| ints(r)).collect::<Vec<_>>(), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn smith_small() {
        let s = smith_invariants(&zmat(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), 3);
        assert_eq!(ints(&s), vec![2, 6, 12]);
    }

    #[test]
    fn kernel_annihilates() {
        let m = zmat(&[vec![1, 2], vec![2, 4], vec![3, 1]]);
        let k = left_kernel(&m, 2);
        assert_eq!(k.len(), 1);
        for y in &k {
            for c in 0..2 {
                let s: BigInt = y.iter().zip(&m).map(|(a, r)| a * &r[c]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn index_of_sublattice() {
        let sup = zmat(&[vec![1, 0], vec![0, 1]]);
        let sub = zmat(&[vec![3, 0], vec![0, 9]]);
        assert_eq!(index(&sub, &sup, 2).unwrap(), Some(BigInt::from(27)));
        let sub = zmat(&[vec![3, 0]]);
        assert_eq!(index(&sub, &sup, 2).unwrap(), None);
    }

    #[test]
    fn smith_determinant_matches_random_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            let inv = smith_invariants(&zmat(&m), 3);
            if det == 0 {
                assert!(inv.len() < 3);
            } else {
                let prod: BigInt = inv.iter().product();
                assert_eq!(prod, BigInt::from(det.abs()));
                assert!(inv.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
            }
        }
    }
}
