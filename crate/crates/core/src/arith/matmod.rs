//! Dense matrices over Z/m: row reduction mod a prime, Smith form mod p^k.

use serde::Serialize;

use super::int::{add_mod, inv_mod, is_prime_u64, mul_mod, sub_mod};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatModM {
    pub modulus: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl MatModM {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        MatModM { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1 % modulus);
        }
        m
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| (x as i128).rem_euclid(modulus as i128) as u64)
            .collect();
        Ok(MatModM { modulus, rows: rows.len(), cols, data })
    }

    pub fn from_u64_rows(modulus: u64, rows: &[Vec<u64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().map(|&x| x % modulus));
        }
        MatModM { modulus, rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add_mod(out.get(i, j), mul_mod(a, other.get(k, j), m), m);
                    out.data[i * other.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let m = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a % m == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = add_mod(*o, mul_mod(a % m, self.get(i, j), m), m);
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply_col(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.modulus;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b % m, m), m))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let v = add_mod(self.get(dst, j), mul_mod(c, self.get(src, j), m), m);
            self.data[dst * self.cols + j] = v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let v = add_mod(self.get(i, dst), mul_mod(c, self.get(i, src), m), m);
            self.data[i * self.cols + dst] = v;
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            self.data[r * self.cols + j] = mul_mod(self.get(r, j), c, m);
        }
    }

    fn require_prime(&self) -> Result<()> {
        if is_prime_u64(self.modulus) {
            Ok(())
        } else {
            Err(Error::CompositeModulus(self.modulus))
        }
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> Result<(Self, Vec<usize>)> {
        self.require_prime()?;
        let m = self.modulus;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = inv_mod(a.get(r, c), m).unwrap();
            a.scale_row(r, inv);
            for i in 0..a.rows {
                if i != r {
                    let f = a.get(i, c);
                    if f != 0 {
                        a.add_row(i, r, m - f);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((a, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Rank and a basis of the right kernel {x : M x = 0}.
    pub fn rank_kernel(&self) -> Result<(usize, Vec<Vec<u64>>)> {
        let (r, pivots) = self.rref()?;
        let m = self.modulus;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, r.get(i, free), m);
            }
            basis.push(v);
        }
        Ok((pivots.len(), basis))
    }

    /// Basis of the left kernel {y : y M = 0}.
    pub fn left_kernel(&self) -> Result<Vec<Vec<u64>>> {
        Ok(self.transpose().rank_kernel()?.1)
    }

    /// Solve x M = b for a row vector x (prime modulus), if solvable.
    pub fn solve_left(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        // [M^T | b] column system.
        let mut aug = Self::zeros(self.modulus, self.cols, self.rows + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(j, i, self.get(i, j));
            }
        }
        for (j, &bj) in b.iter().enumerate() {
            aug.set(j, self.rows, bj);
        }
        let (r, pivots) = aug.rref()?;
        if pivots.contains(&self.rows) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.rows];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.rows);
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix over a prime field.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.modulus, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = Self::zeros(self.modulus, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(Some(inv))
    }
}

/// Smith normal form over Z/p^k: U M V = D.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries as powers p^{a_i} (0 recorded as the modulus itself), nondecreasing.
    pub invariants: Vec<u64>,
    pub u: MatModM,
    pub v: MatModM,
    pub d: MatModM,
}

fn split_prime_power(m: u64) -> Result<(u64, u32)> {
    if m < 2 {
        return Err(Error::BadInput(format!("modulus {m} is not a prime power")));
    }
    let mut p = 2;
    while m % p != 0 {
        p += 1;
        if p * p > m {
            p = m;
            break;
        }
    }
    let (mut r, mut k) = (m, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || !is_prime_u64(p) {
        return Err(Error::BadInput(format!("modulus {m} is not a prime power")));
    }
    Ok((p, k))
}

fn val_in(x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    v
}

pub fn smith_normal_form(m: &MatModM) -> Result<SmithForm> {
    let (p, k) = split_prime_power(m.modulus)?;
    let md = m.modulus;
    let mut d = m.clone();
    let mut u = MatModM::identity(md, m.rows);
    let mut v = MatModM::identity(md, m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // Pivot: entry of minimal valuation in the trailing block.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                let val = val_in(d.get(i, j), p, k);
                if val < k && best.map_or(true, |(b, _, _)| val < b) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((a, pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        // Normalize the pivot to p^a.
        let unit = d.get(t, t) / p.pow(a);
        let uinv = inv_mod(unit % md, md).unwrap();
        d.scale_row(t, uinv);
        u.scale_row(t, uinv);
        let pa = p.pow(a);
        for i in (t + 1)..d.rows {
            let x = d.get(i, t);
            if x != 0 {
                let c = md - (x / pa) % md;
                d.add_row(i, t, c % md);
                u.add_row(i, t, c % md);
            }
        }
        for j in (t + 1)..d.cols {
            let x = d.get(t, j);
            if x != 0 {
                let c = md - (x / pa) % md;
                d.add_col(j, t, c % md);
                v.add_col(j, t, c % md);
            }
        }
    }
    let invariants = (0..n)
        .map(|i| {
            let x = d.get(i, i);
            if x == 0 {
                md
            } else {
                x
            }
        })
        .collect();
    Ok(SmithForm { invariants, u, v, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_examples() {
        let z = MatModM::zeros(3, 2, 2);
        let (r, k) = z.rank_kernel().unwrap();
        assert_eq!((r, k.len()), (0, 2));
        let id = MatModM::identity(5, 3);
        let (r, k) = id.rank_kernel().unwrap();
        assert_eq!((r, k.len()), (3, 0));
        let m = MatModM::from_rows(3, &[vec![2, 0], vec![2, 2]]).unwrap();
        assert_eq!(m.rank().unwrap(), 2);
    }

    #[test]
    fn composite_modulus_rejected_for_rank() {
        let m = MatModM::identity(9, 2);
        assert!(matches!(m.rank(), Err(Error::CompositeModulus(9))));
    }

    #[test]
    fn smith_examples() {
        let m = MatModM::from_rows(27, &[vec![3, 0], vec![0, 9]]).unwrap();
        assert_eq!(smith_normal_form(&m).unwrap().invariants, vec![3, 9]);
        let m = MatModM::from_rows(9, &[vec![0]]).unwrap();
        assert_eq!(smith_normal_form(&m).unwrap().invariants, vec![9]);
        let m = MatModM::from_rows(9, &[vec![3, 3], vec![0, 3]]).unwrap();
        assert_eq!(smith_normal_form(&m).unwrap().invariants, vec![3, 3]);
    }

    /// Plain Gaussian elimination without pivot search heuristics.
    fn oracle_rank(rows: &[Vec<u64>], p: u64) -> usize {
        let mut a: Vec<Vec<u64>> = rows.to_vec();
        let mut rank = 0;
        let cols = a.first().map_or(0, |r| r.len());
        for c in 0..cols {
            if let Some(i) = (rank..a.len()).find(|&i| a[i][c] % p != 0) {
                a.swap(rank, i);
                let inv = inv_mod(a[rank][c], p).unwrap();
                for i2 in 0..a.len() {
                    if i2 != rank {
                        let f = mul_mod(a[i2][c], inv, p);
                        for j in 0..cols {
                            a[i2][j] = sub_mod(a[i2][j], mul_mod(f, a[rank][j], p), p);
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rank_matches_oracle_and_kernel_is_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let p = [2u64, 3, 5, 7, 13][rng.gen_range(0..5)];
            let r = rng.gen_range(1..=12);
            let c = rng.gen_range(1..=12);
            let rows: Vec<Vec<u64>> = (0..r)
                .map(|_| (0..c).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..p) }).collect())
                .collect();
            let m = MatModM::from_u64_rows(p, &rows, c);
            let (rank, ker) = m.rank_kernel().unwrap();
            assert_eq!(rank, oracle_rank(&rows, p));
            assert_eq!(rank + ker.len(), c);
            for v in ker {
                assert!(m.apply_col(&v).iter().all(|&x| x == 0));
            }
        }
    }

    fn random_unimodular(rng: &mut ChaCha8Rng, md: u64, n: usize) -> MatModM {
        let mut u = MatModM::identity(md, n);
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                u.add_row(i, j, rng.gen_range(0..md));
            } else {
                u.scale_row(i, [1, 2, 4, 5, 7, 8][rng.gen_range(0..6)]);
            }
        }
        u
    }

    #[test]
    fn smith_invariant_under_unimodular_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let md = 27u64;
            let r = rng.gen_range(1..=6);
            let c = rng.gen_range(1..=6);
            let rows: Vec<Vec<u64>> = (0..r)
                .map(|_| (0..c).map(|_| 3u64.pow(rng.gen_range(0..3)) * rng.gen_range(0..md)).collect())
                .collect();
            let m = MatModM::from_u64_rows(md, &rows, c);
            let s = smith_normal_form(&m).unwrap();
            assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
            let u = random_unimodular(&mut rng, md, r);
            let v = random_unimodular(&mut rng, md, c);
            let m2 = u.mul(&m).unwrap().mul(&v).unwrap();
            assert_eq!(smith_normal_form(&m2).unwrap().invariants, s.invariants);
        }
    }
}
