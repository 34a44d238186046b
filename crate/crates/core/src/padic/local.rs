//! The completion F_v = Q_p[x]/(g) at one prime above p, with elements stored as
//! p^shift times an integral coordinate vector known modulo p^prec.

use num_bigint::BigInt;
use rand::Rng;

use crate::arith::int::{add_mod, big_mod, inv_mod, ipow, mul_mod, sub_mod, val_p};
use crate::arith::matmod::{smith_normal_form, MatModM};
use crate::error::{Error, Result};
use crate::padic::hensel::{zp, HenselFactor};
use crate::padic::number::{prec_err, PadicNumber};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalElem {
    pub shift: i64,
    pub c: Vec<u64>,
    pub prec: u32,
}

#[derive(Clone, Debug)]
pub struct LocalField {
    pub p: u64,
    pub n: u32,
    pub m: u64,
    pub d: usize,
    pub e: u32,
    pub f: u32,
    pub g: Vec<u64>,
    pub h: Vec<u64>,
    pub pi: LocalElem,
    /// p / pi.
    pub pi_prime: LocalElem,
    /// p / pi^e, a unit.
    eps: LocalElem,
    eps_inv: LocalElem,
}

impl LocalField {
    pub fn new(hf: &HenselFactor, p: u64, n: u32) -> Result<Self> {
        let d = hf.g.len() - 1;
        let m = ipow(p, n);
        let mut lf = LocalField {
            p,
            n,
            m,
            d,
            e: hf.e,
            f: hf.f,
            g: hf.g.clone(),
            h: hf.h.clone(),
            pi: LocalElem { shift: 1, c: unit_vec(d), prec: n },
            pi_prime: LocalElem { shift: 0, c: unit_vec(d), prec: n },
            eps: LocalElem { shift: 0, c: unit_vec(d), prec: n },
            eps_inv: LocalElem { shift: 0, c: unit_vec(d), prec: n },
        };
        if hf.e > 1 {
            lf.pi = lf.elem(hf.h.clone(), 0, n);
            let p_elem = lf.from_int(p as i64);
            lf.pi_prime = lf.solve_mul(&lf.pi, &p_elem)?;
            let mut eps = lf.pow(&lf.pi_prime, hf.e as u64);
            eps.shift -= hf.e as i64 - 1;
            lf.eps = lf.normalized(eps);
            let mut ei = lf.pow(&lf.pi, hf.e as u64);
            ei.shift -= 1;
            lf.eps_inv = lf.normalized(ei);
            if lf.valuation(&lf.eps)? != 0 || lf.valuation(&lf.pi)? != 1 {
                return Err(Error::Certification("uniformizer has wrong valuation".into()));
            }
        }
        Ok(lf)
    }

    /// q = p^f, the size of the residue field.
    pub fn q(&self) -> u64 {
        ipow(self.p, self.f)
    }

    pub fn elem(&self, c: Vec<u64>, shift: i64, prec: u32) -> LocalElem {
        let mut c = zp::rem_monic(&zp::reduce(&c, self.m), &self.g, self.m);
        c.resize(self.d, 0);
        self.normalized(LocalElem { shift, c, prec: prec.min(self.n) })
    }

    pub fn from_int(&self, x: i64) -> LocalElem {
        let r = big_mod(&BigInt::from(x), self.m);
        let mut c = vec![0; self.d];
        c[0] = r;
        self.normalized(LocalElem { shift: 0, c, prec: self.n })
    }

    pub fn one(&self) -> LocalElem {
        self.from_int(1)
    }

    pub fn theta(&self) -> LocalElem {
        self.elem(vec![0, 1], 0, self.n)
    }

    /// Image of a global element sum num_i theta^i / den.
    pub fn from_global(&self, num: &[BigInt], den: &BigInt) -> Result<LocalElem> {
        if den == &BigInt::from(0) {
            return Err(Error::ZeroElement);
        }
        let v = val_p(den, self.p);
        let du = den / BigInt::from(self.p).pow(v);
        let dinv = inv_mod(big_mod(&du, self.m), self.m).unwrap();
        let c = zp::scale(&zp::from_big(num, self.m), dinv, self.m);
        Ok(self.elem(c, -(v as i64), self.n))
    }

    pub fn random_integral<R: Rng>(&self, rng: &mut R) -> LocalElem {
        let c = (0..self.d).map(|_| rng.gen_range(0..self.m)).collect();
        self.elem(c, 0, self.n)
    }

    pub fn normalized(&self, mut a: LocalElem) -> LocalElem {
        let p = self.p;
        while a.prec > 0 && a.c.iter().all(|x| x % p == 0) {
            for x in a.c.iter_mut() {
                *x /= p;
            }
            a.shift += 1;
            a.prec -= 1;
        }
        if a.prec == 0 {
            a.c.iter_mut().for_each(|x| *x = 0);
        } else {
            let mk = ipow(p, a.prec);
            a.c.iter_mut().for_each(|x| *x %= mk);
        }
        a
    }

    /// True when the element is zero to its known precision.
    pub fn is_zero(&self, a: &LocalElem) -> bool {
        a.prec == 0
    }

    /// Absolute p-adic precision: the element is known modulo p^abs.
    pub fn abs_prec(&self, a: &LocalElem) -> i64 {
        a.shift + a.prec as i64
    }

    pub fn mul(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        let prec = a.prec.min(b.prec);
        let c = zp::rem_monic(&zp::mul(&a.c, &b.c, self.m), &self.g, self.m);
        let mut c = c;
        c.resize(self.d, 0);
        if prec == 0 {
            let abs = (self.abs_prec(a) + b.shift).min(self.abs_prec(b) + a.shift);
            return LocalElem { shift: abs, c: vec![0; self.d], prec: 0 };
        }
        self.normalized(LocalElem { shift: a.shift + b.shift, c, prec })
    }

    pub fn add(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        let s = a.shift.min(b.shift);
        let abs = self.abs_prec(a).min(self.abs_prec(b));
        let prec = (abs - s).clamp(0, self.n as i64) as u32;
        let lift = |x: &LocalElem| -> Vec<u64> {
            let k = x.shift - s;
            if k >= self.n as i64 {
                return vec![0; self.d];
            }
            let pk = ipow(self.p, k as u32);
            x.c.iter().map(|&y| mul_mod(y, pk, self.m)).collect()
        };
        let (ca, cb) = (lift(a), lift(b));
        let c = ca.iter().zip(&cb).map(|(&x, &y)| add_mod(x, y, self.m)).collect();
        if prec == 0 {
            return LocalElem { shift: abs, c: vec![0; self.d], prec: 0 };
        }
        self.normalized(LocalElem { shift: s, c, prec })
    }

    pub fn neg(&self, a: &LocalElem) -> LocalElem {
        let c = a.c.iter().map(|&x| sub_mod(0, x, self.m)).collect();
        LocalElem { c, ..a.clone() }
    }

    pub fn sub(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale_p(&self, a: &LocalElem, k: i64) -> LocalElem {
        LocalElem { shift: a.shift + k, ..a.clone() }
    }

    pub fn pow(&self, a: &LocalElem, mut e: u64) -> LocalElem {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    /// Normalized valuation v(pi) = 1.
    pub fn valuation(&self, a: &LocalElem) -> Result<i64> {
        if a.prec == 0 {
            return Err(prec_err("local valuation", self.n, self.p));
        }
        Ok(self.e as i64 * a.shift + self.hbar_val(&a.c) as i64)
    }

    fn hbar_val(&self, c: &[u64]) -> u32 {
        if self.e == 1 {
            return 0;
        }
        let p = self.p;
        let mut r = zp::reduce(c, p);
        let h = &self.h;
        let mut k = 0;
        while k + 1 < self.e {
            let (q, rem) = zp::divrem_monic(&r, h, p);
            if !rem.is_empty() {
                break;
            }
            r = q;
            k += 1;
        }
        k
    }

    /// Split a = pi^v u with u a unit.
    pub fn unit_part(&self, a: &LocalElem) -> Result<(i64, LocalElem)> {
        let v = self.valuation(a)?;
        let k = self.hbar_val(&a.c) as u64;
        let core = LocalElem { shift: 0, ..a.clone() };
        let mut u = if k > 0 {
            let mut t = self.mul(&core, &self.pow(&self.pi_prime, k));
            t.shift -= k as i64;
            self.normalized(t)
        } else {
            core
        };
        let s = a.shift;
        if s > 0 {
            u = self.mul(&u, &self.pow(&self.eps, s as u64));
        } else if s < 0 {
            u = self.mul(&u, &self.pow(&self.eps_inv, (-s) as u64));
        }
        if u.prec == 0 || u.shift != 0 {
            return Err(prec_err("unit part", u.prec, self.p));
        }
        Ok((v, u))
    }

    /// Image in the residue field F_p[x]/(h), as f coordinates.
    pub fn residue(&self, a: &LocalElem) -> Result<Vec<u64>> {
        let mut out = if a.shift > 0 {
            vec![]
        } else if a.shift < 0 {
            return Err(Error::BadInput("residue of a non-integral element".into()));
        } else {
            if a.prec == 0 {
                return Err(prec_err("residue", self.n, self.p));
            }
            zp::rem_monic(&zp::reduce(&a.c, self.p), &self.h, self.p)
        };
        if a.prec == 0 && a.shift <= 0 {
            return Err(prec_err("residue", self.n, self.p));
        }
        out.resize(self.f as usize, 0);
        Ok(out)
    }

    /// Lift of a residue field element given by coordinates.
    pub fn lift_residue(&self, r: &[u64]) -> LocalElem {
        self.elem(r.to_vec(), 0, self.n)
    }

    /// Matrix whose i-th row holds the coordinates of a * theta^i.
    pub fn mult_matrix(&self, a: &LocalElem) -> MatModM {
        let mut rows = Vec::with_capacity(self.d);
        let mut cur = a.c.clone();
        for _ in 0..self.d {
            let mut r = cur.clone();
            r.resize(self.d, 0);
            rows.push(r);
            let mut shifted = vec![0];
            shifted.extend_from_slice(&cur);
            cur = zp::rem_monic(&shifted, &self.g, self.m);
        }
        MatModM::from_u64_rows(self.m, &rows, self.d)
    }

    /// Solve a x = b.
    pub fn solve_mul(&self, a: &LocalElem, b: &LocalElem) -> Result<LocalElem> {
        let mm = self.mult_matrix(a);
        let mut bc = b.c.clone();
        bc.resize(self.d, 0);
        // The core of a has valuation below e, so one extra factor p always suffices.
        for k in 0..2u32 {
            let scaled: Vec<u64> = bc.iter().map(|&x| mul_mod(x, ipow(self.p, k), self.m)).collect();
            if let Some((x, loss)) = solve_left_snf(&mm, &scaled, self.p, self.n) {
                let prec = a.prec.min(b.prec).saturating_sub(loss);
                if prec == 0 {
                    return Err(prec_err("local division", self.n, self.p));
                }
                return Ok(self.elem(x, b.shift - a.shift - k as i64, prec));
            }
        }
        Err(Error::Certification("division not exact in local ring".into()))
    }

    pub fn inv(&self, a: &LocalElem) -> Result<LocalElem> {
        if a.prec == 0 {
            return Err(Error::ZeroElement);
        }
        let (v, u) = self.unit_part(a)?;
        let ui = self.solve_mul(&u, &self.one())?;
        // pi^-v = (pi'/p)^v
        if v >= 0 {
            let t = self.pow(&self.pi_prime, v as u64);
            Ok(self.scale_p(&self.mul(&ui, &t), -v))
        } else {
            Ok(self.mul(&ui, &self.pow(&self.pi, (-v) as u64)))
        }
    }

    /// Norm to Q_p.
    pub fn norm_qp(&self, a: &LocalElem) -> PadicNumber {
        let det = det_padic(&self.mult_matrix(a), self.p, self.n, a.prec);
        if det.is_zero() {
            return det;
        }
        PadicNumber { val: det.val.map(|v| v + a.shift * self.d as i64), ..det }
    }

    /// Norm from F_v[t]/(t^p - b) of z = sum z_k t^k, by the Leibniz expansion.
    pub fn kummer_norm(&self, b: &LocalElem, z: &[LocalElem]) -> LocalElem {
        let p = z.len();
        let entry = |j: usize, col: usize| -> LocalElem {
            // z t^j has coefficient z_k at t^{k+j mod p}, times b on wrap.
            let k = (col + p - j) % p;
            if k + j >= p {
                self.mul(&z[k], b)
            } else {
                z[k].clone()
            }
        };
        let mat: Vec<Vec<LocalElem>> = (0..p).map(|j| (0..p).map(|c| entry(j, c)).collect()).collect();
        let mut total: Option<LocalElem> = None;
        let mut perm: Vec<usize> = (0..p).collect();
        let mut sign = true;
        permutations(&mut perm, 0, &mut sign, &mut |perm, even| {
            let mut t = mat[0][perm[0]].clone();
            for (i, &c) in perm.iter().enumerate().skip(1) {
                t = self.mul(&t, &mat[i][c]);
            }
            if !even {
                t = self.neg(&t);
            }
            total = Some(match total.take() {
                None => t,
                Some(s) => self.add(&s, &t),
            });
        });
        total.unwrap()
    }
}

fn unit_vec(d: usize) -> Vec<u64> {
    let mut c = vec![0; d];
    c[0] = 1;
    c
}

fn permutations<F: FnMut(&[usize], bool)>(a: &mut Vec<usize>, k: usize, even: &mut bool, f: &mut F) {
    if k == a.len() {
        f(a, *even);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        if i != k {
            *even = !*even;
        }
        permutations(a, k + 1, even, f);
        a.swap(k, i);
        if i != k {
            *even = !*even;
        }
    }
}

/// Solve x M = b over Z/p^n by Smith form. Returns x and the digits of precision lost.
pub fn solve_left_snf(mm: &MatModM, b: &[u64], p: u64, n: u32) -> Option<(Vec<u64>, u32)> {
    let m = ipow(p, n);
    let sf = smith_normal_form(mm).ok()?;
    // x U^-1 D = b V
    let c = sf.v.apply_row(b);
    let mut z = vec![0u64; mm.rows];
    let mut loss = 0;
    for i in 0..mm.rows {
        let ci = if i < c.len() { c[i] } else { 0 };
        let di = if i < sf.invariants.len() { sf.invariants[i] } else { m };
        if di == m {
            if ci != 0 {
                return None;
            }
            continue;
        }
        if ci % di != 0 {
            return None;
        }
        z[i] = ci / di;
        let mut a = 0;
        let mut t = di;
        while t > 1 {
            t /= p;
            a += 1;
        }
        loss = loss.max(a);
    }
    Some((sf.u.apply_row(&z), loss))
}

/// Determinant over Z/p^n of a matrix whose entries carry `prec` digits.
pub fn det_padic(mm: &MatModM, p: u64, n: u32, prec: u32) -> PadicNumber {
    let m = ipow(p, n);
    let k = mm.rows;
    let mut a: Vec<Vec<u64>> = mm.row_vecs();
    let vals = |x: u64| -> u32 {
        if x == 0 {
            return n;
        }
        let (mut v, mut y) = (0, x);
        while y % p == 0 {
            y /= p;
            v += 1;
        }
        v
    };
    let mut neg = false;
    let mut val = 0i64;
    let mut unit = 1u64;
    let mut worst = 0u32;
    for t in 0..k {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..k {
            for j in t..k {
                let v = vals(a[i][j]);
                if v < prec.min(n) && best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else {
            return PadicNumber::zero(p, (val as u32 + prec).min(n));
        };
        if bi != t {
            a.swap(bi, t);
            neg = !neg;
        }
        if bj != t {
            for r in a.iter_mut() {
                r.swap(bj, t);
            }
            neg = !neg;
        }
        let pv = ipow(p, v);
        let u = a[t][t] / pv;
        let uinv = inv_mod(u % m, m).unwrap();
        for i in (t + 1)..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            let fac = mul_mod(x / pv, uinv, m);
            for j in t..k {
                let y = mul_mod(fac, a[t][j], m);
                a[i][j] = sub_mod(a[i][j], y, m);
            }
        }
        val += v as i64;
        unit = mul_mod(unit, u, m);
        worst = worst.max(v);
    }
    let rel = prec.min(n).saturating_sub(worst);
    if neg {
        unit = sub_mod(0, unit, m);
    }
    if rel == 0 {
        return PadicNumber::zero(p, val as u32);
    }
    PadicNumber { p, val: Some(val), unit: unit % ipow(p, rel), prec: rel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::hensel::hensel_factor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn field(f: &[i64], p: u64, n: u32, idx: usize) -> LocalField {
        let fs = hensel_factor(&big(f), p, n).unwrap();
        LocalField::new(&fs[idx], p, n).unwrap()
    }

    #[test]
    fn pi_times_pi_prime_is_p() {
        let lf = field(&[1, 1, 1], 3, 20, 0);
        assert_eq!(lf.valuation(&lf.pi).unwrap(), 1);
        let prod = lf.mul(&lf.pi, &lf.pi_prime);
        let p = lf.from_int(3);
        let diff = lf.sub(&prod, &p);
        assert!(lf.abs_prec(&diff) >= 18);
    }

    #[test]
    fn valuation_of_three_in_ramified_fields() {
        let lf = field(&[1, 1, 1], 3, 20, 0);
        assert_eq!(lf.valuation(&lf.from_int(3)).unwrap(), 2);
        assert_eq!(lf.valuation(&lf.from_int(18)).unwrap(), 4);
        let lf = field(&[4225, 0, -127, 0, 1], 3, 20, 0);
        assert_eq!(lf.valuation(&lf.from_int(9)).unwrap(), 4);
    }

    #[test]
    fn unit_part_recombines() {
        let lf = field(&[16, 0, -5, 0, 1], 3, 25, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = lf.mul(&lf.random_integral(&mut rng), &lf.pow(&lf.pi, 3));
            let (v, u) = lf.unit_part(&x).unwrap();
            assert_eq!(lf.valuation(&u).unwrap(), 0);
            let back = lf.mul(&u, &lf.pow(&lf.pi, v as u64));
            let diff = lf.sub(&back, &x);
            assert!(lf.abs_prec(&diff) >= 20, "{diff:?}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let lf = field(&[1, 1, 1, 1, 1], 5, 20, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let x = lf.random_integral(&mut rng);
            let y = lf.inv(&x).unwrap();
            let one = lf.mul(&x, &y);
            let diff = lf.sub(&one, &lf.one());
            assert!(lf.abs_prec(&diff) >= 15);
        }
    }

    #[test]
    fn norm_of_integers() {
        let lf = field(&[1, 1, 1], 7, 10, 0);
        let n = lf.norm_qp(&lf.from_int(14));
        assert_eq!(n.val, Some(1));
        let lf = field(&[1, 1, 1], 3, 10, 0);
        let n = lf.norm_qp(&lf.from_int(6));
        assert_eq!(n.val, Some(2));
        assert_eq!(n.residue(5).unwrap(), 36 % 243);
    }

    #[test]
    fn kummer_norm_of_t_is_b() {
        let lf = field(&[1, 1, 1], 3, 12, 0);
        let b = lf.from_int(5);
        let z = vec![lf.from_int(0), lf.one(), lf.from_int(0)];
        let nz = lf.kummer_norm(&b, &z);
        assert!(lf.abs_prec(&lf.sub(&nz, &b)) >= 11);
        // N(a) = a^3 for a in the base.
        let z = vec![lf.from_int(2), lf.from_int(0), lf.from_int(0)];
        let nz = lf.kummer_norm(&b, &z);
        assert!(lf.abs_prec(&lf.sub(&nz, &lf.from_int(8))) >= 11);
    }
}
