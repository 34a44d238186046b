//! Elements of Q_p at fixed relative precision, with the Iwasawa logarithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::int::{inv_mod, ipow, max_precision, mul_mod, pow_mod, val_p};
use crate::error::{Error, Result};

/// p^val * unit, with `unit` known modulo p^prec. Zero has `val = None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicNumber {
    pub p: u64,
    pub val: Option<i64>,
    pub unit: u64,
    pub prec: u32,
}

fn big_pow(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

impl PadicNumber {
    pub fn zero(p: u64, prec: u32) -> Self {
        PadicNumber { p, val: None, unit: 0, prec }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicNumber { p, val: Some(0), unit: 1 % ipow(p, prec), prec }
    }

    fn modulus(&self) -> u64 {
        ipow(self.p, self.prec)
    }

    pub fn from_bigint(p: u64, x: &BigInt, prec: u32) -> Result<Self> {
        check_prec(p, prec)?;
        if x.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let v = val_p(x, p);
        let u = x / big_pow(p, v);
        let m = ipow(p, prec);
        let unit = u.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        Ok(PadicNumber { p, val: Some(v as i64), unit, prec })
    }

    pub fn from_i64(p: u64, x: i64, prec: u32) -> Result<Self> {
        Self::from_bigint(p, &BigInt::from(x), prec)
    }

    pub fn from_rational(p: u64, num: &BigInt, den: &BigInt, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = Self::from_bigint(p, num, prec)?;
        let d = Self::from_bigint(p, den, prec)?;
        n.div(&d)
    }

    /// Build from a residue mod p^abs (value known to absolute precision `abs`).
    pub fn from_residue(p: u64, r: u64, abs: u32) -> Self {
        if r == 0 {
            return Self::zero(p, abs);
        }
        let mut v = 0u32;
        let mut u = r;
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        let prec = abs - v;
        PadicNumber { p, val: Some(v as i64), unit: u % ipow(p, prec), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// Absolute precision: the value is known modulo p^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.val.unwrap_or(0) + self.prec as i64
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        match (self.val, other.val) {
            (Some(a), Some(b)) => {
                let m = ipow(self.p, prec);
                PadicNumber { p: self.p, val: Some(a + b), unit: mul_mod(self.unit % m, other.unit % m, m), prec }
            }
            _ => {
                // zero known to absolute precision of the product
                let abs = (self.abs_prec() + other.val.unwrap_or(0)).min(other.abs_prec() + self.val.unwrap_or(0));
                PadicNumber::zero(self.p, abs.max(0) as u32)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.val.ok_or(Error::ZeroElement)?;
        let m = self.modulus();
        Ok(PadicNumber { p: self.p, val: Some(-v), unit: inv_mod(self.unit, m).unwrap(), prec: self.prec })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PadicNumber { unit: (m - self.unit % m) % m, ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = match (self.val, other.val) {
            (None, _) => return other.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let base = a.min(b);
        let abs = self.abs_prec().min(other.abs_prec());
        let width = (abs - base).max(0) as u32;
        let m = BigInt::from(ipow(self.p, width));
        let sa = BigInt::from(self.unit) * big_pow(self.p, (a - base) as u32);
        let sb = BigInt::from(other.unit) * big_pow(self.p, (b - base) as u32);
        let s = (sa + sb).mod_floor(&m);
        let r = s.to_u64().unwrap();
        let mut out = PadicNumber::from_residue(self.p, r, width);
        out.val = out.val.map(|v| v + base);
        if out.val.is_none() {
            out.prec = abs.max(0) as u32;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The value modulo p^k, when it is integral and known that far.
    pub fn residue(&self, k: u32) -> Result<u64> {
        let m = ipow(self.p, k);
        match self.val {
            None => {
                if (self.prec as i64) < k as i64 {
                    return Err(prec_err("residue of zero", self.prec, self.p));
                }
                Ok(0)
            }
            Some(v) if v < 0 => Err(Error::BadInput("non-integral p-adic number".into())),
            Some(v) => {
                if v >= k as i64 {
                    return Ok(0);
                }
                if self.abs_prec() < k as i64 {
                    return Err(prec_err("residue", self.prec, self.p));
                }
                Ok(mul_mod(self.unit % m, ipow(self.p, v as u32) % m, m))
            }
        }
    }

    /// Iwasawa logarithm: log(p) = 0, and log vanishes on roots of unity.
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (p, prec) = (self.p, self.prec);
        if prec == 0 {
            return Err(prec_err("log", prec, p));
        }
        // u^(p-1) = 1 + y with p | y; log u = log(1+y)/(p-1).
        let m = ipow(p, prec);
        let w = pow_mod(self.unit, p - 1, m);
        let y = BigInt::from(w) - 1;
        let mut terms = 1u64;
        while terms - ilog(p, terms) as u64 <= prec as u64 {
            terms += 1;
        }
        let extra = ilog(p, terms) + 1;
        let big_m = big_pow(p, prec + extra);
        let mut acc = BigInt::zero();
        let mut ypow: BigInt = BigInt::one();
        for k in 1..=terms {
            ypow = Integer::mod_floor(&(&ypow * &y), &big_m);
            let vk = val_p(&BigInt::from(k), p);
            let kp = k / ipow(p, vk);
            let t = &ypow / big_pow(p, vk);
            let kinv = BigInt::from(inv_mod(kp % m, m).unwrap());
            let term = (t * kinv).mod_floor(&BigInt::from(m));
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let mm = BigInt::from(m);
        let inv_pm1 = BigInt::from(inv_mod((p - 1) % m, m).unwrap());
        let r = (acc.mod_floor(&mm) * inv_pm1).mod_floor(&mm);
        Ok(PadicNumber::from_residue(p, r.to_u64().unwrap(), prec))
    }

    /// exp(x) for v(x) >= 1 (p odd).
    pub fn exp(&self) -> Result<Self> {
        let (p, prec) = (self.p, self.prec);
        let v = match self.val {
            None => return Ok(Self::one(p, prec)),
            Some(v) => v,
        };
        if v < 1 || p == 2 {
            return Err(Error::BadInput("exp needs valuation >= 1 (p odd)".into()));
        }
        let abs = self.abs_prec() as u32;
        let terms = 2 * abs as u64 + 2;
        let extra = ((terms - 1) / (p - 1)) as u32 + 1;
        let big_m = big_pow(p, abs + extra);
        let x = BigInt::from(self.unit) * big_pow(p, v as u32);
        let mut acc = BigInt::one();
        let mut num = BigInt::one();
        let mut fact_unit = BigInt::one();
        let mut fact_val = 0u32;
        let m = BigInt::from(ipow(p, abs));
        for k in 1..=terms {
            num = (&num * &x).mod_floor(&big_m);
            let vk = val_p(&BigInt::from(k), p);
            fact_val += vk;
            fact_unit = (fact_unit * BigInt::from(k / ipow(p, vk))).mod_floor(&m);
            let t = &num / big_pow(p, fact_val);
            let inv = BigInt::from(inv_mod(fact_unit.to_u64().unwrap(), ipow(p, abs)).unwrap());
            acc += t * inv;
        }
        let r = acc.mod_floor(&m).to_u64().unwrap();
        Ok(PadicNumber::from_residue(p, r, abs))
    }
}

/// floor(log_p k) for k >= 1.
pub fn ilog(p: u64, k: u64) -> u32 {
    let (mut r, mut acc) = (0, p);
    while acc <= k {
        acc = acc.saturating_mul(p);
        r += 1;
    }
    r
}

fn check_prec(p: u64, prec: u32) -> Result<()> {
    let cap = max_precision(p);
    if prec > cap {
        return Err(Error::PrecisionExhausted { context: "requested precision".into(), precision: prec, cap });
    }
    Ok(())
}

pub(crate) fn prec_err(ctx: &str, prec: u32, p: u64) -> Error {
    Error::PrecisionExhausted { context: ctx.into(), precision: prec, cap: max_precision(p) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_p_is_zero() {
        let x = PadicNumber::from_i64(3, 3, 20).unwrap();
        assert!(x.log().unwrap().is_zero());
    }

    #[test]
    fn log_of_four_matches_series() {
        // log(1+3) = 3 - 9/2 + 27/3 - 81/4 + ... directly, mod 3^10.
        let p = 3u64;
        let prec = 10;
        let m = BigInt::from(3u64.pow(prec + 4));
        let mut acc = BigInt::zero();
        for k in 1..60u64 {
            let vk = val_p(&BigInt::from(k), p);
            let t = BigInt::from(3).pow(k as u32 - vk);
            let kinv = BigInt::from(inv_mod((k / 3u64.pow(vk)) % 3u64.pow(prec + 4), 3u64.pow(prec + 4)).unwrap());
            let term = (t * kinv).mod_floor(&m);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let expect = acc.mod_floor(&BigInt::from(3u64.pow(prec))).to_u64().unwrap();
        let got = PadicNumber::from_i64(3, 4, prec).unwrap().log().unwrap().residue(prec).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn log_is_a_homomorphism() {
        let prec = 15;
        let l4 = PadicNumber::from_i64(3, 4, prec).unwrap().log().unwrap();
        let l7 = PadicNumber::from_i64(3, 7, prec).unwrap().log().unwrap();
        let l28 = PadicNumber::from_i64(3, 28, prec).unwrap().log().unwrap();
        assert_eq!(l4.add(&l7).residue(prec).unwrap(), l28.residue(prec).unwrap());
    }

    #[test]
    fn log_exp_roundtrip() {
        for x in [3i64, 6, 9, 12, 15, -3, 27 * 5] {
            let a = PadicNumber::from_i64(3, x, 16).unwrap();
            let back = a.exp().unwrap().log().unwrap();
            assert_eq!(back.residue(14).unwrap(), a.residue(14).unwrap());
        }
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = PadicNumber::from_rational(5, &BigInt::from(7), &BigInt::from(25), 12).unwrap();
        assert_eq!(a.val, Some(-2));
        let b = a.mul(&PadicNumber::from_i64(5, 25, 12).unwrap());
        assert_eq!(b.residue(10).unwrap(), 7);
        let c = b.sub(&PadicNumber::from_i64(5, 7, 12).unwrap());
        assert!(c.is_zero());
    }
}
