//! The Gross map U^S -> Z_p^S, eps -> (log_p N_{F_v/Q_p}(eps))_v, its rank defect and kernel.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::int::{ipow, max_precision};
use crate::arith::matmod::{smith_normal_form, MatModM};
use crate::arith::zlattice::hnf;
use crate::context::{completions, CertifiedField};
use crate::error::{Error, Result};
use crate::padic::number::prec_err;

/// Rows: free S-unit generators. Columns: primes above p. Entries mod p^precision.
#[derive(Clone, Debug, Serialize)]
pub struct GrossMatrix {
    pub p: u64,
    pub precision: u32,
    pub places: Vec<String>,
    pub rows: Vec<Vec<u64>>,
}

pub fn gross_matrix(cf: &CertifiedField, n: u32) -> Result<GrossMatrix> {
    let comps = completions(cf, n)?;
    let p = cf.p;
    let mut entries = Vec::new();
    let mut prec = n;
    for g in &cf.sunits.generators {
        let mut row = Vec::new();
        for c in &comps {
            let l = c.lf.norm_qp(&c.local(g)?).log()?;
            prec = prec.min(l.abs_prec().max(0) as u32);
            row.push(l);
        }
        entries.push(row);
    }
    if prec == 0 {
        return Err(prec_err("Gross matrix", n, p));
    }
    let m = ipow(p, prec);
    let rows: Vec<Vec<u64>> = entries.iter().map(|r| r.iter().map(|l| l.residue(prec)).collect::<Result<_>>()).collect::<Result<_>>()?;
    // log_p N_{F/Q}(eps) = log_p(+-p^k) = 0.
    for r in &rows {
        if r.iter().fold(0u64, |a, &x| ((a as u128 + x as u128) % m as u128) as u64) != 0 {
            return Err(Error::Certification("Gross row does not sum to zero".into()));
        }
    }
    Ok(GrossMatrix { p, precision: prec, places: comps.iter().map(|c| c.prime.label()).collect(), rows })
}

/// Raises the working precision until the entries are known to `target` digits.
pub fn gross_matrix_at_least(cf: &CertifiedField, target: u32) -> Result<GrossMatrix> {
    let cap = max_precision(cf.p);
    let mut n = target;
    loop {
        let g = gross_matrix(cf, n)?;
        if g.precision >= target {
            return Ok(g);
        }
        if n >= cap {
            return Err(Error::PrecisionExhausted { context: "Gross matrix".into(), precision: g.precision, cap });
        }
        n = (n + target - g.precision).min(cap);
    }
}

impl GrossMatrix {
    fn modp(&self) -> MatModM {
        MatModM::from_u64_rows(ipow(self.p, self.precision), &self.rows, self.places.len())
    }

    /// Rank certified by invariants nonzero mod p^precision.
    pub fn certified_rank(&self) -> Result<(usize, Vec<u32>)> {
        if self.rows.is_empty() || self.places.is_empty() {
            return Ok((0, vec![]));
        }
        let snf = smith_normal_form(&self.modp())?;
        let m = ipow(self.p, self.precision);
        let vals: Vec<u32> = snf.invariants.iter().filter(|&&d| d != m).map(|&d| d.trailing_zeros_base(self.p)).collect();
        Ok((vals.len(), vals))
    }
}

trait BaseVal {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl BaseVal for u64 {
    fn trailing_zeros_base(mut self, p: u64) -> u32 {
        let mut v = 0;
        while self % p == 0 {
            self /= p;
            v += 1;
        }
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrossDefect {
    pub field: String,
    pub s: usize,
    pub rank: usize,
    pub delta_upper: usize,
    /// p-adic valuations of the nonzero Smith invariants.
    pub invariant_valuations: Vec<u32>,
    pub precision: u32,
    pub certificate: String,
}

/// delta_upper = |S| - 1 - rank; zero certifies the Gross conjecture for F at p.
pub fn gross_defect(cf: &CertifiedField, n: u32) -> Result<GrossDefect> {
    let s = cf.s().len();
    let (rank, vals, prec) = if s == 1 {
        (0, vec![], n.min(max_precision(cf.p)))
    } else {
        let g = gross_matrix_at_least(cf, n)?;
        let (r, v) = g.certified_rank()?;
        (r, v, g.precision)
    };
    let delta = s - 1 - rank;
    Ok(GrossDefect {
        field: cf.name().into(),
        s,
        rank,
        delta_upper: delta,
        invariant_valuations: vals,
        precision: prec,
        certificate: if delta == 0 { "certified".into() } else { "inconclusive".into() },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrossKernel {
    pub field: String,
    pub modulus_exponent: u32,
    pub guard: u32,
    /// Exponent vectors over the free S-unit generators, mod p^n.
    pub basis: Vec<Vec<u64>>,
}

fn kernel_rows(g: &GrossMatrix, n: u32) -> Result<Vec<Vec<u64>>> {
    let k = g.rows.len();
    if g.places.len() < 2 {
        return Ok((0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect());
    }
    let snf = smith_normal_form(&g.modp())?;
    let m = ipow(g.p, g.precision);
    let nz = snf.invariants.iter().filter(|&&d| d != m).count();
    let pn = ipow(g.p, n);
    Ok((nz..k).map(|i| snf.u.row(i).iter().map(|x| x % pn).collect()).collect())
}

fn span_hnf(rows: &[Vec<u64>], k: usize, p: u64, n: u32) -> Vec<Vec<BigInt>> {
    let pn = BigInt::from(p).pow(n);
    let mut all: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..k {
        all.push((0..k).map(|j| if i == j { pn.clone() } else { BigInt::from(0) }).collect());
    }
    hnf(&all, k)
}

/// ker(Gross) mod p^n, computed at precisions n+5 and n+10 and required to agree.
/// Refuses when the rank defect is not certified to vanish.
pub fn gross_kernel_mod(cf: &CertifiedField, n: u32) -> Result<GrossKernel> {
    let cap = max_precision(cf.p);
    if n + 12 > cap {
        return Err(Error::PrecisionExhausted { context: "Gross kernel guard digits".into(), precision: n + 12, cap });
    }
    let d = gross_defect(cf, n + 10)?;
    if d.delta_upper > 0 {
        return Err(Error::UncertifiedDefect(d.delta_upper));
    }
    let k = cf.sunits.generators.len();
    let mut spans = Vec::new();
    let mut last = Vec::new();
    for guard in [5, 10] {
        let g = gross_matrix_at_least(cf, n + guard)?;
        let rows = kernel_rows(&g, n)?;
        spans.push(span_hnf(&rows, k, cf.p, n));
        last = rows;
    }
    if spans[0] != spans[1] {
        return Err(Error::Certification("Gross kernel is not stable under extra precision".into()));
    }
    Ok(GrossKernel { field: cf.name().into(), modulus_exponent: n, guard: 10, basis: last })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_prime_fields_are_trivial() {
        let cf = CertifiedField::load("qzeta9").unwrap();
        let d = gross_defect(&cf, 20).unwrap();
        assert_eq!((d.s, d.delta_upper, d.certificate.as_str()), (1, 0, "certified"));
        let k = gross_kernel_mod(&cf, 10).unwrap();
        assert_eq!(k.basis.len(), cf.sunits.generators.len());
    }

    #[test]
    fn two_primes_above_three() {
        let cf = CertifiedField::load("q13").unwrap();
        let d = gross_defect(&cf, 30).unwrap();
        assert_eq!((d.s, d.delta_upper), (2, 0));
        let k = gross_kernel_mod(&cf, 8).unwrap();
        assert_eq!(k.basis.len(), cf.sunits.generators.len() - 1);
        // Kernel vectors really are killed.
        let g = gross_matrix_at_least(&cf, 8).unwrap();
        let m = ipow(3, 8) as u128;
        for v in &k.basis {
            for j in 0..2 {
                let s = v.iter().zip(&g.rows).fold(0u128, |a, (x, r)| (a + *x as u128 * r[j] as u128) % m);
                assert_eq!(s, 0);
            }
        }
    }
}
