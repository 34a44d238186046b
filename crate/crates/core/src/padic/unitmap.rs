//! Coordinates of F_v^x / F_v^xp over F_p, read from the filtration U_i = 1 + pi^i O.

use crate::arith::matmod::MatModM;
use crate::error::{Error, Result};
use crate::padic::local::{LocalElem, LocalField};
use crate::padic::number::prec_err;

/// The map eta: F_v^x -> F_p^{d+2}, x -> (v(x) mod p, psi(principal part)).
///
/// Principal units are written as products of g_ij = 1 + theta^j pi^i for
/// 1 <= i < M, M = floor(p e / (p-1)) + 1; above level M every unit is a p-th power.
/// The p-th powers of the generators span the relations, and the free columns of
/// their echelon form give coordinates on U_1 / U_1^p.
#[derive(Clone, Debug)]
pub struct UnitClassMap {
    pub levels: u32,
    pub dim: usize,
    gens: Vec<Vec<LocalElem>>,
    pi_prime_pows: Vec<LocalElem>,
    rel: MatModM,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl UnitClassMap {
    pub fn new(lf: &LocalField) -> Result<Self> {
        let p = lf.p;
        let levels = (p as u32 * lf.e) / (p as u32 - 1) + 1;
        let f = lf.f as usize;
        let theta = lf.theta();
        let mut gens = Vec::new();
        for i in 1..levels {
            let pii = lf.pow(&lf.pi, i as u64);
            for j in 0..f {
                let g = lf.add(&lf.one(), &lf.mul(&lf.pow(&theta, j as u64), &pii));
                let mut powers = vec![lf.one()];
                for k in 1..p as usize {
                    powers.push(lf.mul(&powers[k - 1], &g));
                }
                gens.push(powers);
            }
        }
        let pi_prime_pows = (0..levels).map(|i| lf.pow(&lf.pi_prime, i as u64)).collect();
        let n = gens.len();
        let mut map = UnitClassMap {
            levels,
            dim: 0,
            gens,
            pi_prime_pows,
            rel: MatModM::zeros(p, 0, n),
            pivots: vec![],
            free: (0..n).collect(),
        };
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let gp = lf.mul(&map.gens[k][p as usize - 1], &map.gens[k][1]);
            rows.push(map.digits(lf, &gp)?);
        }
        let (rel, pivots) = MatModM::from_u64_rows(p, &rows, n).rref()?;
        map.free = (0..n).filter(|c| !pivots.contains(c)).collect();
        map.pivots = pivots;
        map.rel = rel;
        map.dim = map.free.len();
        // U_1/U_1^p has dimension [F_v:Q_p] + 1 exactly when mu_p lies in F_v.
        if map.dim == lf.d {
            return Err(Error::MuPNotContained);
        }
        if map.dim != lf.d + 1 {
            return Err(Error::Certification(format!(
                "principal unit quotient has dimension {} (expected {})",
                map.dim,
                lf.d + 1
            )));
        }
        Ok(map)
    }

    /// The level-i digit (x - 1)/pi^i mod pi, assuming x lies in U_i.
    fn level_digit(&self, lf: &LocalField, x: &LocalElem, i: u32) -> Result<Vec<u64>> {
        let y = lf.sub(x, &lf.one());
        if lf.is_zero(&y) {
            if lf.e as i64 * y.shift < (i + 1) as i64 {
                return Err(prec_err("unit digits", lf.n, lf.p));
            }
            return Ok(vec![0; lf.f as usize]);
        }
        let t = lf.scale_p(&lf.mul(&y, &self.pi_prime_pows[i as usize]), -(i as i64));
        if lf.is_zero(&t) {
            return Err(prec_err("unit digits", lf.n, lf.p));
        }
        if t.shift < 0 {
            return Err(Error::Certification("element is not in the expected unit level".into()));
        }
        lf.residue(&t)
    }

    /// Exponents r_ij with x = prod g_ij^{r_ij} mod U_M.
    fn digits(&self, lf: &LocalField, u: &LocalElem) -> Result<Vec<u64>> {
        let p = lf.p;
        let f = lf.f as usize;
        let mut x = u.clone();
        let mut out = vec![0u64; self.gens.len()];
        if lf.residue(&x)? != {
            let mut one = vec![1u64];
            one.resize(f, 0);
            one
        } {
            return Err(Error::Certification("unit is not principal".into()));
        }
        for i in 1..self.levels {
            let c = self.level_digit(lf, &x, i)?;
            for j in 0..f {
                let r = c[j] % p;
                if r != 0 {
                    let idx = (i as usize - 1) * f + j;
                    x = lf.mul(&x, &self.gens[idx][(p - r) as usize]);
                    out[idx] = r;
                }
            }
        }
        Ok(out)
    }

    /// The generators g_ij at the free columns: together with a uniformizer they
    /// give a basis of F_v^x / F_v^xp.
    pub fn free_units(&self) -> Vec<LocalElem> {
        self.free.iter().map(|&k| self.gens[k][1].clone()).collect()
    }

    /// The generators 1 + theta^j pi^i at level i.
    pub fn level_units(&self, lf: &LocalField, i: u32) -> Vec<LocalElem> {
        let f = lf.f as usize;
        (0..f).map(|j| self.gens[(i as usize - 1) * f + j][1].clone()).collect()
    }

    /// Coordinates of a principal unit in U_1 / U_1^p.
    pub fn psi(&self, lf: &LocalField, u: &LocalElem) -> Result<Vec<u64>> {
        let p = lf.p;
        let mut a = self.digits(lf, u)?;
        for (r, &pc) in self.pivots.iter().enumerate() {
            let coef = a[pc];
            if coef == 0 {
                continue;
            }
            for (k, x) in a.iter_mut().enumerate() {
                *x = (*x + (p - coef) * self.rel.get(r, k)) % p;
            }
        }
        Ok(self.free.iter().map(|&c| a[c]).collect())
    }

    /// Coordinates of x in F_v^x / F_v^xp: valuation mod p, then psi of the
    /// principal part u^(q-1).
    pub fn eta(&self, lf: &LocalField, x: &LocalElem) -> Result<Vec<u64>> {
        let (v, u) = lf.unit_part(x)?;
        let w = lf.pow(&u, lf.q() - 1);
        let mut out = vec![v.rem_euclid(lf.p as i64) as u64];
        out.extend(self.psi(lf, &w)?);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::hensel::hensel_factor;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(f: &[i64], p: u64, n: u32, idx: usize) -> (LocalField, UnitClassMap) {
        let fb: Vec<BigInt> = f.iter().map(|&x| BigInt::from(x)).collect();
        let fs = hensel_factor(&fb, p, n).unwrap();
        let lf = LocalField::new(&fs[idx], p, n).unwrap();
        let um = UnitClassMap::new(&lf).unwrap();
        (lf, um)
    }

    fn rank_of_random_images(lf: &LocalField, um: &UnitClassMap, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = vec![um.eta(lf, &lf.pi).unwrap()];
        for _ in 0..3 * lf.d + 6 {
            let x = lf.random_integral(&mut rng);
            if let Ok(v) = um.eta(lf, &x) {
                rows.push(v);
            }
        }
        let k = rows[0].len();
        MatModM::from_u64_rows(lf.p, &rows, k).rank().unwrap()
    }

    #[test]
    fn qzeta3_has_dimension_four() {
        let (lf, um) = setup(&[1, 1, 1], 3, 20, 0);
        assert_eq!(um.dim, 3);
        assert_eq!(rank_of_random_images(&lf, &um, 1), 4);
        assert_eq!(um.eta(&lf, &lf.pi).unwrap()[0], 1);
    }

    #[test]
    fn pth_powers_vanish() {
        let (lf, um) = setup(&[1, 0, 0, 1, 0, 0, 1], 3, 30, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let x = lf.random_integral(&mut rng);
            let Ok(_) = lf.unit_part(&x) else { continue };
            let e = um.eta(&lf, &lf.pow(&x, 3)).unwrap();
            assert!(e.iter().all(|&c| c == 0), "{e:?}");
        }
    }

    #[test]
    fn eta_is_additive() {
        let (lf, um) = setup(&[16, 0, -5, 0, 1], 3, 30, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = lf.random_integral(&mut rng);
            let y = lf.random_integral(&mut rng);
            let (Ok(a), Ok(b)) = (um.eta(&lf, &x), um.eta(&lf, &y)) else { continue };
            let c = um.eta(&lf, &lf.mul(&x, &y)).unwrap();
            let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % 3).collect();
            assert_eq!(c, s);
        }
    }

    #[test]
    fn full_rank_in_zeta5_and_biquadratic() {
        let (lf, um) = setup(&[1, 1, 1, 1, 1], 5, 20, 0);
        assert_eq!(rank_of_random_images(&lf, &um, 4), 6);
        let (lf, um) = setup(&[4225, 0, -127, 0, 1], 3, 30, 0);
        assert_eq!(rank_of_random_images(&lf, &um, 5), 6);
    }

    #[test]
    fn no_mu_p_detected() {
        // Q_3(sqrt 2) has no cube roots of unity.
        let fb: Vec<BigInt> = [-2i64, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        let fs = hensel_factor(&fb, 3, 20).unwrap();
        let lf = LocalField::new(&fs[0], 3, 20).unwrap();
        assert!(matches!(UnitClassMap::new(&lf), Err(Error::MuPNotContained)));
    }
}
