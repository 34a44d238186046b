//! Number fields Q[x]/(f) with elements in the power basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::arith::int::isqrt_ceil;
use crate::arith::qmat::{det_int, inverse, vec_mul, QMat};
use crate::error::{Error, Result};

/// num / den in the power basis 1, theta, ..., theta^(n-1); den > 0 and coprime to the content of num.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    pub name: String,
    pub poly: Vec<BigInt>,
    pub n: usize,
    pub signature: (usize, usize),
    /// Rows are integral basis elements in power-basis coordinates.
    pub integral_basis: QMat,
    ib_inverse: QMat,
    pub index: BigInt,
    pub poly_disc: BigInt,
    pub disc: BigInt,
    /// theta^(n+k) reduced, for k < n - 1.
    reduce_table: Vec<Vec<BigInt>>,
}

impl NumberField {
    /// Field with the power basis as integral basis.
    pub fn new(name: &str, poly: Vec<BigInt>) -> Result<Self> {
        let n = poly.len().saturating_sub(1);
        let id: QMat = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        Self::with_basis(name, poly, id)
    }

    pub fn with_basis(name: &str, poly: Vec<BigInt>, basis: QMat) -> Result<Self> {
        if poly.len() < 2 || poly.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroPolynomial);
        }
        if !poly.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let n = poly.len() - 1;
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("integral basis must be {n}x{n}")));
        }
        let mut reduce_table = Vec::new();
        // theta^n = -sum c_i theta^i
        let mut cur: Vec<BigInt> = poly[..n].iter().map(|c| -c).collect();
        for _ in 0..n.saturating_sub(1) {
            reduce_table.push(cur.clone());
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in 1..n {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] -= &top * &poly[i];
            }
            cur = next;
        }
        let ib_inverse = inverse(&basis).ok_or_else(|| Error::BadInput("integral basis is singular".into()))?;
        let mut nf = NumberField {
            name: name.to_string(),
            poly,
            n,
            signature: (0, 0),
            integral_basis: basis,
            ib_inverse,
            index: BigInt::one(),
            poly_disc: BigInt::zero(),
            disc: BigInt::zero(),
            reduce_table,
        };
        nf.poly_disc = nf.trace_form_disc();
        if nf.poly_disc.is_zero() {
            return Err(Error::NotSquarefree);
        }
        let r1 = real_root_count(&nf.poly);
        nf.signature = (r1, (n - r1) / 2);
        nf.certify_order()?;
        Ok(nf)
    }

    /// The m-th cyclotomic field.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        let phi = cyclotomic_poly(m);
        Self::new(&format!("Q(zeta_{m})"), phi)
    }

    fn certify_order(&mut self) -> Result<()> {
        let n = self.n;
        // Z[theta] inside the module, and the module closed under multiplication.
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            if !self.is_integral(&FieldElement { num: e, den: BigInt::one() }) {
                return Err(Error::Certification("integral basis does not contain Z[theta]".into()));
            }
        }
        let elems: Vec<FieldElement> = self.integral_basis.clone().iter().map(|r| self.from_rational(r)).collect();
        for a in &elems {
            for b in &elems {
                if !self.is_integral(&self.mul(a, b)) {
                    return Err(Error::Certification("integral basis is not closed under multiplication".into()));
                }
            }
        }
        let mut den = BigInt::one();
        for r in &self.integral_basis {
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let m: Vec<Vec<BigInt>> =
            self.integral_basis.iter().map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()).collect();
        let d = det_int(&m).abs();
        let scale = den.pow(n as u32);
        if d.is_zero() || !(&scale % &d).is_zero() {
            return Err(Error::Certification("integral basis determinant is not 1/index".into()));
        }
        self.index = &scale / &d;
        let i2 = &self.index * &self.index;
        if !(&self.poly_disc % &i2).is_zero() {
            return Err(Error::Certification("index squared does not divide the discriminant".into()));
        }
        self.disc = &self.poly_disc / &i2;
        Ok(())
    }

    fn trace_form_disc(&self) -> BigInt {
        let n = self.n;
        // Newton sums s_k = Tr(theta^k).
        let c = &self.poly;
        let mut s = vec![BigInt::zero(); 2 * n];
        s[0] = BigInt::from(n);
        for k in 1..2 * n {
            let mut acc = BigInt::zero();
            for i in 1..=n.min(k) {
                let a = &c[n - i];
                if i < k {
                    acc -= a * &s[k - i];
                } else {
                    acc -= a * BigInt::from(k);
                }
            }
            if k > n {
                acc = BigInt::zero();
                for i in 1..=n {
                    acc -= &c[n - i] * &s[k - i];
                }
            }
            s[k] = acc;
        }
        let m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| s[i + j].clone()).collect()).collect();
        det_int(&m)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { num: vec![BigInt::zero(); self.n], den: BigInt::one() }
    }

    pub fn from_int(&self, x: impl Into<BigInt>) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.n];
        num[0] = x.into();
        FieldElement { num, den: BigInt::one() }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn theta(&self) -> FieldElement {
        if self.n == 1 {
            return self.from_int(-self.poly[0].clone());
        }
        let mut num = vec![BigInt::zero(); self.n];
        num[1] = BigInt::one();
        FieldElement { num, den: BigInt::one() }
    }

    pub fn elem(&self, c: &[i64]) -> FieldElement {
        self.reduce_poly(c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::one())
    }

    pub fn from_rational(&self, c: &[BigRational]) -> FieldElement {
        let mut den = BigInt::one();
        for x in c {
            den = den.lcm(x.denom());
        }
        let dq = BigRational::from_integer(den.clone());
        let num = c.iter().map(|x| (x * &dq).to_integer()).collect();
        self.reduce_poly(num, den)
    }

    /// Power-basis rendering in the variable t, e.g. "(3 - 2*t^2)/5".
    pub fn display(&self, a: &FieldElement) -> String {
        let mut out = String::new();
        for (i, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if a.den.is_one() {
            out
        } else {
            format!("({out})/{}", a.den)
        }
    }

    pub fn to_rational(&self, a: &FieldElement) -> Vec<BigRational> {
        a.num.iter().map(|x| BigRational::new(x.clone(), a.den.clone())).collect()
    }

    /// Reduce an arbitrary-length coefficient vector modulo f and normalize.
    pub fn reduce_poly(&self, mut c: Vec<BigInt>, den: BigInt) -> FieldElement {
        let n = self.n;
        if c.len() < n {
            c.resize(n, BigInt::zero());
        }
        let mut num: Vec<BigInt> = c[..n].to_vec();
        for (k, x) in c[n..].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, t) in num.iter_mut().zip(&self.reduce_table[k]) {
                *o += x * t;
            }
        }
        normalize(FieldElement { num, den })
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.num.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        normalize(FieldElement { num, den: &a.den * &b.den })
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { num: a.num.iter().map(|x| -x).collect(), den: a.den.clone() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce_poly(prod, &a.den * &b.den)
    }

    pub fn scale(&self, a: &FieldElement, c: &BigInt) -> FieldElement {
        normalize(FieldElement { num: a.num.iter().map(|x| x * c).collect(), den: a.den.clone() })
    }

    /// Integer matrix whose i-th row holds the coordinates of num(a) * theta^i.
    pub fn mult_matrix(&self, num: &[BigInt]) -> Vec<Vec<BigInt>> {
        let mut rows = Vec::with_capacity(self.n);
        let mut cur = num.to_vec();
        for _ in 0..self.n {
            rows.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur.iter().cloned());
            cur = self.reduce_poly(shifted, BigInt::one()).num;
        }
        rows
    }

    pub fn norm(&self, a: &FieldElement) -> BigRational {
        let d = det_int(&self.mult_matrix(&a.num));
        BigRational::new(d, a.den.pow(self.n as u32))
    }

    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let m = self.mult_matrix(&a.num);
        let t: BigInt = (0..self.n).map(|i| m[i][i].clone()).sum();
        BigRational::new(t, a.den.clone())
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let m: QMat = self
            .mult_matrix(&a.num)
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = inverse(&m).ok_or(Error::ZeroElement)?;
        // x M = e0 gives x = num^-1.
        let mut e0 = vec![BigRational::zero(); self.n];
        e0[0] = BigRational::from_integer(a.den.clone());
        Ok(self.from_rational(&vec_mul(&e0, &inv)))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Ok(self.pow_u(&base, e.unsigned_abs()))
    }

    pub fn pow_u(&self, a: &FieldElement, mut e: u64) -> FieldElement {
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

    /// Coordinates over the integral basis.
    pub fn to_ib(&self, a: &FieldElement) -> Vec<BigRational> {
        vec_mul(&self.to_rational(a), &self.ib_inverse)
    }

    pub fn from_ib(&self, c: &[BigRational]) -> FieldElement {
        self.from_rational(&vec_mul(c, &self.integral_basis))
    }

    pub fn is_integral(&self, a: &FieldElement) -> bool {
        self.to_ib(a).iter().all(|x| x.is_integer())
    }

    /// a(image), where image is the image of theta under a field map into this field.
    pub fn substitute(&self, a_num: &[BigInt], a_den: &BigInt, image: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in a_num.iter().rev() {
            acc = self.add(&self.mul(&acc, image), &self.from_int(c.clone()));
        }
        normalize(FieldElement { den: &acc.den * a_den, num: acc.num })
    }

    pub fn random_small<R: Rng>(&self, rng: &mut R, bound: i64) -> FieldElement {
        loop {
            let c: Vec<i64> = (0..self.n).map(|_| rng.gen_range(-bound..=bound)).collect();
            let a = self.elem(&c);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// Ceiling of an upper bound for the Minkowski constant, using 4/pi < 12733/10000.
    pub fn minkowski_bound(&self) -> BigInt {
        let n = self.n as u32;
        let r2 = self.signature.1 as u32;
        let fact: BigInt = (1..=self.n as u64).map(BigInt::from).product();
        let sqrt_d = BigInt::from(isqrt_ceil(&self.disc.abs().to_biguint().unwrap()));
        let num = BigInt::from(12733u32).pow(r2) * fact * sqrt_d;
        let den = BigInt::from(10000u32).pow(r2) * BigInt::from(n).pow(n);
        num.div_ceil(&den)
    }
}

pub fn normalize(mut a: FieldElement) -> FieldElement {
    if a.den.is_negative() {
        a.den = -a.den;
        a.num.iter_mut().for_each(|x| *x = -x.clone());
    }
    let mut g = a.den.clone();
    for x in &a.num {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    if !g.is_one() && !g.is_zero() {
        a.den /= &g;
        a.num.iter_mut().for_each(|x| *x /= &g);
    }
    if a.num.iter().all(|x| x.is_zero()) {
        a.den = BigInt::one();
    }
    a
}

pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // Phi_m = prod_{d | m} (x^d - 1)^mu(m/d), computed by exact division.
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mu = moebius(m / d);
        if mu == 0 {
            continue;
        }
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = BigInt::from(-1);
        f[d as usize] = BigInt::one();
        if mu == 1 {
            num = int_poly_mul(&num, &f);
        } else {
            den = int_poly_mul(&den, &f);
        }
    }
    int_poly_div_exact(&num, &den)
}

fn moebius(mut n: u64) -> i32 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

pub fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &b[db];
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &c * y;
        }
        q[i] = c;
    }
    q
}

/// Number of real roots of a squarefree integer polynomial, by Sturm's theorem.
pub fn real_root_count(f: &[BigInt]) -> usize {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|x| BigRational::from_integer(x.clone())).collect() };
    let f0 = to_q(f);
    let f1: Vec<BigRational> = (1..f.len()).map(|i| BigRational::from_integer(&f[i] * BigInt::from(i))).collect();
    let mut seq = vec![f0, f1];
    loop {
        let k = seq.len();
        let r = qpoly_rem(&seq[k - 2], &seq[k - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let sign_changes = |at_pos_inf: bool| -> usize {
        let signs: Vec<i8> = seq
            .iter()
            .map(|p| {
                let lead = p.last().unwrap();
                let deg_odd = (p.len() - 1) % 2 == 1;
                let s = if lead.is_positive() { 1 } else { -1 };
                if !at_pos_inf && deg_odd {
                    -s
                } else {
                    s
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    sign_changes(false) - sign_changes(true)
}

fn qpoly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        r.pop();
        while r.last().map_or(false, |x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(3), big(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(9), big(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12), big(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn signature_and_discriminant() {
        let k = NumberField::cyclotomic(3).unwrap();
        assert_eq!(k.signature, (0, 1));
        assert_eq!(k.disc, BigInt::from(-3));
        let k = NumberField::cyclotomic(9).unwrap();
        assert_eq!(k.signature, (0, 3));
        assert_eq!(k.disc, BigInt::from(-19683));
        let k = NumberField::new("cubic", big(&[-1, -2, 1, 1])).unwrap();
        assert_eq!(k.signature, (3, 0));
        assert_eq!(k.disc, BigInt::from(49));
    }

    #[test]
    fn inverse_and_norm() {
        let k = NumberField::cyclotomic(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = k.random_small(&mut rng, 4);
            let b = k.random_small(&mut rng, 4);
            let ai = k.inv(&a).unwrap();
            assert_eq!(k.mul(&a, &ai), k.one());
            assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        }
        // N(1 - zeta_9) = 3
        let x = k.elem(&[1, -1]);
        assert_eq!(k.norm(&x), BigRational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn non_maximal_basis_index() {
        // Z[sqrt 5] has index 2 in the maximal order.
        let basis = vec![
            vec![BigRational::from_integer(1.into()), BigRational::from_integer(0.into())],
            vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
        ];
        let k = NumberField::with_basis("Q(sqrt5)", big(&[-5, 0, 1]), basis).unwrap();
        assert_eq!(k.index, BigInt::from(2));
        assert_eq!(k.disc, BigInt::from(5));
    }

    #[test]
    fn minkowski_of_small_fields() {
        assert_eq!(NumberField::cyclotomic(3).unwrap().minkowski_bound(), BigInt::from(2));
        assert!(NumberField::cyclotomic(9).unwrap().minkowski_bound() <= BigInt::from(5));
    }
}
