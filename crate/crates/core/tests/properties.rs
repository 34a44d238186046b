use std::sync::OnceLock;

use kummerlab::arith::int::ipow;
use kummerlab::capitulation::{norm_index, t_w, Extension};
use kummerlab::cohomology::CyclicModule;
use kummerlab::gross::gross_matrix_at_least;
use kummerlab::kummer::SelmerSubspace;
use kummerlab::numfield::{factor_principal, FieldElement, PrimeIdeal};
use kummerlab::symbols::SymbolTable;
use kummerlab::CertifiedField;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zeta3() -> &'static (CertifiedField, SymbolTable) {
    static CELL: OnceLock<(CertifiedField, SymbolTable)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cf = CertifiedField::load("qzeta3").unwrap();
        let t = SymbolTable::build(&cf, None, 1).unwrap();
        (cf, t)
    })
}

fn zeta5() -> &'static (CertifiedField, SymbolTable) {
    static CELL: OnceLock<(CertifiedField, SymbolTable)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cf = CertifiedField::load("qzeta5").unwrap();
        let t = SymbolTable::build(&cf, None, 1).unwrap();
        (cf, t)
    })
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-12i64..=12, n).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn places(cf: &CertifiedField, t: &SymbolTable, xs: &[&FieldElement]) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = t.places.iter().map(|w| w.comp.prime.clone()).collect();
    for x in xs {
        for (pr, _) in factor_principal(&cf.nf, x).unwrap() {
            if !out.contains(&pr) {
                out.push(pr);
            }
        }
    }
    out
}

fn check_bilinear(cf: &CertifiedField, t: &SymbolTable, a: &[i64], a2: &[i64], b: &[i64]) -> Result<(), TestCaseError> {
    let nf = &cf.nf;
    let (a, a2, b) = (nf.elem(a), nf.elem(a2), nf.elem(b));
    let aa = nf.mul(&a, &a2);
    let p = cf.p;
    for v in places(cf, t, &[&a, &a2, &b]) {
        let lhs = t.symbol_at(cf, &aa, &b, &v).unwrap();
        let rhs = (t.symbol_at(cf, &a, &b, &v).unwrap() + t.symbol_at(cf, &a2, &b, &v).unwrap()) % p;
        prop_assert_eq!(lhs, rhs, "left linearity at {}", v.label());
        let ab = t.symbol_at(cf, &a, &b, &v).unwrap();
        let ba = t.symbol_at(cf, &b, &a, &v).unwrap();
        prop_assert_eq!((ab + ba) % p, 0, "antisymmetry at {}", v.label());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symbols_bilinear_and_antisymmetric_zeta3(a in coeffs(2), a2 in coeffs(2), b in coeffs(2)) {
        let (cf, t) = zeta3();
        check_bilinear(cf, t, &a, &a2, &b)?;
    }

    #[test]
    fn symbols_bilinear_and_antisymmetric_zeta5(a in coeffs(4), a2 in coeffs(4), b in coeffs(4)) {
        let (cf, t) = zeta5();
        check_bilinear(cf, t, &a, &a2, &b)?;
    }

    #[test]
    fn pth_powers_pair_trivially(a in coeffs(2), c in coeffs(2)) {
        let (cf, t) = zeta3();
        let nf = &cf.nf;
        let a = nf.elem(&a);
        let cp = nf.pow(&nf.elem(&c), 3).unwrap();
        for s in t.local_symbols(cf, &a, &cp).unwrap() {
            prop_assert_eq!(s.value, 0, "at {}", s.place);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn ramification_depends_only_on_the_kummer_class(b in coeffs(2), c in coeffs(2)) {
        let (cf, _) = zeta3();
        let nf = &cf.nf;
        let b = nf.elem(&b);
        prop_assume!(kummerlab::numfield::is_pth_power(nf, &b, 3).unwrap().is_none());
        let b2 = nf.mul(&b, &nf.pow(&nf.elem(&c), 3).unwrap());
        let e1 = Extension::radical(cf.clone(), b).unwrap();
        let e2 = Extension::radical(cf.clone(), b2).unwrap();
        let labels = |e: &Extension| {
            let mut v: Vec<String> = e.data.ram_tame.iter().map(|p| p.label()).collect();
            v.sort();
            v
        };
        prop_assert_eq!(labels(&e1), labels(&e2));
        prop_assert_eq!(e1.data.ram_wild, e2.data.ram_wild);
    }

    #[test]
    fn t_w_and_norm_index_are_monotone(b in coeffs(2), keep in 0usize..2) {
        let (cf, t) = zeta3();
        let nf = &cf.nf;
        let b = nf.elem(&b);
        prop_assume!(kummerlab::numfield::is_pth_power(nf, &b, 3).unwrap().is_none());
        let ext = Extension::radical(cf.clone(), b).unwrap();
        let w = SelmerSubspace::sunits(cf).unwrap();
        let sub = SelmerSubspace::span(cf, &w.basis[keep..keep + 1]).unwrap();
        let big = t_w(&ext, &w, "units").unwrap().t_w;
        let small = t_w(&ext, &sub, "sub").unwrap().t_w;
        prop_assert!(small <= big);
        let nbig = norm_index(&ext, &w, Some(t)).unwrap().exponent.unwrap();
        let nsmall = norm_index(&ext, &sub, Some(t)).unwrap().exponent.unwrap();
        prop_assert!(nsmall <= nbig);
        prop_assert_eq!(nbig, big);
        prop_assert_eq!(nsmall, small);
    }
}

#[test]
fn random_cyclic_modules_have_herbrand_quotient_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..60 {
        let (g, p) = [(2, 2), (3, 3), (5, 5)][k % 3];
        let m = CyclicModule::random_finite(&mut rng, g, 1 + k % 2, p, 1 + (k as u32 % 3)).unwrap();
        let c = m.cohomology().unwrap();
        assert!(c.herbrand_trivial(), "h1 = {}, h2 = {}", c.h1, c.h2);
    }
}

#[test]
fn gross_rows_sum_to_zero() {
    for name in ["q13", "q257"] {
        let cf = CertifiedField::load(name).unwrap();
        let g = gross_matrix_at_least(&cf, 12).unwrap();
        let m = ipow(g.p, g.precision) as u128;
        for r in &g.rows {
            assert_eq!(r.iter().fold(0u128, |a, &x| (a + x as u128) % m), 0, "{name}");
        }
    }
}
