//! The verification suite: one check per acceptance criterion, shared by the CLI and tests.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capitulation::{chevalley, m_bound, norm_index, t_w, Extension, Layer};
use crate::cohomology::CyclicModule;
use crate::context::CertifiedField;
use crate::error::Result;
use crate::gross::gross_defect;
use crate::kummer::SelmerSubspace;
use crate::numfield::{is_pth_power, FieldElement};
use crate::symbols::{tate_kernel, SymbolTable};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

pub const CRITERIA: &[(u32, &str)] = &[
    (1, "product formula"),
    (2, "Steinberg and antisymmetry"),
    (3, "dimension of U^S (F^x)^p / (F^x)^p"),
    (4, "splitting of 3 in Q(sqrt 257, sqrt -3)"),
    (5, "Gross defect"),
    (6, "norm index equals p^t_W"),
    (7, "Tate kernel certification"),
    (8, "Vandiver descent"),
    (9, "Herbrand quotient"),
    (10, "Chevalley exactness"),
];

const SYMBOL_FIELDS: [&str; 3] = ["qzeta3", "qzeta9", "qzeta5"];

pub fn run(id: u32, seed: u64, precision: Option<u32>) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown criterion", |(_, n)| n);
    let start = Instant::now();
    let out = match id {
        1 => product_formula(seed, precision, 1000),
        2 => steinberg(seed, precision, 500),
        3 => dimension_identity(),
        4 => splitting_257(),
        5 => gross(precision.unwrap_or(30)),
        6 => theorem_equality(precision, 20),
        7 => tate_kernels(precision),
        8 => vandiver(precision),
        9 => herbrand(seed, 100),
        10 => chevalley_residuals(precision),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name: name.into(), pass, detail, millis: start.elapsed().as_millis() }
}

pub fn run_all(seed: u64, precision: Option<u32>) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run(*id, seed, precision)).collect()
}

fn random_nonzero(cf: &CertifiedField, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let bound = [3, 10, 40][rng.gen_range(0..3)];
        let mut x = cf.nf.random_small(rng, bound);
        if rng.gen_range(0..4) == 0 {
            // Mix in S-units so the wild places see more than p-adic units.
            let g = &cf.sunits.basis()[rng.gen_range(0..cf.sunits.basis().len())];
            x = cf.nf.mul(&x, g);
        }
        if !cf.nf.is_zero(&x) {
            return x;
        }
    }
}

type Check = Result<(bool, String)>;

fn product_formula(seed: u64, precision: Option<u32>, pairs: usize) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for name in SYMBOL_FIELDS {
        let cf = CertifiedField::load(name)?;
        let table = SymbolTable::build(&cf, precision, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let mut bad = 0;
        for _ in 0..pairs {
            let a = random_nonzero(&cf, &mut rng);
            let b = random_nonzero(&cf, &mut rng);
            if table.product_formula(&cf, &a, &b)?.residual != 0 {
                bad += 1;
            }
        }
        ok &= bad == 0;
        details.push(format!("{name}: {bad}/{pairs} failures"));
    }
    Ok((ok, details.join("; ")))
}

fn steinberg(seed: u64, precision: Option<u32>, samples: usize) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for name in SYMBOL_FIELDS {
        let cf = CertifiedField::load(name)?;
        let nf = &cf.nf;
        let table = SymbolTable::build(&cf, precision, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f3);
        let (mut st_bad, mut anti_bad, mut done) = (0, 0, 0);
        while done < samples {
            let a = random_nonzero(&cf, &mut rng);
            let one_minus = nf.sub(&nf.one(), &a);
            if nf.is_zero(&one_minus) {
                continue;
            }
            done += 1;
            if table.local_symbols(&cf, &a, &one_minus)?.iter().any(|v| v.value != 0) {
                st_bad += 1;
            }
            let b = random_nonzero(&cf, &mut rng);
            let ab = table.local_symbols(&cf, &a, &b)?;
            let ba = table.local_symbols(&cf, &b, &a)?;
            if ab.len() != ba.len() || ab.iter().zip(&ba).any(|(x, y)| x.place != y.place || (x.value + y.value) % cf.p != 0) {
                anti_bad += 1;
            }
        }
        ok &= st_bad == 0 && anti_bad == 0;
        details.push(format!("{name}: Steinberg {st_bad}/{samples}, antisymmetry {anti_bad}/{samples} failures"));
    }
    Ok((ok, details.join("; ")))
}

fn dimension_identity() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, want) in [("qzeta3", 2), ("qzeta9", 4), ("qzeta5", 3)] {
        let cf = CertifiedField::load(name)?;
        let d = SelmerSubspace::sunits(&cf)?.dim();
        let formula = 1 + cf.nf.signature.1;
        ok &= d == want && d == formula;
        details.push(format!("{name}: dim {d}, 1+r2 = {formula}"));
    }
    Ok((ok, details.join("; ")))
}

fn splitting_257() -> Check {
    let cf = CertifiedField::load("q257")?;
    let s = cf.s();
    let ok = s.len() == 1 && s[0].e == 2 && s[0].f == 2;
    Ok((ok, s.iter().map(|pr| format!("{} e={} f={}", pr.label(), pr.e, pr.f)).collect::<Vec<_>>().join(", ")))
}

fn gross(n: u32) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, _) in crate::catalog::FIELDS {
        let cf = CertifiedField::load(name)?;
        let d = gross_defect(&cf, n)?;
        ok &= d.delta_upper == 0;
        details.push(format!("{name}: |S|={} delta_upper={} (precision {})", d.s, d.delta_upper, d.precision));
    }
    Ok((ok, details.join("; ")))
}

/// Radicands over Q(zeta_3) with small norm, skipping cubes and repeated Kummer lines.
pub fn sample_radicands(cf: &CertifiedField, count: usize) -> Result<Vec<FieldElement>> {
    let nf = &cf.nf;
    let mut out: Vec<FieldElement> = Vec::new();
    'search: for r in 1i64..=12 {
        for a in -r..=r {
            for b in -r..=r {
                if a.abs().max(b.abs()) != r {
                    continue;
                }
                let x = nf.elem(&[a, b]);
                if nf.is_zero(&x) || is_pth_power(nf, &x, cf.p)?.is_some() {
                    continue;
                }
                let mut fresh = true;
                for y in &out {
                    if SelmerSubspace::span(cf, &[x.clone(), y.clone()])?.dim() < 2 {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    out.push(x);
                    if out.len() == count {
                        break 'search;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn theorem_equality(precision: Option<u32>, count: usize) -> Check {
    let cf = CertifiedField::load("qzeta3")?;
    let table = SymbolTable::build(&cf, precision, 1)?;
    let us = SelmerSubspace::sunits(&cf)?;
    let mut agree = 0;
    let mut nontrivial = 0;
    let mut bad = Vec::new();
    let rads = sample_radicands(&cf, count)?;
    for b in &rads {
        let ext = Extension::radical(cf.clone(), b.clone())?;
        let t = t_w(&ext, &us, "units")?;
        let ni = norm_index(&ext, &us, Some(&table))?;
        if ni.exponent == Some(t.t_w) {
            agree += 1;
        } else {
            bad.push(ext.name.clone());
        }
        if t.t_w > 0 {
            nontrivial += 1;
        }
    }
    let ok = rads.len() >= count && bad.is_empty();
    Ok((ok, format!("{agree}/{} radicands agree ({nontrivial} with t_W > 0){}", rads.len(), if bad.is_empty() { String::new() } else { format!("; mismatches: {}", bad.join(", ")) })))
}

fn tate_kernels(precision: Option<u32>) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["qzeta3", "qzeta9"] {
        let cf = CertifiedField::load(name)?;
        let m = m_bound(&cf, 1);
        let table = SymbolTable::build(&cf, precision, 1)?;
        let tk = tate_kernel(&cf, &table)?;
        ok &= m.m_n == Some(0) && tk.certificate == "exact" && tk.dim == 1 + cf.nf.signature.1 && tk.equals_sunits;
        details.push(format!(
            "{name}: m_1={:?}, dim {} ({}), equals U^S: {}",
            m.m_n, tk.dim, tk.certificate, tk.equals_sunits
        ));
    }
    Ok((ok, details.join("; ")))
}

fn vandiver(precision: Option<u32>) -> Check {
    let ext = Extension::load("layer_zeta9")?;
    let layer = Layer::load(&ext)?;
    let f = &ext.base;
    let e = &layer.top.nf;
    let one_minus = |nf: &crate::numfield::NumberField| nf.sub(&nf.one(), &nf.theta());
    let norm_ok = layer.norm_down(f, &one_minus(e))? == one_minus(&f.nf);
    let table = SymbolTable::build(f, precision, 1)?;
    let c = chevalley(&ext, &layer, &table)?;
    let one = num_bigint::BigInt::from(1);
    let ok = norm_ok && c.coker_fi == one && c.ker_fi == one;
    Ok((ok, format!("N(1 - zeta_9) = 1 - zeta_3: {norm_ok}; coker f_i = {}, ker f_i = {}", c.coker_fi, c.ker_fi)))
}

fn herbrand(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for k in 0..count {
        let (order, p) = if k % 2 == 0 { (3, 3) } else { (5, 5) };
        let (blocks, a) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let m = CyclicModule::random_finite(&mut rng, order, blocks, p, a)?;
        if !m.cohomology()?.herbrand_trivial() {
            bad += 1;
        }
    }
    let ext = Extension::load("layer_zeta9")?;
    let c = Layer::load(&ext)?.cohomology()?;
    let ok = bad == 0 && c.herbrand_trivial();
    Ok((ok, format!("{bad}/{count} random modules fail; Q(zeta_9)/Q(zeta_3) S-units: |H^1| = {}, |H^2| = {}", c.h1, c.h2)))
}

fn chevalley_residuals(precision: Option<u32>) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, _) in crate::catalog::EXTENSIONS {
        let ext = Extension::load(name)?;
        if ext.spec.top.is_none() {
            continue;
        }
        let layer = Layer::load(&ext)?;
        let table = SymbolTable::build(&ext.base, precision, 1)?;
        let c = chevalley(&ext, &layer, &table)?;
        ok &= c.exact;
        details.push(format!(
            "{name}: ker f1S={} H1={} p^t={} coker f1S={} coker f_i={} H^dual={} residual {}",
            c.ker_f1s, c.h1, c.ramification_term, c.coker_f1s, c.coker_fi, c.h_dual, c.residual
        ));
    }
    Ok((ok, details.join("; ")))
}
