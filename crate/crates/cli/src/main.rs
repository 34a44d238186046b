use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use kummerlab::capitulation::{capitulation_report, norm_index, t_w, w_lookup, Extension};
use kummerlab::gross::{gross_defect, gross_kernel_mod};
use kummerlab::kummer::SelmerSubspace;
use kummerlab::numfield::{is_pth_power, Bundle, FieldElement};
use kummerlab::suite;
use kummerlab::symbols::{tate_kernel, SymbolTable};
use kummerlab::{CertifiedField, Error, Result};

#[derive(Parser)]
#[command(name = "kummerlab", version, about = "Hilbert symbols, Gross kernels and capitulation bounds for cyclic degree-p Kummer extensions")]
struct Cli {
    /// p-adic working precision (digits); defaults per field.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field bundle inspection.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Gross rank defect, and optionally the kernel mod p^n.
    Gross {
        #[arg(long)]
        field: String,
        #[arg(long)]
        kernel_mod: Option<u32>,
    },
    /// Local symbols for pairs read from CSV lines `a_coords,b_coords`.
    Symbols {
        #[arg(long)]
        field: String,
        #[arg(long)]
        pairs: String,
    },
    /// The Tate kernel C_F.
    TateKernel {
        #[arg(long)]
        field: String,
    },
    /// Capitulation report for an extension.
    Cap {
        /// Base field; must match the extension's base when both are given.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        ext: String,
        /// Subgroup W of B_F for an extra t_W and norm index: units, tate, bf.
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value_t = 2)]
        i_from: u64,
        #[arg(long, default_value_t = 50)]
        i_to: u64,
    },
    /// Radicands of small norm with nontrivial bounds p^t_W.
    Sweep {
        #[arg(long)]
        field: String,
        #[arg(long)]
        radicand_norm_max: u64,
        /// Coefficient box over the integral basis; derived from the norm bound by default.
        #[arg(long)]
        r#box: Option<i64>,
        #[arg(long, default_value = "units")]
        w: String,
    },
    /// Runs the acceptance battery.
    VerifySuite {
        #[arg(long, default_value = "default")]
        catalog: String,
        /// Criteria to run, e.g. 1,5,10.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    Info { field: String },
}

fn coords(cf: &CertifiedField, x: &FieldElement) -> Vec<String> {
    Bundle::coords(&cf.nf, x)
}

fn space_json(cf: &CertifiedField, s: &SelmerSubspace) -> Value {
    json!(s.basis.iter().map(|b| coords(cf, b)).collect::<Vec<_>>())
}

fn parse_coords(cf: &CertifiedField, text: &str) -> Result<FieldElement> {
    let parts: Vec<String> = text.split_whitespace().map(String::from).collect();
    let x = cf.element(&parts)?;
    if cf.nf.is_zero(&x) {
        return Err(Error::ZeroElement);
    }
    Ok(x)
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.cmd {
        Cmd::Field { cmd: FieldCmd::Info { field } } => {
            let cf = CertifiedField::load(field)?;
            Ok(serde_json::to_string_pretty(&cf.info())?)
        }
        Cmd::Gross { field, kernel_mod } => {
            let cf = CertifiedField::load(field)?;
            let d = gross_defect(&cf, cli.precision.unwrap_or(30))?;
            let kernel = match kernel_mod {
                Some(n) => Some(gross_kernel_mod(&cf, *n)?),
                None => None,
            };
            Ok(serde_json::to_string_pretty(&json!({
                "field": d.field,
                "s": d.s,
                "rank": d.rank,
                "delta_upper": d.delta_upper,
                "certificate": d.certificate,
                "precision": d.precision,
                "invariant_valuations": d.invariant_valuations,
                "kernel_mod": kernel.as_ref().map(|k| k.modulus_exponent),
                "kernel_generators": kernel.map(|k| k.basis),
            }))?)
        }
        Cmd::Symbols { field, pairs } => {
            let cf = CertifiedField::load(field)?;
            let table = SymbolTable::build(&cf, cli.precision, cli.seed)?;
            let text = std::fs::read_to_string(pairs)?;
            let lines: Vec<(usize, &str)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .collect();
            let rows: Vec<String> = lines
                .par_iter()
                .enumerate()
                .map(|(k, (ln, line))| {
                    let (a, b) = line
                        .split_once(',')
                        .ok_or_else(|| Error::BadInput(format!("line {}: expected `a_coords,b_coords`", ln + 1)))?;
                    let (a, b) = (parse_coords(&cf, a)?, parse_coords(&cf, b)?);
                    let pf = table.product_formula(&cf, &a, &b)?;
                    let mut out = String::new();
                    for v in &pf.values {
                        out.push_str(&format!("{}\t{}\t{}\n", k + 1, v.place, v.value));
                    }
                    out.push_str(&format!("{}\tresidual\t{}\n", k + 1, pf.residual));
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            Ok(format!("pair\tplace\tvalue\n{}", rows.concat()).trim_end().to_string())
        }
        Cmd::TateKernel { field } => {
            let cf = CertifiedField::load(field)?;
            let table = SymbolTable::build(&cf, cli.precision, cli.seed)?;
            let tk = tate_kernel(&cf, &table)?;
            Ok(serde_json::to_string_pretty(&json!({
                "field": cf.name(),
                "dim": tk.dim,
                "expected": tk.expected,
                "certificate": tk.certificate,
                "bf_dim": tk.bf_dim,
                "equals_sunits": tk.equals_sunits,
                "basis": space_json(&cf, &tk.space),
            }))?)
        }
        Cmd::Cap { field, ext, w, i_from, i_to } => {
            let spec = kummerlab::catalog::load_extension(ext)?;
            let base = CertifiedField::load(field.as_deref().unwrap_or(&spec.base))?;
            if field.is_some() {
                let named = CertifiedField::load(&spec.base)?;
                if named.nf.poly != base.nf.poly {
                    return Err(Error::BadInput(format!("--field does not match the extension base {}", spec.base)));
                }
            }
            let ext = Extension::new(spec, base)?;
            let table = SymbolTable::build(&ext.base, cli.precision, cli.seed)?;
            let report = capitulation_report(&ext, &table, *i_from, *i_to)?;
            let mut out = serde_json::to_value(&report)?;
            if let Some(name) = w {
                let sub = w_lookup(name)?;
                let space = sub.space(&ext.base, &table)?;
                let b = t_w(&ext, &space, sub.name())?;
                let ni = norm_index(&ext, &space, Some(&table))?;
                out["selected"] = json!({
                    "w": sub.name(),
                    "description": sub.description(),
                    "basis": space_json(&ext.base, &space),
                    "bound": b,
                    "norm_index": ni,
                });
            }
            Ok(serde_json::to_string_pretty(&out)?)
        }
        Cmd::Sweep { field, radicand_norm_max, r#box, w } => sweep(cli, field, *radicand_norm_max, *r#box, w),
        Cmd::VerifySuite { catalog, only } => {
            if catalog != "default" {
                return Err(Error::BadInput(format!("unknown catalog {catalog:?}; only \"default\" ships")));
            }
            let ids: Vec<u32> = if only.is_empty() { suite::CRITERIA.iter().map(|(i, _)| *i).collect() } else { only.clone() };
            let results: Vec<suite::CriterionResult> = ids.par_iter().map(|&id| suite::run(id, cli.seed, cli.precision)).collect();
            let all = results.iter().all(|r| r.pass);
            let text = serde_json::to_string_pretty(&json!({
                "catalog": catalog,
                "all_pass": all,
                "results": results.iter().map(|r| json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail})).collect::<Vec<_>>(),
            }))?;
            if !all {
                println!("{text}");
                return Err(Error::Certification("verification suite has failures".into()));
            }
            Ok(text)
        }
    }
}

fn sweep(cli: &Cli, field: &str, norm_max: u64, r: Option<i64>, w: &str) -> Result<String> {
    let cf = CertifiedField::load(field)?;
    let n = cf.nf.n;
    let radius = r.unwrap_or_else(|| {
        let mut r = 1i64;
        while (r + 1).pow(n as u32) <= norm_max as i64 && r < 12 {
            r += 1;
        }
        r
    });
    let width = (2 * radius + 1) as u64;
    let total = width.checked_pow(n as u32).filter(|&t| t <= 2_000_000).ok_or_else(|| Error::BadInput("coefficient box too large".into()))?;
    let bound = BigRational::from_integer(BigInt::from(norm_max));
    let candidates: Vec<(BigRational, FieldElement)> = (0..total)
        .into_par_iter()
        .filter_map(|t| {
            let mut x = t;
            let c: Vec<BigRational> = (0..n)
                .map(|_| {
                    let v = (x % width) as i64 - radius;
                    x /= width;
                    BigRational::from_integer(v.into())
                })
                .collect();
            let b = cf.nf.from_ib(&c);
            if cf.nf.is_zero(&b) {
                return None;
            }
            let nm = cf.nf.norm(&b).abs();
            (nm <= bound).then_some((nm, b))
        })
        .collect();
    let mut candidates = candidates;
    candidates.sort_by(|(n1, b1), (n2, b2)| n1.cmp(n2).then_with(|| coords(&cf, b1).cmp(&coords(&cf, b2))));
    let exts: Vec<Option<Extension>> = candidates
        .par_iter()
        .map(|(_, b)| match is_pth_power(&cf.nf, b, cf.p) {
            Ok(None) => Extension::radical(cf.clone(), b.clone()).ok(),
            _ => None,
        })
        .collect();
    // One radicand per Kummer line, first in (norm, coordinates) order.
    let mut kept: Vec<Extension> = Vec::new();
    for e in exts.into_iter().flatten() {
        let key: Vec<String> = e.data.ram_tame.iter().map(|v| v.label()).collect();
        let mut fresh = true;
        for k in kept.iter().filter(|k| k.data.ram_tame.iter().map(|v| v.label()).collect::<Vec<_>>() == key) {
            if SelmerSubspace::span(&cf, &[e.radicand().clone(), k.radicand().clone()])?.dim() < 2 {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push(e);
        }
    }
    let table = SymbolTable::build(&cf, cli.precision, cli.seed)?;
    let sub = w_lookup(w)?;
    let space = sub.space(&cf, &table)?;
    let rows: Vec<Option<Value>> = kept
        .par_iter()
        .map(|e| {
            let b = t_w(e, &space, sub.name())?;
            if b.t_w == 0 {
                return Ok(None);
            }
            let ni = norm_index(e, &space, Some(&table))?;
            Ok(Some(json!({
                "radicand": coords(&cf, e.radicand()),
                "radicand_poly": cf.nf.display(e.radicand()),
                "norm": cf.nf.norm(e.radicand()).to_string(),
                "ram_tame": e.data.ram_tame.iter().map(|v| v.label()).collect::<Vec<_>>(),
                "t_w": b.t_w,
                "bound": b.bound.to_string(),
                "norm_index_exponent": ni.exponent,
                "equality": b.equality,
            })))
        })
        .collect::<Result<_>>()?;
    let found: Vec<Value> = rows.into_iter().flatten().collect();
    Ok(serde_json::to_string_pretty(&json!({
        "field": cf.name(),
        "w": sub.name(),
        "radicand_norm_max": norm_max,
        "box": radius,
        "kummer_lines": kept.len(),
        "nontrivial": found,
    }))?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
