// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use formclass::modfuncs::conjugate_value;
use formclass::{
    enumerate_classes, equivalence_harness, factor_int, minpoly_over_q, poly_disc, poly_eval_check, sqrt_negative,
    verify_kronecker, BigReal, ClassGroup, IntPoly, InvariantSpec, LevelStructure, Order, Result,
};
use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};

use crate::cache;
use crate::config::{OutputFormat, RunConfig};
use crate::Exit;

fn emit(cfg: &RunConfig, value: &Value, text: impl FnOnce() -> String) {
    match cfg.output_format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(value).expect("values serialize")),
        OutputFormat::Text => print!("{}", text()),
    }
}

fn setup(disc: &BigInt, n: u64, subgroup: &str) -> Result<(Order, LevelStructure)> {
    let order = Order::from_disc(disc)?;
    let level = LevelStructure::parse(n, subgroup)?;
    Ok((order, level))
}

fn level_summary(level: &LevelStructure) -> String {
    let g = level.g().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
    format!("N={}, G={{{g}}}", level.n())
}

pub fn classgroup(cfg: &RunConfig, disc: &BigInt, n: u64, subgroup: &str, table: bool) -> Result<Exit> {
    let (order, level) = setup(disc, n, subgroup)?;
    let mut cg = enumerate_classes(&order, &level)?;
    if table {
        cg = cg.with_table()?;
    }
    emit(cfg, &cg.to_json(), || {
        let mut out = format!("D={disc}, {}: {} classes\n", level_summary(&level), cg.len());
        for (i, q) in cg.reps().iter().enumerate() {
            let _ = writeln!(out, "  [{i}] {q}");
        }
        if let Some(t) = cg.table() {
            out.push_str("composition table:\n");
            for row in t {
                let cells: Vec<String> = row.iter().map(|k| format!("{k:>3}")).collect();
                let _ = writeln!(out, "  {}", cells.join(""));
            }
        }
        out
    });
    Ok(Exit::Ok)
}

fn factorization_json(value: &BigInt, cfg: &RunConfig) -> Value {
    let fac = factor_int(value, Some(cfg.factor_budget()));
    let pairs = |v: &[(BigInt, u32)]| v.iter().map(|(p, e)| json!([p.to_string(), e.to_string()])).collect::<Vec<_>>();
    json!({
        "value": value.to_string(),
        "sign": if value.sign() == Sign::Minus { "-1" } else { "1" },
        "factors": pairs(&fac.factors),
        "unfactored": pairs(&fac.remaining),
        "complete": fac.complete,
    })
}

/// Re-checks a cached polynomial against a freshly evaluated generator.
fn cached_output_is_valid(output: &Value, cg: &ClassGroup, spec: &InvariantSpec, cfg: &RunConfig) -> Result<bool> {
    let expected = json!({
        "disc": cg.order().d.to_string(),
        "N": cg.level().n().to_string(),
        "G": cg.level().g().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    });
    for key in ["disc", "N", "G"] {
        if output.get(key) != expected.get(key) {
            return Ok(false);
        }
    }
    let Some(coeffs) = output.get("coefficients").and_then(Value::as_array) else { return Ok(false) };
    let Some(coeffs) = coeffs.iter().map(|c| c.as_str()?.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>() else {
        return Ok(false);
    };
    let Some(digits) = output.get("digits_used").and_then(Value::as_str).and_then(|s| s.parse::<u32>().ok()) else {
        return Ok(false);
    };
    let f = IntPoly::new(coeffs);
    let ctx = cfg.ctx().with_digits(digits);
    let alpha = &sqrt_negative(&cg.order().dk, &ctx)? * &conjugate_value(cg, spec, 0, &ctx)?;
    let limit = BigReal::pow10(40 - ctx.digits() as i64, ctx.bits());
    Ok(poly_eval_check(&f, &alpha, &ctx) <= limit)
}

fn minpoly_text(output: &Value) -> String {
    let s = |k: &str| output.get(k).and_then(Value::as_str).unwrap_or("?").to_string();
    let coeffs: Vec<BigInt> = output["coefficients"]
        .as_array()
        .map(|a| a.iter().filter_map(|c| c.as_str()?.parse().ok()).collect())
        .unwrap_or_default();
    let mut out = format!("D={}, N={}: degree {}\n", s("disc"), s("N"), s("degree"));
    let _ = writeln!(out, "F(X) = {}", IntPoly::new(coeffs));
    let _ = writeln!(out, "digits used: {}, rounding residual: {}", s("digits_used"), s("residual"));
    let disc = &output["poly_discriminant"];
    let mut parts: Vec<String> = Vec::new();
    for key in ["factors", "unfactored"] {
        for pe in disc[key].as_array().into_iter().flatten() {
            let p = pe[0].as_str().unwrap_or("?");
            match pe[1].as_str() {
                Some("1") => parts.push(p.to_string()),
                Some(e) => parts.push(format!("{p}^{e}")),
                None => {}
            }
        }
    }
    let sign = if disc["sign"].as_str() == Some("-1") { "-" } else { "" };
    let _ = writeln!(out, "disc(F) = {sign}{}", parts.join(" * "));
    if disc["complete"].as_bool() != Some(true) {
        out.push_str("(factorization incomplete: last factors are composite)\n");
    }
    out
}

pub fn minpoly(cfg: &RunConfig, disc: &BigInt, n: u64, subgroup: &str) -> Result<Exit> {
    let (order, level) = setup(disc, n, subgroup)?;
    let cg = enumerate_classes(&order, &level)?;
    let spec = InvariantSpec::for_level(&level)?;
    let path = cfg.cache_dir.as_ref().map(|dir| cache::entry_path(dir, disc, &level));
    if let Some(output) = path.as_deref().and_then(cache::load) {
        if cached_output_is_valid(&output, &cg, &spec, cfg)? {
            emit(cfg, &output, || minpoly_text(&output));
            return Ok(Exit::Ok);
        }
    }
    let value = minpoly_over_q(&cg, &spec, &cfg.ctx())?;
    let mut output = value.to_json();
    let fields = output.as_object_mut().expect("object");
    fields.insert("disc".into(), Value::from(disc.to_string()));
    fields.insert("N".into(), Value::from(level.n().to_string()));
    fields.insert("G".into(), json!(level.g().iter().map(|t| t.to_string()).collect::<Vec<_>>()));
    let pd = poly_disc(&value.minpoly)?;
    let factored = factorization_json(&pd, cfg);
    let complete = factored["complete"].as_bool() == Some(true);
    fields.insert("poly_discriminant".into(), factored);
    if let (Some(path), true) = (&path, complete) {
        if let Err(e) = cache::store(path, cfg.digits, &output) {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
    }
    emit(cfg, &output, || minpoly_text(&output));
    Ok(Exit::Ok)
}

pub fn primes(cfg: &RunConfig, n: u64, level_n: u64, subgroup: &str, bound: u64) -> Result<Exit> {
    let level = LevelStructure::parse(level_n, subgroup)?;
    let report = equivalence_harness(n, &level, bound, &cfg.ctx())?;
    emit(cfg, &report.to_json(), || {
        let mut out = format!(
            "x^2+{n}y^2, {}, primes below {bound}: {} agree, {} excluded, {} disagreements\n",
            level_summary(&level),
            report.agree,
            report.excluded.len(),
            report.disagreements.len()
        );
        let _ = writeln!(out, "F(X) = {}", report.minpoly.minpoly);
        for (p, brute, crit) in &report.disagreements {
            let _ = writeln!(out, "  p={p}: brute force {brute}, criterion {crit}");
        }
        let shown: Vec<String> = report.represented.iter().take(20).map(|(p, x, y)| format!("{p}=({x},{y})")).collect();
        let _ = writeln!(
            out,
            "represented: {}{}",
            shown.join(" "),
            if report.represented.len() > 20 { " ..." } else { "" }
        );
        out
    });
    Ok(if report.disagreements.is_empty() { Exit::Ok } else { Exit::Verification })
}

pub fn kronecker(cfg: &RunConfig, disc: &BigInt, n: u64, subgroup: &str, p: u64) -> Result<Exit> {
    let (order, level) = setup(disc, n, subgroup)?;
    let report = verify_kronecker(&order, &level, p, &cfg.ctx())?;
    emit(cfg, &report.to_json(), || {
        let mut out = format!("D={disc}, {}, p={p} (s={}):\n", level_summary(&level), report.s);
        let _ = writeln!(out, "characteristic polynomial: {}", report.charpoly);
        let _ = writeln!(
            out,
            "rounding residual: {}, digits used: {}",
            report.residual.to_sci_string(2),
            report.digits_used
        );
        let _ = writeln!(out, "congruence holds: {}", report.verdict);
        out
    });
    Ok(if report.verdict { Exit::Ok } else { Exit::Verification })
}
