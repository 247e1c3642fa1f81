use crate::args::*;
use crate::error::CliError;
use experiments::{
    acceptance_suite, negative_controls, run_acceptance, run_all, run_criterion, CriterionResult, ExperimentConfig,
    ExperimentReport,
};
use num_complex::Complex64 as C;
use operator::{build_sequence_matrix, KernelSpec, TruncatedOperator};
use padic_core::{BigRational, Prime, UnitCharacter};
use qspecial::{e_func, hahn_exton_j, k_mahler, Approx, EntireFunctionHandle, QBase};
use serde_json::{json, Value};
use spectral::{eigenvalues_with, find_zeros, fredholm_det_truncated, Precision, Spectrum};
use std::fmt::Write;
use zeta::{z0_profile, zeta, ZetaMode, ZetaValue};

/// Maximum truncation size.
pub const MAX_N: usize = 200;
pub const DEFAULT_N: usize = 60;

/// What a command produced, before serialization.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub pass: bool,
    pub result: Value,
    pub csv: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

/// `"re"` or `"re,im"`.
pub fn parse_complex(s: &str, flag: &str) -> Result<C, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| usage(format!("--{flag}: {t:?} is not a number")));
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(usage(format!("--{flag}: expected re or re,im, got {s:?}"))),
    }
}

/// Points separated by `;`.
pub fn parse_points(s: &str, flag: &str) -> Result<Vec<C>, CliError> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(|t| parse_complex(t, flag)).collect()
}

/// Integers or fractions `a/b`, constant term first.
pub fn parse_coeffs(s: &str) -> Result<Vec<BigRational>, CliError> {
    let v: Vec<BigRational> = s
        .split(',')
        .map(str::trim)
        .map(|t| t.parse::<BigRational>().map_err(|_| usage(format!("--Q: {t:?} is not a rational number"))))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(usage("--Q: no coefficients"));
    }
    Ok(v)
}

/// Character `"level,index"`; trivial when absent.
pub fn parse_chi(p: Prime, s: Option<&str>) -> Result<UnitCharacter, CliError> {
    let Some(s) = s else {
        return Ok(UnitCharacter::trivial(p)?);
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [level, index] = parts.as_slice() else {
        return Err(usage(format!("--chi: expected level,index, got {s:?}")));
    };
    let level: u32 = level.parse().map_err(|_| usage(format!("--chi: bad level {level:?}")))?;
    let index: u64 = index.parse().map_err(|_| usage(format!("--chi: bad index {index:?}")))?;
    Ok(UnitCharacter::from_level_index(p, level, index)?)
}

fn pair(z: C) -> Value {
    json!([z.re, z.im])
}

fn coeff_strings(q: &[BigRational]) -> Vec<String> {
    q.iter().map(|c| c.to_string()).collect()
}

fn chi_json(chi: &UnitCharacter) -> Value {
    json!({ "conductor": chi.conductor(), "level": chi.level(), "index": chi.descriptor().index })
}

pub fn precision(g: &GlobalArgs) -> Precision {
    match g.precision {
        Some(PrecisionMode::Double) => Precision::Double,
        Some(PrecisionMode::DoubleDouble) | None => Precision::DoubleDouble,
    }
}

pub fn cmd_zeta(a: &ZetaArgs) -> Result<Outcome, CliError> {
    let p = Prime::new(need(a.p, "p")?)?;
    let q = parse_coeffs(&need(a.q.clone(), "Q")?)?;
    let chi = parse_chi(p, a.chi.as_deref())?;
    if !a.exact && a.s.is_none() {
        return Err(usage("give --s re,im or --exact"));
    }
    let mut result = json!({ "p": p.get(), "Q": coeff_strings(&q), "chi": chi_json(&chi) });
    let mut csv = String::from("part,index,re,im\n");
    if a.exact {
        let ZetaValue::Exact(r) = zeta(&q, &chi, ZetaMode::Exact)? else {
            unreachable!("exact mode returns a rational function")
        };
        result["exact"] = serde_json::to_value(&r).expect("plain data");
        result["text"] = json!(r.to_string());
        for (part, poly) in [("numerator", r.numerator()), ("denominator", r.denominator())] {
            for (i, c) in poly.coeffs().iter().enumerate() {
                let _ = writeln!(csv, "{part},{i},{c},");
            }
        }
    }
    if let Some(s) = &a.s {
        let s = parse_complex(s, "s")?;
        let ZetaValue::Numeric(v) = zeta(&q, &chi, ZetaMode::Numeric(s))? else {
            unreachable!("numeric mode returns a number")
        };
        result["s"] = pair(s);
        result["value"] = json!(v);
        let _ = writeln!(csv, "value,0,{:e},{:e}", v[0], v[1]);
        if a.profile {
            let prof = z0_profile(&q, &chi, ZetaMode::Numeric(s))?;
            let coeffs: Vec<Value> = prof.z0_at(s).into_iter().map(|(m, c)| json!({ "power": m, "value": pair(c) })).collect();
            result["z0"] = Value::Array(coeffs);
            result["stabilization"] = json!([prof.m_minus, prof.m_plus]);
        }
    } else if a.profile {
        let prof = z0_profile(&q, &chi, ZetaMode::Exact)?;
        result["profile"] = serde_json::to_value(&prof).expect("plain data");
    }
    Ok(Outcome { command: "zeta", pass: true, result, csv })
}

pub struct Kernel {
    pub spec: KernelSpec,
    pub n: usize,
}

impl Kernel {
    pub fn from_args(k: &KernelArgs) -> Result<Self, CliError> {
        let p = Prime::new(need(k.p, "p")?)?;
        let q = parse_coeffs(&need(k.q.clone(), "Q")?)?;
        let r = q.iter().rposition(|c| c != &BigRational::from_integer(0.into())).unwrap_or(0) as u32;
        // defaults: l = deg Q, d = l
        let l = k.l.unwrap_or(r);
        let d = k.d.unwrap_or(l as f64);
        let chi = parse_chi(p, k.chi.as_deref())?;
        let s = parse_complex(&need(k.s.clone(), "s")?, "s")?;
        let n = k.n.unwrap_or(DEFAULT_N);
        if n == 0 || n > MAX_N {
            return Err(usage(format!("--N must be in 1..={MAX_N}, got {n}")));
        }
        Ok(Kernel { spec: KernelSpec::new(d, l, q, chi, s)?, n })
    }

    pub fn json(&self) -> Value {
        let sp = &self.spec;
        json!({
            "p": sp.p.get(), "d": sp.d, "l": sp.l, "Q": coeff_strings(&sp.q_coeffs),
            "chi": chi_json(&sp.chi), "s": pair(sp.s), "N": self.n,
        })
    }

    pub fn matrix(&self) -> Result<TruncatedOperator, CliError> {
        Ok(build_sequence_matrix(&self.spec, self.n)?)
    }
}

fn spectrum_of(k: &Kernel, prec: Precision) -> Result<(TruncatedOperator, Spectrum), CliError> {
    let t = k.matrix()?;
    let sp = eigenvalues_with(&t, prec)?;
    Ok((t, sp))
}

pub fn cmd_spectrum(a: &SpectrumArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let k = Kernel::from_args(&a.kernel)?;
    let (t, sp) = spectrum_of(&k, precision(g))?;
    let count = a.count.unwrap_or(sp.eigenvalues.len()).min(sp.eigenvalues.len());
    let mut csv = String::from("index,re,im,residual\n");
    for i in 0..count {
        let z = sp.eigenvalues[i];
        let _ = writeln!(csv, "{i},{:e},{:e},{:e}", z.re, z.im, sp.residuals[i]);
    }
    let mut result = json!({
        "kernel": k.json(),
        "precision": sp.precision,
        "eigenvalues": sp.eigenvalues[..count].iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "residuals": &sp.residuals[..count],
        "max_backward_error": sp.max_backward_error(),
        "tail_estimate": t.tail_estimate,
        "underflow_rows": t.underflow_rows,
        "underflow_flagged": t.underflow_flagged(),
        "provenance": t.provenance,
    });
    if a.matrix {
        result["matrix"] = serde_json::to_value(&t.entries).expect("plain data");
    }
    Ok(Outcome { command: "spectrum", pass: true, result, csv })
}

fn need_q(f: &FnArgs) -> Result<QBase, CliError> {
    Ok(QBase::new(parse_complex(&need(f.base.clone(), "q")?, "q")?)?)
}

/// The selected function as an evaluatable handle, with its parameters.
pub fn function_handle(f: &FnArgs, g: &GlobalArgs) -> Result<(EntireFunctionHandle, Value), CliError> {
    let kind = f.func.unwrap_or(FnKind::Kernel);
    Ok(match kind {
        FnKind::Kernel => {
            let k = Kernel::from_args(&f.kernel)?;
            let (_, sp) = spectrum_of(&k, precision(g))?;
            let bound = sp.max_backward_error();
            let h = EntireFunctionHandle::new("det(1 - u A_N)", move |u| {
                // product error grows with the number of factors
                let v = fredholm_det_truncated(&sp, u);
                Ok(Approx { value: v, err: v.norm() * bound * sp.eigenvalues.len() as f64 })
            });
            (h, json!({ "fn": "kernel", "kernel": k.json() }))
        }
        FnKind::J => {
            let a = parse_complex(&need(f.a.clone(), "a")?, "a")?;
            let q = need_q(f)?;
            let h = EntireFunctionHandle::new("J", move |u| hahn_exton_j(a, q, u)).with_param("a", a);
            (h, json!({ "fn": "J", "a": pair(a), "q": pair(q.get()) }))
        }
        FnKind::E => {
            let a = parse_complex(&need(f.a.clone(), "a")?, "a")?;
            let b = parse_complex(&need(f.b.clone(), "b")?, "b")?;
            let q = need_q(f)?;
            let h = EntireFunctionHandle::new("E", move |u| e_func(a, b, q, u)).with_param("a", a).with_param("b", b);
            (h, json!({ "fn": "E", "a": pair(a), "b": pair(b), "q": pair(q.get()) }))
        }
        FnKind::K => {
            let a = parse_complex(&need(f.a.clone(), "a")?, "a")?;
            let q = need_q(f)?;
            let d = need(f.kernel.d, "d")?;
            if d.fract() != 0.0 || d < 2.0 {
                return Err(usage(format!("--d for K must be an integer >= 2, got {d}")));
            }
            let d = d as u32;
            let h = EntireFunctionHandle::new("K", move |u| k_mahler(a, q, d, u)).with_param("a", a);
            (h, json!({ "fn": "K", "a": pair(a), "q": pair(q.get()), "d": d }))
        }
    })
}

pub fn cmd_charfn(a: &CharfnArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let points = match (&a.u, a.samples) {
        (Some(u), None) => parse_points(u, "u")?,
        (None, Some(m)) if m > 0 => {
            let r = a.radius.unwrap_or(1.0);
            (0..m).map(|k| C::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64)).collect()
        }
        (None, None) => return Err(usage("give --u points or --samples")),
        _ => return Err(usage("--u and --samples are exclusive, and --samples must be positive")),
    };
    let (h, mut result) = function_handle(&a.f, g)?;
    let mut csv = String::from("u_re,u_im,re,im,err\n");
    let mut samples = Vec::with_capacity(points.len());
    for u in points {
        let v = h.eval(u)?;
        let _ = writeln!(csv, "{:e},{:e},{:e},{:e},{:e}", u.re, u.im, v.value.re, v.value.im, v.err);
        samples.push(json!({ "u": pair(u), "value": pair(v.value), "err": v.err }));
    }
    result["samples"] = Value::Array(samples);
    Ok(Outcome { command: "charfn", pass: true, result, csv })
}

pub fn cmd_zeros(a: &ZerosArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let radius = need(a.radius, "radius")?;
    let (h, mut result) = function_handle(&a.f, g)?;
    let zs = find_zeros(&h, radius, g.tol.unwrap_or(1e-12))?;
    let mut csv = String::from("re,im,multiplicity,residual,clustered\n");
    for z in &zs.zeros {
        let _ = writeln!(csv, "{:e},{:e},{},{:e},{}", z.value.re, z.value.im, z.multiplicity, z.residual, z.clustered);
    }
    result["zeros"] = zs
        .zeros
        .iter()
        .map(|z| json!({ "value": pair(z.value), "multiplicity": z.multiplicity, "residual": z.residual, "clustered": z.clustered }))
        .collect();
    result["winding_number"] = json!(zs.count);
    result["radius"] = json!(zs.radius);
    result["certified"] = json!(zs.certified);
    Ok(Outcome { command: "zeros", pass: zs.certified, result, csv })
}

/// Applies `key=value` overrides to an experiment, typed by the existing field.
pub fn override_experiment(cfg: &ExperimentConfig, sets: &[(String, String)], strict: bool) -> Result<ExperimentConfig, CliError> {
    let mut v = toml::Value::try_from(cfg).map_err(|e| usage(e.to_string()))?;
    let t = v.as_table_mut().expect("an experiment is a table");
    for (key, raw) in sets {
        if key == "kind" {
            return Err(usage("the experiment kind cannot be overridden"));
        }
        let Some(old) = t.get(key) else {
            if strict {
                return Err(usage(format!("{} has no parameter {key:?}", cfg.kind.tag())));
            }
            continue;
        };
        let bad = || usage(format!("{key}: cannot read {raw:?} as {}", old.type_str()));
        let new = match old {
            toml::Value::Integer(_) => toml::Value::Integer(raw.parse().map_err(|_| bad())?),
            toml::Value::Float(_) => toml::Value::Float(raw.parse().map_err(|_| bad())?),
            toml::Value::Boolean(_) => toml::Value::Boolean(raw.parse().map_err(|_| bad())?),
            toml::Value::String(_) => toml::Value::String(raw.clone()),
            _ => {
                let doc: toml::Table = format!("v = {raw}").parse().map_err(|_| bad())?;
                doc["v"].clone()
            }
        };
        t.insert(key.clone(), new);
    }
    v.try_into().map_err(|e: toml::de::Error| usage(format!("override: {e}")))
}

fn default_experiment(tag: &str) -> Option<ExperimentConfig> {
    toml::from_str(&format!("kind = {tag:?}")).ok()
}

/// Drops wall-clock fields so repeated runs serialize identically.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn checks_csv<'a>(reports: impl Iterator<Item = &'a ExperimentReport>) -> String {
    let mut csv = String::from("report,check,kind,value,tol,pass\n");
    for r in reports {
        for c in &r.checks {
            let kind = serde_json::to_value(c.kind).ok().and_then(|k| k.as_str().map(String::from)).unwrap_or_default();
            let _ = writeln!(csv, "{:?},{:?},{kind},{:e},{:e},{}", r.name, c.name, c.value, c.tol, c.pass);
        }
    }
    csv
}

fn criteria_outcome(results: Vec<CriterionResult>) -> Outcome {
    let pass = results.iter().all(|r| r.pass);
    let csv = checks_csv(results.iter().flat_map(|r| r.reports.iter()));
    let lines: Vec<String> = results.iter().map(|r| r.status_line()).collect();
    let mut result = json!({ "summary": lines, "criteria": results });
    strip_timing(&mut result);
    Outcome { command: "verify", pass, result, csv }
}

pub fn cmd_verify(a: &VerifyArgs, g: &GlobalArgs, configured: &[ExperimentConfig]) -> Result<Outcome, CliError> {
    let mut sets: Vec<(String, String)> = Vec::new();
    if let Some(p) = a.p {
        sets.push(("p".into(), p.to_string()));
    }
    if let Some(s) = a.s {
        sets.push(("s".into(), s.to_string()));
    }
    if let Some(n) = a.n {
        sets.push(("n".into(), n.to_string()));
    }
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("--set expects key=value, got {kv:?}")))?;
        sets.push((k.trim().into(), v.trim().into()));
    }
    // global overrides apply only where the experiment has the field
    let mut soft: Vec<(String, String)> = Vec::new();
    if let Some(t) = g.tol {
        soft.push(("tol".into(), t.to_string()));
    }
    if let Some(s) = g.seed {
        soft.push(("seed".into(), s.to_string()));
    }

    let name = a.name.as_deref();
    let fixed_suite = matches!(name, Some(n) if n == "all" || n.starts_with('A') && n[1..].parse::<u32>().is_ok());
    if fixed_suite && !(sets.is_empty() && soft.is_empty()) {
        return Err(usage("parameter overrides do not apply to acceptance criteria"));
    }
    match name {
        Some("all") => return Ok(criteria_outcome(run_acceptance())),
        Some(id) if fixed_suite => {
            let suite = acceptance_suite();
            let crit = if id == "A11" {
                negative_controls(&suite)
            } else {
                suite.into_iter().find(|c| c.id == id).ok_or_else(|| usage(format!("no criterion {id}")))?
            };
            return Ok(criteria_outcome(vec![run_criterion(&crit)]));
        }
        _ => {}
    }

    let base: Vec<ExperimentConfig> = match name {
        None if configured.is_empty() => return Err(usage("verify needs a name or [[experiment]] tables in --config")),
        None => configured.to_vec(),
        Some(n) => {
            let by_name: Vec<ExperimentConfig> = configured.iter().filter(|c| c.name.as_deref() == Some(n)).cloned().collect();
            if !by_name.is_empty() {
                by_name
            } else {
                vec![default_experiment(n).ok_or_else(|| usage(format!("unknown experiment {n:?}")))?]
            }
        }
    };
    let configs: Vec<ExperimentConfig> = base
        .iter()
        .map(|c| override_experiment(&override_experiment(c, &sets, true)?, &soft, false))
        .collect::<Result<_, _>>()?;
    let mut reports = Vec::new();
    for r in run_all(&configs) {
        reports.push(r?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let csv = checks_csv(reports.iter());
    let lines: Vec<String> = reports.iter().map(|r| r.summary_line()).collect();
    let mut result = json!({ "summary": lines, "reports": reports });
    strip_timing(&mut result);
    Ok(Outcome { command: "verify", pass, result, csv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_and_coefficient_parsing() {
        assert_eq!(parse_complex("1.5", "s").unwrap(), C::new(1.5, 0.0));
        assert_eq!(parse_complex(" -1, 2 ", "s").unwrap(), C::new(-1.0, 2.0));
        assert!(parse_complex("1,2,3", "s").is_err());
        let q = parse_coeffs("1, -1/3, 0").unwrap();
        assert_eq!(q[1], BigRational::new((-1).into(), 3.into()));
        assert!(parse_coeffs("1,x").is_err());
        assert_eq!(parse_points("1,0; 0,1", "u").unwrap().len(), 2);
    }

    #[test]
    fn character_flag() {
        let p = Prime::new(5).unwrap();
        assert!(parse_chi(p, None).unwrap().is_trivial());
        let chi = parse_chi(p, Some("1,2")).unwrap();
        assert_eq!(chi.order(), 2);
        assert!(matches!(parse_chi(p, Some("1,9")), Err(CliError::Domain(_))));
        assert!(matches!(parse_chi(p, Some("1")), Err(CliError::Usage(_))));
    }

    #[test]
    fn overrides_follow_the_field_type() {
        let cfg = default_experiment("noroots").unwrap();
        let out = override_experiment(&cfg, &[("p".into(), "7".into()), ("s".into(), "2".into())], true).unwrap();
        let experiments::ExperimentKind::Noroots(np) = out.kind else { panic!() };
        assert_eq!((np.p, np.s), (7, 2.0));
        assert!(override_experiment(&cfg, &[("nope".into(), "1".into())], true).is_err());
        assert!(override_experiment(&cfg, &[("p".into(), "x".into())], true).is_err());
        assert!(override_experiment(&cfg, &[("nope".into(), "1".into())], false).is_ok());
    }

    #[test]
    fn timing_fields_are_stripped() {
        let mut v = json!({ "elapsed_ms": 1.0, "a": [{ "elapsed_ms": 2.0, "b": 3 }] });
        strip_timing(&mut v);
        assert_eq!(v, json!({ "a": [{ "b": 3 }] }));
    }
}
