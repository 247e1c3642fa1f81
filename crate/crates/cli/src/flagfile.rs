//! Flag defaults from a TOML file: top-level keys for the global flags, one
//! table per subcommand whose keys are the flag names. Command-line flags win.

use crate::args::*;
use crate::error::CliError;
use clap::ValueEnum;
use experiments::ExperimentConfig;
use std::path::Path;
use std::str::FromStr;
use toml::{Table, Value};

const GLOBAL_KEYS: &[&str] = &["precision", "tol", "format", "output", "seed"];
const KERNEL_KEYS: &[&str] = &["p", "d", "l", "Q", "chi", "s", "N"];
const FN_KEYS: &[&str] = &["fn", "a", "b", "q"];

#[derive(Debug, Clone, Default)]
pub struct FlagFile {
    table: Table,
    pub experiments: Vec<ExperimentConfig>,
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn parse<T: FromStr>(key: &str, v: &Value) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    text(v).parse().map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, v: &Value) -> Result<T, CliError> {
    T::from_str(&text(v), true).map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
}

fn fill<T: FromStr>(slot: &mut Option<T>, t: &Table, key: &str) -> Result<(), CliError>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        if let Some(v) = t.get(key) {
            *slot = Some(parse(key, v)?);
        }
    }
    Ok(())
}

fn fill_flag(slot: &mut bool, t: &Table, key: &str) -> Result<(), CliError> {
    if let Some(v) = t.get(key) {
        *slot |= v.as_bool().ok_or_else(|| CliError::Usage(format!("config key {key}: expected a boolean")))?;
    }
    Ok(())
}

fn check_keys(section: &str, t: &Table, allowed: &[&[&str]]) -> Result<(), CliError> {
    for k in t.keys() {
        if !allowed.iter().any(|a| a.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown key {k:?} in [{section}]")));
        }
    }
    Ok(())
}

impl FlagFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut table: Table = text.parse().map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let experiments = match table.remove("experiment") {
            Some(v) => {
                let wrapper = Table::from_iter([("experiment".to_string(), v)]);
                experiments::SuiteConfig::from_toml(&toml::to_string(&wrapper).map_err(|e| CliError::Usage(e.to_string()))?)
                    .map_err(CliError::from)?
                    .experiment
            }
            None => Vec::new(),
        };
        for (k, v) in &table {
            let sub: &[&[&str]] = match k.as_str() {
                "zeta" => &[&["p", "Q", "chi", "s", "exact", "profile"]],
                "spectrum" => &[KERNEL_KEYS, &["count", "matrix"]],
                "charfn" => &[KERNEL_KEYS, FN_KEYS, &["u", "samples", "radius"]],
                "zeros" => &[KERNEL_KEYS, FN_KEYS, &["radius"]],
                "verify" => &[&["name", "p", "s", "N", "set"]],
                g if GLOBAL_KEYS.contains(&g) => continue,
                other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
            };
            let t = v.as_table().ok_or_else(|| CliError::Usage(format!("[{k}] must be a table")))?;
            check_keys(k, t, sub)?;
        }
        Ok(FlagFile { table, experiments })
    }

    fn section(&self, name: &str) -> Table {
        self.table.get(name).and_then(Value::as_table).cloned().unwrap_or_default()
    }

    pub fn apply_global(&self, g: &mut GlobalArgs) -> Result<(), CliError> {
        let t = &self.table;
        if g.precision.is_none() {
            if let Some(v) = t.get("precision") {
                g.precision = Some(parse_enum("precision", v)?);
            }
        }
        if g.format.is_none() {
            if let Some(v) = t.get("format") {
                g.format = Some(parse_enum("format", v)?);
            }
        }
        fill(&mut g.tol, t, "tol")?;
        fill(&mut g.output, t, "output")?;
        fill(&mut g.seed, t, "seed")
    }

    pub fn apply_zeta(&self, a: &mut ZetaArgs) -> Result<(), CliError> {
        let t = self.section("zeta");
        fill(&mut a.p, &t, "p")?;
        fill(&mut a.q, &t, "Q")?;
        fill(&mut a.chi, &t, "chi")?;
        fill(&mut a.s, &t, "s")?;
        fill_flag(&mut a.exact, &t, "exact")?;
        fill_flag(&mut a.profile, &t, "profile")
    }

    fn apply_kernel(t: &Table, k: &mut KernelArgs) -> Result<(), CliError> {
        fill(&mut k.p, t, "p")?;
        fill(&mut k.d, t, "d")?;
        fill(&mut k.l, t, "l")?;
        fill(&mut k.q, t, "Q")?;
        fill(&mut k.chi, t, "chi")?;
        fill(&mut k.s, t, "s")?;
        fill(&mut k.n, t, "N")
    }

    fn apply_fn(t: &Table, f: &mut FnArgs) -> Result<(), CliError> {
        Self::apply_kernel(t, &mut f.kernel)?;
        if f.func.is_none() {
            if let Some(v) = t.get("fn") {
                f.func = Some(parse_enum("fn", v)?);
            }
        }
        fill(&mut f.a, t, "a")?;
        fill(&mut f.b, t, "b")?;
        fill(&mut f.base, t, "q")
    }

    pub fn apply_spectrum(&self, a: &mut SpectrumArgs) -> Result<(), CliError> {
        let t = self.section("spectrum");
        Self::apply_kernel(&t, &mut a.kernel)?;
        fill(&mut a.count, &t, "count")?;
        fill_flag(&mut a.matrix, &t, "matrix")
    }

    pub fn apply_charfn(&self, a: &mut CharfnArgs) -> Result<(), CliError> {
        let t = self.section("charfn");
        Self::apply_fn(&t, &mut a.f)?;
        if a.u.is_none() {
            // sample lists are ";"-separated points
            if let Some(v) = t.get("u") {
                a.u = Some(match v {
                    Value::Array(pts) => pts.iter().map(text).collect::<Vec<_>>().join(";"),
                    other => text(other),
                });
            }
        }
        fill(&mut a.samples, &t, "samples")?;
        fill(&mut a.radius, &t, "radius")
    }

    pub fn apply_zeros(&self, a: &mut ZerosArgs) -> Result<(), CliError> {
        let t = self.section("zeros");
        Self::apply_fn(&t, &mut a.f)?;
        fill(&mut a.radius, &t, "radius")
    }

    pub fn apply_verify(&self, a: &mut VerifyArgs) -> Result<(), CliError> {
        let t = self.section("verify");
        fill(&mut a.name, &t, "name")?;
        fill(&mut a.p, &t, "p")?;
        fill(&mut a.s, &t, "s")?;
        fill(&mut a.n, &t, "N")?;
        if let Some(v) = t.get("set") {
            let extra = v.as_array().ok_or_else(|| CliError::Usage("config key set: expected an array".into()))?;
            // file entries first so command-line overrides land last
            let mut merged: Vec<String> = extra.iter().map(text).collect();
            merged.append(&mut a.set);
            a.set = merged;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_values_win_over_the_file() {
        let f = FlagFile::parse("format = \"csv\"\n[zeta]\np = 3\nQ = [1, 0, 1]\ns = [1, 0]\n").unwrap();
        let mut a = ZetaArgs { p: Some(5), ..Default::default() };
        f.apply_zeta(&mut a).unwrap();
        assert_eq!(a.p, Some(5));
        assert_eq!(a.q.as_deref(), Some("1,0,1"));
        assert_eq!(a.s.as_deref(), Some("1,0"));
        let mut g = GlobalArgs { precision: None, tol: None, format: None, output: None, seed: None, config: None };
        f.apply_global(&mut g).unwrap();
        assert_eq!(g.format, Some(Format::Csv));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(FlagFile::parse("[zeta]\nbogus = 1\n"), Err(CliError::Usage(_))));
        assert!(matches!(FlagFile::parse("bogus = 1\n"), Err(CliError::Usage(_))));
    }

    #[test]
    fn experiment_tables_are_collected() {
        let f = FlagFile::parse("[[experiment]]\nkind = \"noroots\"\np = 7\n").unwrap();
        assert_eq!(f.experiments.len(), 1);
    }
}
