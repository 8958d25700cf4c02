//! Scenario configuration files.
//!
//! ```text
//! # comment
//! [table1-row3]
//! v = 1
//! mu1 = 1
//! mu2 = 0
//! sigma = 10
//! n1 = 10
//! mode = both
//! replications = 10000
//! base_seed = 20120001
//! ```
//!
//! `v` may be replaced by the three keys `alpha`, `beta`, `delta_a`. `mu2`
//! defaults to 0, `n1` to 10, `mode` to `both`, `replications` to 10000,
//! `base_seed` to [`DEFAULT_SEED`] and `label` to the section name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::scenario::{DesignSpec, ModeSelection, Scenario, DEFAULT_SEED};
use crate::design::{DesignParams, ScenarioTruth};
use crate::error::{Error, Result};

const KEYS: [&str; 12] =
    ["v", "alpha", "beta", "delta_a", "mu1", "mu2", "sigma", "n1", "mode", "replications", "base_seed", "label"];

struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<&'static str, (usize, String)>,
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path)?;
    parse_scenarios(&text, path)
}

pub fn parse_scenarios(text: &str, path: &Path) -> Result<Vec<Scenario>> {
    let err = |line: usize, message: String| Error::Config { path: PathBuf::from(path), line, message };
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err(lineno, "unterminated section header".into()))?.trim();
            if name.is_empty() {
                return Err(err(lineno, "empty section name".into()));
            }
            sections.push(Section { name: name.to_string(), line: lineno, entries: BTreeMap::new() });
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| err(lineno, format!("expected key = value, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let key =
            KEYS.iter().copied().find(|k| *k == key).ok_or_else(|| err(lineno, format!("unknown key `{key}`")))?;
        let section = sections.last_mut().ok_or_else(|| err(lineno, format!("key `{key}` outside of a [section]")))?;
        if section.entries.insert(key, (lineno, value.to_string())).is_some() {
            return Err(err(lineno, format!("duplicate key `{key}`")));
        }
    }
    sections.iter().map(|s| build(s, &err)).collect()
}

fn build(s: &Section, err: &impl Fn(usize, String) -> Error) -> Result<Scenario> {
    fn get<T: std::str::FromStr>(s: &Section, key: &str, err: &impl Fn(usize, String) -> Error) -> Result<Option<T>> {
        match s.entries.get(key) {
            None => Ok(None),
            Some((line, raw)) => {
                raw.parse::<T>().map(Some).map_err(|_| err(*line, format!("cannot parse `{raw}` for key `{key}`")))
            }
        }
    }
    let line_of = |key: &str| s.entries.get(key).map(|e| e.0).unwrap_or(s.line);
    let require =
        |key: &str, v: Option<f64>| v.ok_or_else(|| err(s.line, format!("section [{}] is missing `{key}`", s.name)));

    let v: Option<f64> = get(s, "v", err)?;
    let alpha: Option<f64> = get(s, "alpha", err)?;
    let beta: Option<f64> = get(s, "beta", err)?;
    let delta_a: Option<f64> = get(s, "delta_a", err)?;
    let design = match (v, alpha, beta, delta_a) {
        (Some(v), None, None, None) => {
            if !(v > 0.0 && v.is_finite()) {
                return Err(err(line_of("v"), format!("v must be positive, got {v}")));
            }
            DesignSpec::Direct(v)
        }
        (None, Some(a), Some(b), Some(d)) => {
            DesignSpec::Power(DesignParams::new(a, b, d).map_err(|e| err(line_of("alpha"), e.to_string()))?)
        }
        _ => {
            return Err(err(
                s.line,
                format!("section [{}] needs either `v` or all of `alpha`, `beta`, `delta_a`", s.name),
            ))
        }
    };

    let mu1 = require("mu1", get(s, "mu1", err)?)?;
    let mu2 = get(s, "mu2", err)?.unwrap_or(0.0);
    let sigma = require("sigma", get(s, "sigma", err)?)?;
    let truth = ScenarioTruth::new(mu1, mu2, sigma).map_err(|e| err(line_of("sigma"), e.to_string()))?;

    let modes = match s.entries.get("mode") {
        None => ModeSelection::Both,
        Some((line, raw)) => raw.parse().map_err(|e: Error| err(*line, e.to_string()))?,
    };
    let scenario = Scenario {
        design,
        truth,
        n1: get(s, "n1", err)?.unwrap_or(10),
        modes,
        replications: get(s, "replications", err)?.unwrap_or(10_000),
        base_seed: get(s, "base_seed", err)?.unwrap_or(DEFAULT_SEED),
        label: s.entries.get("label").map(|e| e.1.clone()).unwrap_or_else(|| s.name.clone()),
        max_n: None,
    };
    scenario.validate().map_err(|e| err(s.line, e.to_string()))?;
    Ok(scenario)
}
