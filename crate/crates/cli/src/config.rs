//! Run configuration: a TOML file with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

/// Tolerances a config file may override, with their defaults.
pub const TOLERANCES: &[(&str, f64, &str)] = &[
    ("lemma-ratio", 1e-6, "allowed excess of the window-estimate ratio over 1"),
    ("psi-residual", 1e-10, "largest accepted psi ODE residual"),
    ("profile-ode", 1e-9, "largest accepted ODE residual of the isoperimetric profile"),
    ("profile-coth", 1e-10, "largest accepted |1/f'(R) - coth(R/2)| for m = 2"),
    ("ball-cheeger", 1e-6, "largest accepted |h(B_30) - (m - 1)|"),
    ("conformal-residual", 1e-6, "largest accepted conformal mean-curvature residual"),
    ("geodesic-h", 1e-6, "largest accepted |H| on totally geodesic patches"),
    ("cap-spread", 1e-4, "largest accepted spread of |H| on the tilted cap"),
    ("defect-relative", 0.02, "relative tolerance of the orthogonality defect against cos(theta)"),
    ("plateau-fraction", 0.4, "tilted-cap plateau must exceed this fraction of m cos(theta)"),
    ("angle-deg", 1.0, "tolerance on tangent-cone opening angles in degrees"),
    ("delta-ratio", 0.99, "smallest accepted delta ratio at small radius"),
    ("direct-relative", 1e-6, "relative tolerance between direct and factorized cone quadrature"),
    ("fem-top", 0.40, "largest accepted lambda0 at R = 8"),
    ("fem-vertices", 1e4, "smallest interior vertex count at R = 8"),
    ("laplacian-floor", 1e-5, "largest accepted radial Laplacian error ratio on totally geodesic patches"),
    ("volume-floor", 1e-8, "largest accepted volume deviation on totally geodesic patches"),
];

/// Parsed parameters of one run. Unset grids fall back to scenario
/// defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub m: Option<Vec<usize>>,
    pub lambda: Option<Vec<f64>>,
    /// Outer radii or windows `R`.
    pub radii: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    /// Inner radii `r`.
    pub inner: Option<Vec<f64>>,
    /// Angle in degrees.
    pub theta: Option<f64>,
    pub geometry: Option<Vec<String>>,
    pub mesh: Option<PathBuf>,
    pub cloud: Option<PathBuf>,
    pub samples: Option<usize>,
    pub candidates: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

fn err(path: &Path, msg: impl std::fmt::Display) -> String {
    format!("{}: {msg}", path.display())
}

fn float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn float_list(v: &Value) -> Option<Vec<f64>> {
    match v {
        Value::Array(a) => a.iter().map(float).collect(),
        other => float(other).map(|x| vec![x]),
    }
}

fn uint(v: &Value) -> Option<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Some(*i as u64),
        _ => None,
    }
}

fn uint_list(v: &Value) -> Option<Vec<usize>> {
    match v {
        Value::Array(a) => a.iter().map(|x| uint(x).map(|u| u as usize)).collect(),
        other => uint(other).map(|u| vec![u as usize]),
    }
}

fn string_list(v: &Value) -> Option<Vec<String>> {
    match v {
        Value::Array(a) => a.iter().map(|x| x.as_str().map(str::to_string)).collect(),
        Value::String(s) => Some(vec![s.clone()]),
        _ => None,
    }
}

impl RunConfig {
    /// Reads a config file. Top-level keys name the scenario and output;
    /// `[grid]` holds parameter grids, `[geometry]` the inputs and
    /// `[tolerance]` overrides.
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| err(path, e))?;
        Self::from_toml(&text).map_err(|e| err(path, e))
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| e.message().to_string())?;
        let mut cfg = Self::default();
        for (key, value) in &table {
            let bad = || format!("key '{key}' has the wrong type");
            match key.as_str() {
                "scenario" => cfg.scenario = Some(value.as_str().ok_or_else(bad)?.to_string()),
                "output" => cfg.output = Some(PathBuf::from(value.as_str().ok_or_else(bad)?)),
                "threads" => cfg.threads = Some(uint(value).ok_or_else(bad)? as usize),
                "seed" => cfg.seed = Some(uint(value).ok_or_else(bad)?),
                "grid" => cfg.read_grid(value.as_table().ok_or_else(bad)?)?,
                "geometry" => cfg.read_geometry(value.as_table().ok_or_else(bad)?)?,
                "tolerance" => {
                    for (name, v) in value.as_table().ok_or_else(bad)? {
                        cfg.tolerances.insert(name.clone(), float(v).ok_or_else(|| format!("tolerance '{name}' must be a number"))?);
                    }
                }
                other => return Err(format!("unknown key '{other}'")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn read_grid(&mut self, grid: &Table) -> Result<(), String> {
        for (key, value) in grid {
            let bad = || format!("grid key '{key}' has the wrong type");
            match key.as_str() {
                "m" => self.m = Some(uint_list(value).ok_or_else(bad)?),
                "lambda" => self.lambda = Some(float_list(value).ok_or_else(bad)?),
                "R" => self.radii = Some(float_list(value).ok_or_else(bad)?),
                "r" => self.inner = Some(float_list(value).ok_or_else(bad)?),
                "sigma" => self.sigma = Some(float(value).ok_or_else(bad)?),
                "theta" => self.theta = Some(float(value).ok_or_else(bad)?),
                "samples" => self.samples = Some(uint(value).ok_or_else(bad)? as usize),
                "candidates" => self.candidates = Some(uint(value).ok_or_else(bad)? as usize),
                other => return Err(format!("unknown grid key '{other}'")),
            }
        }
        Ok(())
    }

    fn read_geometry(&mut self, geo: &Table) -> Result<(), String> {
        for (key, value) in geo {
            let bad = || format!("geometry key '{key}' has the wrong type");
            match key.as_str() {
                "patch" => self.geometry = Some(string_list(value).ok_or_else(bad)?),
                "mesh" => self.mesh = Some(PathBuf::from(value.as_str().ok_or_else(bad)?)),
                "cloud" => self.cloud = Some(PathBuf::from(value.as_str().ok_or_else(bad)?)),
                other => return Err(format!("unknown geometry key '{other}'")),
            }
        }
        Ok(())
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merge(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(scenario, output, threads, seed, m, lambda, radii, sigma, inner, theta, geometry, mesh, cloud, samples, candidates);
        self.tolerances.extend(other.tolerances);
        self
    }

    /// Grids must be nonempty and tolerance names known.
    pub fn validate(&self) -> Result<(), String> {
        let empty = |name: &str, len: Option<usize>| match len {
            Some(0) => Err(format!("grid '{name}' is empty")),
            _ => Ok(()),
        };
        empty("m", self.m.as_ref().map(Vec::len))?;
        empty("lambda", self.lambda.as_ref().map(Vec::len))?;
        empty("R", self.radii.as_ref().map(Vec::len))?;
        empty("r", self.inner.as_ref().map(Vec::len))?;
        empty("geometry", self.geometry.as_ref().map(Vec::len))?;
        if self.threads == Some(0) {
            return Err("threads must be at least 1".into());
        }
        if let Some(name) = self.tolerances.keys().find(|k| !TOLERANCES.iter().any(|(n, _, _)| n == k)) {
            return Err(format!("unknown tolerance '{name}'"));
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        let default = TOLERANCES
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, d, _)| *d)
            .unwrap_or_else(|| panic!("tolerance '{name}' is not registered"));
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(7)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_overrides() {
        let cfg = RunConfig::from_toml(
            "scenario = \"cheeger\"\nseed = 3\n[grid]\nR = [8, 9.5]\nr = 2\n[geometry]\npatch = \"geodesic-h2\"\n[tolerance]\nangle-deg = 0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.scenario.as_deref(), Some("cheeger"));
        assert_eq!(cfg.radii, Some(vec![8.0, 9.5]));
        assert_eq!(cfg.inner, Some(vec![2.0]));
        assert_eq!(cfg.tol("angle-deg"), 0.5);
        assert_eq!(cfg.tol("delta-ratio"), 0.99);
        let merged = cfg.merge(RunConfig { seed: Some(9), ..RunConfig::default() });
        assert_eq!(merged.seed(), 9);
        assert_eq!(merged.radii, Some(vec![8.0, 9.5]));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        assert!(RunConfig::from_toml("[grid]\nR = []").is_err());
        assert!(RunConfig::from_toml("[grid]\nm = [2.5]").is_err());
        assert!(RunConfig::from_toml("[tolerance]\nnope = 1.0").is_err());
        assert!(RunConfig::from_toml("threads = 0").is_err());
        assert!(RunConfig::from_toml("scenario = ").is_err());
    }
}
