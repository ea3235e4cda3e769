//! Experiment configuration: defaults, JSON file loading, flag parsing.

use crate::CliError;
use serde::Deserialize;
use std::path::Path;

/// A set of parameter values: an explicit list, or a log-spaced range
/// given as `lo:hi:count` on the command line.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    LogRange { lo: f64, hi: f64, count: usize },
}

impl GridSpec {
    /// Parses `a,b,c` (list) or `lo:hi:count` (log-spaced range).
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number {p:?} in {s:?}")))
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::Config(format!(
                    "range {s:?} must be lo:hi:count"
                )));
            }
            let count = parts[2].trim().parse::<usize>().map_err(|_| {
                CliError::Config(format!("bad count {:?} in {s:?}", parts[2]))
            })?;
            Ok(GridSpec::LogRange {
                lo: num(parts[0])?,
                hi: num(parts[1])?,
                count,
            })
        } else {
            let vals = s.split(',').map(num).collect::<Result<Vec<f64>, _>>()?;
            Ok(GridSpec::List(vals))
        }
    }

    /// Expands to concrete values, validating positivity.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let vals = match self {
            GridSpec::List(v) => {
                if v.is_empty() {
                    return Err(CliError::Config("empty value list".into()));
                }
                v.clone()
            }
            GridSpec::LogRange { lo, hi, count } => {
                if *count == 0 {
                    return Err(CliError::Config("range count must be >= 1".into()));
                }
                if !(lo.is_finite() && hi.is_finite()) || *lo <= 0.0 || hi < lo {
                    return Err(CliError::Config(format!(
                        "range must satisfy 0 < lo <= hi, got {lo}:{hi}"
                    )));
                }
                if *count == 1 {
                    vec![*lo]
                } else {
                    let ratio = hi / lo;
                    (0..*count)
                        .map(|k| lo * ratio.powf(k as f64 / (*count - 1) as f64))
                        .collect()
                }
            }
        };
        if vals.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(CliError::Config("all values must be positive".into()));
        }
        Ok(vals)
    }
}

/// Which evaluation variants to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubdivisionMode {
    On,
    Off,
    Both,
}

impl std::str::FromStr for SubdivisionMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "on" => Ok(Self::On),
            "off" => Ok(Self::Off),
            "both" => Ok(Self::Both),
            other => Err(CliError::Config(format!(
                "subdivision must be on|off|both, got {other:?}"
            ))),
        }
    }
}

fn check_common(n: usize, c_eps: f64, r_eps: f64) -> Result<(), CliError> {
    if !(2..=32).contains(&n) {
        return Err(CliError::Config(format!("n must be in 2..=32, got {n}")));
    }
    if !c_eps.is_finite() || c_eps <= 0.0 {
        return Err(CliError::Config(format!("c_eps must be positive, got {c_eps}")));
    }
    if !r_eps.is_finite() || r_eps <= 1.0 {
        return Err(CliError::Config(format!("r_eps must exceed 1, got {r_eps}")));
    }
    Ok(())
}

/// Flat-panel accuracy-map experiment over an (α, h) grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatpanelConfig {
    pub alpha: GridSpec,
    pub h: GridSpec,
    pub n: usize,
    pub c_eps: f64,
    pub r_eps: f64,
    pub seed: u64,
    pub subdivision: SubdivisionMode,
    pub targets_per_cell: usize,
    pub oracle_tol: f64,
}

impl Default for FlatpanelConfig {
    fn default() -> Self {
        Self {
            alpha: GridSpec::LogRange {
                lo: 1.0,
                hi: 1e4,
                count: 40,
            },
            h: GridSpec::LogRange {
                lo: 1e-3,
                hi: 1.0,
                count: 40,
            },
            n: 16,
            c_eps: 4.0,
            r_eps: 3.0,
            seed: 0,
            subdivision: SubdivisionMode::Both,
            targets_per_cell: 100,
            oracle_tol: 1e-13,
        }
    }
}

impl FlatpanelConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_common(self.n, self.c_eps, self.r_eps)?;
        self.alpha.values()?;
        self.h.values()?;
        if self.targets_per_cell == 0 {
            return Err(CliError::Config("targets_per_cell must be >= 1".into()));
        }
        if !self.oracle_tol.is_finite() || self.oracle_tol <= 0.0 {
            return Err(CliError::Config("oracle_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Annulus Dirichlet-problem experiment over an α sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnulusConfig {
    pub alpha: GridSpec,
    pub n: usize,
    pub inner_panels: usize,
    pub outer_panels: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Source point of the reference solution, outside the annulus.
    pub source: [f64; 2],
    pub target_radius: f64,
    pub num_targets: usize,
    pub c_eps: f64,
    pub r_eps: f64,
    pub seed: u64,
    pub subdivision: SubdivisionMode,
    pub timing_reps: usize,
}

impl Default for AnnulusConfig {
    fn default() -> Self {
        Self {
            alpha: GridSpec::List(vec![1.0, 10.0, 50.0, 100.0, 250.0, 500.0, 1000.0, 2000.0]),
            n: 16,
            inner_panels: 15,
            outer_panels: 30,
            inner_radius: 0.3,
            outer_radius: 0.6,
            source: [0.1, 0.1],
            target_radius: 0.301,
            num_targets: 15,
            c_eps: 4.0,
            r_eps: 3.0,
            seed: 0,
            subdivision: SubdivisionMode::Both,
            timing_reps: 5,
        }
    }
}

impl AnnulusConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_common(self.n, self.c_eps, self.r_eps)?;
        self.alpha.values()?;
        if self.inner_panels < 3 || self.outer_panels < 3 {
            return Err(CliError::Config("circles need at least 3 panels".into()));
        }
        if !(self.inner_radius > 0.0 && self.outer_radius > self.inner_radius) {
            return Err(CliError::Config(format!(
                "radii must satisfy 0 < inner < outer, got {} and {}",
                self.inner_radius, self.outer_radius
            )));
        }
        if !(self.target_radius > self.inner_radius && self.target_radius < self.outer_radius) {
            return Err(CliError::Config(format!(
                "target_radius {} must lie inside the annulus",
                self.target_radius
            )));
        }
        if self.num_targets == 0 {
            return Err(CliError::Config("num_targets must be >= 1".into()));
        }
        if self.timing_reps == 0 {
            return Err(CliError::Config("timing_reps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Loads a JSON config file, or the defaults when no path is given.
pub fn load_json<T: Default + serde::de::DeserializeOwned>(
    path: Option<&Path>,
) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", p.display())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_list_and_range_parse() {
        let g = GridSpec::parse("1,10,100").unwrap();
        assert_eq!(g.values().unwrap(), vec![1.0, 10.0, 100.0]);
        let g = GridSpec::parse("1:100:3").unwrap();
        let v = g.values().unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!((v[1] - 10.0).abs() < 1e-13);
        assert!((v[2] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(GridSpec::parse("1,x").is_err());
        assert!(GridSpec::parse("1:2").is_err());
        assert!(GridSpec::List(vec![-1.0]).values().is_err());
        assert!(GridSpec::LogRange {
            lo: 0.0,
            hi: 1.0,
            count: 4
        }
        .values()
        .is_err());
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg: AnnulusConfig =
            serde_json::from_str(r#"{"alpha": [5, 20], "seed": 7, "subdivision": "off"}"#).unwrap();
        assert_eq!(cfg.alpha.values().unwrap(), vec![5.0, 20.0]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.subdivision, SubdivisionMode::Off);
        assert_eq!(cfg.inner_panels, 15);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_field_rejected() {
        let r: Result<FlatpanelConfig, _> = serde_json::from_str(r#"{"bogus": 1}"#);
        assert!(r.is_err());
    }
}
