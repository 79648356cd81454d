//! JSON experiment configuration. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};
use crate::moments::SpeciesTable;
use crate::phase_space::{BoundaryCondition, TimeControl};
use crate::stepper::Scheme;

use super::presets::{self, DEFAULT_NV};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Accuracy,
    IndiffSingle,
    IndiffFour,
    RiemannKinetic,
    RiemannEulerSingle,
    RiemannEulerMulti,
    Custom,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Accuracy => "accuracy",
            PresetName::IndiffSingle => "indiff_single",
            PresetName::IndiffFour => "indiff_four",
            PresetName::RiemannKinetic => "riemann_kinetic",
            PresetName::RiemannEulerSingle => "riemann_euler_single",
            PresetName::RiemannEulerMulti => "riemann_euler_multi",
            PresetName::Custom => "custom",
        }
    }

    pub fn is_euler(self) -> bool {
        matches!(self, PresetName::RiemannEulerSingle | PresetName::RiemannEulerMulti)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub x: [f64; 2],
    pub v: [f64; 2],
    pub bc: BoundaryCondition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroState {
    pub n: f64,
    pub u: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

/// Two constant Maxwellian states separated at `interface`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseMaxwellian {
    pub interface: f64,
    pub left: MacroState,
    pub right: MacroState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: PresetName,
    #[serde(default)]
    pub scheme: Option<Scheme>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Defaults to `epsilon`.
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub nx: Option<usize>,
    /// Resolutions of the convergence study (accuracy preset only).
    #[serde(default)]
    pub nx_list: Option<Vec<usize>>,
    #[serde(default)]
    pub nv: Option<usize>,
    #[serde(default)]
    pub time: Option<TimeControl>,
    /// Custom preset only.
    #[serde(default)]
    pub species: Option<SpeciesTable>,
    /// Custom preset only.
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    /// Custom preset only, one entry per species.
    #[serde(default)]
    pub initial: Option<Vec<PiecewiseMaxwellian>>,
    /// CFL number of the hydrodynamic reference runs.
    #[serde(default)]
    pub euler_cfl: Option<f64>,
    #[serde(default)]
    pub plots: bool,
    #[serde(default)]
    pub output_dir: Option<String>,
}

/// Configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub preset: PresetName,
    pub scheme: Scheme,
    pub epsilon: f64,
    pub kappa: f64,
    pub nx_list: Vec<usize>,
    pub nv: usize,
    pub time: TimeControl,
    pub euler_cfl: f64,
    pub plots: bool,
}

fn err(path: &str, msg: impl Into<String>) -> MixError {
    MixError::config(path, msg)
}

fn positive(path: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(path, format!("must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| err("", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(&path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn minimal(preset: PresetName) -> Self {
        ExperimentConfig {
            preset,
            scheme: None,
            epsilon: None,
            kappa: None,
            nx: None,
            nx_list: None,
            nv: None,
            time: None,
            species: None,
            domain: None,
            initial: None,
            euler_cfl: None,
            plots: false,
            output_dir: None,
        }
    }

    /// Checks the fields against the preset and fills in defaults.
    pub fn resolve(&self) -> Result<Resolved> {
        let p = self.preset;
        let custom = p == PresetName::Custom;
        if !custom {
            for (name, present) in [
                ("species", self.species.is_some()),
                ("domain", self.domain.is_some()),
                ("initial", self.initial.is_some()),
            ] {
                if present {
                    return Err(err(name, format!("only allowed with the custom preset, not `{}`", p.as_str())));
                }
            }
        }
        if self.nx_list.is_some() && p != PresetName::Accuracy {
            return Err(err("nx_list", "only allowed with the accuracy preset"));
        }
        if self.nx.is_some() && self.nx_list.is_some() {
            return Err(err("nx", "give either nx or nx_list"));
        }
        if p.is_euler() && self.scheme.is_some() {
            return Err(err("scheme", "hydrodynamic reference presets take no kinetic scheme"));
        }
        let default_eps = match p {
            PresetName::RiemannKinetic | PresetName::RiemannEulerMulti => 1e-6,
            _ => 1e-2,
        };
        let epsilon = positive("epsilon", self.epsilon.unwrap_or(default_eps))?;
        let kappa = positive("kappa", self.kappa.unwrap_or(epsilon))?;
        let default_nx = match p {
            PresetName::Accuracy => vec![40, 80, 160, 320],
            PresetName::RiemannEulerSingle | PresetName::RiemannEulerMulti => vec![4000],
            _ => vec![200],
        };
        let nx_list = match (&self.nx, &self.nx_list) {
            (Some(n), _) => vec![*n],
            (_, Some(list)) => list.clone(),
            _ => default_nx,
        };
        if nx_list.is_empty() {
            return Err(err("nx_list", "must not be empty"));
        }
        for (k, &n) in nx_list.iter().enumerate() {
            if n < crate::phase_space::MIN_NX {
                return Err(err(
                    &format!("nx_list[{k}]"),
                    format!("{n} is below the minimum {}", crate::phase_space::MIN_NX),
                ));
            }
        }
        for (k, w) in nx_list.windows(2).enumerate() {
            if w[1] != 2 * w[0] {
                return Err(err(&format!("nx_list[{}]", k + 1), "resolutions must be successive doublings"));
            }
        }
        let nv = self.nv.unwrap_or(DEFAULT_NV);
        if nv < crate::phase_space::MIN_NV {
            return Err(err("nv", format!("{nv} is below the minimum {}", crate::phase_space::MIN_NV)));
        }
        let time = match &self.time {
            Some(t) => t.clone(),
            None => match p {
                PresetName::Accuracy => presets::smooth_schedule(),
                _ => presets::startup_schedule(),
            },
        };
        time.validate().map_err(|e| err("time", e.to_string()))?;
        let euler_cfl = positive("euler_cfl", self.euler_cfl.unwrap_or(0.4))?;
        if euler_cfl > crate::euler::CONVECTIVE_LIMIT {
            return Err(err("euler_cfl", format!("must not exceed {}", crate::euler::CONVECTIVE_LIMIT)));
        }
        if custom {
            let sp = self.species.as_ref().ok_or_else(|| err("species", "required by the custom preset"))?;
            sp.validate().map_err(|e| err("species", e.to_string()))?;
            let d = self.domain.as_ref().ok_or_else(|| err("domain", "required by the custom preset"))?;
            crate::phase_space::build_grid(d.x, nx_list[0], d.bc, d.v, nv).map_err(|e| err("domain", e.to_string()))?;
            let init = self.initial.as_ref().ok_or_else(|| err("initial", "required by the custom preset"))?;
            if init.len() != sp.len() {
                return Err(err("initial", format!("expected {} entries, got {}", sp.len(), init.len())));
            }
            for (s, pm) in init.iter().enumerate() {
                for (side, st) in [("left", pm.left), ("right", pm.right)] {
                    positive(&format!("initial[{s}].{side}.n"), st.n)?;
                    positive(&format!("initial[{s}].{side}.T"), st.t)?;
                    if !st.u.is_finite() {
                        return Err(err(&format!("initial[{s}].{side}.u"), "must be finite"));
                    }
                }
            }
        }
        Ok(Resolved {
            preset: p,
            scheme: self.scheme.unwrap_or(Scheme::Bdf3Qcw35),
            epsilon,
            kappa,
            nx_list,
            nv,
            time,
            euler_cfl,
            plots: self.plots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = ExperimentConfig::from_json(r#"{"preset": "accuracy", "epsilonn": 1e-2}"#).unwrap_err();
        assert!(e.is_config_error());
        assert!(e.to_string().contains("epsilonn"));
        let e = ExperimentConfig::from_json(
            r#"{"preset": "accuracy", "time": {"t_final": 0.2, "cfl_schedule": [[0.2, 2]], "cfl": 1}}"#,
        );
        assert!(e.is_err());
    }

    #[test]
    fn defaults_follow_the_preset() {
        let c = ExperimentConfig::from_json(r#"{"preset": "accuracy"}"#).unwrap().resolve().unwrap();
        assert_eq!(c.nx_list, vec![40, 80, 160, 320]);
        assert_eq!(c.scheme, Scheme::Bdf3Qcw35);
        assert_eq!(c.kappa, c.epsilon);
        let r =
            ExperimentConfig::from_json(r#"{"preset": "riemann_kinetic", "kappa": 1e-3}"#).unwrap().resolve().unwrap();
        assert_eq!(r.epsilon, 1e-6);
        assert_eq!(r.kappa, 1e-3);
        assert_eq!(r.time.cfl_schedule, vec![(0.02, 0.2), (0.2, 2.0)]);
    }

    #[test]
    fn field_paths_in_errors() {
        let cases = [
            (r#"{"preset": "accuracy", "epsilon": -1}"#, "epsilon"),
            (r#"{"preset": "accuracy", "nx_list": [40, 100]}"#, "nx_list[1]"),
            (r#"{"preset": "indiff_four", "species": {"masses": [1], "lambda": [1]}}"#, "species"),
            (r#"{"preset": "custom"}"#, "species"),
            (r#"{"preset": "riemann_euler_single", "scheme": "BE"}"#, "scheme"),
            (r#"{"preset": "indiff_single", "time": {"cfl_schedule": [[0.1, 1]], "t_final": 0.2}}"#, "time"),
        ];
        for (text, path) in cases {
            match ExperimentConfig::from_json(text).unwrap().resolve() {
                Err(MixError::Config { path: p, .. }) => assert_eq!(p, path, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn custom_preset_round_trip() {
        let text = r#"{
            "preset": "custom", "scheme": "RK2-QCW23", "nx": 16, "nv": 20,
            "species": {"masses": [1.0, 2.0], "lambda": [1, 1, 1, 1]},
            "domain": {"x": [0, 1], "v": [-8, 8], "bc": "freeflow"},
            "initial": [
                {"interface": 0.5, "left": {"n": 1, "u": 0, "T": 1}, "right": {"n": 0.5, "u": 0, "T": 0.8}},
                {"interface": 0.5, "left": {"n": 1, "u": 0, "T": 1}, "right": {"n": 0.5, "u": 0, "T": 0.8}}
            ],
            "time": {"cfl_schedule": [[0.05, 1.0]], "t_final": 0.05}
        }"#;
        let c = ExperimentConfig::from_json(text).unwrap();
        c.resolve().unwrap();
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
