//! Experiment drivers: presets, error norms, convergence tables and the
//! artifacts written by the command-line front end.

pub mod config;
pub mod csv;
pub mod presets;
pub mod svg;

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{MixError, Result};
use crate::euler::{ssp_rk3_advance_multi, ssp_rk3_advance_single, EulerTimeControl};
use crate::moments::{compute_moments, MixtureState, MomentField, SpeciesTable};
use crate::phase_space::{build_grid, PhaseGrid};
use crate::relax::RegimeParams;
use crate::stepper::{advance, Scheme, Trajectory};

use config::{ExperimentConfig, PresetName, Resolved};
use presets::{KineticPreset, KineticSetup};

/// `sum |a_i - b_i| / sum |b_i|`.
pub fn l1_rel(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MixError::LengthMismatch(a.len(), b.len()));
    }
    let den: f64 = b.iter().map(|v| v.abs()).sum();
    if !(den > 0.0) {
        return Err(MixError::ZeroReference);
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / den)
}

/// Every `ratio`-th value; periodic grids of `N` and `ratio N` nodes share
/// these nodes.
pub fn restrict(fine: &[f64], ratio: usize) -> Vec<f64> {
    fine.iter().step_by(ratio).copied().collect()
}

/// Mean over each block of `ratio` values; free-flow (cell-centred) grids of
/// `N` and `ratio N` cells nest this way.
pub fn restrict_average(fine: &[f64], ratio: usize) -> Vec<f64> {
    fine.chunks(ratio).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub error: f64,
    pub rate: Option<f64>,
}

/// Rows from a list of `(Nx, error)` pairs at successive doublings.
pub fn rates(errors: &[(usize, f64)]) -> Vec<ConvergenceRow> {
    errors
        .iter()
        .enumerate()
        .map(|(k, &(nx, error))| ConvergenceRow { nx, error, rate: (k > 0).then(|| (errors[k - 1].1 / error).log2()) })
        .collect()
}

/// Final state and moments of one kinetic run.
#[derive(Debug, Clone)]
pub struct KineticRun {
    pub grid: PhaseGrid,
    pub species: SpeciesTable,
    pub trajectory: Trajectory,
    pub moments: MomentField,
}

pub fn run_kinetic(setup: &KineticSetup, scheme: Scheme, regime: &RegimeParams) -> Result<KineticRun> {
    let trajectory = advance(&setup.state, &setup.time, scheme, &setup.grid, &setup.species, regime)?;
    let moments = compute_moments(&trajectory.state, &setup.grid, &setup.species)?;
    Ok(KineticRun { grid: setup.grid.clone(), species: setup.species.clone(), trajectory, moments })
}

/// Self-convergence of the global number density: `error(Nx)` compares the
/// run at `Nx` with the run at `2 Nx` restricted to the coarse nodes.
/// `resolutions` lists every run size; the last one only serves as the
/// reference of the one before.
pub fn convergence_table(
    preset: KineticPreset,
    scheme: Scheme,
    resolutions: &[usize],
    regime: &RegimeParams,
    nv: usize,
) -> Result<Vec<ConvergenceRow>> {
    let densities = convergence_runs(preset, scheme, resolutions, regime, nv, |_, _| Ok(()))?;
    convergence_from_densities(&densities)
}

/// Runs every resolution in `resolutions`, handing each run to `visit`, and
/// returns the global densities.
pub fn convergence_runs(
    preset: KineticPreset,
    scheme: Scheme,
    resolutions: &[usize],
    regime: &RegimeParams,
    nv: usize,
    mut visit: impl FnMut(usize, &KineticRun) -> Result<()>,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    for &nx in resolutions {
        let run = run_kinetic(&preset.setup(nx, nv)?, scheme, regime)?;
        visit(nx, &run)?;
        out.push((nx, run.moments.n.clone()));
    }
    Ok(out)
}

/// Table rows from densities at successive doublings.
pub fn convergence_from_densities(densities: &[(usize, Vec<f64>)]) -> Result<Vec<ConvergenceRow>> {
    let mut errors = Vec::new();
    for w in densities.windows(2) {
        let (nx, coarse) = (&w[0].0, &w[0].1);
        let fine = &w[1].1;
        if fine.len() != 2 * coarse.len() {
            return Err(MixError::LengthMismatch(fine.len(), 2 * coarse.len()));
        }
        errors.push((*nx, l1_rel(&restrict(fine, 2), coarse)?));
    }
    Ok(rates(&errors))
}

/// Relative L1 difference of the global density between the single gas and
/// the mixture of four identical gases.
pub fn indiff_discrepancy(
    scheme: Scheme,
    regime: &RegimeParams,
    nx: usize,
    nv: usize,
) -> Result<(f64, KineticRun, KineticRun)> {
    let one = run_kinetic(&KineticPreset::IndiffSingle.setup(nx, nv)?, scheme, regime)?;
    let four = run_kinetic(&KineticPreset::IndiffFour.setup(nx, nv)?, scheme, regime)?;
    let d = l1_rel(&four.moments.n, &one.moments.n)?;
    Ok((d, one, four))
}

/// Hydrodynamic reference for the shock tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EulerKind {
    Single,
    Multi { kappa: f64 },
}

#[derive(Debug, Clone)]
pub struct EulerRun {
    pub grid: PhaseGrid,
    pub species: SpeciesTable,
    pub moments: MomentField,
}

pub fn run_riemann_euler(kind: EulerKind, nx: usize, t_final: f64, cfl: f64) -> Result<EulerRun> {
    let tc = EulerTimeControl { cfl, t_final };
    let (grid, species, moments) = match kind {
        EulerKind::Single => {
            let (g, sp, st) = presets::riemann_single(nx)?;
            let out = ssp_rk3_advance_single(&st, &g, &sp, &tc)?;
            let m = out.moments(&sp)?;
            (g, sp, m)
        }
        EulerKind::Multi { kappa } => {
            let (g, sp, st) = presets::riemann_multi(nx)?;
            let out = ssp_rk3_advance_multi(&st, &g, &sp, &tc, kappa)?;
            let m = out.moments(&sp)?;
            (g, sp, m)
        }
    };
    Ok(EulerRun { grid, species, moments })
}

/// Files written by [`run_preset`].
#[derive(Debug, Clone, Default)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub convergence: Vec<ConvergenceRow>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }

    fn moments(&mut self, name: &str, x: &[f64], m: &MomentField, k_b: f64, plots: bool) -> Result<()> {
        self.put(&format!("{name}.csv"), &csv::moments_csv(x, m, k_b))?;
        if plots {
            let mut series: Vec<(String, &[f64])> =
                m.species.iter().enumerate().map(|(s, sp)| (format!("n_{}", s + 1), sp.n.as_slice())).collect();
            series.push(("n".into(), m.n.as_slice()));
            let refs: Vec<(&str, &[f64])> = series.iter().map(|(a, b)| (a.as_str(), *b)).collect();
            self.put(&format!("{name}_n.svg"), &svg::line_chart("number densities", x, &refs))?;
            let mut series: Vec<(String, &[f64])> =
                m.species.iter().enumerate().map(|(s, sp)| (format!("T_{}", s + 1), sp.t.as_slice())).collect();
            series.push(("T".into(), m.t.as_slice()));
            let refs: Vec<(&str, &[f64])> = series.iter().map(|(a, b)| (a.as_str(), *b)).collect();
            self.put(&format!("{name}_T.svg"), &svg::line_chart("temperatures", x, &refs))?;
        }
        Ok(())
    }
}

fn kinetic_preset(p: PresetName) -> Option<KineticPreset> {
    match p {
        PresetName::Accuracy => Some(KineticPreset::Accuracy),
        PresetName::IndiffSingle => Some(KineticPreset::IndiffSingle),
        PresetName::IndiffFour => Some(KineticPreset::IndiffFour),
        PresetName::RiemannKinetic => Some(KineticPreset::Riemann),
        _ => None,
    }
}

fn custom_setup(cfg: &ExperimentConfig, r: &Resolved) -> Result<KineticSetup> {
    let sp = cfg.species.clone().ok_or_else(|| MixError::config("species", "missing"))?;
    let d = cfg.domain.clone().ok_or_else(|| MixError::config("domain", "missing"))?;
    let init = cfg.initial.clone().ok_or_else(|| MixError::config("initial", "missing"))?;
    let grid = build_grid(d.x, r.nx_list[0], d.bc, d.v, r.nv)?;
    let mut state = MixtureState::for_grid(sp.len(), &grid);
    for (s, pm) in init.iter().enumerate() {
        state.set_maxwellian(s, &grid, sp.masses[s], sp.k_b, |x| {
            let st = if x < pm.interface { pm.left } else { pm.right };
            (st.n, st.u, st.t)
        })?;
    }
    Ok(KineticSetup { grid, species: sp, state, time: r.time.clone() })
}

fn metadata(r: &Resolved) -> serde_json::Value {
    json!({
        "preset": r.preset.as_str(),
        "scheme": if r.preset.is_euler() { serde_json::Value::Null } else { json!(r.scheme.name()) },
        "epsilon": r.epsilon,
        "kappa": r.kappa,
        "nx": r.nx_list,
        "nv": r.nv,
        "cfl_schedule": r.time.cfl_schedule,
        "t_final": r.time.t_final,
        "euler_cfl": r.euler_cfl,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Runs the configured experiment and writes its artifacts into `out_dir`.
pub fn run_preset(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let r = cfg.resolve()?;
    let regime = RegimeParams::new(r.epsilon, r.kappa).map_err(|e| MixError::config("epsilon", e.to_string()))?;
    std::fs::create_dir_all(out_dir)?;
    let mut w = Writer { dir: out_dir, files: Vec::new() };
    let mut convergence = Vec::new();
    w.put("metadata.json", &serde_json::to_string_pretty(&metadata(&r)).expect("metadata serializes"))?;
    match r.preset {
        PresetName::Accuracy => {
            let densities =
                convergence_runs(KineticPreset::Accuracy, r.scheme, &r.nx_list, &regime, r.nv, |nx, run| {
                    w.moments(&format!("moments_nx{nx}"), &run.grid.x_nodes, &run.moments, run.species.k_b, r.plots)?;
                    w.put(&format!("diagnostics_nx{nx}.csv"), &csv::diagnostics_csv(&run.trajectory.diagnostics))
                })?;
            convergence = convergence_from_densities(&densities)?;
            w.put("convergence.csv", &csv::convergence_csv(&convergence))?;
        }
        PresetName::RiemannEulerSingle | PresetName::RiemannEulerMulti => {
            let kind = if r.preset == PresetName::RiemannEulerSingle {
                EulerKind::Single
            } else {
                EulerKind::Multi { kappa: r.kappa }
            };
            let run = run_riemann_euler(kind, r.nx_list[0], r.time.t_final, r.euler_cfl)?;
            w.moments("moments", &run.grid.x_nodes, &run.moments, run.species.k_b, r.plots)?;
        }
        other => {
            let mut setup = match kinetic_preset(other) {
                Some(k) => k.setup(r.nx_list[0], r.nv)?,
                None => custom_setup(cfg, &r)?,
            };
            setup.time = r.time.clone();
            let run = run_kinetic(&setup, r.scheme, &regime)?;
            w.moments("moments", &run.grid.x_nodes, &run.moments, run.species.k_b, r.plots)?;
            w.put("diagnostics.csv", &csv::diagnostics_csv(&run.trajectory.diagnostics))?;
        }
    }
    Ok(RunArtifacts { dir: out_dir.to_path_buf(), files: w.files, convergence })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_rel_examples() {
        assert_eq!(l1_rel(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(l1_rel(&[2.0, 4.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(l1_rel(&[1.0, 0.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert!(matches!(l1_rel(&[1.0], &[1.0, 2.0]), Err(MixError::LengthMismatch(1, 2))));
        assert!(matches!(l1_rel(&[1.0], &[0.0]), Err(MixError::ZeroReference)));
    }

    #[test]
    fn restriction_nests_grids() {
        assert_eq!(restrict(&[0.0, 1.0, 2.0, 3.0], 2), vec![0.0, 2.0]);
        assert_eq!(restrict_average(&[0.0, 1.0, 2.0, 4.0], 2), vec![0.5, 3.0]);
    }

    #[test]
    fn rates_from_errors() {
        let rows = rates(&[(40, 8e-3), (80, 1e-3), (160, 1.25e-4)]);
        assert_eq!(rows[0].rate, None);
        assert!((rows[1].rate.unwrap() - 3.0).abs() < 1e-12);
        assert!((rows[2].rate.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn identical_runs_have_zero_error() {
        let n = vec![1.0, 2.0, 3.0, 4.0];
        let fine: Vec<f64> = n.iter().flat_map(|&v| [v, 0.0]).collect();
        let rows = convergence_from_densities(&[(4, n), (8, fine)]).unwrap();
        assert_eq!(rows[0].error, 0.0);
    }
}
