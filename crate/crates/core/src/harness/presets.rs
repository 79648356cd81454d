//! Initial data and parameters of the standard experiments.

use crate::error::Result;
use crate::euler::{EulerStateMulti, EulerStateSingle, Primitive};
use crate::moments::{MixtureState, SpeciesTable};
use crate::phase_space::{build_grid, BoundaryCondition, PhaseGrid, TimeControl};

/// Molecular masses of the four-gas mixture.
pub const MIXTURE_MASSES: [f64; 4] = [58.5, 18.0, 40.0, 36.5];

/// Symmetric interaction strengths of the four-gas mixture, row-major.
#[rustfmt::skip]
pub const MIXTURE_LAMBDA: [f64; 16] = [
    5.0, 6.0, 2.0, 7.0,
    6.0, 4.0, 5.0, 8.0,
    2.0, 5.0, 4.0, 3.0,
    7.0, 8.0, 3.0, 6.0,
];

pub const SMOOTH_SIGMA: [f64; 4] = [10.0, 13.0, 16.0, 19.0];
pub const VELOCITY_DOMAIN: [f64; 2] = [-15.0, 15.0];
pub const SPACE_DOMAIN: [f64; 2] = [-1.0, 1.0];
pub const DEFAULT_NV: usize = 60;
pub const T_FINAL: f64 = 0.2;

/// Position of the initial discontinuity of the shock-tube data.
pub const RIEMANN_INTERFACE: f64 = 0.5;
/// Left/right global `(rho, u, p)` and the species mass fractions.
pub const RIEMANN_LEFT: (f64, f64, f64) = (1.0, 0.0, 5.0 / 3.0);
pub const RIEMANN_RIGHT: (f64, f64, f64) = (0.125, 0.0, 1.0 / 6.0);
pub const RIEMANN_FRACTIONS: [f64; 4] = [0.1, 0.2, 0.3, 0.4];

pub fn mixture_species() -> SpeciesTable {
    SpeciesTable::new(MIXTURE_MASSES.to_vec(), MIXTURE_LAMBDA.to_vec(), 1.0).expect("mixture table is valid")
}

/// CFL 2 over the whole run.
pub fn smooth_schedule() -> TimeControl {
    TimeControl::constant(2.0, T_FINAL)
}

/// CFL 0.2 up to `t = 0.02`, then CFL 2.
pub fn startup_schedule() -> TimeControl {
    TimeControl { cfl_schedule: vec![(0.02, 0.2), (T_FINAL, 2.0)], t_final: T_FINAL, dt_cap: None }
}

/// Everything needed to start a kinetic run.
#[derive(Debug, Clone)]
pub struct KineticSetup {
    pub grid: PhaseGrid,
    pub species: SpeciesTable,
    pub state: MixtureState,
    pub time: TimeControl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticPreset {
    /// Four-gas mixture with smooth velocity bumps.
    Accuracy,
    /// One gas standing in for the four identical gases.
    IndiffSingle,
    /// Four identical gases.
    IndiffFour,
    /// Shock tube with the four-gas mixture.
    Riemann,
}

impl KineticPreset {
    pub fn default_time(self) -> TimeControl {
        match self {
            KineticPreset::Accuracy => smooth_schedule(),
            _ => startup_schedule(),
        }
    }

    pub fn bc(self) -> BoundaryCondition {
        match self {
            KineticPreset::Riemann => BoundaryCondition::Freeflow,
            _ => BoundaryCondition::Periodic,
        }
    }

    pub fn species(self) -> SpeciesTable {
        match self {
            KineticPreset::Accuracy | KineticPreset::Riemann => mixture_species(),
            KineticPreset::IndiffSingle => SpeciesTable::uniform(vec![58.5], 5.0).expect("valid"),
            KineticPreset::IndiffFour => SpeciesTable::uniform(vec![58.5; 4], 5.0).expect("valid"),
        }
    }

    pub fn setup(self, nx: usize, nv: usize) -> Result<KineticSetup> {
        let grid = build_grid(SPACE_DOMAIN, nx, self.bc(), VELOCITY_DOMAIN, nv)?;
        let species = self.species();
        let l = species.len();
        let mut state = MixtureState::for_grid(l, &grid);
        let kb = species.k_b;
        match self {
            KineticPreset::Accuracy => {
                let n_tot: f64 = species.masses.iter().map(|m| 1.0 / m).sum();
                let t0 = 4.0 / n_tot;
                for s in 0..l {
                    let m = species.masses[s];
                    let sig = SMOOTH_SIGMA[s];
                    let k = (s + 1) as f64;
                    state.set_maxwellian(s, &grid, m, kb, |x| {
                        let a = sig * x - 1.0 + k / 3.0;
                        let b = sig * x + 3.0 - k / 10.0;
                        (1.0 / m, k / sig * ((-a * a).exp() + (-b * b).exp()), t0)
                    })?;
                }
            }
            KineticPreset::IndiffSingle | KineticPreset::IndiffFour => {
                let m = 58.5;
                let n_each = if l == 1 { 4.0 / m } else { 1.0 / m };
                let t0 = 4.0 / (n_each * l as f64);
                for s in 0..l {
                    state.set_maxwellian(s, &grid, m, kb, |x| (n_each, indiff_velocity(x), t0))?;
                }
            }
            KineticPreset::Riemann => {
                for s in 0..l {
                    state.set_maxwellian(s, &grid, species.masses[s], kb, |x| {
                        let (n, u, t) = riemann_fields(x, &species);
                        (n[s], u, t)
                    })?;
                }
            }
        }
        Ok(KineticSetup { grid, species, state, time: self.default_time() })
    }
}

pub fn indiff_velocity(x: f64) -> f64 {
    let a = 10.0 * x - 1.0 + 1.0 / 3.0;
    let b = 10.0 * x + 3.0 - 0.1;
    0.1 * ((-a * a).exp() - 2.0 * (-b * b).exp())
}

/// Species densities, common velocity and temperature of the shock tube at `x`.
pub fn riemann_fields(x: f64, species: &SpeciesTable) -> (Vec<f64>, f64, f64) {
    let (rho, u, p) = if x < RIEMANN_INTERFACE { RIEMANN_LEFT } else { RIEMANN_RIGHT };
    let n: Vec<f64> = RIEMANN_FRACTIONS.iter().zip(&species.masses).map(|(f, m)| f * rho / m).collect();
    let n_tot: f64 = n.iter().sum();
    (n, u, p / (n_tot * species.k_b))
}

/// Free-flow grid for the hydrodynamic reference runs (velocity part unused).
pub fn euler_grid(nx: usize) -> Result<PhaseGrid> {
    build_grid(SPACE_DOMAIN, nx, BoundaryCondition::Freeflow, [-1.0, 1.0], 2)
}

pub fn riemann_single(nx: usize) -> Result<(PhaseGrid, SpeciesTable, EulerStateSingle)> {
    let grid = euler_grid(nx)?;
    let sp = mixture_species();
    let st = EulerStateSingle::from_fields(&sp, nx, |i| riemann_fields(grid.x_nodes[i], &sp));
    Ok((grid, sp, st))
}

pub fn riemann_multi(nx: usize) -> Result<(PhaseGrid, SpeciesTable, EulerStateMulti)> {
    let grid = euler_grid(nx)?;
    let sp = mixture_species();
    let st = EulerStateMulti::from_fields(&sp, nx, |i| {
        let (n, u, t) = riemann_fields(grid.x_nodes[i], &sp);
        n.iter().map(|&n| Primitive { n, u, t }).collect()
    });
    Ok((grid, sp, st))
}
