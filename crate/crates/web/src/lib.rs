//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions return `mixkin::Result` so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert errors.

use wasm_bindgen::prelude::*;

use mixkin::harness::presets::{KineticPreset, T_FINAL};
use mixkin::harness::{run_kinetic, run_riemann_euler, EulerKind};
use mixkin::stepper::step_backward_euler;
use mixkin::{
    build_grid, compute_moments, shift_field, BoundaryCondition, Degree, MixError, MixtureState, RegimeParams, Result,
    Scheme, SpeciesTable,
};

fn js(e: MixError) -> JsError {
    JsError::new(&e.to_string())
}

/// Initial rows for the shift demo on `[-1, 1]`.
pub fn initial_profile(shape: &str, nx: usize) -> Result<Vec<f64>> {
    let dx = 2.0 / nx as f64;
    let f: fn(f64) -> f64 = match shape {
        "square" => |x| if x.abs() < 0.4 { 1.0 } else { 0.1 },
        "sine" => |x| 0.5 + 0.4 * (std::f64::consts::PI * x).sin(),
        "bump" => |x| 0.1 + (-40.0 * x * x).exp(),
        other => return Err(MixError::config("shape", format!("unknown shape `{other}`"))),
    };
    Ok((0..nx).map(|i| f(-1.0 + i as f64 * dx)).collect())
}

/// Applies `repeats` periodic shifts of `cells` cells to the chosen profile.
pub fn shift_profile(shape: &str, nx: usize, cells: f64, k: usize, repeats: usize) -> Result<Vec<f64>> {
    let degree = Degree::from_k(k)?;
    let grid = build_grid([-1.0, 1.0], nx, BoundaryCondition::Periodic, [-1.0, 1.0], 2)?;
    let mut row = initial_profile(shape, nx)?;
    for _ in 0..repeats {
        row = shift_field(&row, &grid, cells * grid.dx, degree)?;
    }
    Ok(row)
}

/// Two species relaxing in a homogeneous box, backward Euler steps.
/// Rows of `[t, u_1, u_2, T_1, T_2]`, flattened.
pub fn relaxation_history(mass_ratio: f64, eps: f64, kappa: f64, dt: f64, steps: usize) -> Result<Vec<f64>> {
    if !(mass_ratio > 0.0 && mass_ratio.is_finite()) {
        return Err(MixError::config("mass_ratio", "must be positive"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(MixError::config("dt", "must be positive"));
    }
    let grid = build_grid([0.0, 1.0], 4, BoundaryCondition::Periodic, [-10.0, 10.0], 120)?;
    let species = SpeciesTable::uniform(vec![1.0, mass_ratio], 1.0)?;
    let regime = RegimeParams::new(eps, kappa)?;
    let mut state = MixtureState::for_grid(2, &grid);
    state.set_maxwellian(0, &grid, 1.0, 1.0, |_| (1.0, 1.0, 2.0))?;
    state.set_maxwellian(1, &grid, mass_ratio, 1.0, |_| (1.0, -1.0, 0.5))?;
    let mut out = Vec::with_capacity(5 * (steps + 1));
    for step in 0..=steps {
        if step > 0 {
            state = step_backward_euler(&state, dt, &grid, &species, &regime)?;
        }
        let m = compute_moments(&state, &grid, &species)?;
        let (a, b) = (&m.species[0], &m.species[1]);
        out.extend_from_slice(&[step as f64 * dt, a.u[0], b.u[0], a.t[0], b.t[0]]);
    }
    Ok(out)
}

/// Fields of a shock-tube run.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Profile {
    x: Vec<f64>,
    rho: Vec<f64>,
    u: Vec<f64>,
    t: Vec<f64>,
    species_t: Vec<Vec<f64>>,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rho(&self) -> Vec<f64> {
        self.rho.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn temperature(&self) -> Vec<f64> {
        self.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn species(&self) -> usize {
        self.species_t.len()
    }

    /// Temperature of species `s`.
    pub fn species_temperature(&self, s: usize) -> Vec<f64> {
        self.species_t.get(s).cloned().unwrap_or_default()
    }
}

fn profile(x: &[f64], m: &mixkin::MomentField) -> Profile {
    Profile {
        x: x.to_vec(),
        rho: m.rho.clone(),
        u: m.u.clone(),
        t: m.t.clone(),
        species_t: m.species.iter().map(|s| s.t.clone()).collect(),
    }
}

/// Kinetic shock tube of the four-gas mixture up to the standard final time.
pub fn kinetic_shock_tube(nx: usize, nv: usize, eps: f64, kappa: f64, scheme: &str) -> Result<Profile> {
    let scheme: Scheme = scheme.parse()?;
    let regime = RegimeParams::new(eps, kappa)?;
    let run = run_kinetic(&KineticPreset::Riemann.setup(nx, nv)?, scheme, &regime)?;
    Ok(profile(&run.grid.x_nodes, &run.moments))
}

/// Hydrodynamic reference for the same shock tube; `multi` keeps one
/// velocity and temperature per species.
pub fn euler_shock_tube(nx: usize, multi: bool, kappa: f64) -> Result<Profile> {
    let kind = if multi { EulerKind::Multi { kappa } } else { EulerKind::Single };
    let run = run_riemann_euler(kind, nx, T_FINAL, 0.4)?;
    Ok(profile(&run.grid.x_nodes, &run.moments))
}

#[wasm_bindgen(js_name = shiftProfile)]
pub fn shift_profile_js(
    shape: &str,
    nx: usize,
    cells: f64,
    k: usize,
    repeats: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    shift_profile(shape, nx, cells, k, repeats).map_err(js)
}

#[wasm_bindgen(js_name = relaxationHistory)]
pub fn relaxation_history_js(
    mass_ratio: f64,
    eps: f64,
    kappa: f64,
    dt: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    relaxation_history(mass_ratio, eps, kappa, dt, steps).map_err(js)
}

#[wasm_bindgen(js_name = kineticShockTube)]
pub fn kinetic_shock_tube_js(
    nx: usize,
    nv: usize,
    eps: f64,
    kappa: f64,
    scheme: &str,
) -> std::result::Result<Profile, JsError> {
    kinetic_shock_tube(nx, nv, eps, kappa, scheme).map_err(js)
}

#[wasm_bindgen(js_name = eulerShockTube)]
pub fn euler_shock_tube_js(nx: usize, multi: bool, kappa: f64) -> std::result::Result<Profile, JsError> {
    euler_shock_tube(nx, multi, kappa).map_err(js)
}
