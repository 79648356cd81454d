//! Reference hydrodynamic solvers for the two collision-dominated limits.
//!
//! - Single velocity and temperature: species densities `n_s`, mixture
//!   momentum `rho u` and total energy `E = rho u^2/2 + 3/2 n k_B T`.
//! - Multi velocity and temperature: `(n_s, rho_s u_s, E_s)` per species with
//!   interspecies exchange sources scaled by `1/kappa`.
//!
//! Fluxes use a finite-difference Lax-Friedrichs splitting with one global
//! wave speed per stage and degree-2 CWENO reconstruction of the split
//! fluxes. Time integration is the three-stage SSP Runge-Kutta method.

use crate::error::{MixError, Result};
use crate::moments::{MomentField, SpeciesMoments, SpeciesTable};
use crate::par;
use crate::phase_space::{BoundaryCondition, PhaseGrid};
use crate::reconstruct::{face_value_deg2, Regularization};

/// Weights of the flux reconstruction; relative so that the result does not
/// depend on the units of each component.
const FLUX_REG: Regularization = Regularization::Relative(1e-6);

/// Source time steps are limited to this fraction of `kappa / max rate`.
pub const SOURCE_LIMIT: f64 = 0.5;
/// Convective time steps are limited to this fraction of `dx / max speed`.
pub const CONVECTIVE_LIMIT: f64 = 0.5;

/// Primitive fields of one species at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub n: f64,
    pub u: f64,
    pub t: f64,
}

/// Single-temperature state, components `n_1..n_L, rho u, E` stored
/// component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerStateSingle {
    pub species: usize,
    pub nx: usize,
    pub q: Vec<f64>,
    pub time: f64,
}

/// Multi-temperature state, components `(n_s, rho_s u_s, E_s)` for each
/// species, stored component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerStateMulti {
    pub species: usize,
    pub nx: usize,
    pub q: Vec<f64>,
    pub time: f64,
}

impl EulerStateSingle {
    /// Builds the state from species densities and common `u`, `T`.
    pub fn from_fields(table: &SpeciesTable, nx: usize, fields: impl Fn(usize) -> (Vec<f64>, f64, f64)) -> Self {
        let l = table.len();
        let mut q = vec![0.0; (l + 2) * nx];
        for i in 0..nx {
            let (n, u, t) = fields(i);
            let rho: f64 = (0..l).map(|s| table.masses[s] * n[s]).sum();
            let ntot: f64 = n.iter().sum();
            for s in 0..l {
                q[s * nx + i] = n[s];
            }
            q[l * nx + i] = rho * u;
            q[(l + 1) * nx + i] = 0.5 * rho * u * u + 1.5 * ntot * table.k_b * t;
        }
        EulerStateSingle { species: l, nx, q, time: 0.0 }
    }

    pub fn moments(&self, table: &SpeciesTable) -> Result<MomentField> {
        let l = self.species;
        let nx = self.nx;
        let mut per: Vec<SpeciesMoments> =
            (0..l).map(|_| SpeciesMoments { n: vec![0.0; nx], u: vec![0.0; nx], t: vec![0.0; nx] }).collect();
        for i in 0..nx {
            let (_, ntot, u, p) = single_node(&self.q, nx, l, i, table)?;
            for (s, sp) in per.iter_mut().enumerate() {
                sp.n[i] = self.q[s * nx + i];
                sp.u[i] = u;
                sp.t[i] = p / (ntot * table.k_b);
            }
        }
        Ok(MomentField::from_species(per, table))
    }

    /// `(sum_s n_s dx, momentum, energy)` totals.
    pub fn totals(&self, dx: f64) -> (Vec<f64>, f64, f64) {
        let l = self.species;
        let sum = |c: usize| self.q[c * self.nx..(c + 1) * self.nx].iter().sum::<f64>() * dx;
        ((0..l).map(sum).collect(), sum(l), sum(l + 1))
    }
}

impl EulerStateMulti {
    /// Builds the state from per-species primitive fields.
    pub fn from_fields(table: &SpeciesTable, nx: usize, fields: impl Fn(usize) -> Vec<Primitive>) -> Self {
        let l = table.len();
        let mut q = vec![0.0; 3 * l * nx];
        for i in 0..nx {
            let p = fields(i);
            for s in 0..l {
                let rho = table.masses[s] * p[s].n;
                q[3 * s * nx + i] = p[s].n;
                q[(3 * s + 1) * nx + i] = rho * p[s].u;
                q[(3 * s + 2) * nx + i] = 0.5 * rho * p[s].u * p[s].u + 1.5 * p[s].n * table.k_b * p[s].t;
            }
        }
        EulerStateMulti { species: l, nx, q, time: 0.0 }
    }

    pub fn primitive(&self, table: &SpeciesTable, s: usize, i: usize) -> Result<Primitive> {
        multi_node(&self.q, self.nx, s, i, table).map(|(n, u, p)| Primitive { n, u, t: p / (n * table.k_b) })
    }

    pub fn moments(&self, table: &SpeciesTable) -> Result<MomentField> {
        let l = self.species;
        let nx = self.nx;
        let mut per = Vec::with_capacity(l);
        for s in 0..l {
            let mut sp = SpeciesMoments { n: vec![0.0; nx], u: vec![0.0; nx], t: vec![0.0; nx] };
            for i in 0..nx {
                let p = self.primitive(table, s, i)?;
                sp.n[i] = p.n;
                sp.u[i] = p.u;
                sp.t[i] = p.t;
            }
            per.push(sp);
        }
        Ok(MomentField::from_species(per, table))
    }

    /// `(sum_s n_s dx, total momentum, total energy)`.
    pub fn totals(&self, dx: f64) -> (Vec<f64>, f64, f64) {
        let nx = self.nx;
        let sum = |c: usize| self.q[c * nx..(c + 1) * nx].iter().sum::<f64>() * dx;
        let mass = (0..self.species).map(|s| sum(3 * s)).collect();
        let mom = (0..self.species).map(|s| sum(3 * s + 1)).sum();
        let en = (0..self.species).map(|s| sum(3 * s + 2)).sum();
        (mass, mom, en)
    }
}

/// `(rho, n, u, p)` of a single-temperature node.
fn single_node(q: &[f64], nx: usize, l: usize, i: usize, table: &SpeciesTable) -> Result<(f64, f64, f64, f64)> {
    let mut rho = 0.0;
    let mut n = 0.0;
    for s in 0..l {
        let ns = q[s * nx + i];
        if !(ns > 0.0) {
            return Err(MixError::VacuumState { node: i });
        }
        rho += table.masses[s] * ns;
        n += ns;
    }
    let mom = q[l * nx + i];
    let e = q[(l + 1) * nx + i];
    let u = mom / rho;
    let p = 2.0 / 3.0 * (e - 0.5 * mom * u);
    if !(p > 0.0) {
        return Err(MixError::VacuumState { node: i });
    }
    Ok((rho, n, u, p))
}

/// `(n, u, p)` of species `s` at one multi-temperature node.
fn multi_node(q: &[f64], nx: usize, s: usize, i: usize, table: &SpeciesTable) -> Result<(f64, f64, f64)> {
    let n = q[3 * s * nx + i];
    if !(n > 0.0) {
        return Err(MixError::VacuumState { node: i });
    }
    let rho = table.masses[s] * n;
    let mom = q[(3 * s + 1) * nx + i];
    let u = mom / rho;
    let p = 2.0 / 3.0 * (q[(3 * s + 2) * nx + i] - 0.5 * mom * u);
    if !(p > 0.0) {
        return Err(MixError::VacuumState { node: i });
    }
    Ok((n, u, p))
}

fn sound(p: f64, rho: f64) -> f64 {
    (5.0 * p / (3.0 * rho)).sqrt()
}

/// Physical fluxes and the largest wave speed of a single-temperature state.
fn single_fluxes(q: &[f64], nx: usize, l: usize, table: &SpeciesTable) -> Result<(Vec<f64>, f64)> {
    let mut f = vec![0.0; q.len()];
    let mut speed = 0.0f64;
    for i in 0..nx {
        let (rho, _, u, p) = single_node(q, nx, l, i, table)?;
        for s in 0..l {
            f[s * nx + i] = q[s * nx + i] * u;
        }
        f[l * nx + i] = q[l * nx + i] * u + p;
        f[(l + 1) * nx + i] = (q[(l + 1) * nx + i] + p) * u;
        speed = speed.max(u.abs() + sound(p, rho));
    }
    Ok((f, speed))
}

fn multi_fluxes(q: &[f64], nx: usize, l: usize, table: &SpeciesTable) -> Result<(Vec<f64>, f64)> {
    let mut f = vec![0.0; q.len()];
    let mut speed = 0.0f64;
    for s in 0..l {
        for i in 0..nx {
            let (n, u, p) = multi_node(q, nx, s, i, table)?;
            f[3 * s * nx + i] = n * u;
            f[(3 * s + 1) * nx + i] = q[(3 * s + 1) * nx + i] * u + p;
            f[(3 * s + 2) * nx + i] = (q[(3 * s + 2) * nx + i] + p) * u;
            speed = speed.max(u.abs() + sound(p, table.masses[s] * n));
        }
    }
    Ok((f, speed))
}

/// `-(F_{i+1/2} - F_{i-1/2}) / dx` for every component, from fluxes `f`,
/// states `q` and splitting speed `alpha`.
fn flux_divergence(q: &[f64], f: &[f64], alpha: f64, nx: usize, grid: &PhaseGrid) -> Vec<f64> {
    let comps = q.len() / nx;
    let bc = grid.bc;
    let idx = |i: isize| -> usize {
        match bc {
            BoundaryCondition::Periodic => i.rem_euclid(nx as isize) as usize,
            BoundaryCondition::Freeflow => i.clamp(0, nx as isize - 1) as usize,
        }
    };
    let rows = par::map(comps, |c| {
        let qc = &q[c * nx..(c + 1) * nx];
        let fc = &f[c * nx..(c + 1) * nx];
        let fp = |i: isize| 0.5 * (fc[idx(i)] + alpha * qc[idx(i)]);
        let fm = |i: isize| 0.5 * (fc[idx(i)] - alpha * qc[idx(i)]);
        // faces[k] is F_{k - 1/2}
        let mut faces = vec![0.0; nx + 1];
        for (k, face) in faces.iter_mut().enumerate() {
            let i = k as isize - 1;
            let plus = face_value_deg2(&[fp(i - 1), fp(i), fp(i + 1)], FLUX_REG);
            let minus = face_value_deg2(&[fm(i + 2), fm(i + 1), fm(i)], FLUX_REG);
            *face = plus + minus;
        }
        (0..nx).map(|i| -(faces[i + 1] - faces[i]) / grid.dx).collect::<Vec<f64>>()
    });
    rows.concat()
}

pub fn single_euler_rhs(state: &EulerStateSingle, grid: &PhaseGrid, species: &SpeciesTable) -> Result<Vec<f64>> {
    single_rhs(&state.q, state.nx, grid, species).map(|(r, _)| r)
}

fn single_rhs(q: &[f64], nx: usize, grid: &PhaseGrid, species: &SpeciesTable) -> Result<(Vec<f64>, f64)> {
    let (f, speed) = single_fluxes(q, nx, species.len(), species)?;
    Ok((flux_divergence(q, &f, speed, nx, grid), speed))
}

/// `(R_sk, S_sk)`: momentum and energy gained by species `s` from `k`.
pub fn exchange_terms(table: &SpeciesTable, s: usize, k: usize, ps: Primitive, pk: Primitive) -> (f64, f64) {
    let (ms, mk) = (table.masses[s], table.masses[k]);
    let lam = table.lambda(s, k);
    let msk = ms * mk / (ms + mk);
    let nn = ps.n * pk.n;
    let r = lam * msk * nn * (pk.u - ps.u);
    let e = lam * msk / (ms + mk) * nn * ((ms * ps.u + mk * pk.u) * (pk.u - ps.u) + 3.0 * table.k_b * (pk.t - ps.t));
    (r, e)
}

/// Largest interspecies relaxation rate `max_s sum_{k != s} lambda_sk n_k`.
fn source_rate(q: &[f64], nx: usize, table: &SpeciesTable) -> f64 {
    let l = table.len();
    let mut rate = 0.0f64;
    for i in 0..nx {
        for s in 0..l {
            let r: f64 = (0..l).filter(|&k| k != s).map(|k| table.lambda(s, k) * q[3 * k * nx + i]).sum();
            rate = rate.max(r);
        }
    }
    rate
}

pub fn multi_euler_rhs(
    state: &EulerStateMulti,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    kappa: f64,
) -> Result<Vec<f64>> {
    multi_rhs(&state.q, state.nx, grid, species, kappa).map(|(r, _)| r)
}

fn multi_rhs(q: &[f64], nx: usize, grid: &PhaseGrid, species: &SpeciesTable, kappa: f64) -> Result<(Vec<f64>, f64)> {
    if !(kappa > 0.0) {
        return Err(MixError::InvalidRegime(format!("kappa = {kappa} must be positive")));
    }
    let l = species.len();
    let (f, speed) = multi_fluxes(q, nx, l, species)?;
    let mut rhs = flux_divergence(q, &f, speed, nx, grid);
    let mut prim = vec![Primitive { n: 0.0, u: 0.0, t: 0.0 }; l];
    for i in 0..nx {
        for (s, p) in prim.iter_mut().enumerate() {
            let (n, u, pr) = multi_node(q, nx, s, i, species)?;
            *p = Primitive { n, u, t: pr / (n * species.k_b) };
        }
        for s in 0..l {
            let mut r = 0.0;
            let mut e = 0.0;
            for k in 0..l {
                if k != s {
                    let (rs, es) = exchange_terms(species, s, k, prim[s], prim[k]);
                    r += rs;
                    e += es;
                }
            }
            rhs[(3 * s + 1) * nx + i] += r / kappa;
            rhs[(3 * s + 2) * nx + i] += e / kappa;
        }
    }
    Ok((rhs, speed))
}

/// Which limit system a reference run integrates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EulerSystem {
    Single,
    Multi { kappa: f64 },
}

/// Constant-CFL schedule for the reference solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerTimeControl {
    pub cfl: f64,
    pub t_final: f64,
}

/// One SSP-RK3 step of size `dt` on the raw component vector, checking both
/// step restrictions against the state at the start of the step.
fn rk3_step(
    q: &[f64],
    nx: usize,
    dt: f64,
    system: EulerSystem,
    grid: &PhaseGrid,
    species: &SpeciesTable,
) -> Result<Vec<f64>> {
    let rhs = |v: &[f64]| -> Result<(Vec<f64>, f64)> {
        match system {
            EulerSystem::Single => single_rhs(v, nx, grid, species),
            EulerSystem::Multi { kappa } => multi_rhs(v, nx, grid, species, kappa),
        }
    };
    let (l0, speed) = rhs(q)?;
    let conv = CONVECTIVE_LIMIT * grid.dx / speed;
    if dt > conv * (1.0 + 1e-12) {
        return Err(MixError::StepTooLarge { dt, limit: conv });
    }
    if let EulerSystem::Multi { kappa } = system {
        let rate = source_rate(q, nx, species);
        if rate > 0.0 {
            let lim = SOURCE_LIMIT * kappa / rate;
            if dt > lim * (1.0 + 1e-12) {
                return Err(MixError::StepTooLarge { dt, limit: lim });
            }
        }
    }
    let q1: Vec<f64> = q.iter().zip(&l0).map(|(a, b)| a + dt * b).collect();
    let (l1, _) = rhs(&q1)?;
    let q2: Vec<f64> = (0..q.len()).map(|c| 0.75 * q[c] + 0.25 * (q1[c] + dt * l1[c])).collect();
    let (l2, _) = rhs(&q2)?;
    Ok((0..q.len()).map(|c| q[c] / 3.0 + 2.0 / 3.0 * (q2[c] + dt * l2[c])).collect())
}

/// Largest admissible step for the current state.
fn stable_dt(
    q: &[f64],
    nx: usize,
    cfl: f64,
    system: EulerSystem,
    grid: &PhaseGrid,
    species: &SpeciesTable,
) -> Result<f64> {
    let speed = match system {
        EulerSystem::Single => single_fluxes(q, nx, species.len(), species)?.1,
        EulerSystem::Multi { .. } => multi_fluxes(q, nx, species.len(), species)?.1,
    };
    let mut dt = cfl * grid.dx / speed;
    if let EulerSystem::Multi { kappa } = system {
        let rate = source_rate(q, nx, species);
        if rate > 0.0 {
            dt = dt.min(SOURCE_LIMIT * kappa / rate);
        }
    }
    Ok(dt)
}

fn rk3_advance(
    q: &[f64],
    nx: usize,
    system: EulerSystem,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    tc: &EulerTimeControl,
) -> Result<Vec<f64>> {
    if !(tc.cfl > 0.0) || tc.cfl > CONVECTIVE_LIMIT {
        return Err(MixError::StepTooLarge { dt: tc.cfl, limit: CONVECTIVE_LIMIT });
    }
    if !(tc.t_final >= 0.0) {
        return Err(MixError::InvalidTimeControl("t_final must be non-negative".into()));
    }
    let mut q = q.to_vec();
    let mut t = 0.0;
    let mut step = 0;
    while t < tc.t_final {
        let mut dt = stable_dt(&q, nx, tc.cfl, system, grid, species)?;
        let last = t + dt >= tc.t_final * (1.0 - 1e-14);
        if last {
            dt = tc.t_final - t;
        }
        q = rk3_step(&q, nx, dt, system, grid, species)?;
        step += 1;
        if q.iter().any(|v| !v.is_finite()) {
            return Err(MixError::NonFinite { step });
        }
        t = if last { tc.t_final } else { t + dt };
    }
    Ok(q)
}

pub fn ssp_rk3_step_single(
    state: &EulerStateSingle,
    dt: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
) -> Result<EulerStateSingle> {
    let q = rk3_step(&state.q, state.nx, dt, EulerSystem::Single, grid, species)?;
    Ok(EulerStateSingle { q, time: state.time + dt, ..state.clone() })
}

pub fn ssp_rk3_step_multi(
    state: &EulerStateMulti,
    dt: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    kappa: f64,
) -> Result<EulerStateMulti> {
    let q = rk3_step(&state.q, state.nx, dt, EulerSystem::Multi { kappa }, grid, species)?;
    Ok(EulerStateMulti { q, time: state.time + dt, ..state.clone() })
}

pub fn ssp_rk3_advance_single(
    state: &EulerStateSingle,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    tc: &EulerTimeControl,
) -> Result<EulerStateSingle> {
    let q = rk3_advance(&state.q, state.nx, EulerSystem::Single, grid, species, tc)?;
    Ok(EulerStateSingle { q, time: state.time + tc.t_final, ..state.clone() })
}

pub fn ssp_rk3_advance_multi(
    state: &EulerStateMulti,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    tc: &EulerTimeControl,
    kappa: f64,
) -> Result<EulerStateMulti> {
    let q = rk3_advance(&state.q, state.nx, EulerSystem::Multi { kappa }, grid, species, tc)?;
    Ok(EulerStateMulti { q, time: state.time + tc.t_final, ..state.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::build_grid;
    use proptest::prelude::*;

    fn xgrid(nx: usize, bc: BoundaryCondition) -> PhaseGrid {
        build_grid([-1.0, 1.0], nx, bc, [-1.0, 1.0], 2).unwrap()
    }

    fn pair() -> SpeciesTable {
        SpeciesTable::uniform(vec![1.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn hand_evaluated_exchange_terms() {
        let sp = pair();
        let a = Primitive { n: 1.0, u: 1.0, t: 1.0 };
        let b = Primitive { n: 1.0, u: 0.0, t: 1.0 };
        let (r12, s12) = exchange_terms(&sp, 0, 1, a, b);
        let (r21, s21) = exchange_terms(&sp, 1, 0, b, a);
        assert!((r12 + 0.5).abs() < 1e-15 && (r21 - 0.5).abs() < 1e-15);
        assert!((s12 + 0.25).abs() < 1e-15 && (s21 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_has_no_exchange() {
        let sp = SpeciesTable::uniform(vec![2.0, 7.0, 3.0], 2.0).unwrap();
        let p = |n| Primitive { n, u: 0.4, t: 1.7 };
        for (s, k) in [(0, 1), (1, 2), (2, 0)] {
            let (r, e) = exchange_terms(&sp, s, k, p(0.3), p(1.2));
            assert_eq!(r, 0.0);
            assert!(e.abs() < 1e-15);
        }
    }

    #[test]
    fn constant_state_has_zero_rhs() {
        let sp = SpeciesTable::uniform(vec![58.5, 18.0], 3.0).unwrap();
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Freeflow] {
            let g = xgrid(20, bc);
            let st = EulerStateSingle::from_fields(&sp, 20, |_| (vec![0.1, 0.3], 0.7, 2.0));
            let r = single_euler_rhs(&st, &g, &sp).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-14 * 1e2), "{r:?}");
            let st = EulerStateMulti::from_fields(&sp, 20, |_| {
                vec![Primitive { n: 0.1, u: 0.7, t: 2.0 }, Primitive { n: 0.3, u: 0.7, t: 2.0 }]
            });
            let r = multi_euler_rhs(&st, &g, &sp, 1e-3).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-12), "{r:?}");
        }
    }

    #[test]
    fn vacuum_is_reported() {
        let sp = pair();
        let g = xgrid(8, BoundaryCondition::Periodic);
        let st = EulerStateSingle::from_fields(&sp, 8, |i| (vec![1.0, if i == 3 { 0.0 } else { 1.0 }], 0.0, 1.0));
        assert!(matches!(single_euler_rhs(&st, &g, &sp), Err(MixError::VacuumState { node: 3 })));
    }

    #[test]
    fn step_restrictions_are_enforced() {
        let sp = pair();
        let g = xgrid(10, BoundaryCondition::Periodic);
        let st = EulerStateSingle::from_fields(&sp, 10, |_| (vec![1.0, 1.0], 0.0, 1.0));
        assert!(matches!(ssp_rk3_step_single(&st, 1.0, &g, &sp), Err(MixError::StepTooLarge { .. })));
        let m = EulerStateMulti::from_fields(&sp, 10, |_| vec![Primitive { n: 1.0, u: 0.0, t: 1.0 }; 2]);
        // convective limit ~0.05, source limit 0.5 kappa
        assert!(matches!(ssp_rk3_step_multi(&m, 0.01, &g, &sp, 1e-3), Err(MixError::StepTooLarge { .. })));
        let same = ssp_rk3_step_multi(&m, 0.01, &g, &sp, 1.0).unwrap();
        for (a, b) in same.q.iter().zip(&m.q) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn periodic_run_conserves_totals() {
        let sp = SpeciesTable::new(vec![1.0, 3.0], vec![1.0, 2.0, 2.0, 1.0], 1.0).unwrap();
        let g = xgrid(64, BoundaryCondition::Periodic);
        let x = g.x_nodes.clone();
        let st = EulerStateMulti::from_fields(&sp, 64, |i| {
            let w = (std::f64::consts::PI * x[i]).sin();
            vec![
                Primitive { n: 1.0 + 0.3 * w, u: 0.2 * w, t: 1.0 },
                Primitive { n: 0.5, u: -0.1 * w, t: 1.0 + 0.2 * w },
            ]
        });
        let tc = EulerTimeControl { cfl: 0.4, t_final: 0.3 };
        let out = ssp_rk3_advance_multi(&st, &g, &sp, &tc, 0.05).unwrap();
        let (m0, p0, e0) = st.totals(g.dx);
        let (m1, p1, e1) = out.totals(g.dx);
        for s in 0..2 {
            assert!((m0[s] - m1[s]).abs() < 1e-12 * m0[s]);
        }
        assert!((p0 - p1).abs() < 1e-12);
        assert!((e0 - e1).abs() < 1e-12 * e0);
    }

    #[test]
    fn single_and_multi_agree_on_common_states() {
        // equal masses, proportional densities
        let sp = SpeciesTable::uniform(vec![2.0, 2.0], 1.0).unwrap();
        let g = xgrid(50, BoundaryCondition::Freeflow);
        let x = g.x_nodes.clone();
        let f = |i: usize| {
            let r = if x[i] < 0.1 { 1.0 } else { 0.2 };
            (r, 0.3 * (3.0 * x[i]).sin(), if x[i] < 0.1 { 2.0 } else { 1.0 })
        };
        let single = EulerStateSingle::from_fields(&sp, 50, |i| {
            let (r, u, t) = f(i);
            (vec![0.25 * r, 0.75 * r], u, t)
        });
        let multi = EulerStateMulti::from_fields(&sp, 50, |i| {
            let (r, u, t) = f(i);
            vec![Primitive { n: 0.25 * r, u, t }, Primitive { n: 0.75 * r, u, t }]
        });
        let dt = 0.4 * g.dx / 3.0;
        let a = ssp_rk3_step_single(&single, dt, &g, &sp).unwrap().moments(&sp).unwrap();
        let b = ssp_rk3_step_multi(&multi, dt, &g, &sp, 1e-2).unwrap().moments(&sp).unwrap();
        for i in 0..50 {
            assert!((a.rho[i] - b.rho[i]).abs() < 1e-12);
            assert!((a.u[i] - b.u[i]).abs() < 1e-12);
            assert!((a.t[i] - b.t[i]).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn exchange_is_antisymmetric(
            n in proptest::collection::vec(0.01f64..3.0, 3),
            u in proptest::collection::vec(-2.0f64..2.0, 3),
            t in proptest::collection::vec(0.1f64..5.0, 3),
        ) {
            let sp = SpeciesTable::new(vec![58.5, 18.0, 40.0], vec![5.0, 6.0, 2.0, 6.0, 4.0, 5.0, 2.0, 5.0, 4.0], 1.0).unwrap();
            let p: Vec<Primitive> = (0..3).map(|s| Primitive { n: n[s], u: u[s], t: t[s] }).collect();
            let (mut r, mut e, mut scale) = (0.0, 0.0, 0.0f64);
            for s in 0..3 {
                for k in 0..3 {
                    if k != s {
                        let (a, b) = exchange_terms(&sp, s, k, p[s], p[k]);
                        r += a;
                        e += b;
                        scale = scale.max(a.abs()).max(b.abs());
                    }
                }
            }
            prop_assert!(r.abs() <= 1e-14 * scale.max(1.0));
            prop_assert!(e.abs() <= 1e-14 * scale.max(1.0));
        }
    }
}
