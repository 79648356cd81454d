//! Semi-Lagrangian time stepping.
//!
//! Every scheme reduces to the same two ingredients:
//!
//! 1. a transported field `g~*`, a weighted sum of earlier data shifted along
//!    the characteristics `x_i - c v_j dt`;
//! 2. the implicit relaxation with effective step `h`: moments of `g~*` give
//!    the frozen densities, two small linear solves give the new velocities
//!    and temperatures, and the distributions follow pointwise.
//!
//! Backward Euler is the one-stage DIRK. Stiffly accurate DIRK schemes return
//! their last stage; BDF schemes combine the shifted history and use the
//! implicit weight `beta dt`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};
use crate::moments::{compute_moments, fill_maxwellian, node_moments, MixtureState, SpeciesTable};
use crate::par;
use crate::phase_space::{PhaseGrid, TimeControl};
use crate::reconstruct::{reconstruct_row, Degree, Regularization};
use crate::relax::{
    node_coefficients, node_targets, relax_update, solve_temperatures, solve_velocities, DensityProportional,
    PairCoeffs, RegimeParams,
};

/// Butcher tableau of a diagonally implicit Runge-Kutta method.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    pub stages: usize,
    /// Row-major `stages x stages`, lower triangular.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl Tableau {
    pub fn implicit_euler() -> Self {
        Tableau { stages: 1, a: vec![1.0], b: vec![1.0], c: vec![1.0] }
    }

    /// Two-stage, second order, L-stable; `alpha = 1 - sqrt(2)/2`.
    pub fn dirk2() -> Self {
        let al = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        Tableau { stages: 2, a: vec![al, 0.0, 1.0 - al, al], b: vec![1.0 - al, al], c: vec![al, 1.0] }
    }

    /// Three-stage, third order, L-stable.
    pub fn dirk3() -> Self {
        let g = 0.4358665215;
        let d = -0.644363171;
        let c2 = (1.0 + g) / 2.0;
        let b1 = 1.0 - d - g;
        Tableau { stages: 3, a: vec![g, 0.0, 0.0, c2 - g, g, 0.0, b1, d, g], b: vec![b1, d, g], c: vec![g, c2, 1.0] }
    }

    pub fn a(&self, m: usize, l: usize) -> f64 {
        self.a[m * self.stages + l]
    }

    /// Lower triangular, nonzero diagonal, last row equal to `b`, `c` equal
    /// to the row sums.
    pub fn validate(&self) -> Result<()> {
        let s = self.stages;
        let bad = |msg: &str| Err(MixError::InvalidTimeControl(format!("tableau: {msg}")));
        if s == 0 || self.a.len() != s * s || self.b.len() != s || self.c.len() != s {
            return bad("inconsistent sizes");
        }
        for m in 0..s {
            if self.a(m, m) == 0.0 {
                return bad("zero diagonal entry");
            }
            for l in m + 1..s {
                if self.a(m, l) != 0.0 {
                    return bad("not lower triangular");
                }
            }
            let row: f64 = (0..s).map(|l| self.a(m, l)).sum();
            if (row - self.c[m]).abs() > 1e-9 {
                return bad("abscissae differ from row sums");
            }
        }
        for l in 0..s {
            if (self.a(s - 1, l) - self.b[l]).abs() > 1e-12 {
                return bad("not stiffly accurate");
            }
        }
        Ok(())
    }
}

/// `g^{n+1} = sum_k alpha_k g^{n+1-k} + beta dt Q(g^{n+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct BdfCoeffs {
    pub order: usize,
    pub alpha: Vec<f64>,
    pub beta: f64,
}

impl BdfCoeffs {
    pub fn bdf2() -> Self {
        BdfCoeffs { order: 2, alpha: vec![4.0 / 3.0, -1.0 / 3.0], beta: 2.0 / 3.0 }
    }

    pub fn bdf3() -> Self {
        BdfCoeffs { order: 3, alpha: vec![18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0], beta: 6.0 / 11.0 }
    }
}

/// Relaxation operator `K` evaluated at one stage, same layout as the state.
#[derive(Debug, Clone, PartialEq)]
pub struct StageField {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "BE")]
    BackwardEuler,
    #[serde(rename = "RK2-QCW23")]
    Rk2Qcw23,
    #[serde(rename = "RK3-QCW35")]
    Rk3Qcw35,
    #[serde(rename = "BDF2-QCW23")]
    Bdf2Qcw23,
    #[serde(rename = "BDF3-QCW35")]
    Bdf3Qcw35,
}

impl Scheme {
    pub const ALL: [Scheme; 5] =
        [Scheme::BackwardEuler, Scheme::Rk2Qcw23, Scheme::Rk3Qcw35, Scheme::Bdf2Qcw23, Scheme::Bdf3Qcw35];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::BackwardEuler => "BE",
            Scheme::Rk2Qcw23 => "RK2-QCW23",
            Scheme::Rk3Qcw35 => "RK3-QCW35",
            Scheme::Bdf2Qcw23 => "BDF2-QCW23",
            Scheme::Bdf3Qcw35 => "BDF3-QCW35",
        }
    }

    pub fn degree(self) -> Degree {
        match self {
            Scheme::BackwardEuler | Scheme::Rk2Qcw23 | Scheme::Bdf2Qcw23 => Degree::Two,
            Scheme::Rk3Qcw35 | Scheme::Bdf3Qcw35 => Degree::Four,
        }
    }

    /// Tableau used directly (one-step schemes) or for the BDF startup.
    pub fn tableau(self) -> Tableau {
        match self {
            Scheme::BackwardEuler => Tableau::implicit_euler(),
            Scheme::Rk2Qcw23 | Scheme::Bdf2Qcw23 => Tableau::dirk2(),
            Scheme::Rk3Qcw35 | Scheme::Bdf3Qcw35 => Tableau::dirk3(),
        }
    }

    pub fn bdf(self) -> Option<BdfCoeffs> {
        match self {
            Scheme::Bdf2Qcw23 => Some(BdfCoeffs::bdf2()),
            Scheme::Bdf3Qcw35 => Some(BdfCoeffs::bdf3()),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = MixError;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| MixError::config("scheme", format!("unknown scheme `{s}`")))
    }
}

/// One term of a transported field: `weight * g(x_i - lag v_j dt, v_j)`.
struct Term<'a> {
    g1: &'a [f64],
    g2: &'a [f64],
    weight: f64,
    lag: f64,
}

/// Sum of shifted terms, computed row by row along x.
fn transport(
    terms: &[Term],
    dt: f64,
    grid: &PhaseGrid,
    species: usize,
    degree: Degree,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let nx = grid.nx();
    let nv = grid.nv();
    let rows = par::map(species * nv, |r| -> Result<(Vec<f64>, Vec<f64>)> {
        let (s, j) = (r / nv, r % nv);
        let mut out1 = vec![0.0; nx];
        let mut out2 = vec![0.0; nx];
        let mut buf = vec![0.0; nx];
        let mut shifted = vec![0.0; nx];
        for term in terms {
            let disp = -term.lag * grid.v_nodes[j] * dt;
            for (g, out) in [(term.g1, &mut out1), (term.g2, &mut out2)] {
                for i in 0..nx {
                    buf[i] = g[(s * nx + i) * nv + j];
                }
                if disp == 0.0 {
                    for i in 0..nx {
                        out[i] += term.weight * buf[i];
                    }
                    continue;
                }
                let field = reconstruct_row(&buf, degree, grid.bc, Regularization::default())?;
                field.shift_into(&buf, grid, disp, &mut shifted);
                for i in 0..nx {
                    out[i] += term.weight * shifted[i];
                }
            }
        }
        Ok((out1, out2))
    });
    let mut g1 = vec![0.0; species * nx * nv];
    let mut g2 = vec![0.0; species * nx * nv];
    for (r, row) in rows.into_iter().enumerate() {
        let (a, b) = row?;
        let (s, j) = (r / nv, r % nv);
        for i in 0..nx {
            g1[(s * nx + i) * nv + j] = a[i];
            g2[(s * nx + i) * nv + j] = b[i];
        }
    }
    Ok((g1, g2))
}

/// Implicit relaxation of a transported field with effective step `h`.
///
/// Densities are those of `g~`; velocities and temperatures come from the
/// implicit moment solves, then each velocity row is relaxed toward its pair
/// Maxwellians.
pub fn relax_stage(
    g1t: &[f64],
    g2t: &[f64],
    h: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    regime: &RegimeParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = species.len();
    let nx = grid.nx();
    let nv = grid.nv();
    let v = &grid.v_nodes;
    let de = h / regime.epsilon;
    let dk = h / regime.kappa;
    let nodes = par::map(nx, |i| -> Result<Vec<f64>> {
        let mut n = vec![0.0; l];
        let mut ut = vec![0.0; l];
        let mut tt = vec![0.0; l];
        for s in 0..l {
            let a = (s * nx + i) * nv;
            let (ns, us, ts) =
                node_moments(&g1t[a..a + nv], &g2t[a..a + nv], v, grid.dv, species.masses[s], species.k_b);
            if !(ns > 0.0) {
                return Err(MixError::NonPositiveDensity { species: s, node: i, value: ns });
            }
            n[s] = ns;
            ut[s] = us;
            tt[s] = ts;
        }
        let mut coeffs = vec![PairCoeffs::default(); l * l];
        node_coefficients(&n, species, &DensityProportional, i, &mut coeffs)?;
        let u_new = solve_velocities(&ut, &coeffs, dk)?;
        let t_new = solve_temperatures(&tt, &u_new, &ut, &coeffs, dk, species).map_err(|e| match e {
            MixError::NegativeTemperature { species, value, .. } => {
                MixError::NegativeTemperature { species, node: i, value }
            }
            other => other,
        })?;
        node_targets(&u_new, &t_new, species, i, &mut coeffs)?;
        let mut out = vec![0.0; 2 * l * nv];
        let mut m1 = vec![0.0; l * nv];
        let mut m2 = vec![0.0; l * nv];
        for s in 0..l {
            let row = &coeffs[s * l..(s + 1) * l];
            for k in 0..l {
                if row[k].nu != 0.0 {
                    let b = species.k_b * row[k].t / species.masses[s];
                    fill_maxwellian(v, row[k].u, b, &mut m1[k * nv..(k + 1) * nv], &mut m2[k * nv..(k + 1) * nv]);
                }
            }
            let r1: Vec<&[f64]> = (0..l).map(|k| &m1[k * nv..(k + 1) * nv]).collect();
            let r2: Vec<&[f64]> = (0..l).map(|k| &m2[k * nv..(k + 1) * nv]).collect();
            let a = (s * nx + i) * nv;
            let (o1, o2) = out[2 * s * nv..2 * (s + 1) * nv].split_at_mut(nv);
            relax_update(&g1t[a..a + nv], n[s], s, row, de, dk, &r1, o1);
            relax_update(&g2t[a..a + nv], n[s], s, row, de, dk, &r2, o2);
        }
        Ok(out)
    });
    let mut g1 = vec![0.0; l * nx * nv];
    let mut g2 = vec![0.0; l * nx * nv];
    for (i, node) in nodes.into_iter().enumerate() {
        let node = node?;
        for s in 0..l {
            let a = (s * nx + i) * nv;
            g1[a..a + nv].copy_from_slice(&node[2 * s * nv..(2 * s + 1) * nv]);
            g2[a..a + nv].copy_from_slice(&node[(2 * s + 1) * nv..2 * (s + 1) * nv]);
        }
    }
    Ok((g1, g2))
}

fn check_step(dt: f64, state: &MixtureState, grid: &PhaseGrid, species: &SpeciesTable) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(MixError::InvalidTimeControl(format!("time step {dt} must be positive")));
    }
    if state.species != species.len() || state.nx != grid.nx() || state.nv != grid.nv() {
        return Err(MixError::InvalidGrid("state shape does not match grid and species".into()));
    }
    Ok(())
}

/// First-order step: shift along characteristics, then implicit relaxation
/// with weight `dt`. Uses the degree-2 reconstruction.
pub fn step_backward_euler(
    state: &MixtureState,
    dt: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    regime: &RegimeParams,
) -> Result<MixtureState> {
    step_dirk(state, &Tableau::implicit_euler(), Degree::Two, dt, grid, species, regime)
}

/// Stiffly accurate DIRK step. Stage `m` transports the initial data by
/// `c_m dt` and every earlier stage field by `(c_m - c_l) dt`.
pub fn step_dirk(
    state: &MixtureState,
    tableau: &Tableau,
    degree: Degree,
    dt: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    regime: &RegimeParams,
) -> Result<MixtureState> {
    check_step(dt, state, grid, species)?;
    let mut stages: Vec<StageField> = Vec::with_capacity(tableau.stages);
    let mut last = None;
    for m in 0..tableau.stages {
        let cm = tableau.c[m];
        let mut terms = vec![Term { g1: &state.g1, g2: &state.g2, weight: 1.0, lag: cm }];
        for (l, k) in stages.iter().enumerate() {
            let w = dt * tableau.a(m, l);
            if w != 0.0 {
                terms.push(Term { g1: &k.k1, g2: &k.k2, weight: w, lag: cm - tableau.c[l] });
            }
        }
        let (t1, t2) = transport(&terms, dt, grid, state.species, degree)?;
        let h = tableau.a(m, m) * dt;
        let (g1, g2) = relax_stage(&t1, &t2, h, grid, species, regime)?;
        if m + 1 < tableau.stages {
            let k1 = g1.iter().zip(&t1).map(|(g, t)| (g - t) / h).collect();
            let k2 = g2.iter().zip(&t2).map(|(g, t)| (g - t) / h).collect();
            stages.push(StageField { k1, k2 });
        }
        last = Some((g1, g2));
    }
    let (g1, g2) = last.expect("tableau has at least one stage");
    Ok(MixtureState { g1, g2, time: state.time + dt, species: state.species, nx: state.nx, nv: state.nv })
}

/// BDF step. `history[0]` is the newest state `g^n`, `history[k-1]` is
/// `g^{n+1-k}`, spaced by `dt`.
pub fn step_bdf(
    history: &[MixtureState],
    coeffs: &BdfCoeffs,
    degree: Degree,
    dt: f64,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    regime: &RegimeParams,
) -> Result<MixtureState> {
    if history.len() != coeffs.order {
        return Err(MixError::HistoryMismatch(format!(
            "BDF{} needs {} states, got {}",
            coeffs.order,
            coeffs.order,
            history.len()
        )));
    }
    let newest = &history[0];
    check_step(dt, newest, grid, species)?;
    for w in history.windows(2) {
        let gap = w[0].time - w[1].time;
        if (gap - dt).abs() > 1e-9 * dt.max(w[0].time.abs()) {
            return Err(MixError::HistoryMismatch(format!("history spacing {gap} differs from dt = {dt}")));
        }
        if w[1].g1.len() != newest.g1.len() {
            return Err(MixError::HistoryMismatch("history states differ in shape".into()));
        }
    }
    let terms: Vec<Term> = history
        .iter()
        .zip(&coeffs.alpha)
        .enumerate()
        .map(|(k, (g, &a))| Term { g1: &g.g1, g2: &g.g2, weight: a, lag: (k + 1) as f64 })
        .collect();
    let (t1, t2) = transport(&terms, dt, grid, newest.species, degree)?;
    let (g1, g2) = relax_stage(&t1, &t2, coeffs.beta * dt, grid, species, regime)?;
    Ok(MixtureState { g1, g2, time: newest.time + dt, species: newest.species, nx: newest.nx, nv: newest.nv })
}

/// Conserved totals after one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// `sum_i n_s,i dx` per species.
    pub mass: Vec<f64>,
    pub momentum: f64,
    pub energy: f64,
    pub min_g1: f64,
}

pub fn diagnostics(
    step: usize,
    dt: f64,
    state: &MixtureState,
    grid: &PhaseGrid,
    species: &SpeciesTable,
) -> Result<Diagnostics> {
    let m = compute_moments(state, grid, species)?;
    let mass = m.species.iter().map(|sp| sp.n.iter().sum::<f64>() * grid.dx).collect();
    let momentum = (0..m.nx()).map(|i| m.rho[i] * m.u[i]).sum::<f64>() * grid.dx;
    let energy = m.energy(species.k_b).iter().sum::<f64>() * grid.dx;
    Ok(Diagnostics { step, t: state.time, dt, mass, momentum, energy, min_g1: state.min_g1() })
}

/// Result of [`advance`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub state: MixtureState,
    /// Row 0 is the initial state, then one row per step.
    pub diagnostics: Vec<Diagnostics>,
}

/// Runs the CFL schedule to `t_final`. BDF schemes restart their history at
/// each segment, taking `order - 1` steps with the DIRK of the same order.
pub fn advance(
    state: &MixtureState,
    time_control: &TimeControl,
    scheme: Scheme,
    grid: &PhaseGrid,
    species: &SpeciesTable,
    regime: &RegimeParams,
) -> Result<Trajectory> {
    regime.validate()?;
    let segments = time_control.segments(grid.dx, grid.v_max_abs())?;
    let degree = scheme.degree();
    let tableau = scheme.tableau();
    let bdf = scheme.bdf();
    let mut diags = vec![diagnostics(0, 0.0, state, grid, species)?];
    let mut current = state.clone();
    let mut step = 0;
    for seg in segments {
        // newest first
        let mut history: Vec<MixtureState> = vec![current.clone()];
        for _ in 0..seg.steps {
            step += 1;
            let next = match &bdf {
                Some(c) if history.len() == c.order => step_bdf(&history, c, degree, seg.dt, grid, species, regime),
                _ => step_dirk(&current, &tableau, degree, seg.dt, grid, species, regime),
            }?;
            if !next.is_finite() {
                return Err(MixError::NonFinite { step });
            }
            diags.push(diagnostics(step, seg.dt, &next, grid, species)?);
            if let Some(c) = &bdf {
                history.insert(0, next.clone());
                history.truncate(c.order);
            }
            current = next;
        }
        current.time = state.time + seg.t_end;
    }
    Ok(Trajectory { state: current, diagnostics: diags })
}
