//! Discrete moments of the reduced distributions and Maxwellian evaluation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};
use crate::phase_space::PhaseGrid;

/// Species masses, symmetric interaction matrix and the Boltzmann constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesTable {
    pub masses: Vec<f64>,
    /// Row-major `L x L`.
    pub lambda: Vec<f64>,
    #[serde(default = "default_kb")]
    pub k_b: f64,
}

fn default_kb() -> f64 {
    1.0
}

impl SpeciesTable {
    pub fn new(masses: Vec<f64>, lambda: Vec<f64>, k_b: f64) -> Result<Self> {
        let t = SpeciesTable { masses, lambda, k_b };
        t.validate()?;
        Ok(t)
    }

    /// Every pair shares the same `lambda`.
    pub fn uniform(masses: Vec<f64>, lambda: f64) -> Result<Self> {
        let l = masses.len();
        Self::new(masses, vec![lambda; l * l], 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.masses.len();
        if l == 0 {
            return Err(MixError::InvalidSpecies("at least one species is required".into()));
        }
        if self.lambda.len() != l * l {
            return Err(MixError::InvalidSpecies(format!(
                "lambda has {} entries, expected {}",
                self.lambda.len(),
                l * l
            )));
        }
        if let Some(m) = self.masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(MixError::InvalidSpecies(format!("mass {m} must be positive")));
        }
        for s in 0..l {
            for k in 0..l {
                let v = self.lambda[s * l + k];
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(MixError::InvalidSpecies(format!("lambda[{s}][{k}] = {v} must be >= 0")));
                }
                if v != self.lambda[k * l + s] {
                    return Err(MixError::InvalidSpecies(format!("lambda is not symmetric at ({s}, {k})")));
                }
            }
        }
        if !(self.k_b > 0.0 && self.k_b.is_finite()) {
            return Err(MixError::InvalidSpecies("k_b must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn lambda(&self, s: usize, k: usize) -> f64 {
        self.lambda[s * self.len() + k]
    }
}

/// Reduced distribution pair for every species, stored `[s][i][j]`
/// (species, space node, velocity node) in flat vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    pub species: usize,
    pub nx: usize,
    pub nv: usize,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub time: f64,
}

impl MixtureState {
    pub fn zeros(species: usize, nx: usize, nv: usize) -> Self {
        let len = species * nx * nv;
        MixtureState { species, nx, nv, g1: vec![0.0; len], g2: vec![0.0; len], time: 0.0 }
    }

    pub fn for_grid(species: usize, grid: &PhaseGrid) -> Self {
        Self::zeros(species, grid.nx(), grid.nv())
    }

    #[inline]
    pub fn index(&self, s: usize, i: usize, j: usize) -> usize {
        (s * self.nx + i) * self.nv + j
    }

    /// Velocity row of `g1` at one node.
    pub fn g1_node(&self, s: usize, i: usize) -> &[f64] {
        let a = self.index(s, i, 0);
        &self.g1[a..a + self.nv]
    }

    pub fn g2_node(&self, s: usize, i: usize) -> &[f64] {
        let a = self.index(s, i, 0);
        &self.g2[a..a + self.nv]
    }

    /// Fills every node of species `s` with `n M1`, `n M2` for the given
    /// local fields.
    pub fn set_maxwellian(
        &mut self,
        s: usize,
        grid: &PhaseGrid,
        mass: f64,
        k_b: f64,
        fields: impl Fn(f64) -> (f64, f64, f64),
    ) -> Result<()> {
        for i in 0..self.nx {
            let (n, u, t) = fields(grid.x_nodes[i]);
            let (m1, m2) = maxwellian_pair(u, t, mass, grid, k_b)?;
            let a = self.index(s, i, 0);
            for j in 0..self.nv {
                self.g1[a + j] = n * m1[j];
                self.g2[a + j] = n * m2[j];
            }
        }
        Ok(())
    }

    pub fn min_g1(&self) -> f64 {
        self.g1.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.g1.iter().chain(self.g2.iter()).all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesMoments {
    pub n: Vec<f64>,
    pub u: Vec<f64>,
    pub t: Vec<f64>,
}

/// Per-species and global macroscopic fields on the spatial nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentField {
    pub species: Vec<SpeciesMoments>,
    pub n: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub t: Vec<f64>,
}

impl MomentField {
    pub fn nx(&self) -> usize {
        self.n.len()
    }

    /// Total energy density `1/2 rho u^2 + 3/2 n k_B T` per node.
    pub fn energy(&self, k_b: f64) -> Vec<f64> {
        (0..self.nx()).map(|i| 0.5 * self.rho[i] * self.u[i] * self.u[i] + 1.5 * self.n[i] * k_b * self.t[i]).collect()
    }

    /// Builds the global fields from per-species fields.
    pub fn from_species(species: Vec<SpeciesMoments>, table: &SpeciesTable) -> Self {
        let nx = species[0].n.len();
        let mut n = vec![0.0; nx];
        let mut rho = vec![0.0; nx];
        let mut u = vec![0.0; nx];
        let mut t = vec![0.0; nx];
        for i in 0..nx {
            let mut nn = 0.0;
            let mut r = 0.0;
            let mut mom = 0.0;
            for (s, sp) in species.iter().enumerate() {
                let m = table.masses[s];
                nn += sp.n[i];
                r += m * sp.n[i];
                mom += m * sp.n[i] * sp.u[i];
            }
            let uu = mom / r;
            let mut three_nkt = 0.0;
            for (s, sp) in species.iter().enumerate() {
                let du = sp.u[i] - uu;
                three_nkt += 3.0 * sp.n[i] * table.k_b * sp.t[i] + table.masses[s] * sp.n[i] * du * du;
            }
            n[i] = nn;
            rho[i] = r;
            u[i] = uu;
            t[i] = three_nkt / (3.0 * nn * table.k_b);
        }
        MomentField { species, n, rho, u, t }
    }
}

/// Moments `(n, u, T)` of one velocity row pair. Sums run left to right.
#[inline]
pub fn node_moments(g1: &[f64], g2: &[f64], v: &[f64], dv: f64, mass: f64, k_b: f64) -> (f64, f64, f64) {
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for j in 0..g1.len() {
        s0 += g1[j];
        s1 += v[j] * g1[j];
    }
    let n = s0 * dv;
    let u = s1 * dv / n;
    let mut s2 = 0.0;
    let mut s3 = 0.0;
    for j in 0..g1.len() {
        let c = v[j] - u;
        s2 += c * c * g1[j];
        s3 += g2[j];
    }
    let t = mass * (s2 + s3) * dv / (3.0 * n * k_b);
    (n, u, t)
}

pub fn compute_moments(state: &MixtureState, grid: &PhaseGrid, species: &SpeciesTable) -> Result<MomentField> {
    let mut per = Vec::with_capacity(state.species);
    for s in 0..state.species {
        let mut sp = SpeciesMoments { n: vec![0.0; state.nx], u: vec![0.0; state.nx], t: vec![0.0; state.nx] };
        for i in 0..state.nx {
            let (n, u, t) = node_moments(
                state.g1_node(s, i),
                state.g2_node(s, i),
                &grid.v_nodes,
                grid.dv,
                species.masses[s],
                species.k_b,
            );
            if !(n > 0.0) {
                return Err(MixError::NonPositiveDensity { species: s, node: i, value: n });
            }
            sp.n[i] = n;
            sp.u[i] = u;
            sp.t[i] = t;
        }
        per.push(sp);
    }
    Ok(MomentField::from_species(per, species))
}

/// Unit-density Maxwellian pair on the velocity nodes:
/// `M1 = (2 pi b)^(-1/2) exp(-(v-u)^2 / 2b)`, `M2 = 2 b M1`, `b = k_B T / m`.
pub fn maxwellian_pair(u: f64, t: f64, mass: f64, grid: &PhaseGrid, k_b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(t > 0.0) {
        return Err(MixError::NonPositiveTemperature(t));
    }
    let mut m1 = vec![0.0; grid.nv()];
    let mut m2 = vec![0.0; grid.nv()];
    fill_maxwellian(&grid.v_nodes, u, k_b * t / mass, &mut m1, &mut m2);
    Ok((m1, m2))
}

/// Writes `M1` and `M2` for variance `b` into the output rows.
#[inline]
pub fn fill_maxwellian(v: &[f64], u: f64, b: f64, m1: &mut [f64], m2: &mut [f64]) {
    let norm = 1.0 / (2.0 * PI * b).sqrt();
    let inv = 0.5 / b;
    for j in 0..v.len() {
        let c = v[j] - u;
        let e = norm * (-c * c * inv).exp();
        m1[j] = e;
        m2[j] = 2.0 * b * e;
    }
}
