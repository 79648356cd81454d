//! Interspecies coefficients, fictitious mixing targets, the implicit
//! velocity/temperature solves and the pointwise relaxation update.
//!
//! Within one implicit stage the densities are frozen at the transported
//! values, so the frequencies and the coefficients `a`, `b`, `gamma` are
//! known before the solve. Velocities and temperatures then follow from two
//! strictly diagonally dominant `L x L` systems per node, after which the
//! pair Maxwellians are fully determined and the distribution update is a
//! pointwise convex combination.

use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};
use crate::linalg::solve_dense;
use crate::moments::{MomentField, SpeciesTable};

/// Intra-species (`epsilon`) and inter-species (`kappa`) relaxation scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub epsilon: f64,
    pub kappa: f64,
}

impl RegimeParams {
    pub fn new(epsilon: f64, kappa: f64) -> Result<Self> {
        let r = RegimeParams { epsilon, kappa };
        r.validate()?;
        Ok(r)
    }

    /// `kappa = epsilon`: every collision equally dominant.
    pub fn single_scale(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite() && self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(MixError::InvalidRegime(format!(
                "epsilon = {} and kappa = {} must be positive",
                self.epsilon, self.kappa
            )));
        }
        Ok(())
    }
}

/// Collision-frequency law `nu_sk(lambda_sk, n_s, n_k)`.
pub trait CollisionFrequency {
    fn frequency(&self, lambda: f64, n_s: f64, n_k: f64) -> f64;
}

/// `nu_sk = lambda_sk n_k`, which gives `a_sk = m_k / (m_s + m_k)` and keeps
/// the pair temperatures positive with margin.
#[derive(Debug, Clone, Copy, Default)]
pub struct DensityProportional;

impl CollisionFrequency for DensityProportional {
    #[inline]
    fn frequency(&self, lambda: f64, _n_s: f64, n_k: f64) -> f64 {
        lambda * n_k
    }
}

impl<F: Fn(f64, f64, f64) -> f64> CollisionFrequency for F {
    fn frequency(&self, lambda: f64, n_s: f64, n_k: f64) -> f64 {
        self(lambda, n_s, n_k)
    }
}

/// Coefficients of one ordered species pair `(s, k)` at one node.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairCoeffs {
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    /// Mixing velocity `u_sk`.
    pub u: f64,
    /// Mixing temperature `T_sk`.
    pub t: f64,
}

/// Pair coefficients for every node, stored `[node][s][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionField {
    pub nx: usize,
    pub species: usize,
    pub pairs: Vec<PairCoeffs>,
}

impl InteractionField {
    pub fn node(&self, i: usize) -> &[PairCoeffs] {
        let l2 = self.species * self.species;
        &self.pairs[i * l2..(i + 1) * l2]
    }

    pub fn get(&self, i: usize, s: usize, k: usize) -> &PairCoeffs {
        &self.pairs[(i * self.species + s) * self.species + k]
    }
}

/// Fills `nu`, `a`, `b`, `gamma` for all pairs at one node.
pub fn node_coefficients(
    n: &[f64],
    species: &SpeciesTable,
    rule: &dyn CollisionFrequency,
    node: usize,
    out: &mut [PairCoeffs],
) -> Result<()> {
    let l = species.len();
    for s in 0..l {
        let ms = species.masses[s];
        for k in 0..l {
            let mk = species.masses[k];
            let lam = species.lambda(s, k);
            let c = &mut out[s * l + k];
            if lam == 0.0 {
                *c = PairCoeffs::default();
                continue;
            }
            let nu = rule.frequency(lam, n[s], n[k]);
            if nu == 0.0 {
                return Err(MixError::ZeroFrequencyDivision { s, k, node });
            }
            let a = lam * n[k] * mk / (nu * (ms + mk));
            let b = 2.0 * a * ms / (ms + mk);
            let gamma = ms * a / 3.0 * (2.0 * mk / (ms + mk) - a);
            *c = PairCoeffs { nu, a, b, gamma, u: 0.0, t: 0.0 };
        }
    }
    Ok(())
}

pub fn interaction_params(
    moments: &MomentField,
    species: &SpeciesTable,
    rule: &dyn CollisionFrequency,
) -> Result<InteractionField> {
    let l = species.len();
    let nx = moments.nx();
    let mut pairs = vec![PairCoeffs::default(); nx * l * l];
    let mut n = vec![0.0; l];
    for i in 0..nx {
        for s in 0..l {
            n[s] = moments.species[s].n[i];
        }
        node_coefficients(&n, species, rule, i, &mut pairs[i * l * l..(i + 1) * l * l])?;
    }
    Ok(InteractionField { nx, species: l, pairs })
}

/// Fills the mixing velocity and temperature of every pair at one node.
/// Diagonal pairs take the species' own fields.
pub fn node_targets(
    u: &[f64],
    t: &[f64],
    species: &SpeciesTable,
    node: usize,
    coeffs: &mut [PairCoeffs],
) -> Result<()> {
    let l = species.len();
    for s in 0..l {
        for k in 0..l {
            let c = &mut coeffs[s * l + k];
            if s == k {
                c.u = u[s];
                c.t = t[s];
            } else {
                let du = u[s] - u[k];
                c.u = (1.0 - c.a) * u[s] + c.a * u[k];
                c.t = (1.0 - c.b) * t[s] + c.b * t[k] + c.gamma / species.k_b * du * du;
            }
            if !(c.t > 0.0) && species.lambda(s, k) > 0.0 {
                return Err(MixError::NegativeMixingTemperature { s, k, node, value: c.t });
            }
        }
    }
    Ok(())
}

pub fn mixing_targets(field: &mut InteractionField, moments: &MomentField, species: &SpeciesTable) -> Result<()> {
    let l = species.len();
    let mut u = vec![0.0; l];
    let mut t = vec![0.0; l];
    for i in 0..field.nx {
        for s in 0..l {
            u[s] = moments.species[s].u[i];
            t[s] = moments.species[s].t[i];
        }
        node_targets(&u, &t, species, i, &mut field.pairs[i * l * l..(i + 1) * l * l])?;
    }
    Ok(())
}

/// Implicit velocity exchange at one node:
/// `u_s + c sum_{k != s} nu_sk a_sk (u_s - u_k) = u~_s` with `c = dt_eff / kappa`.
pub fn solve_velocities(u_tilde: &[f64], coeffs: &[PairCoeffs], dt_eff_kappa: f64) -> Result<Vec<f64>> {
    let l = u_tilde.len();
    let mut u = u_tilde.to_vec();
    if l == 1 || dt_eff_kappa == 0.0 {
        return Ok(u);
    }
    let mut a = vec![0.0; l * l];
    for s in 0..l {
        let mut diag = 1.0;
        for k in 0..l {
            if k != s {
                let c = &coeffs[s * l + k];
                let w = dt_eff_kappa * c.nu * c.a;
                a[s * l + k] = -w;
                diag += w;
            }
        }
        a[s * l + s] = diag;
    }
    solve_dense(&mut a, &mut u)?;
    Ok(u)
}

/// Implicit temperature exchange at one node, using the velocities already
/// solved for the same stage.
pub fn solve_temperatures(
    t_tilde: &[f64],
    u_new: &[f64],
    u_tilde: &[f64],
    coeffs: &[PairCoeffs],
    dt_eff_kappa: f64,
    species: &SpeciesTable,
) -> Result<Vec<f64>> {
    let l = t_tilde.len();
    let kb = species.k_b;
    let mut rhs = vec![0.0; l];
    let mut b = vec![0.0; l * l];
    for s in 0..l {
        let ms = species.masses[s];
        let du = u_new[s] - u_tilde[s];
        let mut xi = t_tilde[s] + ms / (3.0 * kb) * du * du;
        let mut diag = 1.0;
        for k in 0..l {
            if k == s {
                continue;
            }
            let c = &coeffs[s * l + k];
            let w = dt_eff_kappa * c.nu;
            let dsk = u_new[s] - u_new[k];
            xi += w * (c.gamma / kb + ms / (3.0 * kb) * c.a * c.a) * dsk * dsk;
            b[s * l + k] = -w * c.b;
            diag += w * c.b;
        }
        b[s * l + s] = diag;
        rhs[s] = xi;
    }
    if l > 1 && dt_eff_kappa != 0.0 {
        solve_dense(&mut b, &mut rhs)?;
    }
    for (s, &t) in rhs.iter().enumerate() {
        if !(t > 0.0) {
            return Err(MixError::NegativeTemperature { species: s, node: 0, value: t });
        }
    }
    Ok(rhs)
}

/// Pointwise relaxation of one velocity row of species `s`:
///
/// `g = (g~ + de nu_ss n M_ss + dk sum_{k != s} nu_sk n M_sk) / (1 + de nu_ss + dk sum_{k != s} nu_sk)`
///
/// where `de = dt / epsilon`, `dk = dt / kappa`; `row` holds the pair
/// coefficients `(s, k)` for all `k` and `maxwellians[k]` the matching row of
/// `M_sk` (first or second Chu component).
#[allow(clippy::too_many_arguments)]
pub fn relax_update(
    g_tilde: &[f64],
    n_new: f64,
    s: usize,
    row: &[PairCoeffs],
    dt_over_eps: f64,
    dt_over_kappa: f64,
    maxwellians: &[&[f64]],
    out: &mut [f64],
) {
    let l = row.len();
    let mut denom = 1.0;
    let mut w = [0.0; 16];
    let mut wv = if l > 16 { vec![0.0; l] } else { Vec::new() };
    let weights: &mut [f64] = if l > 16 { &mut wv } else { &mut w[..l] };
    for k in 0..l {
        let scale = if k == s { dt_over_eps } else { dt_over_kappa };
        let f = scale * row[k].nu;
        weights[k] = f * n_new;
        denom += f;
    }
    let inv = 1.0 / denom;
    for j in 0..g_tilde.len() {
        let mut num = g_tilde[j];
        for k in 0..l {
            if weights[k] != 0.0 {
                num += weights[k] * maxwellians[k][j];
            }
        }
        out[j] = num * inv;
    }
}
