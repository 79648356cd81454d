//! Space, velocity and time discretization.

use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};

/// Smallest admissible number of spatial cells (widest reconstruction stencil).
pub const MIN_NX: usize = 4;
/// Smallest admissible number of velocity intervals.
pub const MIN_NV: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    Freeflow,
}

/// Uniform phase-space grid.
///
/// Periodic grids put the first node on `x_min`; free-flow grids are
/// half-shifted so nodes sit at cell centres. Velocity nodes include both
/// endpoints of the velocity domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub x_nodes: Vec<f64>,
    pub v_nodes: Vec<f64>,
    pub dx: f64,
    pub dv: f64,
    pub bc: BoundaryCondition,
    pub x_domain: [f64; 2],
    pub v_domain: [f64; 2],
}

impl PhaseGrid {
    pub fn nx(&self) -> usize {
        self.x_nodes.len()
    }

    /// Number of velocity nodes (`Nv + 1`).
    pub fn nv(&self) -> usize {
        self.v_nodes.len()
    }

    pub fn v_max_abs(&self) -> f64 {
        self.v_domain[0].abs().max(self.v_domain[1].abs())
    }
}

pub fn build_grid(
    x_domain: [f64; 2],
    nx: usize,
    bc: BoundaryCondition,
    v_domain: [f64; 2],
    nv: usize,
) -> Result<PhaseGrid> {
    let [x_min, x_max] = x_domain;
    let [v_min, v_max] = v_domain;
    if !(x_min.is_finite() && x_max.is_finite() && v_min.is_finite() && v_max.is_finite()) {
        return Err(MixError::InvalidGrid("domain bounds must be finite".into()));
    }
    if x_min >= x_max || v_min >= v_max {
        return Err(MixError::InvalidGrid("domain bounds must satisfy min < max".into()));
    }
    if nx < MIN_NX {
        return Err(MixError::InvalidGrid(format!("Nx = {nx} is below the stencil minimum {MIN_NX}")));
    }
    if nv < MIN_NV {
        return Err(MixError::InvalidGrid(format!("Nv = {nv} is below the minimum {MIN_NV}")));
    }
    let dx = (x_max - x_min) / nx as f64;
    let dv = (v_max - v_min) / nv as f64;
    let offset = match bc {
        BoundaryCondition::Periodic => 0.0,
        BoundaryCondition::Freeflow => 0.5,
    };
    let x_nodes = (0..nx).map(|i| x_min + (i as f64 + offset) * dx).collect();
    let v_nodes = (0..=nv).map(|j| v_min + j as f64 * dv).collect();
    Ok(PhaseGrid { x_nodes, v_nodes, dx, dv, bc, x_domain, v_domain })
}

/// Integer-plus-fraction decomposition of a displacement in units of `dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootIndex {
    pub base: isize,
    pub theta: f64,
}

pub fn shift_decompose(grid: &PhaseGrid, displacement: f64) -> FootIndex {
    decompose_cells(displacement / grid.dx)
}

/// Splits a displacement already expressed in cells.
pub fn decompose_cells(cells: f64) -> FootIndex {
    let base = cells.floor();
    let mut theta = cells - base;
    let mut base = base as isize;
    if theta >= 1.0 {
        // only reachable through rounding of tiny negative inputs
        theta = 0.0;
        base += 1;
    }
    FootIndex { base, theta }
}

/// A stretch of the run advanced with a constant step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub steps: usize,
    pub cfl: f64,
}

/// CFL schedule: `(t_end, cfl)` pairs applied in order up to `t_final`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeControl {
    pub cfl_schedule: Vec<(f64, f64)>,
    pub t_final: f64,
    #[serde(default)]
    pub dt_cap: Option<f64>,
}

impl TimeControl {
    /// Single CFL number over the whole run.
    pub fn constant(cfl: f64, t_final: f64) -> Self {
        TimeControl { cfl_schedule: vec![(t_final, cfl)], t_final, dt_cap: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(MixError::InvalidTimeControl("t_final must be finite and non-negative".into()));
        }
        if self.cfl_schedule.is_empty() {
            return Err(MixError::InvalidTimeControl("empty CFL schedule".into()));
        }
        let mut prev = 0.0;
        for &(t_end, cfl) in &self.cfl_schedule {
            if !(cfl > 0.0 && cfl.is_finite()) {
                return Err(MixError::InvalidTimeControl(format!("CFL {cfl} must be positive")));
            }
            if t_end < prev || (t_end == prev && t_end > 0.0) {
                return Err(MixError::InvalidTimeControl("segment end times must increase".into()));
            }
            prev = t_end;
        }
        if prev < self.t_final {
            return Err(MixError::InvalidTimeControl(format!(
                "schedule ends at {prev} before t_final = {}",
                self.t_final
            )));
        }
        if let Some(cap) = self.dt_cap {
            if !(cap > 0.0) {
                return Err(MixError::InvalidTimeControl("dt_cap must be positive".into()));
            }
        }
        Ok(())
    }

    /// Splits `(0, t_final]` into segments of equal steps with
    /// `dt = cfl * dx / v_max`, shortened so every segment ends exactly.
    pub fn segments(&self, dx: f64, v_max: f64) -> Result<Vec<Segment>> {
        self.validate()?;
        let mut out = Vec::new();
        let mut t0 = 0.0;
        for &(t_end, cfl) in &self.cfl_schedule {
            if t0 >= self.t_final {
                break;
            }
            let t1 = t_end.min(self.t_final);
            if t1 <= t0 {
                continue;
            }
            let mut dt_nominal = cfl * dx / v_max;
            if let Some(cap) = self.dt_cap {
                dt_nominal = dt_nominal.min(cap);
            }
            let len = t1 - t0;
            let steps = step_count(len, dt_nominal);
            out.push(Segment { t_start: t0, t_end: t1, dt: len / steps as f64, steps, cfl });
            t0 = t1;
        }
        Ok(out)
    }
}

fn step_count(len: f64, dt: f64) -> usize {
    let r = len / dt;
    let nearest = r.round();
    let steps = if (r - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { r.ceil() };
    (steps as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn periodic_grid_matches_accuracy_setup() {
        let g = build_grid([-1.0, 1.0], 200, BoundaryCondition::Periodic, [-15.0, 15.0], 60).unwrap();
        assert!((g.dx - 0.01).abs() < 1e-15);
        assert_eq!(g.dv, 0.5);
        assert_eq!(g.nx(), 200);
        assert_eq!(g.nv(), 61);
        assert_eq!(g.x_nodes[0], -1.0);
        assert_eq!(g.v_nodes[0], -15.0);
        assert_eq!(g.v_nodes[60], 15.0);
    }

    #[test]
    fn freeflow_grid_is_half_shifted() {
        let g = build_grid([-1.0, 1.0], 4, BoundaryCondition::Freeflow, [-1.0, 1.0], 2).unwrap();
        assert_eq!(g.x_nodes, vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn rejects_bad_grids() {
        let p = BoundaryCondition::Periodic;
        assert!(build_grid([0.0, 1.0], 3, p, [-1.0, 1.0], 4).is_err());
        assert!(build_grid([0.0, 1.0], 8, p, [-1.0, 1.0], 1).is_err());
        assert!(build_grid([1.0, 0.0], 8, p, [-1.0, 1.0], 4).is_err());
        assert!(build_grid([0.0, f64::NAN], 8, p, [-1.0, 1.0], 4).is_err());
        assert!(build_grid([0.0, 1.0], 8, p, [-1.0, f64::INFINITY], 4).is_err());
    }

    #[test]
    fn decompose_examples() {
        let g = build_grid([0.0, 1.0], 10, BoundaryCondition::Periodic, [-1.0, 1.0], 2).unwrap();
        assert_eq!(shift_decompose(&g, 0.0), FootIndex { base: 0, theta: 0.0 });
        let f = shift_decompose(&g, 0.5 * g.dx);
        assert_eq!(f.base, 0);
        assert!((f.theta - 0.5).abs() < 1e-15);
        let f = shift_decompose(&g, -0.3 * g.dx);
        assert_eq!(f.base, -1);
        assert!((f.theta - 0.7).abs() < 1e-15);
    }

    #[test]
    fn tiny_negative_shift_stays_in_range() {
        let f = decompose_cells(-1e-18);
        assert!(f.theta >= 0.0 && f.theta < 1.0);
        assert_eq!(f.base as f64 + f.theta, 0.0);
    }

    #[test]
    fn fine_grid_contains_coarse_nodes() {
        let p = BoundaryCondition::Periodic;
        for nx in [40, 80, 160] {
            let c = build_grid([-1.0, 1.0], nx, p, [-15.0, 15.0], 60).unwrap();
            let f = build_grid([-1.0, 1.0], 2 * nx, p, [-15.0, 15.0], 60).unwrap();
            for (i, x) in c.x_nodes.iter().enumerate() {
                assert_eq!(*x, f.x_nodes[2 * i]);
            }
        }
    }

    #[test]
    fn schedule_lands_exactly() {
        // one segment, t_final = 3.5 nominal steps
        let tc = TimeControl::constant(1.0, 3.5);
        let segs = tc.segments(1.0, 1.0).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].steps, 4);
        assert_eq!(segs[0].dt, 0.875);
    }

    #[test]
    fn two_segment_schedule() {
        let tc = TimeControl { cfl_schedule: vec![(0.02, 0.2), (0.2, 2.0)], t_final: 0.2, dt_cap: None };
        let segs = tc.segments(0.01, 15.0).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].steps, 150);
        assert_eq!(segs[1].steps, 135);
        assert_eq!(segs[1].t_end, 0.2);
    }

    #[test]
    fn schedule_validation() {
        assert!(TimeControl { cfl_schedule: vec![(0.1, 1.0)], t_final: 0.2, dt_cap: None }.validate().is_err());
        assert!(TimeControl { cfl_schedule: vec![(0.2, 0.0)], t_final: 0.2, dt_cap: None }.validate().is_err());
        assert!(TimeControl { cfl_schedule: vec![], t_final: 0.2, dt_cap: None }.validate().is_err());
        assert!(TimeControl::constant(2.0, 0.0).segments(0.1, 1.0).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn recomposition_within_two_ulp_of_the_cell(frac in -10.0f64..10.0, nx in 4usize..500) {
            let g = build_grid([-1.0, 1.0], nx, BoundaryCondition::Periodic, [-1.0, 1.0], 2).unwrap();
            let delta = frac * g.dx;
            let f = shift_decompose(&g, delta);
            prop_assert!(f.theta >= 0.0 && f.theta < 1.0);
            let back = (f.base as f64 + f.theta) * g.dx;
            // theta carries the rounding of q + theta, so ulps are counted at
            // the larger of |delta| and dx
            let ulp = f64::EPSILON * delta.abs().max(g.dx);
            prop_assert!((back - delta).abs() <= 2.0 * ulp, "{back} vs {delta}");
        }
    }
}
