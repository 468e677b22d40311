//! Flat-channel CF/DF time sharing by exhaustive grid search.
//!
//! The search runs over the DF time share `t_df` and the DF share of the
//! power budget. DF always spends its minimal fronthaul. Whatever power and
//! fronthaul DF leaves behind goes to CF, which may itself occupy only part
//! of the remaining time: at low power CF is better off bursting. That last
//! choice is a one-dimensional maximisation solved per grid point.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, Error, Result};
use crate::exec::Exec;
use crate::numeric::scan_then_golden;
use crate::rates::{cf_rate_unchecked, cutset, df_only_rate, df_rate_unchecked};
use crate::superposition::spc_optimize;

/// Time shares below this are treated as zero.
const MIN_TIME: f64 = 1e-9;
const CF_TIME_SCAN: usize = 24;
const CF_TIME_TOL: f64 = 1e-10;

/// Grid search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatGrid {
    /// Points per axis of the coarse grid.
    pub resolution: usize,
    /// Zoom factor of the refinement pass around the coarse incumbent;
    /// `0` disables refinement.
    pub zoom: usize,
}

impl Default for FlatGrid {
    fn default() -> Self {
        Self { resolution: 512, zoom: 8 }
    }
}

impl FlatGrid {
    pub fn with_resolution(resolution: usize) -> Self {
        Self { resolution, ..Self::default() }
    }
}

/// Optimal time-sharing plan on a flat channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatPlan {
    pub t_df: f64,
    pub t_cf: f64,
    pub p_df: f64,
    pub p_cf: f64,
    pub c_df: f64,
    pub c_cf: f64,
    pub rate: f64,
}

impl FlatPlan {
    pub fn power_used(&self) -> f64 {
        self.t_df * self.p_df + self.t_cf * self.p_cf
    }

    pub fn fronthaul_used(&self) -> f64 {
        self.t_df * self.c_df + self.t_cf * self.c_cf
    }
}

/// Rates of the single-scheme alternatives and the cut-set bound for the
/// same constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatReferences {
    pub cf_only: f64,
    pub df_only: f64,
    pub superposition: f64,
    pub cutset: f64,
}

impl FlatReferences {
    pub fn new(p_total: f64, c_total: f64) -> Result<Self> {
        Ok(Self {
            cf_only: cf_rate_unchecked(p_total, c_total),
            df_only: df_only_rate(p_total, c_total)?,
            superposition: spc_optimize(p_total, c_total)?.rate,
            cutset: cutset(p_total, c_total)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatSweepPoint {
    pub p_total: f64,
    pub c_total: f64,
    pub plan: FlatPlan,
    pub references: FlatReferences,
}

/// Best CF time share within `[0, max_time]` for residual totals
/// `(power, fronthaul)`. Returns `(t_cf, rate contribution)`.
fn best_cf_burst(power: f64, fronthaul: f64, max_time: f64) -> (f64, f64) {
    if max_time < MIN_TIME || power <= 0.0 || fronthaul <= 0.0 {
        return (0.0, 0.0);
    }
    let g = |t: f64| {
        if t < MIN_TIME {
            0.0
        } else {
            t * cf_rate_unchecked(power / t, fronthaul / t)
        }
    };
    let (t, v) = scan_then_golden(g, 0.0, max_time, CF_TIME_SCAN, CF_TIME_TOL);
    if v <= 0.0 {
        (0.0, 0.0)
    } else {
        (t, v)
    }
}

/// Evaluate the plan at DF time share `t_df` and DF power share `x`.
fn evaluate(p_total: f64, c_total: f64, t_df: f64, x: f64) -> Option<FlatPlan> {
    if (t_df < MIN_TIME) != (x <= 0.0) {
        // DF time without DF power (or the reverse) duplicates t_df = 0
        return None;
    }
    let (p_df, c_df, df_part) = if t_df < MIN_TIME {
        (0.0, 0.0, 0.0)
    } else {
        let p_df = x * p_total / t_df;
        let r = df_rate_unchecked(p_df);
        (p_df, 0.5 * r, t_df * r)
    };
    let t_df = if t_df < MIN_TIME { 0.0 } else { t_df };
    let c_left = c_total - t_df * c_df;
    if c_left < -1e-15 * c_total.max(1.0) {
        return None;
    }
    let p_left = if t_df == 0.0 { p_total } else { p_total * (1.0 - x) };
    let (t_cf, cf_part) = best_cf_burst(p_left, c_left.max(0.0), 1.0 - t_df);
    let (p_cf, c_cf) = if t_cf > 0.0 { (p_left / t_cf, c_left.max(0.0) / t_cf) } else { (0.0, 0.0) };
    Some(FlatPlan { t_df, t_cf, p_df, p_cf, c_df, c_cf, rate: df_part + cf_part })
}

/// Evaluate a rectangular grid `t_values x x_values` and return the best
/// plan, breaking ties towards the lexicographically smallest `(t_df, p_df)`.
fn search(
    p_total: f64,
    c_total: f64,
    t_values: &[f64],
    x_values: &[f64],
    exec: Exec,
) -> Option<(usize, usize, FlatPlan)> {
    let nx = x_values.len();
    let plans =
        exec.map_indexed(t_values.len() * nx, |k| evaluate(p_total, c_total, t_values[k / nx], x_values[k % nx]));
    let mut best: Option<(usize, usize, FlatPlan)> = None;
    for (k, plan) in plans.into_iter().enumerate() {
        let Some(plan) = plan else { continue };
        if best.as_ref().is_none_or(|b| plan.rate > b.2.rate) {
            best = Some((k / nx, k % nx, plan));
        }
    }
    best
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

/// Maximise `t_df R_DF + t_cf R_CF` under average power `p_total` and
/// per-relay fronthaul `c_total` (both per channel use).
pub fn flat_optimize(p_total: f64, c_total: f64, grid: FlatGrid) -> Result<FlatPlan> {
    flat_optimize_with(p_total, c_total, grid, Exec::default())
}

pub fn flat_optimize_with(p_total: f64, c_total: f64, grid: FlatGrid, exec: Exec) -> Result<FlatPlan> {
    check_nonneg("p_total", p_total)?;
    check_nonneg("c_total", c_total)?;
    if grid.resolution < 2 {
        return Err(Error::InvalidArgument(format!("grid resolution must be at least 2, got {}", grid.resolution)));
    }
    let n = grid.resolution;
    let axis = linspace(0.0, 1.0, n);
    let (i, j, mut best) = search(p_total, c_total, &axis, &axis, exec).expect("t_df = 0 is always feasible");

    if grid.zoom > 0 {
        let h = 1.0 / (n - 1) as f64;
        let t_lo = (axis[i] - 2.0 * h).max(0.0);
        let t_hi = (axis[i] + 2.0 * h).min(1.0);
        let x_lo = (axis[j] - 2.0 * h).max(0.0);
        let x_hi = (axis[j] + 2.0 * h).min(1.0);
        let m = 4 * grid.zoom + 1;
        let t_axis = linspace(t_lo, t_hi, m);
        let x_axis = linspace(x_lo, x_hi, m);
        if let Some((_, _, refined)) = search(p_total, c_total, &t_axis, &x_axis, exec) {
            if refined.rate > best.rate {
                best = refined;
            }
        }
    }
    Ok(best)
}

/// Optimise at fixed power for each fronthaul value.
pub fn flat_sweep_c(p_total: f64, c_values: &[f64], grid: FlatGrid) -> Result<Vec<FlatSweepPoint>> {
    if c_values.is_empty() {
        return Err(Error::InvalidArgument("empty fronthaul list".into()));
    }
    c_values
        .iter()
        .map(|&c| {
            Ok(FlatSweepPoint {
                p_total,
                c_total: c,
                plan: flat_optimize(p_total, c, grid)?,
                references: FlatReferences::new(p_total, c)?,
            })
        })
        .collect()
}

/// Optimise at fixed fronthaul for each power value.
pub fn flat_sweep_p(c_total: f64, p_values: &[f64], grid: FlatGrid) -> Result<Vec<FlatSweepPoint>> {
    if p_values.is_empty() {
        return Err(Error::InvalidArgument("empty power list".into()));
    }
    p_values
        .iter()
        .map(|&p| {
            Ok(FlatSweepPoint {
                p_total: p,
                c_total,
                plan: flat_optimize(p, c_total, grid)?,
                references: FlatReferences::new(p, c_total)?,
            })
        })
        .collect()
}
