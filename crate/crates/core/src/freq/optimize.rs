//! Grid search over the dual prices.

use serde::{Deserialize, Serialize};

use super::plan::{dual_value, lp_time_fractions, AllocationPlan, BandCandidates};
use super::stationary::LagrangePoint;
use super::ChannelSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default ratio between the bottom and the top of the `lambda_s` axis,
/// i.e. the grid reaches SNR densities of about `1 / LAMBDA_S_SPAN`.
pub const LAMBDA_S_SPAN: f64 = 1e-7;

/// Which modes the optimizer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ModeSet {
    #[default]
    Both,
    CfOnly,
    DfOnly,
}

impl ModeSet {
    pub fn allows_df(self) -> bool {
        matches!(self, ModeSet::Both | ModeSet::DfOnly)
    }

    pub fn allows_cf(self) -> bool {
        matches!(self, ModeSet::Both | ModeSet::CfOnly)
    }
}

/// Price grid: `lambda_c` linear on `[0, 2)`, `lambda_s` logarithmic on
/// `[lambda_s_min, lambda_s_max]`. The default upper end is
/// `2 max|H|^2 / ln2`, above which no band is active in either mode; the
/// default lower end is [`LAMBDA_S_SPAN`] times the upper end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualGrid {
    pub lambda_c_points: usize,
    pub lambda_s_points: usize,
    pub lambda_s_min: Option<f64>,
    pub lambda_s_max: Option<f64>,
    /// Zoom passes around the incumbent after the coarse scan.
    pub refine_passes: usize,
    /// Points per axis in each zoom pass.
    pub refine_points: usize,
}

impl Default for DualGrid {
    fn default() -> Self {
        Self {
            lambda_c_points: 200,
            lambda_s_points: 200,
            lambda_s_min: None,
            lambda_s_max: None,
            refine_passes: 2,
            refine_points: 21,
        }
    }
}

impl DualGrid {
    pub fn square(points: usize) -> Self {
        Self { lambda_c_points: points, lambda_s_points: points, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda_c_points < 2 || self.lambda_s_points < 2 {
            return Err(Error::InvalidArgument("dual grid needs at least 2 points per axis".into()));
        }
        if self.refine_passes > 0 && self.refine_points < 3 {
            return Err(Error::InvalidArgument("refinement needs at least 3 points per axis".into()));
        }
        for v in self.lambda_s_min.iter().chain(self.lambda_s_max.iter()) {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("lambda_s bounds must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Complementary-slackness check of the returned plan against its prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    pub power_slack: f64,
    pub fronthaul_slack: f64,
    /// `lambda_s (P - used) / 2`.
    pub power_complementarity: f64,
    /// `lambda_c (C - used)`.
    pub fronthaul_complementarity: f64,
    /// Dual value minus achieved rate.
    pub duality_gap: f64,
    /// Both complementarity products within `1e-3` of the rate.
    pub satisfied: bool,
}

const KKT_TOL: f64 = 1e-3;

impl KktReport {
    fn new(spec: &ChannelSpec, point: LagrangePoint, plan: &AllocationPlan, dual: f64) -> Self {
        let power_slack = spec.power() - plan.power_used;
        let fronthaul_slack = spec.fronthaul() - plan.fronthaul_used;
        let pc = 0.5 * point.lambda_s * power_slack;
        let fc = point.lambda_c * fronthaul_slack;
        let scale = plan.rate.max(1e-9);
        Self {
            power_slack,
            fronthaul_slack,
            power_complementarity: pc,
            fronthaul_complementarity: fc,
            duality_gap: dual - plan.rate,
            satisfied: pc.abs() <= KKT_TOL * scale && fc.abs() <= KKT_TOL * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub point: LagrangePoint,
    pub plan: AllocationPlan,
    pub dual_value: f64,
    pub kkt: KktReport,
}

fn linear(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn logarithmic(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn rate_at(spec: &ChannelSpec, modes: ModeSet, lp: LagrangePoint) -> Result<f64> {
    let cands: Vec<BandCandidates> = spec.gains().iter().map(|&h| BandCandidates::at(lp, h, modes)).collect();
    Ok(lp_time_fractions(spec, &cands)?.rate)
}

/// Scan `lc x ls`; ties go to the smaller `lambda_c`, then smaller `lambda_s`.
fn scan(spec: &ChannelSpec, modes: ModeSet, lc: &[f64], ls: &[f64], exec: Exec) -> Result<(usize, usize, f64)> {
    let ns = ls.len();
    let rates = exec.map_indexed(lc.len() * ns, |k| {
        rate_at(spec, modes, LagrangePoint { lambda_c: lc[k / ns], lambda_s: ls[k % ns] })
    });
    let mut best = (0, 0, f64::NEG_INFINITY);
    for (k, r) in rates.into_iter().enumerate() {
        let r = r?;
        if r > best.2 {
            best = (k / ns, k % ns, r);
        }
    }
    Ok(best)
}

/// Maximise the total rate over the price grid.
pub fn optimize(spec: &ChannelSpec, grid: &DualGrid, modes: ModeSet) -> Result<Optimum> {
    optimize_with(spec, grid, modes, Exec::default())
}

pub fn optimize_with(spec: &ChannelSpec, grid: &DualGrid, modes: ModeSet, exec: Exec) -> Result<Optimum> {
    grid.validate()?;
    let g2 = spec.gains().iter().fold(0.0f64, |m, h| m.max(h * h));
    let ls_max = match grid.lambda_s_max {
        Some(v) => v,
        // all bands dead: any positive range gives the zero plan
        None if g2 == 0.0 => 1.0,
        None => 2.0 * g2 / std::f64::consts::LN_2,
    };
    let ls_min = grid.lambda_s_min.unwrap_or(LAMBDA_S_SPAN * ls_max);
    if !(ls_max > ls_min) {
        return Err(Error::InvalidArgument(format!("lambda_s range [{ls_min}, {ls_max}] is empty")));
    }
    let lc_top = 2.0 * (grid.lambda_c_points - 1) as f64 / grid.lambda_c_points as f64;
    let mut lc = linear(0.0, lc_top, grid.lambda_c_points);
    let mut ls = logarithmic(ls_min, ls_max, grid.lambda_s_points);
    let (i, j, mut rate) = scan(spec, modes, &lc, &ls, exec)?;
    let mut point = LagrangePoint { lambda_c: lc[i], lambda_s: ls[j] };

    for _ in 0..grid.refine_passes {
        let dc = lc[1] - lc[0];
        let ds = (ls[1] / ls[0]).ln();
        let c_lo = (point.lambda_c - 2.0 * dc).max(0.0);
        let c_hi = (point.lambda_c + 2.0 * dc).min(lc_top.max(point.lambda_c));
        let s_lo = (point.lambda_s.ln() - 2.0 * ds).exp().max(ls_min);
        let s_hi = (point.lambda_s.ln() + 2.0 * ds).exp().min(ls_max);
        lc = linear(c_lo, c_hi, grid.refine_points);
        ls = logarithmic(s_lo, s_hi, grid.refine_points);
        let (ri, rj, r) = scan(spec, modes, &lc, &ls, exec)?;
        if r > rate {
            rate = r;
            point = LagrangePoint { lambda_c: lc[ri], lambda_s: ls[rj] };
        }
    }

    let dual = dual_value(point, spec, modes);
    let plan = lp_time_fractions(spec, &dual.candidates)?;
    let kkt = KktReport::new(spec, point, &plan, dual.value);
    Ok(Optimum { point, plan, dual_value: dual.value, kkt })
}
