//! Dual function and the time-sharing LP for fixed prices.

use serde::{Deserialize, Serialize};

use super::stationary::{cf_stationary, df_stationary, LagrangePoint, ModeAllocation};
use super::{ChannelSpec, ModeSet};
use crate::error::Result;
use crate::lp::PackingLp;

/// Stationary allocations of both modes in one band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCandidates {
    pub df: ModeAllocation,
    pub cf: ModeAllocation,
}

impl BandCandidates {
    pub fn at(lp: LagrangePoint, h: f64, modes: ModeSet) -> Self {
        let df = if modes.allows_df() { df_stationary(lp, h) } else { ModeAllocation::INFEASIBLE };
        let cf = if modes.allows_cf() { cf_stationary(lp, h) } else { ModeAllocation::INFEASIBLE };
        Self { df, cf }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualValue {
    pub value: f64,
    pub candidates: Vec<BandCandidates>,
}

/// Lagrange dual evaluated at the stationary allocations:
/// `sum_i df max(0, 2 r - lambda_s s - lambda_c c) + lambda_s P / 2 + lambda_c C`.
///
/// For `lambda_c > 0` the stationary points are the band-wise maximisers,
/// so the value upper-bounds every feasible plan.
pub fn dual_value(lp: LagrangePoint, spec: &ChannelSpec, modes: ModeSet) -> DualValue {
    let df = spec.band_width();
    let candidates: Vec<BandCandidates> = spec.gains().iter().map(|&h| BandCandidates::at(lp, h, modes)).collect();
    let phi = |a: &ModeAllocation| {
        if a.feasible {
            2.0 * a.r - lp.lambda_s * a.s - lp.lambda_c * a.c
        } else {
            0.0
        }
    };
    let bands: f64 = candidates.iter().map(|b| phi(&b.df).max(phi(&b.cf)).max(0.0) * df).sum();
    DualValue { value: bands + 0.5 * lp.lambda_s * spec.power() + lp.lambda_c * spec.fronthaul(), candidates }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandAllocation {
    pub frequency: f64,
    pub gain: f64,
    pub t_df: f64,
    pub t_cf: f64,
    pub df: ModeAllocation,
    pub cf: ModeAllocation,
}

impl BandAllocation {
    /// Time-averaged rate density.
    pub fn rate_density(&self) -> f64 {
        self.t_df * self.df.r + self.t_cf * self.cf.r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationPlan {
    pub bands: Vec<BandAllocation>,
    /// `sum 2 t s df`.
    pub power_used: f64,
    /// `sum t c df`, bits/s per relay.
    pub fronthaul_used: f64,
    /// `sum 2 t r df`, bits/s.
    pub rate: f64,
}

fn usable(a: &ModeAllocation) -> bool {
    a.feasible && a.r > 0.0
}

fn assemble(spec: &ChannelSpec, candidates: &[BandCandidates], times: &[(f64, f64)]) -> AllocationPlan {
    let df = spec.band_width();
    let mut plan =
        AllocationPlan { bands: Vec::with_capacity(times.len()), power_used: 0.0, fronthaul_used: 0.0, rate: 0.0 };
    for (i, (cand, &(t_df, t_cf))) in candidates.iter().zip(times).enumerate() {
        let b = BandAllocation {
            frequency: spec.band_center(i),
            gain: spec.gains()[i],
            t_df,
            t_cf,
            df: cand.df,
            cf: cand.cf,
        };
        plan.power_used += 2.0 * (t_df * b.df.s + t_cf * b.cf.s) * df;
        plan.fronthaul_used += (t_df * b.df.c + t_cf * b.cf.c) * df;
        plan.rate += 2.0 * b.rate_density() * df;
        plan.bands.push(b);
    }
    plan
}

/// Choose the time fractions of each mode in each band that maximise the
/// rate under the power and fronthaul budgets.
///
/// Bands whose best mode alone fits the budgets need no LP; otherwise a
/// packing LP with one row per band and two budget rows is solved. Rows
/// are scaled by `1/df` so the tableau does not shrink with the band count.
pub fn lp_time_fractions(spec: &ChannelSpec, candidates: &[BandCandidates]) -> Result<AllocationPlan> {
    let df = spec.band_width();
    let mut vars: Vec<(usize, bool)> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if usable(&c.df) {
            vars.push((i, true));
        }
        if usable(&c.cf) {
            vars.push((i, false));
        }
    }
    let alloc = |i: usize, is_df: bool| if is_df { candidates[i].df } else { candidates[i].cf };

    // greedy: the better mode everywhere, full time
    let mut times = vec![(0.0, 0.0); candidates.len()];
    let (mut power, mut fronthaul) = (0.0, 0.0);
    for (i, c) in candidates.iter().enumerate() {
        let pick_df = usable(&c.df) && (!usable(&c.cf) || c.df.r >= c.cf.r);
        let a = if pick_df {
            c.df
        } else if usable(&c.cf) {
            c.cf
        } else {
            continue;
        };
        times[i] = if pick_df { (1.0, 0.0) } else { (0.0, 1.0) };
        power += 2.0 * a.s * df;
        fronthaul += a.c * df;
    }
    if power <= spec.power() && fronthaul <= spec.fronthaul() {
        return Ok(assemble(spec, candidates, &times));
    }

    let mut lp = PackingLp::new(vars.iter().map(|&(i, d)| 2.0 * alloc(i, d).r).collect());
    let mut k = 0;
    while k < vars.len() {
        let band = vars[k].0;
        let mut row = vec![(k, 1.0)];
        if k + 1 < vars.len() && vars[k + 1].0 == band {
            row.push((k + 1, 1.0));
            k += 1;
        }
        lp.add_row(row, 1.0)?;
        k += 1;
    }
    let power_row = vars.iter().enumerate().map(|(k, &(i, d))| (k, 2.0 * alloc(i, d).s)).collect();
    lp.add_row(power_row, spec.power() / df)?;
    let fronthaul_row = vars.iter().enumerate().map(|(k, &(i, d))| (k, alloc(i, d).c)).collect();
    lp.add_row(fronthaul_row, spec.fronthaul() / df)?;
    let sol = lp.solve()?;

    let mut times = vec![(0.0, 0.0); candidates.len()];
    for (k, &(i, d)) in vars.iter().enumerate() {
        let t = sol.x[k].min(1.0);
        if d {
            times[i].0 = t;
        } else {
            times[i].1 = t;
        }
    }
    Ok(assemble(spec, candidates, &times))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_path_when_budgets_are_loose() {
        let spec = ChannelSpec::flat(1.0, 1.0, 4, 100.0, 100.0).unwrap();
        let lp = LagrangePoint::new(0.5, 0.2).unwrap();
        let cands: Vec<_> = (0..4).map(|_| BandCandidates::at(lp, 1.0, ModeSet::Both)).collect();
        let plan = lp_time_fractions(&spec, &cands).unwrap();
        for b in &plan.bands {
            assert_eq!(b.t_df + b.t_cf, 1.0);
        }
        assert!(plan.power_used <= 100.0);
    }

    #[test]
    fn lp_respects_budgets() {
        let spec = ChannelSpec::new(1.0, vec![0.5, 1.0, 1.5, 2.0], 0.5, 0.3).unwrap();
        let lp = LagrangePoint::new(0.4, 0.05).unwrap();
        let cands: Vec<_> = spec.gains().iter().map(|&h| BandCandidates::at(lp, h, ModeSet::Both)).collect();
        let plan = lp_time_fractions(&spec, &cands).unwrap();
        assert!(plan.power_used <= 0.5 * (1.0 + 1e-9));
        assert!(plan.fronthaul_used <= 0.3 * (1.0 + 1e-9));
        for b in &plan.bands {
            assert!(b.t_df >= 0.0 && b.t_cf >= 0.0 && b.t_df + b.t_cf <= 1.0 + 1e-12);
        }
        assert!(plan.rate > 0.0);
    }

    #[test]
    fn weak_duality_at_a_point() {
        let spec = ChannelSpec::new(1.0, vec![0.5, 1.0, 1.5], 1.0, 0.5).unwrap();
        let lp = LagrangePoint::new(0.7, 0.3).unwrap();
        let d = dual_value(lp, &spec, ModeSet::Both);
        let plan = lp_time_fractions(&spec, &d.candidates).unwrap();
        assert!(plan.rate <= d.value + 1e-12);
    }
}
