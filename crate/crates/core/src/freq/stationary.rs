//! Per-band stationary allocations for given dual prices.
//!
//! In one sub-band with gain `h` and prices `(lambda_c, lambda_s)` the DF
//! mode maximises `2 R_DF - lambda_s S - lambda_c C_DF` with `C_DF = R_DF`
//! and the CF mode maximises `2 R_CF - lambda_s S - lambda_c C`. The DF
//! optimum is water filling. The CF optimum is written in terms of the
//! compression-noise variance `u`: with `k = lambda_s ln2 / h^2` the
//! stationary `u` is the smaller root of
//! `k u^2 + (k + lambda_c - 2) u + 2 lambda_c = 0`,
//! and then `h^2 S = ((2 - lambda_c)/k - 1 - u) / 2`,
//! `R = 1/2 log2(1 + 2 h^2 S / (1 + u))`, `C = log2(1 + 1/u) + R`.
//! The larger root is a saddle of the band Lagrangian.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, Error, Result};
use crate::numeric::{bisect, golden_max};
use crate::rates::{cf_rate_grad_unchecked, cf_rate_unchecked, df_rate_unchecked};

/// Dual prices on power (`lambda_s`) and fronthaul (`lambda_c`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangePoint {
    pub lambda_c: f64,
    pub lambda_s: f64,
}

impl LagrangePoint {
    pub fn new(lambda_c: f64, lambda_s: f64) -> Result<Self> {
        for (name, v) in [("lambda_c", lambda_c), ("lambda_s", lambda_s)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { lambda_c, lambda_s })
    }

    /// `lambda_s ln2 / h^2`, the gain-normalised power price.
    pub(crate) fn kappa(&self, h: f64) -> f64 {
        self.lambda_s * LN_2 / (h * h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    DF,
    CF,
}

/// One mode's densities in one band: power `s`, fronthaul `c`, rate `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAllocation {
    pub s: f64,
    pub c: f64,
    pub r: f64,
    pub feasible: bool,
}

impl ModeAllocation {
    pub const INFEASIBLE: ModeAllocation = ModeAllocation { s: 0.0, c: 0.0, r: 0.0, feasible: false };
}

/// DF rate density `1/2 log2(1 + s h^2)`.
pub fn r_df_freq(s: f64, h: f64) -> Result<f64> {
    check_nonneg("s", s)?;
    check_nonneg("h", h)?;
    Ok(df_rate_unchecked(s * h * h))
}

/// CF rate density for power density `s` and fronthaul density `c`.
///
/// Same expression as the per-channel-use CF rate with SNR `s h^2`; the
/// fronthaul density counts bits per hertz, i.e. two channel uses, so it
/// enters as `c / 2`.
pub fn r_cf_freq(s: f64, c: f64, h: f64) -> Result<f64> {
    check_nonneg("s", s)?;
    check_nonneg("c", c)?;
    check_nonneg("h", h)?;
    Ok(cf_rate_unchecked(s * h * h, 0.5 * c))
}

/// Band Lagrangian density `2 r - lambda_s s - lambda_c c` of one mode at
/// an arbitrary operating point. For DF the fronthaul is `r` and `c` is
/// ignored.
pub fn mode_lagrangian(lp: LagrangePoint, h: f64, mode: Mode, s: f64, c: f64) -> f64 {
    match mode {
        Mode::DF => {
            let r = df_rate_unchecked(s * h * h);
            2.0 * r - lp.lambda_s * s - lp.lambda_c * r
        }
        Mode::CF => {
            let r = cf_rate_unchecked(s * h * h, 0.5 * c);
            2.0 * r - lp.lambda_s * s - lp.lambda_c * c
        }
    }
}

/// Water-filling DF allocation.
///
/// `S = (2 - lambda_c) / (2 lambda_s ln2) - 1/h^2` and
/// `C = R = ln(h^2 (2 - lambda_c) / (2 lambda_s ln2)) / (2 ln2)`. Feasible
/// only for `0 <= lambda_c < 2` and `0 < lambda_s < h^2 (2 - lambda_c)/(2 ln2)`.
pub fn df_stationary(lp: LagrangePoint, h: f64) -> ModeAllocation {
    if !(h > 0.0) || !(lp.lambda_s > 0.0) || lp.lambda_c >= 2.0 {
        return ModeAllocation::INFEASIBLE;
    }
    let level = (2.0 - lp.lambda_c) / (2.0 * lp.lambda_s * LN_2);
    let s = level - 1.0 / (h * h);
    if s <= 0.0 {
        return ModeAllocation { s: s.max(0.0), ..ModeAllocation::INFEASIBLE };
    }
    let r = (h * h * level).ln() / (2.0 * LN_2);
    ModeAllocation { s, c: r, r, feasible: true }
}

/// Closed-form CF allocation on the concave branch.
///
/// Infeasible when the quadratic in `u` has no positive real root, which
/// happens exactly above the CF region line, or when `lambda_c` is 0 (the
/// mode would want unbounded fronthaul) or at least 2.
pub fn cf_stationary(lp: LagrangePoint, h: f64) -> ModeAllocation {
    let lc = lp.lambda_c;
    if !(h > 0.0) || !(lp.lambda_s > 0.0) || !(lc > 0.0) || lc >= 2.0 {
        return ModeAllocation::INFEASIBLE;
    }
    let k = lp.kappa(h);
    let b = 2.0 - lc - k;
    if b <= 0.0 {
        return ModeAllocation::INFEASIBLE;
    }
    let disc = (k + lc - 2.0).powi(2) - 8.0 * k * lc;
    if disc < 0.0 {
        return ModeAllocation::INFEASIBLE;
    }
    // smaller root via the product of roots, avoiding b - sqrt(disc)
    let u = 4.0 * lc / (b + disc.sqrt());
    let p = 0.5 * ((2.0 - lc) / k - 1.0 - u);
    if !(p > 0.0) {
        return ModeAllocation::INFEASIBLE;
    }
    let r = 0.5 * (2.0 * p / (1.0 + u)).ln_1p() / LN_2;
    let c = (1.0 / u).ln_1p() / LN_2 + r;
    ModeAllocation { s: p / (h * h), c, r, feasible: true }
}

const NUMERIC_SCAN: usize = 400;
const MAX_OFFSET: f64 = 64.0;
const MIN_OFFSET: f64 = 1e-10;

/// CF allocation from the raw gradient equations, without the closed form.
///
/// Works in per-channel-use units `p = s h^2`, `x = c / 2`, where the
/// stationarity conditions read `dR/dp = lambda_s / (2 h^2)` and
/// `dR/dx = lambda_c`. The first is solved for `p` at each `x` (the CF rate
/// is concave in `p`); the residual `g(x) = dR/dx - lambda_c` along that
/// curve rises from negative, peaks and falls back to `-lambda_c`, so a
/// stationary point exists iff the peak is nonnegative. The concave-branch
/// root is where `g` crosses zero downwards.
pub fn cf_stationary_numeric(lp: LagrangePoint, h: f64) -> ModeAllocation {
    let lc = lp.lambda_c;
    if !(h > 0.0) || !(lp.lambda_s > 0.0) || !(lc > 0.0) || lc >= 2.0 {
        return ModeAllocation::INFEASIBLE;
    }
    let target = lp.lambda_s / (2.0 * h * h);
    let slope_at_zero = |x: f64| cf_rate_grad_unchecked(0.0, x).0;
    if slope_at_zero(1e6) <= target {
        return ModeAllocation::INFEASIBLE;
    }
    // smallest fronthaul at which some power is worth spending
    let mut hi = 1.0;
    while slope_at_zero(hi) <= target {
        hi *= 2.0;
    }
    let x_min = bisect(|x| slope_at_zero(x) - target, 0.0, hi);

    let power_at = |x: f64| -> Option<f64> {
        if slope_at_zero(x) <= target {
            return None;
        }
        let mut p_hi = 1.0;
        while cf_rate_grad_unchecked(p_hi, x).0 > target {
            p_hi *= 2.0;
            if p_hi > 1e300 {
                return None;
            }
        }
        Some(bisect(|p| cf_rate_grad_unchecked(p, x).0 - target, 0.0, p_hi))
    };
    let residual = |offset_log: f64| -> f64 {
        let x = x_min + offset_log.exp();
        match power_at(x) {
            Some(p) => cf_rate_grad_unchecked(p, x).1 - lc,
            None => -lc,
        }
    };

    let (lo, hi) = (MIN_OFFSET.ln(), MAX_OFFSET.ln());
    let step = (hi - lo) / NUMERIC_SCAN as f64;
    let samples: Vec<f64> = (0..=NUMERIC_SCAN).map(|i| residual(lo + step * i as f64)).collect();
    let (imax, _) =
        samples.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let a = lo + step * imax.saturating_sub(1) as f64;
    let b = (lo + step * (imax + 1) as f64).min(hi);
    let (peak_at, peak) = golden_max(residual, a, b, 1e-13);
    let (peak_at, peak) =
        if peak >= samples[imax] { (peak_at, peak) } else { (lo + step * imax as f64, samples[imax]) };
    if peak < 0.0 {
        return ModeAllocation::INFEASIBLE;
    }
    let Some(right) = (imax + 1..=NUMERIC_SCAN).find(|&i| samples[i] < 0.0) else {
        return ModeAllocation::INFEASIBLE;
    };
    let root = bisect(residual, peak_at, lo + step * right as f64);
    let x = x_min + root.exp();
    let Some(p) = power_at(x) else { return ModeAllocation::INFEASIBLE };
    if !(p > 0.0) {
        return ModeAllocation::INFEASIBLE;
    }
    ModeAllocation { s: p / (h * h), c: 2.0 * x, r: cf_rate_unchecked(p, x), feasible: true }
}
