//! Superposition of a DF layer and a CF layer in the same resource.
//!
//! The DF layer is decoded at each relay with the CF layer acting as
//! noise, then subtracted before compression. DF always runs at its
//! minimal fronthaul, so the CF layer gets what is left of the budget.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, Error, Result};
use crate::numeric::golden_max;
use crate::rates::{cf_rate_grad_unchecked, cf_rate_unchecked, df_rate_unchecked};

/// Number of scan intervals used by [`spc_optimize`].
pub const SPC_SCAN_POINTS: usize = 10_000;

/// Corner values closer than this are reported as a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpcMode {
    /// All power on the DF layer (or as much as the fronthaul allows).
    PureDF,
    /// All power on the CF layer.
    PureCF,
    /// Both corners achieve the same rate.
    Boundary,
    /// An interior split beats both corners. Never observed; kept so the
    /// optimizer can report it instead of hiding it.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpcSolution {
    pub p_df_star: f64,
    pub rate: f64,
    pub mode_at_optimum: SpcMode,
}

/// Largest DF-layer power that keeps the CF fronthaul nonnegative.
///
/// The DF layer needs `1/4 log2(1 + p_df / (1 + P - p_df)) <= C`, i.e.
/// `p_df <= m (1 + P) / (1 + m)` with `m = 2^(4C) - 1`.
pub fn spc_max_df_power(p_total: f64, c_total: f64) -> f64 {
    let m = (4.0 * c_total * LN_2).exp_m1();
    if m.is_infinite() {
        return p_total;
    }
    (m * (1.0 + p_total) / (1.0 + m)).min(p_total)
}

fn objective_unchecked(p_df: f64, p_total: f64, c_total: f64) -> Option<f64> {
    let p_cf = (p_total - p_df).max(0.0);
    let r_df = df_rate_unchecked(p_df / (1.0 + p_cf));
    let c_cf = c_total - 0.5 * r_df;
    if c_cf < -1e-12 {
        return None;
    }
    Some(r_df + cf_rate_unchecked(p_cf, c_cf.max(0.0)))
}

fn check_split(p_df: f64, p_total: f64, c_total: f64) -> Result<()> {
    check_nonneg("p_df", p_df)?;
    check_nonneg("p_total", p_total)?;
    check_nonneg("c_total", c_total)?;
    if p_df > p_total {
        return Err(Error::Domain(format!("p_df = {p_df} exceeds p_total = {p_total}")));
    }
    Ok(())
}

/// Superposition rate as a function of the DF-layer power.
pub fn spc_objective(p_df: f64, p_total: f64, c_total: f64) -> Result<f64> {
    check_split(p_df, p_total, c_total)?;
    objective_unchecked(p_df, p_total, c_total).ok_or_else(|| {
        Error::Infeasible(format!("DF layer at p_df = {p_df} needs more than c_total = {c_total} of fronthaul"))
    })
}

/// Analytic `dR_SPC / dp_df` at an interior feasible split.
///
/// `dR_DF/dp_df * (1 - 1/2 dR_CF/dC) - dR_CF/dP`, where the DF term
/// simplifies to `1 / (2 ln2 (1 + P - p_df))`.
pub fn spc_derivative(p_df: f64, p_total: f64, c_total: f64) -> Result<f64> {
    check_split(p_df, p_total, c_total)?;
    if p_df <= 0.0 || p_df >= p_total {
        return Err(Error::Domain(format!("p_df = {p_df} is not interior to (0, {p_total})")));
    }
    let p_cf = p_total - p_df;
    let r_df = df_rate_unchecked(p_df / (1.0 + p_cf));
    let c_cf = c_total - 0.5 * r_df;
    if c_cf <= 0.0 {
        return Err(Error::Infeasible(format!("no CF fronthaul left at p_df = {p_df}")));
    }
    let d_df = 1.0 / (2.0 * LN_2 * (1.0 + p_cf));
    let (d_cf_p, d_cf_c) = cf_rate_grad_unchecked(p_cf, c_cf);
    Ok(d_df * (1.0 - 0.5 * d_cf_c) - d_cf_p)
}

/// Fronthaul at which pure DF and pure CF tie for total power `p_total`:
/// `1/4 log2(1 + P) + 1/2`.
pub fn spc_threshold(p_total: f64) -> Result<f64> {
    check_nonneg("p_total", p_total)?;
    Ok(0.25 * p_total.ln_1p() / LN_2 + 0.5)
}

/// Maximise the superposition rate over the DF-layer power.
///
/// The feasible DF powers are scanned at [`SPC_SCAN_POINTS`] intervals and
/// the best cell is golden-refined; the result is then compared against
/// the two corners. When the fronthaul is too small for DF at full power,
/// the DF corner is the largest feasible DF power.
pub fn spc_optimize(p_total: f64, c_total: f64) -> Result<SpcSolution> {
    check_nonneg("p_total", p_total)?;
    check_nonneg("c_total", c_total)?;
    let top = spc_max_df_power(p_total, c_total);
    let f = |x: f64| objective_unchecked(x, p_total, c_total).unwrap_or(f64::NEG_INFINITY);

    let cf_corner = f(0.0);
    let df_corner = f(top);

    let mut best = (0.0, cf_corner);
    if top > 0.0 {
        let step = top / SPC_SCAN_POINTS as f64;
        for i in 1..SPC_SCAN_POINTS {
            let x = step * i as f64;
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        if best.0 > 0.0 {
            let (x, v) = golden_max(f, best.0 - step, (best.0 + step).min(top), 1e-12 * top);
            if v > best.1 {
                best = (x, v);
            }
        }
    }

    let corner_best = cf_corner.max(df_corner);
    if best.0 > 0.0 && best.1 > corner_best + TIE_TOL * corner_best.max(1.0) {
        return Ok(SpcSolution { p_df_star: best.0, rate: best.1, mode_at_optimum: SpcMode::Interior });
    }
    let scale = corner_best.abs().max(1.0);
    let sol = if (cf_corner - df_corner).abs() <= TIE_TOL * scale {
        SpcSolution { p_df_star: 0.0, rate: corner_best, mode_at_optimum: SpcMode::Boundary }
    } else if df_corner > cf_corner {
        SpcSolution { p_df_star: top, rate: df_corner, mode_at_optimum: SpcMode::PureDF }
    } else {
        SpcSolution { p_df_star: 0.0, rate: cf_corner, mode_at_optimum: SpcMode::PureCF }
    };
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{cf_rate, df_rate};

    #[test]
    fn objective_corners() {
        assert!((spc_objective(0.0, 3.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(spc_objective(3.0, 3.0, 1.0).unwrap(), 1.0);
        assert!(spc_objective(3.0, 3.0, 0.25).is_err());
        assert!(spc_objective(4.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn objective_is_flat_at_the_threshold() {
        // the derivative vanishes identically at C = spc_threshold(P)
        for i in 0..=100 {
            let v = spc_objective(3.0 * i as f64 / 100.0, 3.0, 1.0).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
        let d = spc_derivative(1.5, 3.0, 1.0).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }

    #[test]
    fn derivative_signs() {
        for i in 1..50 {
            let p_df = 3.0 * i as f64 / 50.0;
            assert!(spc_derivative(p_df, 3.0, 2.0).unwrap() < 0.0);
            assert!(spc_derivative(p_df, 3.0, 0.75).unwrap() > 0.0);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        let a = spc_derivative(1.0, 3.0, 1.5).unwrap();
        let n = (spc_objective(1.0 + h, 3.0, 1.5).unwrap() - spc_objective(1.0 - h, 3.0, 1.5).unwrap()) / (2.0 * h);
        assert!((a - n).abs() < 1e-6, "{a} vs {n}");
        assert!(spc_derivative(0.0, 3.0, 1.5).is_err());
        assert!(spc_derivative(3.0, 3.0, 1.5).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(spc_threshold(3.0).unwrap(), 1.0);
        assert_eq!(spc_threshold(0.0).unwrap(), 0.5);
        assert!((spc_threshold(15.0).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn optimize_examples() {
        let s = spc_optimize(3.0, 2.0).unwrap();
        assert_eq!(s.mode_at_optimum, SpcMode::PureCF);
        assert_eq!(s.p_df_star, 0.0);
        assert_eq!(s.rate, cf_rate(3.0, 2.0).unwrap());

        let s = spc_optimize(3.0, 0.75).unwrap();
        assert_eq!(s.mode_at_optimum, SpcMode::PureDF);
        assert_eq!(s.p_df_star, 3.0);
        assert_eq!(s.rate, 1.0);

        let s = spc_optimize(3.0, 1.0).unwrap();
        assert_eq!(s.mode_at_optimum, SpcMode::Boundary);
        assert!((s.rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fronthaul_starved_df_corner_stays_feasible() {
        let s = spc_optimize(3.0, 0.25).unwrap();
        assert!(s.p_df_star <= 3.0);
        let r = spc_objective(s.p_df_star, 3.0, 0.25).unwrap();
        assert!((r - s.rate).abs() < 1e-12);
        // DF corner at capped power spends exactly the fronthaul budget
        let top = spc_max_df_power(3.0, 0.25);
        let used = 0.5 * df_rate(top / (1.0 + 3.0 - top)).unwrap();
        assert!((used - 0.25).abs() < 1e-12);
    }
}
