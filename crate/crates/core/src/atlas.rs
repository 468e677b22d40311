//! Geometry of the price plane `(lambda_c, lambda_s)` for one band gain.
//!
//! Every border line is `h^2` times a function of `lambda_c`; the functions
//! below evaluate the normalised curve (`h = 1`) and scale. The stationary
//! allocations of [`crate::freq`] are used only in tests: the lines here
//! are closed forms.
//!
//! Below the equal-power and equal-relay-rate lines CF gets more power,
//! respectively more fronthaul, than DF. Each of those lines has two
//! pieces: a simple linear piece, valid where the stationary CF solution
//! actually reaches equality with DF, and a piece built from the CF
//! solution on the CF region line, used for small `lambda_c`. The pieces
//! meet at a junction located numerically once.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::{AllocationPlan, LagrangePoint, Mode};
use crate::numeric::bisect;

/// Residual power at or below this is not an improvement.
pub const SWAP_TOL: f64 = 1e-9;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Both modes feasible; CF has more power, fronthaul and rate.
    R1BothCfDominant,
    /// Only CF feasible.
    R2CfOnly,
    /// Both feasible; CF has less power but more fronthaul.
    R3CfHigherRelayRate,
    /// Both feasible; DF has more power, fronthaul and rate.
    R4DfDominant,
    /// Only DF feasible.
    R5DfOnly,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BorderKind {
    DfRegion,
    CfRegion,
    EqualPower,
    EqualRelayRate,
    EqualSystemRate,
}

impl BorderKind {
    pub const ALL: [BorderKind; 5] = [
        BorderKind::DfRegion,
        BorderKind::CfRegion,
        BorderKind::EqualPower,
        BorderKind::EqualRelayRate,
        BorderKind::EqualSystemRate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BorderKind::DfRegion => "df_region",
            BorderKind::CfRegion => "cf_region",
            BorderKind::EqualPower => "equal_power",
            BorderKind::EqualRelayRate => "equal_relay_rate",
            BorderKind::EqualSystemRate => "equal_system_rate",
        }
    }
}

/// A border line for a fixed gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderLine {
    pub kind: BorderKind,
    pub h: f64,
}

impl BorderLine {
    pub fn new(kind: BorderKind, h: f64) -> Self {
        Self { kind, h }
    }

    /// `lambda_s` on the line at `lambda_c`.
    pub fn eval(&self, lc: f64) -> Result<f64> {
        match self.kind {
            BorderKind::DfRegion => df_region_line(lc, self.h),
            BorderKind::CfRegion => cf_region_line(lc, self.h),
            // the two lines coincide
            BorderKind::EqualPower | BorderKind::EqualSystemRate => equal_power_line(lc, self.h),
            BorderKind::EqualRelayRate => equal_relayrate_line(lc, self.h),
        }
    }

    /// `(lambda_c, lambda_s)` samples on `n` evenly spaced `lambda_c` in `[0, 2)`.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        (0..n)
            .map(|i| {
                let lc = 2.0 * i as f64 / n as f64;
                Ok((lc, self.eval(lc)?))
            })
            .collect()
    }
}

fn check_lc(lc: f64, closed: bool) -> Result<()> {
    let ok = lc >= 0.0 && if closed { lc <= 2.0 } else { lc < 2.0 };
    if ok {
        Ok(())
    } else {
        let range = if closed { "[0, 2]" } else { "[0, 2)" };
        Err(Error::Domain(format!("lambda_c must lie in {range}, got {lc}")))
    }
}

fn check_h(h: f64) -> Result<()> {
    if h >= 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("gain must be finite and >= 0, got {h}")))
    }
}

fn sqrt_term(lc: f64) -> f64 {
    (2.0 * lc * (lc + 2.0)).sqrt()
}

/// `lambda_s ln2 / h^2` on the CF region line.
fn cf_region_kappa(lc: f64) -> f64 {
    3.0 * lc + 2.0 - 2.0 * sqrt_term(lc)
}

/// Above this line DF water filling allocates nothing.
pub fn df_region_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, false)?;
    check_h(h)?;
    Ok(h * h * (2.0 - lc) / (2.0 * LN_2))
}

/// Above this line the stationary CF equations have no real solution.
pub fn cf_region_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, true)?;
    check_h(h)?;
    Ok(h * h * cf_region_kappa(lc).max(0.0) / LN_2)
}

/// CF power and fronthaul densities on the CF region line.
pub fn cf_on_region_line(lc: f64, h: f64) -> Result<(f64, f64)> {
    check_lc(lc, false)?;
    check_h(h)?;
    if h == 0.0 {
        return Err(Error::Domain("gain must be positive".into()));
    }
    if lc == 0.0 {
        return Ok((0.0, f64::INFINITY));
    }
    let k = cf_region_kappa(lc);
    let g = h * h;
    let s = (2.0 - lc) / (4.0 * g * k) - 1.0 / (4.0 * g);
    let q = sqrt_term(lc);
    let inner = (4.0 - lc * lc) * k / (2.0 * lc * (7.0 * lc * lc + 16.0 * lc + 4.0 - 5.0 * lc * q - 6.0 * q));
    Ok((s, inner.ln() / (2.0 * LN_2)))
}

/// Linear piece of the equal-power line, normalised to `h = 1`.
fn equal_power_simple(lc: f64) -> f64 {
    (2.0 - 3.0 * lc) / (2.0 * LN_2)
}

/// Line where DF power equals the CF power on the CF region line.
fn equal_power_region_piece(lc: f64) -> f64 {
    let q = sqrt_term(lc);
    (2.0 - lc) / (3.0 * LN_2) * (2.0 - (2.0 - lc) / (4.0 * lc + 4.0 - 3.0 * q))
}

fn equal_relay_simple(lc: f64) -> f64 {
    (3.0 * lc - 2.0 * SQRT3 * lc - 2.0 * SQRT3 + 4.0) / LN_2
}

/// Line where DF fronthaul equals the CF fronthaul on the CF region line.
fn equal_relay_region_piece(lc: f64) -> f64 {
    let k = cf_region_kappa(lc);
    let poly = lc * (7.0 * lc * lc + 16.0 * lc + 4.0) - lc * (1.5 * lc + 1.0) * (5.0 * lc + 6.0);
    poly / (LN_2 * (lc + 2.0) * k) + lc * (5.0 * lc + 6.0) / (2.0 * LN_2 * (lc + 2.0))
}

/// `lambda_c` where the two pieces of the equal-power line meet.
pub fn equal_power_junction() -> f64 {
    static J: OnceLock<f64> = OnceLock::new();
    *J.get_or_init(|| bisect(|lc| equal_power_simple(lc) - equal_power_region_piece(lc), 0.1, 0.6))
}

/// `lambda_c` where the two pieces of the equal-relay-rate line meet.
pub fn equal_relay_junction() -> f64 {
    static J: OnceLock<f64> = OnceLock::new();
    *J.get_or_init(|| bisect(|lc| equal_relay_simple(lc) - equal_relay_region_piece(lc), 0.5, 1.1))
}

/// Border where CF and DF get equal power; CF gets more below it.
///
/// The linear piece applies from the junction on and is clamped at zero
/// past `lambda_c = 2/3`, where DF has more power everywhere.
pub fn equal_power_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, false)?;
    check_h(h)?;
    let v = if lc < equal_power_junction() { equal_power_region_piece(lc) } else { equal_power_simple(lc) };
    Ok(h * h * v.max(0.0))
}

/// The linear piece alone, `h^2 (2 - 3 lambda_c) / (2 ln2)`.
pub fn equal_power_simple_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, false)?;
    check_h(h)?;
    Ok(h * h * equal_power_simple(lc))
}

/// Border where CF and DF need equal fronthaul; CF needs more below it.
pub fn equal_relayrate_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, false)?;
    check_h(h)?;
    let v = if lc < equal_relay_junction() { equal_relay_region_piece(lc) } else { equal_relay_simple(lc) };
    Ok(h * h * v.max(0.0))
}

/// The linear piece alone, `h^2 (3 lc - 2 sqrt3 lc - 2 sqrt3 + 4) / ln2`.
pub fn equal_relayrate_simple_line(lc: f64, h: f64) -> Result<f64> {
    check_lc(lc, false)?;
    check_h(h)?;
    Ok(h * h * equal_relay_simple(lc))
}

/// Label of the point `lp` for a band of gain `h`.
pub fn classify(lp: LagrangePoint, h: f64) -> RegionLabel {
    let (lc, ls) = (lp.lambda_c, lp.lambda_s);
    if !(h > 0.0) || !(ls > 0.0) || lc >= 2.0 {
        return RegionLabel::Infeasible;
    }
    let g = h * h;
    let df = ls < g * (2.0 - lc) / (2.0 * LN_2);
    let cf = lc > 0.0 && ls < g * cf_region_kappa(lc) / LN_2;
    match (cf, df) {
        (false, false) => RegionLabel::Infeasible,
        (true, false) => RegionLabel::R2CfOnly,
        (false, true) => RegionLabel::R5DfOnly,
        (true, true) => {
            // inside the CF region the linear pieces decide; before their
            // junctions CF wins everywhere it is feasible
            let more_power = lc < equal_power_junction() || ls < g * equal_power_simple(lc);
            let more_relay = lc < equal_relay_junction() || ls < g * equal_relay_simple(lc);
            if more_power {
                RegionLabel::R1BothCfDominant
            } else if more_relay {
                RegionLabel::R3CfHigherRelayRate
            } else {
                RegionLabel::R4DfDominant
            }
        }
    }
}

/// Gain at which `lp` lies on the equal-power line. CF gets more power
/// than DF in bands above it.
pub fn h_threshold(lp: LagrangePoint) -> Result<f64> {
    if !(lp.lambda_s > 0.0) {
        return Err(Error::Domain(format!("lambda_s must be positive, got {}", lp.lambda_s)));
    }
    let unit = equal_power_line(lp.lambda_c, 1.0)?;
    if unit <= 0.0 {
        return Err(Error::Domain(format!(
            "no threshold for lambda_c = {}: DF gets more power at every gain",
            lp.lambda_c
        )));
    }
    Ok((lp.lambda_s / unit).sqrt())
}

/// Marginal price of DF power, `lambda_s / (1 - lambda_c / 2)`.
pub fn lambda_w(lp: LagrangePoint) -> Result<f64> {
    if lp.lambda_c >= 2.0 {
        return Err(Error::Domain(format!("lambda_c must be below 2, got {}", lp.lambda_c)));
    }
    Ok(lp.lambda_s / (1.0 - 0.5 * lp.lambda_c))
}

/// DF water-filling power for the price `lambda_w = 2 dR_DF/dS`:
/// `max(0, 1/(lambda_w ln2) - 1/h^2)`.
pub fn df_power_from_lambda_w(lambda_w: f64, h: f64) -> Result<f64> {
    if !(lambda_w > 0.0) {
        return Err(Error::Domain(format!("lambda_w must be positive, got {lambda_w}")));
    }
    if !(h > 0.0) {
        return Ok(0.0);
    }
    Ok((1.0 / (lambda_w * LN_2) - 1.0 / (h * h)).max(0.0))
}

/// Power left over after moving mode A from the weaker band to the
/// stronger one and mode B the other way, keeping each mode's received
/// power fixed: `(1 - (h1/h2)^2) S_A1 - ((h2/h1)^2 - 1) S_B2`.
pub fn swap_residual(h1: f64, s_a1: f64, h2: f64, s_b2: f64) -> Result<f64> {
    if !(h1 > 0.0) || !(h2 > 0.0) {
        return Err(Error::Domain(format!("gains must be positive, got {h1} and {h2}")));
    }
    if h1 == h2 {
        return Err(Error::Degenerate("bands have equal gain".into()));
    }
    if h2 < h1 {
        return Err(Error::InvalidArgument(format!("band 2 gain {h2} must exceed band 1 gain {h1}")));
    }
    let r = (h1 / h2).powi(2);
    Ok((1.0 - r) * s_a1 - (1.0 / r - 1.0) * s_b2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapCheck {
    pub improvable: bool,
    /// Largest residual over the mode pairings present; `None` when the
    /// two bands do not carry different modes.
    pub residual: Option<f64>,
    /// `(mode in weaker band, mode in stronger band)` of that residual.
    pub modes: Option<(Mode, Mode)>,
}

fn allocated(plan: &AllocationPlan, band: usize, mode: Mode) -> Option<f64> {
    let b = &plan.bands[band];
    match mode {
        Mode::DF if b.t_df > 0.0 => Some(b.df.s),
        Mode::CF if b.t_cf > 0.0 => Some(b.cf.s),
        _ => None,
    }
}

/// Check whether exchanging the modes of two bands of `plan` would free
/// power. The weaker band plays the role of band 1.
pub fn swap_check(plan: &AllocationPlan, band1: usize, band2: usize) -> Result<SwapCheck> {
    let n = plan.bands.len();
    if band1 >= n || band2 >= n {
        return Err(Error::InvalidArgument(format!("band index out of range for {n} bands")));
    }
    let (lo, hi) = if plan.bands[band1].gain <= plan.bands[band2].gain { (band1, band2) } else { (band2, band1) };
    let (h1, h2) = (plan.bands[lo].gain, plan.bands[hi].gain);
    if h1 == h2 {
        return Err(Error::Degenerate(format!("bands {band1} and {band2} have equal gain")));
    }
    let mut best: Option<(f64, (Mode, Mode))> = None;
    for (a, b) in [(Mode::DF, Mode::CF), (Mode::CF, Mode::DF)] {
        if let (Some(sa), Some(sb)) = (allocated(plan, lo, a), allocated(plan, hi, b)) {
            let r = swap_residual(h1, sa, h2, sb)?;
            if best.is_none_or(|(v, _)| r > v) {
                best = Some((r, (a, b)));
            }
        }
    }
    Ok(SwapCheck {
        improvable: best.is_some_and(|(v, _)| v > SWAP_TOL),
        residual: best.map(|(v, _)| v),
        modes: best.map(|(_, m)| m),
    })
}

/// Largest swap residual over all band pairs with different gains, with
/// the pair that attains it. `None` if no pair carries different modes.
pub fn swap_scan(plan: &AllocationPlan) -> Option<(usize, usize, f64)> {
    let n = plan.bands.len();
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let Ok(check) = swap_check(plan, i, j) else { continue };
            if let Some(r) = check.residual {
                if best.is_none_or(|(_, _, v)| r > v) {
                    best = Some((i, j, r));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn df_line_examples() {
        assert!((df_region_line(0.0, 1.0).unwrap() - 1.0 / LN_2).abs() < EPS);
        assert!(df_region_line(2.0 - 1e-12, 1.0).unwrap() < 1e-11);
        assert_eq!(df_region_line(0.3, 2.0).unwrap(), 4.0 * df_region_line(0.3, 1.0).unwrap());
        assert!(df_region_line(2.0, 1.0).is_err());
    }

    #[test]
    fn cf_line_examples() {
        assert!((cf_region_line(0.0, 1.0).unwrap() - 2.0 / LN_2).abs() < EPS);
        assert!(cf_region_line(2.0, 1.0).unwrap().abs() < EPS);
        assert!(cf_region_line(2.1, 1.0).is_err());
    }

    #[test]
    fn equal_lines_examples() {
        assert!((equal_power_line(0.0, 1.0).unwrap() - 1.0 / LN_2).abs() < EPS);
        assert!(equal_power_simple_line(2.0 / 3.0 - 1e-12, 1.0).unwrap().abs() < 1e-11);
        let want = (4.0 - 2.0 * SQRT3) / LN_2;
        assert!((equal_relayrate_simple_line(0.0, 1.0).unwrap() - want).abs() < EPS);
        assert!((equal_relayrate_line(0.4, 3.0).unwrap() - 9.0 * equal_relayrate_line(0.4, 1.0).unwrap()).abs() < EPS);
    }

    #[test]
    fn junctions_are_where_the_pieces_meet_the_cf_region_line() {
        assert!((equal_power_junction() - 2.0 / 7.0).abs() < 1e-12);
        assert!((equal_relay_junction() - (SQRT3 - 1.0)).abs() < 1e-12);
        let j = equal_power_junction();
        assert!((equal_power_line(j, 1.0).unwrap() - cf_region_line(j, 1.0).unwrap()).abs() < 1e-10);
        let j = equal_relay_junction();
        assert!((equal_relayrate_line(j, 1.0).unwrap() - cf_region_line(j, 1.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn region_line_state_limits() {
        let (s, c) = cf_on_region_line(1e-9, 1.0).unwrap();
        assert!(s.abs() < 1e-3, "{s}");
        assert!(c > 5.0);
        let (s1, _) = cf_on_region_line(0.5, 1.0).unwrap();
        let (s2, _) = cf_on_region_line(0.5, 2.0).unwrap();
        assert!((s1 - 4.0 * s2).abs() < EPS);
    }

    #[test]
    fn classify_examples() {
        let lp = |lc, ls| LagrangePoint::new(lc, ls).unwrap();
        assert_eq!(classify(lp(0.5, 10.0), 1.0), RegionLabel::Infeasible);
        assert_eq!(classify(lp(0.1, 1e-6), 1.0), RegionLabel::R1BothCfDominant);
        // DF line 1.0820, CF line 0.7208 at lc = 0.5
        assert_eq!(classify(lp(0.5, 0.9), 1.0), RegionLabel::R5DfOnly);
        // CF line above DF line at lc = 0.05
        assert_eq!(classify(lp(0.05, 1.5), 1.0), RegionLabel::R2CfOnly);
        assert_eq!(classify(lp(1.0, 0.01), 1.0), RegionLabel::R3CfHigherRelayRate);
        assert_eq!(classify(lp(1.0, 0.12), 1.0), RegionLabel::R4DfDominant);
    }

    #[test]
    fn threshold_and_lambda_w() {
        let lp = LagrangePoint::new(0.0, 1.0 / LN_2).unwrap();
        assert!((h_threshold(lp).unwrap() - 1.0).abs() < EPS);
        let lp = LagrangePoint::new(0.4, 0.3).unwrap();
        let want = (2.0 * 0.3 * LN_2 / (2.0 - 1.2)).sqrt();
        assert!((h_threshold(lp).unwrap() - want).abs() < EPS);
        assert!(h_threshold(LagrangePoint::new(0.7, 0.3).unwrap()).is_err());
        assert!(h_threshold(LagrangePoint::new(0.4, 0.0).unwrap()).is_err());

        assert_eq!(lambda_w(LagrangePoint::new(0.0, 0.7).unwrap()).unwrap(), 0.7);
        assert_eq!(lambda_w(LagrangePoint::new(1.0, 1.0).unwrap()).unwrap(), 2.0);
        assert!(lambda_w(LagrangePoint::new(2.0 - 1e-12, 1.0).unwrap()).unwrap() > 1e11);
        assert!(lambda_w(LagrangePoint::new(2.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn swap_examples() {
        let r = swap_residual(1.0, 2.0, 1.1, 1.0).unwrap();
        assert!((r - 0.137_107_438_016_528_9).abs() < 1e-12, "{r}");
        let k = 1.1f64.powi(2);
        assert!(swap_residual(1.0, k, 1.1, 1.0).unwrap().abs() < 1e-12);
        assert!(matches!(swap_residual(1.0, 2.0, 1.0, 1.0), Err(Error::Degenerate(_))));
    }
}
