//! Upper bound on the frequency-selective rate.

use super::ChannelSpec;
use crate::numeric::bisect;

/// Water filling of `power` over bands with effective gains `g` (SNR per
/// unit power density) and width `df`, under `sum 2 s df <= power`.
/// Returns the achieved `sum 2 df * 1/2 log2(1 + g s)`.
fn water_filling(g: &[f64], df: f64, power: f64) -> f64 {
    if power <= 0.0 || g.iter().all(|&x| x <= 0.0) {
        return 0.0;
    }
    let used = |level: f64| g.iter().filter(|&&x| x > 0.0).map(|&x| 2.0 * df * (level - 1.0 / x).max(0.0)).sum::<f64>();
    let mut hi = 1.0;
    while used(hi) < power {
        hi *= 2.0;
    }
    let level = bisect(|l| used(l) - power, 0.0, hi);
    g.iter().filter(|&&x| x > 0.0).map(|&x| df * (1.0 + x * (level - 1.0 / x).max(0.0)).log2()).sum()
}

/// Cut-set bound in bits/s: the smallest of the broadcast cut (both relays
/// listening), the mixed cut (one relay plus the other's fronthaul) and the
/// fronthaul cut, each optimised separately.
pub fn cutset_bound(spec: &ChannelSpec) -> f64 {
    let df = spec.band_width();
    let g2: Vec<f64> = spec.gains().iter().map(|h| h * h).collect();
    let both: Vec<f64> = g2.iter().map(|g| 2.0 * g).collect();
    let broadcast = water_filling(&both, df, spec.power());
    let mixed = water_filling(&g2, df, spec.power()) + spec.fronthaul();
    broadcast.min(mixed).min(2.0 * spec.fronthaul())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::cutset;

    #[test]
    fn half_band_flat_matches_single_use_cutset() {
        for (p, c) in [(3.0, 1.0), (0.5, 2.0), (30.0, 0.4)] {
            let spec = ChannelSpec::flat(0.5, 1.0, 5, p, c).unwrap();
            let want = cutset(p, c).unwrap();
            assert!((cutset_bound(&spec) - want).abs() < 1e-9, "({p},{c})");
        }
    }

    #[test]
    fn water_filling_skips_dead_bands() {
        let spec = ChannelSpec::new(1.0, vec![0.0, 1.0], 2.0, 100.0).unwrap();
        // everything goes to the live band: s = 2 / (2 * 0.5) = 2
        let want = 0.5 * (1.0 + 2.0 * 2.0f64).log2();
        assert!((cutset_bound(&spec) - want).abs() < 1e-9);
    }
}
