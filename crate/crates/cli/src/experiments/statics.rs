use heis_coupling::estimators::quadrature::adaptive_simpson;
use heis_coupling::estimators::{fit_power_law, jackknife_mean_stderr, ks_two_sample, mean, MomentEstimate};
use heis_coupling::rng::{derive_seed, path_rng};
use heis_coupling::sim::sample_heisenberg_bm;
use heis_coupling::static_coupling::{
    baseline_translation_couple, static_couple, transport_cost_sqrt_1d, StaticCouplingConfig, StaticJointSample,
};
use heis_coupling::{quasi_distance, HeisPoint};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{window, RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const RATIO: Schema = &[
    ("t", "1"),
    ("a", "0,0,0"),
    ("shifts", "1e-3,1e-2,1e-1,1,10"),
    ("n_samples", "10000"),
    ("m_bridge", "256"),
    ("m_steps", "1024"),
    ("pool_size", "8192"),
    ("direct_steps", "1024"),
    ("p_min", "0.001"),
    ("max_factor", "3"),
];

pub const BASELINE: Schema = &[
    ("t", "1"),
    ("shifts", "1e-3,2e-3,5e-3,1e-2,2e-2,5e-2,1e-1"),
    ("n_samples", "10000"),
    ("m_steps", "1024"),
    ("window", "1e-3,1e-1"),
    ("exponent_range", "0.4,0.6"),
];

pub const TRANSPORT: Schema = &[("shifts", "0.01,0.1,1"), ("n", "512"), ("repetitions", "50"), ("sigmas", "3")];

/// `a · (x′, 0, …, 0; 0)`.
fn shifted(a: &HeisPoint, x: f64) -> Result<HeisPoint, RunError> {
    let mut h = vec![0.0; a.horizontal().len()];
    h[0] = x;
    Ok(a.mul(&HeisPoint::new(h, 0.0)?)?)
}

fn coordinates(points: &[HeisPoint]) -> Vec<(String, Vec<f64>)> {
    let d = points[0].horizontal().len();
    let mut out: Vec<(String, Vec<f64>)> =
        (0..d).map(|k| (format!("h{}", k + 1), points.iter().map(|p| p.horizontal()[k]).collect())).collect();
    out.push(("z".into(), points.iter().map(|p| p.vertical()).collect()));
    out
}

fn direct(start: &HeisPoint, t: f64, n: usize, m_steps: usize, seed: u64) -> Vec<HeisPoint> {
    (0..n)
        .into_par_iter()
        .map(|i| sample_heisenberg_bm(start, t, m_steps, &mut path_rng(seed, i as u64)))
        .collect()
}

pub fn static_ratio(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let a = p.point("a")?;
    let t = p.positive("t")?;
    let n = p.count("n_samples")?;
    let cfg = StaticCouplingConfig {
        m_bridge: p.count("m_bridge")?,
        m_steps: p.count("m_steps")?,
        pool_size: p.count("pool_size")?,
        ..StaticCouplingConfig::new(t, n, seed)
    };
    let direct_steps = p.count("direct_steps")?;
    let p_min = p.positive("p_min")?;
    let mut out = Outcome::new(p.section());
    let mut ratios = Vec::new();
    for (k, &x) in p.positive_list("shifts")?.iter().enumerate() {
        let ap = shifted(&a, x)?;
        let joint = static_couple(&a, &ap, &cfg)?;
        let pin: Vec<f64> = ap.horizontal().iter().zip(a.horizontal()).map(|(u, v)| u - v).collect();
        let pinned = joint.iter().all(|s| {
            s.left.horizontal().iter().zip(&pin).map(|(l, q)| l + q).eq(s.right.horizontal().iter().copied())
        });
        out.check(format!("horizontal_pinning_exact[x={x}]"), pinned as u8 as f64, None, pinned);

        let left: Vec<HeisPoint> = joint.iter().map(|s| s.left.clone()).collect();
        let right: Vec<HeisPoint> = joint.iter().map(|s| s.right.clone()).collect();
        for (side, got, start, salt) in [("left", &left, &a, 2 * k as u64), ("right", &right, &ap, 2 * k as u64 + 1)] {
            let want = direct(start, t, n, direct_steps, derive_seed(seed, 0xd1 + salt));
            for ((coord, g), (_, w)) in coordinates(got).into_iter().zip(coordinates(&want)) {
                let ks = ks_two_sample(&g, &w);
                out.check(format!("marginal_ks_p[{side}:{coord}:x={x}]"), ks.p_value, None, ks.p_value > p_min);
            }
        }

        let d0 = quasi_distance(&a, &ap)?;
        let costs: Vec<f64> = joint.iter().map(|s| s.cost / d0).collect();
        let (r, se) = (mean(&costs), jackknife_mean_stderr(&costs));
        out.info(format!("cost_ratio[x={x}]"), r, Some(se));
        ratios.push(r);
        out.joint.push((format!("x{x}"), joint));
    }
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min);
    let max_factor = p.positive("max_factor")?;
    out.check("cost_ratio_spread", spread, None, spread < max_factor);
    Ok(out)
}

pub fn static_baseline(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let t = p.positive("t")?;
    let n = p.count("n_samples")?;
    let m_steps = p.count("m_steps")?;
    let win = window(p, "window")?;
    let (lo, hi) = match p.f64_list("exponent_range")?.as_slice() {
        [lo, hi] if lo <= hi => (*lo, *hi),
        _ => return Err(p.invalid("exponent_range", "expected `lo, hi`").into()),
    };
    let a = HeisPoint::h1(0.0, 0.0, 0.0);
    let mut shifts = p.positive_list("shifts")?;
    shifts.sort_by(f64::total_cmp);
    let mut out = Outcome::new(p.section());
    let mut estimates = Vec::new();
    let mut ratios = Vec::new();
    for &x in &shifts {
        let joint: Vec<StaticJointSample> =
            baseline_translation_couple(&a, &HeisPoint::h1(x, 0.0, 0.0), t, n, m_steps, seed)?;
        let costs: Vec<f64> = joint.iter().map(|s| s.cost).collect();
        let (m, se) = (mean(&costs), jackknife_mean_stderr(&costs));
        out.info(format!("mean_cost[x={x}]"), m, Some(se));
        out.info(format!("cost_ratio[x={x}]"), m / x, Some(se / x));
        estimates.push(MomentEstimate { time: x, p: 1.0, estimate: m, stderr: se, n_paths: n });
        ratios.push(m / x);
        out.joint.push((format!("x{x}"), joint));
    }
    let fit = fit_power_law(&estimates, win)?;
    out.check("cost_exponent", fit.exponent, Some(fit.exponent_stderr), fit.exponent >= lo && fit.exponent <= hi);
    let blowup = ratios.windows(2).all(|w| w[0] > w[1]);
    out.check("cost_ratio_decreasing_in_shift", blowup as u8 as f64, None, blowup);
    Ok(out)
}

/// `∫ |f′(x)| √|x| dx` for the standard normal density, by quadrature.
pub fn gaussian_shift_constant() -> f64 {
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    2.0 * adaptive_simpson(|x| x * phi(x) * x.sqrt(), 0.0, 40.0, 1e-13)
}

pub fn transport_lemma(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let n = p.count("n")?;
    let reps = p.count("repetitions")?;
    let k = p.positive("sigmas")?;
    let c = gaussian_shift_constant();
    let mut out = Outcome::new(p.section());
    out.info("shift_constant", c, None);
    for (j, &s) in p.positive_list("shifts")?.iter().enumerate() {
        let costs: Vec<f64> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = path_rng(derive_seed(seed, j as u64), r as u64);
                let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                transport_cost_sqrt_1d(&x, s)
            })
            .collect::<Result<_, _>>()?;
        let (m, se) = (mean(&costs), jackknife_mean_stderr(&costs));
        out.info(format!("bound[s={s}]"), s * c, None);
        out.check(format!("mean_cost[s={s}]"), m, Some(se), m <= s * c + k * se);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::find;

    fn params(name: &str, overrides: &[(&str, &str)]) -> Params {
        let mut p = find(name).unwrap().defaults();
        for (k, v) in overrides {
            p.set(k, v).unwrap();
        }
        p
    }

    #[test]
    fn shift_constant_is_the_three_halves_moment() {
        // E|G|^{3/2} = 2^{3/4} Γ(5/4) / √π.
        assert!((gaussian_shift_constant() - 0.860_039_987_3).abs() < 1e-9, "{}", gaussian_shift_constant());
    }

    #[test]
    fn small_static_runs() {
        let o = static_ratio(
            &params("static-ratio", &[("n_samples", "300"), ("m_steps", "64"), ("pool_size", "512"), ("m_bridge", "64"), ("direct_steps", "64"), ("shifts", "0.1,1")]),
            1,
        )
        .unwrap();
        assert!(o.checks.iter().filter(|c| c.quantity.starts_with("horizontal_pinning")).all(|c| c.pass == Some(true)));
        assert_eq!(o.joint.len(), 2);
        let o = static_baseline(&params("static-baseline", &[("n_samples", "2000"), ("m_steps", "32")]), 2).unwrap();
        assert!(o.passed(), "{:?}", o.failures().collect::<Vec<_>>());
    }

    #[test]
    fn transport_at_a_large_shift() {
        let o = transport_lemma(&params("transport-lemma", &[("shifts", "1"), ("n", "64"), ("repetitions", "10")]), 3).unwrap();
        assert!(o.passed(), "{:?}", o.failures().collect::<Vec<_>>());
    }
}
