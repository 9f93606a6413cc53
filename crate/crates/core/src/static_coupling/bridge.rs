//! Lévy area of a planar Brownian motion conditioned on its endpoint.
//!
//! Write the discrete motion on `[0, 1]` as `W_k = β_k + s_k c` with `β` a
//! random-walk bridge from 0 to 0, `s_k = k/m` and `c` the endpoint. Its
//! left-point Lévy area splits exactly as
//!
//! ```text
//! ½ Σ (W¹ₖ ΔW²ₖ − W²ₖ ΔW¹ₖ) = A° + c₂ Iₓ − c₁ I_y
//! ```
//!
//! where `A°` is the area of `β` and `Iₓ = ½ Σ (β¹ₖ s_{k+1} − s_k β¹_{k+1})`,
//! similarly `I_y`. Brownian scaling maps time `t` and endpoint `b` to
//! `Z = t A° + √t (b₂ Iₓ − b₁ I_y)`, summed over coordinate pairs.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::rng::path_rng;

/// Functionals of one planar standard bridge.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairFunctionals {
    pub area: f64,
    pub ix: f64,
    pub iy: f64,
}

/// Functionals of a 2n-dimensional standard bridge, one triple per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeFunctionals {
    pub pairs: Vec<PairFunctionals>,
}

impl BridgeFunctionals {
    /// Vertical coordinate at time `t` of the motion pinned at horizontal `b`.
    pub fn vertical(&self, b: &[f64], t: f64) -> f64 {
        let st = t.sqrt();
        self.pairs
            .iter()
            .zip(b.chunks_exact(2))
            .map(|(f, e)| t * f.area + st * (e[1] * f.ix - e[0] * f.iy))
            .sum()
    }
}

fn planar_bridge<R: Rng + ?Sized>(m: usize, rng: &mut R, buf: &mut Vec<[f64; 2]>) -> PairFunctionals {
    let h = (1.0 / m as f64).sqrt();
    buf.clear();
    buf.push([0.0, 0.0]);
    for k in 0..m {
        let last = buf[k];
        buf.push([
            last[0] + h * rng.sample::<f64, _>(StandardNormal),
            last[1] + h * rng.sample::<f64, _>(StandardNormal),
        ]);
    }
    let end = buf[m];
    let inv = 1.0 / m as f64;
    let (mut area, mut ix, mut iy) = (0.0, 0.0, 0.0);
    let beta = |k: usize| {
        let s = k as f64 * inv;
        [buf[k][0] - s * end[0], buf[k][1] - s * end[1]]
    };
    let mut cur = beta(0);
    for k in 0..m {
        let next = beta(k + 1);
        let (s0, s1) = (k as f64 * inv, (k + 1) as f64 * inv);
        area += cur[0] * (next[1] - cur[1]) - cur[1] * (next[0] - cur[0]);
        ix += cur[0] * s1 - s0 * next[0];
        iy += cur[1] * s1 - s0 * next[1];
        cur = next;
    }
    PairFunctionals { area: 0.5 * area, ix: 0.5 * ix, iy: 0.5 * iy }
}

/// One standard 2n-dimensional bridge on `m_steps` intervals.
pub fn sample_standard_bridge<R: Rng + ?Sized>(n: usize, m_steps: usize, rng: &mut R) -> BridgeFunctionals {
    let mut buf = Vec::with_capacity(m_steps + 1);
    BridgeFunctionals { pairs: (0..n).map(|_| planar_bridge(m_steps, rng, &mut buf)).collect() }
}

/// One draw of the vertical coordinate of a Heisenberg Brownian motion
/// started at the origin, conditioned on `B_t = b` (`b ∈ ℝ²ⁿ`).
pub fn sample_levy_area_given_endpoint<R: Rng + ?Sized>(
    b: &[f64],
    t: f64,
    m_steps: usize,
    rng: &mut R,
) -> f64 {
    assert!(m_steps >= 2, "m_steps must be at least 2");
    sample_standard_bridge(b.len() / 2, m_steps, rng).vertical(b, t)
}

/// A shared pool of standard bridges; each element turns into an exact
/// conditional draw for any endpoint and time.
pub fn bridge_pool(n: usize, size: usize, m_steps: usize, seed: u64) -> Vec<BridgeFunctionals> {
    (0..size)
        .into_par_iter()
        .map(|i| sample_standard_bridge(n, m_steps, &mut path_rng(seed, i as u64)))
        .collect()
}
