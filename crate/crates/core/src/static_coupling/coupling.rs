use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::bridge::{bridge_pool, sample_standard_bridge, BridgeFunctionals};
use super::StaticError;
use crate::group::{quasi_distance, HeisPoint, Unitary};
use crate::rng::{derive_seed, path_rng, PathRng};

/// A coupled pair of time-`t` positions.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticJointSample {
    pub left: HeisPoint,
    pub right: HeisPoint,
    /// `d_H(left, right)`.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticCouplingConfig {
    pub t: f64,
    pub n_samples: usize,
    /// Conditional atoms per sample feeding the density estimate.
    pub m_bridge: usize,
    /// Discretization of every bridge.
    pub m_steps: usize,
    /// Shared standard bridges from which atoms and proposals are drawn.
    pub pool_size: usize,
    pub seed: u64,
    /// Proposals tried before falling back to the translation coupling.
    pub max_tries: usize,
}

impl StaticCouplingConfig {
    pub fn new(t: f64, n_samples: usize, seed: u64) -> Self {
        Self { t, n_samples, m_bridge: 256, m_steps: 1024, pool_size: 8192, seed, max_tries: 1_000_000 }
    }

    fn validate(&self) -> Result<(), StaticError> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(StaticError::Config(format!("time must be positive, got {}", self.t)));
        }
        if self.m_steps < 2 {
            return Err(StaticError::Config("m_steps must be at least 2".into()));
        }
        if self.m_bridge < 2 || self.pool_size < self.m_bridge {
            return Err(StaticError::Config("need 2 <= m_bridge <= pool_size".into()));
        }
        Ok(())
    }
}

/// The symmetry reduction `a′ = a · U⁻¹(x′ e₁, z″)`.
#[derive(Debug, Clone)]
pub struct CanonicalPosition {
    pub x_shift: f64,
    pub z_shift: f64,
    pub unitary: Unitary,
}

pub fn canonical_position(a: &HeisPoint, a_prime: &HeisPoint) -> Result<CanonicalPosition, StaticError> {
    let rel = a.inverse().mul(a_prime)?;
    let unitary = Unitary::aligning(rel.horizontal());
    let aligned = unitary.apply(&rel);
    Ok(CanonicalPosition { x_shift: aligned.horizontal()[0], z_shift: aligned.vertical(), unitary })
}

/// Gaussian kernel density estimate with Silverman's bandwidth.
struct Kde {
    atoms: Vec<f64>,
    inv_h: f64,
    norm: f64,
}

impl Kde {
    fn new(mut atoms: Vec<f64>) -> Self {
        atoms.sort_by(f64::total_cmp);
        let n = atoms.len() as f64;
        let mean = atoms.iter().sum::<f64>() / n;
        let sd = (atoms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let q = |p: f64| atoms[((p * (n - 1.0)).round() as usize).min(atoms.len() - 1)];
        let iqr = q(0.75) - q(0.25);
        let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
        let h = (0.9 * spread * n.powf(-0.2)).max(1e-300);
        Self { atoms, inv_h: 1.0 / h, norm: 1.0 / (n * h * (2.0 * std::f64::consts::PI).sqrt()) }
    }

    fn density(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let u = (x - a) * self.inv_h;
                (-0.5 * u * u).exp()
            })
            .sum::<f64>()
            * self.norm
    }
}

/// Couples `Z ~ η` with `W ~ η(· − s)`: keep `W = Z` with probability
/// `min(1, η(Z − s)/η(Z))`, otherwise draw `W` from the normalized excess
/// `(η(· − s) − η)⁺` by rejection from proposals `atom + s`. `η` is replaced
/// by a kernel density estimate in the acceptance ratios.
fn couple_translate<F: Fn(&mut PathRng) -> f64>(
    z: f64,
    s: f64,
    kde: &Kde,
    propose: F,
    max_tries: usize,
    rng: &mut PathRng,
) -> f64 {
    if s == 0.0 {
        return z;
    }
    let fz = kde.density(z);
    let stay = if fz > 0.0 { (kde.density(z - s) / fz).min(1.0) } else { 1.0 };
    if rng.gen::<f64>() < stay {
        return z;
    }
    for _ in 0..max_tries {
        let w = propose(rng) + s;
        let g = kde.density(w - s);
        let accept = if g > 0.0 { (1.0 - kde.density(w) / g).max(0.0) } else { 0.0 };
        if rng.gen::<f64>() < accept {
            return w;
        }
    }
    z + s
}

enum VerticalPlan<'a> {
    Translation,
    DensityRatio { pool: &'a [BridgeFunctionals], m_bridge: usize, max_tries: usize },
}

fn couple_with(
    a: &HeisPoint,
    a_prime: &HeisPoint,
    t: f64,
    n_samples: usize,
    m_steps: usize,
    seed: u64,
    plan: VerticalPlan<'_>,
) -> Result<Vec<StaticJointSample>, StaticError> {
    let canon = canonical_position(a, a_prime)?;
    let d = a.horizontal().len();
    let pin: Vec<f64> = a_prime.horizontal().iter().zip(a.horizontal()).map(|(p, q)| p - q).collect();
    let x = canon.x_shift;
    let sample = |i: usize| -> StaticJointSample {
        let mut rng = path_rng(seed, i as u64);
        let st = t.sqrt();
        let g: Vec<f64> = (0..d).map(|_| st * rng.sample::<f64, _>(StandardNormal)).collect();
        let z = sample_standard_bridge(d / 2, m_steps, &mut rng).vertical(&g, t);
        let s = x * g[1];
        let w = match &plan {
            VerticalPlan::Translation => z + s,
            VerticalPlan::DensityRatio { pool, m_bridge, max_tries } => {
                if s == 0.0 {
                    z
                } else {
                    let atoms = (0..*m_bridge)
                        .map(|_| pool[rng.gen_range(0..pool.len())].vertical(&g, t))
                        .collect();
                    let kde = Kde::new(atoms);
                    let propose = |r: &mut PathRng| pool[r.gen_range(0..pool.len())].vertical(&g, t);
                    couple_translate(z, s, &kde, propose, *max_tries, &mut rng)
                }
            }
        };
        let left_c = HeisPoint::new(g.clone(), z).expect("finite");
        let mut right_h = g;
        right_h[0] += x;
        let right_c = HeisPoint::new(right_h, w - 0.5 * s + canon.z_shift).expect("finite");
        let left = a.mul(&canon.unitary.apply_inverse(&left_c)).expect("same dimension");
        let right = a.mul(&canon.unitary.apply_inverse(&right_c)).expect("same dimension");
        let pinned: Vec<f64> = left.horizontal().iter().zip(&pin).map(|(l, p)| l + p).collect();
        let right = HeisPoint::new(pinned, right.vertical()).expect("finite");
        let cost = quasi_distance(&left, &right).expect("same dimension");
        StaticJointSample { left, right, cost }
    };
    Ok((0..n_samples).into_par_iter().map(sample).collect())
}

/// Couples `μᵃ_t` and `μᵃ′_t`: horizontal parts by translation, vertical
/// parts through the conditional law of the Lévy area given the horizontal
/// endpoint and its translate by `x′ Y₁`.
pub fn static_couple(
    a: &HeisPoint,
    a_prime: &HeisPoint,
    cfg: &StaticCouplingConfig,
) -> Result<Vec<StaticJointSample>, StaticError> {
    cfg.validate()?;
    if a.n() != a_prime.n() {
        return Err(crate::group::GroupError::DimensionMismatch(a.n(), a_prime.n()).into());
    }
    let pool = bridge_pool(a.n(), cfg.pool_size, cfg.m_steps, derive_seed(cfg.seed, 0x706f6f6c));
    couple_with(
        a,
        a_prime,
        cfg.t,
        cfg.n_samples,
        cfg.m_steps,
        cfg.seed,
        VerticalPlan::DensityRatio { pool: &pool, m_bridge: cfg.m_bridge, max_tries: cfg.max_tries },
    )
}

/// Pure translation coupling: the right vertical is the left vertical moved
/// by the full shift `x′ Y₁`, giving cost `√(x′² + |x′ Y₁|)`.
pub fn baseline_translation_couple(
    a: &HeisPoint,
    a_prime: &HeisPoint,
    t: f64,
    n_samples: usize,
    m_steps: usize,
    seed: u64,
) -> Result<Vec<StaticJointSample>, StaticError> {
    if !(t > 0.0) {
        return Err(StaticError::Config(format!("time must be positive, got {t}")));
    }
    if a.n() != a_prime.n() {
        return Err(crate::group::GroupError::DimensionMismatch(a.n(), a_prime.n()).into());
    }
    couple_with(a, a_prime, t, n_samples, m_steps.max(2), seed, VerticalPlan::Translation)
}
