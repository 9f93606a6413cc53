use rand::Rng;
use rand_distr::StandardNormal;

use crate::group::{symplectic, HeisPoint};

/// Endpoint at time `t` of a Heisenberg Brownian motion started at `start`,
/// by an `m_steps` Euler discretization of the Lévy area.
pub fn sample_heisenberg_bm<R: Rng + ?Sized>(
    start: &HeisPoint,
    t: f64,
    m_steps: usize,
    rng: &mut R,
) -> HeisPoint {
    let d = start.horizontal().len();
    let h = (t / m_steps as f64).sqrt();
    let mut b = start.horizontal().to_vec();
    let mut a = start.vertical();
    let mut db = vec![0.0; d];
    for _ in 0..m_steps {
        for x in db.iter_mut() {
            *x = h * rng.sample::<f64, _>(StandardNormal);
        }
        a += 0.5 * symplectic(&b, &db);
        b.iter_mut().zip(&db).for_each(|(x, dx)| *x += dx);
    }
    HeisPoint::new(b, a).expect("finite path")
}

/// The whole discretized path, `m_steps + 1` points including the start.
pub fn sample_heisenberg_bm_path<R: Rng + ?Sized>(
    start: &HeisPoint,
    t: f64,
    m_steps: usize,
    rng: &mut R,
) -> Vec<HeisPoint> {
    let d = start.horizontal().len();
    let h = (t / m_steps as f64).sqrt();
    let mut out = Vec::with_capacity(m_steps + 1);
    out.push(start.clone());
    let mut db = vec![0.0; d];
    for _ in 0..m_steps {
        for x in db.iter_mut() {
            *x = h * rng.sample::<f64, _>(StandardNormal);
        }
        let incr = HeisPoint::new(db.clone(), 0.0).expect("finite");
        let last = out.last().expect("nonempty");
        // left-point Itô sum: vertical increment ½ω(B, ΔB) from the group law
        out.push(last.mul(&incr).expect("same dimension"));
    }
    out
}
