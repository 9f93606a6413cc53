use heis_coupling::coupling::{change_basis, Basis, CouplingMatrix, Frame};
use heis_coupling::group::{dilate, quasi_distance, HeisPoint};
use heis_coupling::rng::{path_rng, PathRng};
use nalgebra::DMatrix;
use rand::Rng;

use super::{RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const ALGEBRA: Schema = &[("cases", "10000"), ("dims", "1,2,3"), ("rel_tol", "1e-12")];
pub const MATRIX: Schema = &[("cases", "10000"), ("dims", "1,2,3"), ("tol", "1e-10")];

/// `|a − b| / max(1, |a|, |b|)`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn point_rel(a: &HeisPoint, b: &HeisPoint) -> f64 {
    a.horizontal()
        .iter()
        .zip(b.horizontal())
        .map(|(x, y)| rel(*x, *y))
        .fold(rel(a.vertical(), b.vertical()), f64::max)
}

/// Coordinates spread over several orders of magnitude.
fn random_point(rng: &mut PathRng, n: usize) -> HeisPoint {
    let mut coord = || {
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        scale * rng.gen_range(-1.0..1.0)
    };
    let h = (0..2 * n).map(|_| coord()).collect();
    HeisPoint::new(h, coord()).expect("finite")
}

fn dims(p: &Params) -> Result<Vec<usize>, RunError> {
    let d = p.f64_list("dims")?;
    if d.iter().any(|&x| x < 1.0 || x.fract() != 0.0 || x > 64.0) {
        return Err(p.invalid("dims", "dimensions must be integers in 1..=64").into());
    }
    Ok(d.into_iter().map(|x| x as usize).collect())
}

pub fn algebra_suite(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let cases = p.count("cases")?;
    let tol = p.positive("rel_tol")?;
    let mut out = Outcome::new(p.section());
    for n in dims(p)? {
        let mut worst = [0.0f64; 6];
        let mut pow2_exact = true;
        let mut rng = path_rng(seed, n as u64);
        for _ in 0..cases {
            let (a, b, c) = (random_point(&mut rng, n), random_point(&mut rng, n), random_point(&mut rng, n));
            let ab_c = a.mul(&b)?.mul(&c)?;
            let a_bc = a.mul(&b.mul(&c)?)?;
            worst[0] = worst[0].max(point_rel(&ab_c, &a_bc));

            let e = HeisPoint::identity(n);
            worst[1] = worst[1].max(point_rel(&a.mul(&a.inverse())?, &e)).max(point_rel(&a.inverse().mul(&a)?, &e));

            let d = quasi_distance(&a, &b)?;
            worst[2] = worst[2].max(rel(quasi_distance(&c.mul(&a)?, &c.mul(&b)?)?, d));

            let lambda = 10f64.powf(rng.gen_range(-2.0..2.0));
            let (la, lb) = (dilate(lambda, &a)?, dilate(lambda, &b)?);
            worst[3] = worst[3].max(rel(quasi_distance(&la, &lb)?, lambda * d));
            worst[4] = worst[4].max(point_rel(&dilate(lambda, &a.mul(&b)?)?, &la.mul(&lb)?));
            // Powers of two scale every floating-point operation exactly.
            let two = 2f64.powi(rng.gen_range(-8..=8));
            pow2_exact &= quasi_distance(&dilate(two, &a)?, &dilate(two, &b)?)? == two * d;

            let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            worst[5] = worst[5].max(rel(quasi_distance(&a.rotate(theta), &b.rotate(theta))?, d));
        }
        let names = [
            "associativity",
            "inverse",
            "left_invariance",
            "dilation_homogeneity",
            "dilation_automorphism",
            "rotation_isometry",
        ];
        for (name, w) in names.iter().zip(worst) {
            out.check(format!("{name}_max_rel_error[n={n}]"), w, None, w <= tol);
        }
        out.check(format!("dilation_power_of_two_exact[n={n}]"), pow2_exact as u8 as f64, None, pow2_exact);
    }
    Ok(out)
}

/// A random matrix rescaled so that its largest singular value is `target`.
fn scaled_matrix(rng: &mut PathRng, d: usize, target: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let s = m.clone().singular_values().max();
    m * (target / s)
}

/// `JᵀJ ≤ (1 + slack)² I`, tested by a Cholesky factorization.
fn contraction_by_cholesky(m: &DMatrix<f64>, slack: f64) -> bool {
    let d = m.nrows();
    let gap = DMatrix::<f64>::identity(d, d) * (1.0 + slack).powi(2) - m.transpose() * m;
    gap.cholesky().is_some()
}

pub fn matrix_lemmas(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let cases = p.count("cases")?;
    let tol = p.positive("tol")?;
    let mut out = Outcome::new(p.section());
    for n in dims(p)? {
        let d = 2 * n;
        let mut rng = path_rng(seed, n as u64);
        let (mut trace, mut anti, mut jhat, mut ortho) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut disagreements = 0usize;
        for _ in 0..cases {
            let scale = rng.gen_range(0.0..=1.0);
            let j = CouplingMatrix::new(scaled_matrix(&mut rng, d, scale), Basis::Canonical)?;
            let b: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let bp: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let frame = Frame::new(&b, &bp)?;
            let q = frame.q();
            ortho = ortho.max((q.transpose() * q - DMatrix::<f64>::identity(d, d)).amax());
            let k = change_basis(&j, &frame)?;
            trace = trace.max((k.trace() - j.trace()).abs());
            if n == 1 {
                anti = anti.max(((k.at(1, 2) - k.at(2, 1)) - (j.at(1, 2) - j.at(2, 1))).abs());
            }
            let jh = j.complete_jhat()?;
            let want = DMatrix::<f64>::identity(d, d) - j.entries() * j.entries().transpose();
            jhat = jhat.max((&jh * jh.transpose() - want).amax());

            // Validation near and away from the unit ball; skip the
            // ambiguous band around the slack.
            let s: f64 = rng.gen_range(0.5..1.5);
            if (s - 1.0).abs() < 1e-8 {
                continue;
            }
            let m = scaled_matrix(&mut rng, d, s);
            let verdict = CouplingMatrix::new(m.clone(), Basis::Canonical)?.validate().valid;
            if verdict != contraction_by_cholesky(&m, 1e-10) {
                disagreements += 1;
            }
        }
        out.check(format!("trace_invariance_max_error[n={n}]"), trace, None, trace <= tol);
        if n == 1 {
            out.check("antisymmetric_part_invariance_max_error[n=1]", anti, None, anti <= tol);
        }
        out.check(format!("frame_orthogonality_max_error[n={n}]"), ortho, None, ortho <= tol);
        out.check(format!("jhat_completion_max_error[n={n}]"), jhat, None, jhat <= tol);
        out.check(format!("validate_disagreements[n={n}]"), disagreements as f64, None, disagreements == 0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::find;

    fn small(name: &str) -> Params {
        let mut p = find(name).unwrap().defaults();
        p.set("cases", "300").unwrap();
        p
    }

    #[test]
    fn small_runs_pass() {
        let o = algebra_suite(&small("algebra-suite"), 1).unwrap();
        assert!(o.passed(), "{:?}", o.failures().collect::<Vec<_>>());
        let o = matrix_lemmas(&small("matrix-lemmas"), 2).unwrap();
        assert!(o.passed(), "{:?}", o.failures().collect::<Vec<_>>());
    }
}
