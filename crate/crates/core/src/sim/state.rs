use crate::group::{symplectic, GroupError, HeisPoint};

/// Full state of two coupled Heisenberg Brownian motions.
///
/// `(B, A)` and `(B′, A′)` are the two paths in ℍₙ coordinates. The relative
/// vertical coordinate is `Z = vertical(B′⁻¹ B) = A − A′ + ½ ω(B, B′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingState {
    pub t: f64,
    pub b: Vec<f64>,
    pub b_prime: Vec<f64>,
    pub a: f64,
    pub a_prime: f64,
}

impl CouplingState {
    pub fn from_points(left: &HeisPoint, right: &HeisPoint) -> Result<Self, GroupError> {
        if left.n() != right.n() {
            return Err(GroupError::DimensionMismatch(left.n(), right.n()));
        }
        Ok(Self {
            t: 0.0,
            b: left.horizontal().to_vec(),
            b_prime: right.horizontal().to_vec(),
            a: left.vertical(),
            a_prime: right.vertical(),
        })
    }

    pub fn n(&self) -> usize {
        self.b.len() / 2
    }

    pub fn r2(&self) -> f64 {
        self.b.iter().zip(&self.b_prime).map(|(x, y)| (x - y) * (x - y)).sum()
    }

    pub fn z(&self) -> f64 {
        self.a - self.a_prime + 0.5 * symplectic(&self.b, &self.b_prime)
    }

    /// `d_H` between the two current points, `√(R² + |Z|)`.
    pub fn distance(&self) -> f64 {
        (self.r2() + self.z().abs()).sqrt()
    }

    pub fn left(&self) -> HeisPoint {
        HeisPoint::new(self.b.clone(), self.a).expect("finite state")
    }

    pub fn right(&self) -> HeisPoint {
        HeisPoint::new(self.b_prime.clone(), self.a_prime).expect("finite state")
    }
}

/// State of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub r2: f64,
    pub z: f64,
}

impl ReducedState {
    pub fn distance(&self) -> f64 {
        (self.r2.max(0.0) + self.z.abs()).sqrt()
    }
}
