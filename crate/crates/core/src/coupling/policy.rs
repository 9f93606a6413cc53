use nalgebra::DMatrix;

use super::{Basis, CouplingError, CouplingMatrix};

/// Named coupling strategies.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    Synchronous,
    Reflection,
    Perverse,
    Kendall { kappa: f64, epsilon: f64 },
    Custom,
}

/// Which frame matrix a policy is currently emitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Synchronous,
    Reflection,
    Perverse,
    Custom,
}

/// Per-path policy memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyMemory {
    pub regime: Regime,
    /// Set once the paths have met; the policy is synchronous from then on.
    pub absorbed: bool,
}

/// The part of the coupled state a policy may look at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyInput {
    pub t: f64,
    pub r2: f64,
    pub z: f64,
}

/// Coefficients of the reduced system for `(R², Z)` under a frame matrix `K`:
///
/// ```text
/// dR² = 2R·σ_R dC + r2_drift dt
/// dZ  = (R/2)·σ_Z dC̃ + z_drift dt,     d⟨C, C̃⟩ = ρ dt
/// ```
///
/// with `σ_R = √(2(1−K¹¹))`, `σ_Z = √(2(1+K²²))`, `r2_drift = 2 tr(I−K)`,
/// `z_drift = ½(K²¹−K¹²)` and `ρ σ_R σ_Z = K²¹ − K¹²`. Here `Z` is the vertical
/// coordinate of `B′⁻¹B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoefficients {
    pub sigma_r: f64,
    pub sigma_z: f64,
    pub rho: f64,
    pub r2_drift: f64,
    pub z_drift: f64,
}

impl ReducedCoefficients {
    pub fn from_frame_matrix(k: &CouplingMatrix) -> Self {
        let (k11, k22) = (k.at(1, 1), k.at(2, 2));
        let asym = k.at(2, 1) - k.at(1, 2);
        let sigma_r = (2.0 * (1.0 - k11)).max(0.0).sqrt();
        let sigma_z = (2.0 * (1.0 + k22)).max(0.0).sqrt();
        let rho = if sigma_r == 0.0 || sigma_z == 0.0 {
            0.0
        } else {
            (asym / (sigma_r * sigma_z)).clamp(-1.0, 1.0)
        };
        let d = k.dim() as f64;
        Self { sigma_r, sigma_z, rho, r2_drift: 2.0 * (d - k.trace()), z_drift: 0.5 * asym }
    }
}

/// A frame matrix together with everything the simulators need from it.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoupling {
    pub k: CouplingMatrix,
    /// `K̂ = √(I − K Kᵀ)`; `Ĵ = Q K̂ Qᵀ` in canonical coordinates.
    pub k_hat: DMatrix<f64>,
    pub coeffs: ReducedCoefficients,
}

impl FrameCoupling {
    pub fn new(k: CouplingMatrix) -> Result<Self, CouplingError> {
        if k.basis() != Basis::Frame {
            return Err(CouplingError::WrongBasis(Basis::Frame));
        }
        let k_hat = k.complete_jhat()?;
        let coeffs = ReducedCoefficients::from_frame_matrix(&k);
        Ok(Self { k, k_hat, coeffs })
    }

    pub fn is_symmetric(&self) -> bool {
        let e = self.k.entries();
        (e - e.transpose()).iter().all(|v| v.abs() <= crate::tolerances::MATRIX_ABS)
    }
}

/// Maps the observed `(t, R², Z)` and the path memory to a frame matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyPolicy {
    kind: StrategyKind,
    n: usize,
    synchronous: FrameCoupling,
    reflection: FrameCoupling,
    perverse: FrameCoupling,
    custom: Option<FrameCoupling>,
}

fn diag_with(n: usize, index: usize, value: f64) -> CouplingMatrix {
    let mut d = vec![1.0; 2 * n];
    d[index] = value;
    CouplingMatrix::diagonal(&d, Basis::Frame).expect("diagonal frame matrix")
}

impl StrategyPolicy {
    fn build(kind: StrategyKind, n: usize, custom: Option<FrameCoupling>) -> Self {
        let ok = |m| FrameCoupling::new(m).expect("built-in coupling is valid");
        Self {
            kind,
            n,
            synchronous: ok(CouplingMatrix::identity(n, Basis::Frame)),
            reflection: ok(diag_with(n, 0, -1.0)),
            perverse: ok(diag_with(n, 1, -1.0)),
            custom,
        }
    }

    pub fn synchronous(n: usize) -> Self {
        Self::build(StrategyKind::Synchronous, n, None)
    }

    pub fn reflection(n: usize) -> Self {
        Self::build(StrategyKind::Reflection, n, None)
    }

    pub fn perverse(n: usize) -> Self {
        Self::build(StrategyKind::Perverse, n, None)
    }

    pub fn kendall(n: usize, kappa: f64, epsilon: f64) -> Result<Self, CouplingError> {
        if !(epsilon > 0.0 && epsilon < kappa && kappa.is_finite()) {
            return Err(CouplingError::BadKendall(kappa, epsilon));
        }
        Ok(Self::build(StrategyKind::Kendall { kappa, epsilon }, n, None))
    }

    /// A constant frame matrix `K`.
    pub fn custom(k: CouplingMatrix) -> Result<Self, CouplingError> {
        let n = k.n();
        let fc = FrameCoupling::new(k)?;
        Ok(Self::build(StrategyKind::Custom, n, Some(fc)))
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            StrategyKind::Synchronous => "synchronous",
            StrategyKind::Reflection => "reflection",
            StrategyKind::Perverse => "perverse",
            StrategyKind::Kendall { .. } => "kendall",
            StrategyKind::Custom => "custom",
        }
    }

    /// Every frame matrix this policy can emit.
    pub fn emitted(&self) -> Vec<&FrameCoupling> {
        match self.kind {
            StrategyKind::Synchronous => vec![&self.synchronous],
            StrategyKind::Perverse => vec![&self.perverse],
            StrategyKind::Reflection | StrategyKind::Kendall { .. } => {
                vec![&self.reflection, &self.synchronous]
            }
            StrategyKind::Custom => vec![self.custom.as_ref().expect("custom coupling")],
        }
    }

    pub fn coupling(&self, regime: Regime) -> &FrameCoupling {
        match regime {
            Regime::Synchronous => &self.synchronous,
            Regime::Reflection => &self.reflection,
            Regime::Perverse => &self.perverse,
            Regime::Custom => self.custom.as_ref().expect("custom coupling"),
        }
    }

    pub fn initial_memory(&self, input: PolicyInput) -> PolicyMemory {
        let regime = match self.kind {
            StrategyKind::Synchronous => Regime::Synchronous,
            StrategyKind::Reflection => Regime::Reflection,
            StrategyKind::Perverse => Regime::Perverse,
            StrategyKind::Custom => Regime::Custom,
            StrategyKind::Kendall { kappa, .. } => {
                if above_parabola(input, kappa) {
                    Regime::Synchronous
                } else {
                    Regime::Reflection
                }
            }
        };
        PolicyMemory { regime, absorbed: false }
    }

    /// Updates the memory from the current state and returns the matrix to
    /// use over the next step.
    ///
    /// Reflection runs until `R = 0`, then stays synchronous. Kendall
    /// switches from reflection to synchronous on `8Z² ≥ κ²R⁴` and back on
    /// `8Z² ≤ (κ−ε)²R⁴`; it is absorbed once both `R` and `Z` vanish.
    pub fn step(&self, input: PolicyInput, memory: &mut PolicyMemory) -> &FrameCoupling {
        match self.kind {
            StrategyKind::Synchronous | StrategyKind::Perverse | StrategyKind::Custom => {}
            StrategyKind::Reflection => {
                if memory.absorbed || input.r2 <= 0.0 {
                    memory.absorbed = true;
                    memory.regime = Regime::Synchronous;
                }
            }
            StrategyKind::Kendall { kappa, epsilon } => {
                if memory.absorbed || (input.r2 <= 0.0 && input.z == 0.0) {
                    memory.absorbed = true;
                    memory.regime = Regime::Synchronous;
                } else if input.r2 <= 0.0 {
                    memory.regime = Regime::Synchronous;
                } else {
                    match memory.regime {
                        Regime::Reflection if above_parabola(input, kappa) => {
                            memory.regime = Regime::Synchronous
                        }
                        Regime::Synchronous if below_parabola(input, kappa - epsilon) => {
                            memory.regime = Regime::Reflection
                        }
                        _ => {}
                    }
                }
            }
        }
        self.coupling(memory.regime)
    }

    /// Whether reaching `R = 0` under the current regime ends the pursuit
    /// phase (the simulators then glue the two paths).
    pub fn absorbs_on_contact(&self, memory: &PolicyMemory) -> bool {
        memory.regime == Regime::Reflection
            && matches!(self.kind, StrategyKind::Reflection | StrategyKind::Kendall { .. })
    }

    /// Kendall glues the vertical coordinate too when `R` hits zero: inside
    /// the reflection regime `|Z| ≤ κR²/√8`, so `Z` vanishes with `R`.
    pub fn glues_vertical(&self) -> bool {
        matches!(self.kind, StrategyKind::Kendall { .. })
    }

    /// Whether the reduced `(R², Z)` system is exact for this policy. For
    /// n > 1 the vertical drift depends on `J` rather than on `K`, unless every
    /// emitted `K` is symmetric.
    pub fn reduced_is_exact(&self) -> bool {
        self.n == 1 || self.emitted().iter().all(|c| c.is_symmetric())
    }
}

fn above_parabola(input: PolicyInput, kappa: f64) -> bool {
    8.0 * input.z * input.z >= kappa * kappa * input.r2 * input.r2
}

fn below_parabola(input: PolicyInput, level: f64) -> bool {
    8.0 * input.z * input.z <= level * level * input.r2 * input.r2
}
