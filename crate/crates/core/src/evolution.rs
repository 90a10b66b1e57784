//! State propagation: exact exponentials for constant Hamiltonians, a
//! fourth-order Magnus integrator for Gaussian-pulsed hops, and
//! non-unitary propagation for leaky cavities.

use std::sync::Arc;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::{GaussianPulse, OperatorMatrix};
use crate::hilbert::{BasisState, HilbertSpace};
use crate::linalg::{expm, HermitianEigen};
use crate::scalar::{cplx, cre, hermiticity_defect, lit, norm_sqr, to_f64, CMatrix, CVector, Real};

/// Amplitudes over one sector basis.
#[derive(Debug, Clone)]
pub struct StateVector<T: Real> {
    pub space: Arc<HilbertSpace<T>>,
    pub amplitudes: CVector<T>,
}

impl<T: Real> StateVector<T> {
    pub fn new(space: Arc<HilbertSpace<T>>, amplitudes: CVector<T>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn zeros(space: Arc<HilbertSpace<T>>) -> Self {
        let d = space.dim();
        Self { space, amplitudes: CVector::zeros(d) }
    }

    pub fn basis(space: Arc<HilbertSpace<T>>, k: usize) -> Self {
        let mut s = Self::zeros(space);
        s.amplitudes[k] = cre(T::one());
        s
    }

    pub fn from_basis_state(space: Arc<HilbertSpace<T>>, b: &BasisState) -> Result<Self> {
        let k = crate::hilbert::state_index(&space, b)?;
        Ok(Self::basis(space, k))
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self { space: self.space.clone(), amplitudes: self.amplitudes.map(|z| z * factor) }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.amplitudes.len() });
        }
        Ok(())
    }
}

/// One-step scheme used by [`evolve_pulsed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum StepMethod {
    /// exp(−i dt H(t + dt/2)); second order.
    ExponentialMidpoint,
    /// Two-node Gauss-Legendre Magnus expansion with commutator term; fourth order.
    Magnus4,
}

impl StepMethod {
    pub fn order(self) -> u32 {
        match self {
            StepMethod::ExponentialMidpoint => 2,
            StepMethod::Magnus4 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EvolutionSettings<T> {
    pub dt: T,
    pub norm_tolerance: T,
    pub method: StepMethod,
}

impl<T: Real> EvolutionSettings<T> {
    pub fn new(dt: T) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidConfig("time step must be positive".into()));
        }
        Ok(Self { dt, norm_tolerance: lit(1e-8), method: StepMethod::Magnus4 })
    }

    /// dt = min(σ/50, τ₁/200): resolves both the pulse and the fastest Rabi cycle.
    pub fn for_pulses(sigma: T, tau1: T) -> Result<Self> {
        let a = sigma / lit(50.0);
        let b = tau1 / lit(200.0);
        Self::new(if a < b { a } else { b })
    }

    pub fn with_method(mut self, method: StepMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_norm_tolerance(mut self, tol: T) -> Self {
        self.norm_tolerance = tol;
        self
    }
}

fn hermitian_tolerance<T: Real>(m: &CMatrix<T>) -> T {
    let scale = m.iter().fold(T::one(), |a, z| {
        let v = crate::scalar::cabs(*z);
        if v > a { v } else { a }
    });
    lit::<T>(1e3) * T::default_epsilon() * scale
}

/// Cached eigen-decomposition of a time-independent Hermitian Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    dim: usize,
    eigen: HermitianEigen<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &OperatorMatrix<T>) -> Result<Self> {
        Self::from_matrix(&h.matrix)
    }

    pub fn from_matrix(h: &CMatrix<T>) -> Result<Self> {
        let defect = hermiticity_defect(h);
        if defect > hermitian_tolerance(h) {
            return Err(Error::NotHermitian(to_f64(defect)));
        }
        Ok(Self { dim: h.nrows(), eigen: HermitianEigen::new(h) })
    }

    pub fn eigen(&self) -> &HermitianEigen<T> {
        &self.eigen
    }

    /// e^{−iHt}
    pub fn unitary(&self, t: T) -> CMatrix<T> {
        self.eigen.unitary(t)
    }

    pub fn apply(&self, psi: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        psi.check_dim(self.dim)?;
        let v = &self.eigen.vectors;
        let mut coeffs = v.ad_mul(&psi.amplitudes);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= crate::scalar::expi(-self.eigen.values[k] * t);
        }
        Ok(StateVector { space: psi.space.clone(), amplitudes: v * coeffs })
    }
}

/// ψ(t) = e^{−iHt} ψ via eigen-decomposition of H.
pub fn evolve_const<T: Real>(h: &OperatorMatrix<T>, psi: &StateVector<T>, t: T) -> Result<StateVector<T>> {
    psi.check_dim(h.dim())?;
    Propagator::new(h)?.apply(psi, t)
}

/// Integrates i dψ/dt = (H₀ + Σ_k ν_k(t) J_k) ψ from `t_start` to `t_end`,
/// where each ν_k is a Gaussian pulse cut off at ±6σ.
pub fn evolve_pulsed<T: Real>(
    h0: &OperatorMatrix<T>,
    jumps: &[(OperatorMatrix<T>, GaussianPulse<T>)],
    psi: &StateVector<T>,
    t_start: T,
    t_end: T,
    settings: &EvolutionSettings<T>,
) -> Result<StateVector<T>> {
    let dim = h0.dim();
    psi.check_dim(dim)?;
    for (j, _) in jumps {
        if j.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: j.dim() });
        }
    }
    if !(t_end > t_start) {
        return Err(Error::InvalidConfig("t_end must exceed t_start".into()));
    }
    let span = t_end - t_start;
    let steps = to_f64(span / settings.dt).ceil().max(1.0) as usize;
    let dt = span / lit(steps as f64);

    let free_step = Propagator::new(h0)?.unitary(dt);
    let hamiltonian_at = |t: T| -> Option<CMatrix<T>> {
        let mut h: Option<CMatrix<T>> = None;
        for (j, pulse) in jumps {
            let nu = pulse.truncated_value(t);
            if nu != T::zero() {
                let h = h.get_or_insert_with(|| h0.matrix.clone());
                *h += j.matrix.map(|z| z * nu);
            }
        }
        h
    };

    let offset: T = lit::<T>(3.0).sqrt() / lit(6.0);
    let half: T = lit(0.5);
    let commutator_weight = cplx(T::zero(), -(lit::<T>(3.0).sqrt() / lit(12.0)) * dt);
    let mut amps = psi.amplitudes.clone();
    for n in 0..steps {
        let t = t_start + dt * lit(n as f64);
        let generator = match settings.method {
            StepMethod::ExponentialMidpoint => hamiltonian_at(t + dt * half),
            StepMethod::Magnus4 => {
                let h1 = hamiltonian_at(t + dt * (half - offset));
                let h2 = hamiltonian_at(t + dt * (half + offset));
                match (h1, h2) {
                    (None, None) => None,
                    (h1, h2) => {
                        let h1 = h1.unwrap_or_else(|| h0.matrix.clone());
                        let h2 = h2.unwrap_or_else(|| h0.matrix.clone());
                        let comm = &h2 * &h1 - &h1 * &h2;
                        Some((&h1 + &h2).map(|z| z * half) + comm.map(|z| z * commutator_weight))
                    }
                }
            }
        };
        amps = match generator {
            None => &free_step * &amps,
            Some(k) => HermitianEigen::new(&k).unitary(dt) * &amps,
        };
    }
    let out = StateVector { space: psi.space.clone(), amplitudes: amps };
    let drift = (out.norm_sqr() - psi.norm_sqr()).abs();
    if drift > settings.norm_tolerance {
        return Err(Error::NormDrift { drift: to_f64(drift), tolerance: to_f64(settings.norm_tolerance) });
    }
    Ok(out)
}

/// Largest eigenvalue of the anti-Hermitian part (H − H†)/2i; must be ≤ 0
/// for a generator that only removes probability.
pub fn max_gain_rate<T: Real>(h_eff: &CMatrix<T>) -> T {
    let anti = (h_eff - h_eff.adjoint()).map(|z| z * cplx(T::zero(), -lit::<T>(0.5)));
    HermitianEigen::new(&anti)
        .values
        .into_iter()
        .fold(T::min_value().unwrap_or(-T::one()), |a, b| if b > a { b } else { a })
}

/// Propagator e^{−iH_eff dt} of a non-Hermitian effective Hamiltonian.
#[derive(Debug, Clone)]
pub struct DecayPropagator<T: Real> {
    step: CMatrix<T>,
    tolerance: T,
}

impl<T: Real> DecayPropagator<T> {
    pub fn new(h_eff: &OperatorMatrix<T>, dt: T, settings: &EvolutionSettings<T>) -> Result<Self> {
        let gain = max_gain_rate(&h_eff.matrix);
        if gain > settings.norm_tolerance {
            return Err(Error::NormIncrease(to_f64(gain)));
        }
        let generator = h_eff.matrix.map(|z| z * cplx(T::zero(), -dt));
        Ok(Self { step: expm(&generator), tolerance: settings.norm_tolerance })
    }

    pub fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        psi.check_dim(self.step.nrows())?;
        let out = StateVector { space: psi.space.clone(), amplitudes: &self.step * &psi.amplitudes };
        let increase = out.norm_sqr() - psi.norm_sqr();
        if increase > self.tolerance {
            return Err(Error::NormIncrease(to_f64(increase)));
        }
        Ok(out)
    }
}

/// Propagates under a decaying H_eff without renormalising; ‖ψ(t)‖² is the
/// survival probability.
pub fn evolve_decay<T: Real>(
    h_eff: &OperatorMatrix<T>,
    psi: &StateVector<T>,
    t: T,
    settings: &EvolutionSettings<T>,
) -> Result<StateVector<T>> {
    psi.check_dim(h_eff.dim())?;
    DecayPropagator::new(h_eff, t, settings)?.apply(psi)
}

/// Survival trajectory ψ(t_k) on a uniform grid `t_k = k·dt`, k = 0..=steps.
pub fn decay_trajectory<T: Real>(
    h_eff: &OperatorMatrix<T>,
    psi: &StateVector<T>,
    dt: T,
    steps: usize,
    settings: &EvolutionSettings<T>,
) -> Result<Vec<StateVector<T>>> {
    psi.check_dim(h_eff.dim())?;
    let prop = DecayPropagator::new(h_eff, dt, settings)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(psi.clone());
    for _ in 0..steps {
        let next = prop.apply(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Rabi periods (τ₁, τ₂) = (π/g, π/(g√2)) for one and two excitations.
pub fn rabi_periods<T: Real>(g: T) -> (T, T) {
    let tau1 = T::pi() / g;
    (tau1, tau1 / lit::<T>(2.0).sqrt())
}
