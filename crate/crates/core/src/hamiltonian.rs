//! Tavis-Cummings(-Hubbard) operators as dense matrices over one sector.

use std::collections::HashSet;
use std::sync::Arc;

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::scalar::{cre, expi, hermiticity_defect, lit, CMatrix, Real};

/// Number of widths on each side of a pulse centre beyond which the pulse is
/// switched off.
pub const PULSE_CUTOFF_SIGMAS: f64 = 6.0;

/// Dense operator acting on one excitation sector.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T: Real> {
    pub space: Arc<HilbertSpace<T>>,
    pub matrix: CMatrix<T>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn new(space: Arc<HilbertSpace<T>>, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: matrix.nrows() });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: Arc<HilbertSpace<T>>) -> Self {
        let d = space.dim();
        Self { space, matrix: CMatrix::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |H − H†|
    pub fn hermiticity_defect(&self) -> T {
        hermiticity_defect(&self.matrix)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.map(|z| z * factor) }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    /// [self, other]
    pub fn commutator(&self, other: &Self) -> CMatrix<T> {
        &self.matrix * &other.matrix - &other.matrix * &self.matrix
    }

    fn add_entry(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.matrix[(row, col)] += value;
    }
}

/// Photon hop between two cavities with amplitude ν e^{iφ} on a_i⁺ a_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopSpec<T> {
    pub cavity_i: usize,
    pub cavity_j: usize,
    pub amplitude: T,
    pub phase: T,
}

impl<T: Real> HopSpec<T> {
    pub fn new(cavity_i: usize, cavity_j: usize, amplitude: T) -> Self {
        Self { cavity_i, cavity_j, amplitude, phase: T::zero() }
    }

    /// Unit-amplitude, zero-phase hop; used as the shape of a pulsed exchange.
    pub fn unit(cavity_i: usize, cavity_j: usize) -> Self {
        Self::new(cavity_i, cavity_j, T::one())
    }

    pub fn with_phase(mut self, phase: T) -> Self {
        self.phase = phase;
        self
    }

    fn validate(&self, n_cavities: usize) -> Result<()> {
        if self.cavity_i == self.cavity_j {
            return Err(Error::InvalidConfig(format!("hop from cavity {} to itself", self.cavity_i)));
        }
        if self.cavity_i >= n_cavities || self.cavity_j >= n_cavities {
            return Err(Error::InvalidConfig(format!(
                "hop ({}, {}) outside {} cavities",
                self.cavity_i, self.cavity_j, n_cavities
            )));
        }
        if self.amplitude < T::zero() {
            return Err(Error::InvalidConfig("hop amplitude must be non-negative".into()));
        }
        Ok(())
    }

    fn key(&self) -> (usize, usize) {
        (self.cavity_i.min(self.cavity_j), self.cavity_i.max(self.cavity_j))
    }
}

/// Gaussian hop intensity ν(t) = α exp(−(t − t_c)² / 2σ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPulse<T> {
    pub hop: HopSpec<T>,
    pub center: T,
    pub width: T,
    pub peak: T,
}

impl<T: Real> GaussianPulse<T> {
    pub fn new(hop: HopSpec<T>, center: T, width: T, peak: T) -> Result<Self> {
        if !(width > T::zero()) {
            return Err(Error::InvalidConfig("pulse width must be positive".into()));
        }
        if peak < T::zero() {
            return Err(Error::InvalidConfig("pulse peak must be non-negative".into()));
        }
        Ok(Self { hop, center, width, peak })
    }

    /// Peak value giving the pulse area `area` (∫ν dt = ασ√(2π)).
    pub fn peak_for_area(area: T, width: T) -> T {
        area / (width * T::two_pi().sqrt())
    }

    /// ∫ν dt over the whole real line.
    pub fn area(&self) -> T {
        self.peak * self.width * T::two_pi().sqrt()
    }

    /// Half-width of the window outside which the pulse is treated as off.
    pub fn half_window(&self) -> T {
        self.width * lit(PULSE_CUTOFF_SIGMAS)
    }

    /// Pulse value with the ±6σ cutoff applied.
    pub fn truncated_value(&self, t: T) -> T {
        if (t - self.center).abs() > self.half_window() {
            T::zero()
        } else {
            pulse_value(self, t)
        }
    }
}

pub fn pulse_value<T: Real>(p: &GaussianPulse<T>, t: T) -> T {
    let u = (t - p.center) / p.width;
    p.peak * (-(u * u) / lit(2.0)).exp()
}

/// Atom-field coupling g = √(ħω/V)·d·sin(πx/L) of an atom at position `x`
/// inside a cavity of length `length`.
pub fn coupling_strength<T: Real>(hbar: T, omega: T, volume: T, dipole: T, x: T, length: T) -> Result<T> {
    if !(volume > T::zero()) {
        return Err(Error::Domain { what: "cavity volume must be positive", value: crate::scalar::to_f64(volume) });
    }
    if x < T::zero() || x > length {
        return Err(Error::Domain { what: "atom position outside [0, L]", value: crate::scalar::to_f64(x) });
    }
    Ok((hbar * omega / volume).sqrt() * dipole * (T::pi() * x / length).sin())
}

/// Tavis-Cummings Hamiltonian of one cavity embedded in the network space:
/// ω(a⁺a + Σσ⁺σ) + a⁺σ̄ + aσ̄⁺ with σ̄ = Σ g_j σ_j over the cavity's atoms.
pub fn build_tc<T: Real>(space: &Arc<HilbertSpace<T>>, cavity: usize) -> Result<OperatorMatrix<T>> {
    let config = space.config();
    if cavity >= config.n_cavities {
        return Err(Error::InvalidConfig(format!("no cavity {cavity}")));
    }
    let mut op = OperatorMatrix::zeros(space.clone());
    let omega = config.omega;
    for (k, n_exc) in space.cavity_excitations(cavity).into_iter().enumerate() {
        op.add_entry(k, k, cre(omega * lit(n_exc as f64)));
    }
    let max_photons = config.max_photons;
    for (k, state) in space.states().iter().enumerate() {
        let n = state.photons[cavity];
        if n >= max_photons {
            continue;
        }
        for atom in config.atoms_in(cavity) {
            if !state.atoms[atom] {
                continue;
            }
            // a⁺σ_j: |n⟩|…1_j…⟩ → √(n+1) |n+1⟩|…0_j…⟩
            let mut target = state.clone();
            target.photons[cavity] += 1;
            target.atoms[atom] = false;
            if let Some(row) = space.index_of(&target) {
                let element = cre(config.couplings[atom] * lit::<T>((n + 1) as f64).sqrt());
                op.add_entry(row, k, element);
                op.add_entry(k, row, element.conj());
            }
        }
    }
    Ok(op)
}

fn add_hop<T: Real>(op: &mut OperatorMatrix<T>, hop: &HopSpec<T>) {
    let space = op.space.clone();
    let max_photons = space.config().max_photons;
    let (i, j) = (hop.cavity_i, hop.cavity_j);
    let forward = expi(hop.phase) * hop.amplitude;
    for (k, state) in space.states().iter().enumerate() {
        let (ni, nj) = (state.photons[i], state.photons[j]);
        if nj == 0 || ni >= max_photons {
            continue;
        }
        // ν e^{iφ} a_i⁺ a_j and its Hermitian partner
        let mut target = state.clone();
        target.photons[i] += 1;
        target.photons[j] -= 1;
        if let Some(row) = space.index_of(&target) {
            let ladder: T = (lit::<T>(nj as f64) * lit::<T>((ni + 1) as f64)).sqrt();
            let element = forward * ladder;
            op.add_entry(row, k, element);
            op.add_entry(k, row, element.conj());
        }
    }
}

/// Network Hamiltonian: Σ_q H_TC^q plus the listed photon hops.
pub fn build_tch<T: Real>(space: &Arc<HilbertSpace<T>>, hops: &[HopSpec<T>]) -> Result<OperatorMatrix<T>> {
    let n_cavities = space.config().n_cavities;
    let mut seen = HashSet::new();
    for hop in hops {
        hop.validate(n_cavities)?;
        if !seen.insert(hop.key()) {
            let (a, b) = hop.key();
            return Err(Error::DuplicateHop(a, b));
        }
    }
    let mut op = OperatorMatrix::zeros(space.clone());
    for q in 0..n_cavities {
        op.matrix += build_tc(space, q)?.matrix;
    }
    for hop in hops {
        add_hop(&mut op, hop);
    }
    Ok(op)
}

/// H_jump = ν(e^{iφ} a_i⁺ a_j + e^{−iφ} a_j⁺ a_i). Use [`HopSpec::unit`] to get
/// the shape that a time-dependent ν(t) multiplies.
pub fn jump_operator<T: Real>(space: &Arc<HilbertSpace<T>>, hop: &HopSpec<T>) -> Result<OperatorMatrix<T>> {
    hop.validate(space.config().n_cavities)?;
    let mut op = OperatorMatrix::zeros(space.clone());
    add_hop(&mut op, hop);
    Ok(op)
}

/// Total excitation number N̂ (diagonal).
pub fn excitation_number<T: Real>(space: &Arc<HilbertSpace<T>>) -> OperatorMatrix<T> {
    let mut op = OperatorMatrix::zeros(space.clone());
    for (k, s) in space.states().iter().enumerate() {
        op.add_entry(k, k, cre(lit(s.total_excitations() as f64)));
    }
    op
}

/// Photon number a⁺a of one cavity (diagonal).
pub fn photon_number<T: Real>(space: &Arc<HilbertSpace<T>>, cavity: usize) -> OperatorMatrix<T> {
    let mut op = OperatorMatrix::zeros(space.clone());
    for (k, s) in space.states().iter().enumerate() {
        op.add_entry(k, k, cre(lit(s.photons[cavity] as f64)));
    }
    op
}

/// H − ωE·I on a sector with E excitations. Since N̂ = E·I on the sector this
/// only removes the common dynamical phase e^{−iωEt}, i.e. it is the
/// Hamiltonian in the frame rotating at the resonance frequency.
pub fn rotating_frame<T: Real>(h: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let shift = h.space.config().omega * lit(h.space.sector() as f64);
    let mut out = h.clone();
    for k in 0..out.dim() {
        out.matrix[(k, k)] -= cre(shift);
    }
    out
}

/// Fails with [`Error::NotHermitian`] unless max |H − H†| ≤ `tol`.
pub fn ensure_hermitian<T: Real>(op: &OperatorMatrix<T>, tol: T) -> Result<()> {
    let defect = op.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian(crate::scalar::to_f64(defect)));
    }
    Ok(())
}
