//! Finite Fock ⊗ spin basis of a cavity network, restricted to one
//! total-excitation sector.
//!
//! Under the rotating-wave approximation the total number of photons plus
//! atomic excitations is conserved, so every closed-system operator is block
//! diagonal in the sector decomposition and each block can be built alone.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical layout of a cavity network.
///
/// Atoms are numbered consecutively cavity by cavity; `couplings[j]` is the
/// atom-field coupling g_j of atom `j`. Atoms are resonant with the cavity
/// photons, so one frequency `omega` serves both.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig<T> {
    pub n_cavities: usize,
    pub atoms_per_cavity: Vec<usize>,
    pub max_photons: usize,
    pub couplings: Vec<T>,
    pub omega: T,
}

impl<T: Real> NetworkConfig<T> {
    pub fn new(
        atoms_per_cavity: Vec<usize>,
        max_photons: usize,
        couplings: Vec<T>,
        omega: T,
    ) -> Result<Self> {
        let config = Self {
            n_cavities: atoms_per_cavity.len(),
            atoms_per_cavity,
            max_photons,
            couplings,
            omega,
        };
        config.validate()?;
        Ok(config)
    }

    /// Every cavity holds `atoms` atoms, all coupled with strength `g`.
    pub fn uniform(n_cavities: usize, atoms: usize, max_photons: usize, g: T, omega: T) -> Result<Self> {
        Self::new(vec![atoms; n_cavities], max_photons, vec![g; n_cavities * atoms], omega)
    }

    /// Atom-free network of `n_cavities` cavities.
    pub fn empty(n_cavities: usize, max_photons: usize, omega: T) -> Result<Self> {
        Self::new(vec![0; n_cavities], max_photons, Vec::new(), omega)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cavities == 0 || self.atoms_per_cavity.len() != self.n_cavities {
            return Err(Error::InvalidConfig("need at least one cavity".into()));
        }
        if self.max_photons == 0 {
            return Err(Error::InvalidConfig("max_photons must be positive".into()));
        }
        if self.couplings.len() != self.total_atoms() {
            return Err(Error::InvalidConfig(format!(
                "{} couplings given for {} atoms",
                self.couplings.len(),
                self.total_atoms()
            )));
        }
        if self.couplings.iter().any(|g| *g < T::zero() || !g.is_finite()) {
            return Err(Error::InvalidConfig("couplings must be finite and non-negative".into()));
        }
        if !(self.omega > T::zero()) || !self.omega.is_finite() {
            return Err(Error::InvalidConfig("omega must be positive".into()));
        }
        Ok(())
    }

    pub fn total_atoms(&self) -> usize {
        self.atoms_per_cavity.iter().sum()
    }

    /// Global indices of the atoms sitting in `cavity`.
    pub fn atoms_in(&self, cavity: usize) -> Range<usize> {
        let start: usize = self.atoms_per_cavity[..cavity].iter().sum();
        start..start + self.atoms_per_cavity[cavity]
    }

    /// Largest excitation number the truncated space can hold.
    pub fn max_excitations(&self) -> usize {
        self.n_cavities * self.max_photons + self.total_atoms()
    }
}

/// One product basis vector |n_1 … n_c⟩_ph ⊗ |m_1 … m_s⟩_at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisState {
    pub photons: Vec<usize>,
    pub atoms: Vec<bool>,
}

impl BasisState {
    pub fn new(photons: Vec<usize>, atoms: Vec<bool>) -> Self {
        Self { photons, atoms }
    }

    pub fn total_excitations(&self) -> usize {
        self.photons.iter().sum::<usize>() + self.atoms.iter().filter(|b| **b).count()
    }
}

/// Ordered basis of one excitation sector.
///
/// States are listed in descending lexicographic order of the digit string
/// (photon numbers cavity by cavity, then atom bits), so the state with the
/// most photons in the first cavity comes first. For a single photon in an
/// atom-free network, index `q` is the photon sitting in cavity `q`.
#[derive(Debug, Clone)]
pub struct HilbertSpace<T> {
    config: NetworkConfig<T>,
    sector: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl<T: Real> HilbertSpace<T> {
    pub fn config(&self) -> &NetworkConfig<T> {
        &self.config
    }

    pub fn sector(&self) -> usize {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &BasisState {
        &self.states[k]
    }

    pub fn index_of(&self, b: &BasisState) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Photon count plus atomic excitations inside `cavity`, per basis state.
    pub fn cavity_excitations(&self, cavity: usize) -> Vec<usize> {
        let atoms = self.config.atoms_in(cavity);
        self.states
            .iter()
            .map(|s| s.photons[cavity] + s.atoms[atoms.clone()].iter().filter(|b| **b).count())
            .collect()
    }
}

/// Lists every basis state of `config` with exactly `sector` excitations.
pub fn enumerate_basis<T: Real>(config: NetworkConfig<T>, sector: usize) -> Result<Arc<HilbertSpace<T>>> {
    config.validate()?;
    if sector > config.max_excitations() {
        return Err(Error::EmptySpace { sector });
    }
    let n_atoms = config.total_atoms();
    let mut states = Vec::new();
    let mut photons = vec![0; config.n_cavities];
    let mut atoms = vec![false; n_atoms];
    fill_photons(&config, 0, sector, &mut photons, &mut atoms, &mut states);
    if states.is_empty() {
        return Err(Error::EmptySpace { sector });
    }
    let index = states.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
    Ok(Arc::new(HilbertSpace { config, sector, states, index }))
}

fn fill_photons<T: Real>(
    config: &NetworkConfig<T>,
    cavity: usize,
    remaining: usize,
    photons: &mut Vec<usize>,
    atoms: &mut Vec<bool>,
    out: &mut Vec<BasisState>,
) {
    if cavity == config.n_cavities {
        fill_atoms(0, remaining, photons, atoms, out);
        return;
    }
    for n in (0..=remaining.min(config.max_photons)).rev() {
        photons[cavity] = n;
        fill_photons(config, cavity + 1, remaining - n, photons, atoms, out);
    }
    photons[cavity] = 0;
}

fn fill_atoms(
    atom: usize,
    remaining: usize,
    photons: &[usize],
    atoms: &mut Vec<bool>,
    out: &mut Vec<BasisState>,
) {
    if remaining > atoms.len() - atom {
        return;
    }
    if atom == atoms.len() {
        out.push(BasisState::new(photons.to_vec(), atoms.clone()));
        return;
    }
    if remaining > 0 {
        atoms[atom] = true;
        fill_atoms(atom + 1, remaining - 1, photons, atoms, out);
    }
    atoms[atom] = false;
    fill_atoms(atom + 1, remaining, photons, atoms, out);
}

/// Position of `b` in the enumeration order of `space`.
pub fn state_index<T: Real>(space: &HilbertSpace<T>, b: &BasisState) -> Result<usize> {
    space.index_of(b).ok_or(Error::NotInSector { sector: space.sector })
}
