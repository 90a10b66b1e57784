//! Brute-force operators on the full tensor-product space, built from
//! elementary ladder and Pauli matrices with Kronecker products.

#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use tchlab::hamiltonian::{build_tc, build_tch, excitation_number, jump_operator, photon_number, HopSpec};
use tchlab::hilbert::{enumerate_basis, HilbertSpace, NetworkConfig};

pub type M = DMatrix<Complex<f64>>;

fn c(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

/// Truncated annihilation operator on photon numbers 0..=max.
pub fn annihilation(max: usize) -> M {
    let mut a = M::zeros(max + 1, max + 1);
    for n in 1..=max {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    a
}

/// σ = |0⟩⟨1| with basis order (ground, excited).
pub fn lowering() -> M {
    let mut s = M::zeros(2, 2);
    s[(0, 1)] = c(1.0);
    s
}

/// Factor dimensions: cavities first, then atoms.
pub fn factor_dims(cfg: &NetworkConfig<f64>) -> Vec<usize> {
    let atoms: usize = cfg.atoms_per_cavity.iter().sum();
    let mut d = vec![cfg.max_photons + 1; cfg.n_cavities];
    d.extend(std::iter::repeat_n(2, atoms));
    d
}

/// `op` acting on tensor factor `slot`, identity elsewhere.
pub fn embed(op: &M, slot: usize, dims: &[usize]) -> M {
    let mut out = M::identity(1, 1);
    for (k, d) in dims.iter().enumerate() {
        let f = if k == slot { op.clone() } else { M::identity(*d, *d) };
        out = out.kronecker(&f);
    }
    out
}

pub struct FullOps {
    pub dims: Vec<usize>,
    pub a: Vec<M>,
    pub sigma: Vec<M>,
}

impl FullOps {
    pub fn new(cfg: &NetworkConfig<f64>) -> Self {
        let dims = factor_dims(cfg);
        let a = (0..cfg.n_cavities).map(|q| embed(&annihilation(cfg.max_photons), q, &dims)).collect();
        let atoms: usize = cfg.atoms_per_cavity.iter().sum();
        let sigma = (0..atoms).map(|j| embed(&lowering(), cfg.n_cavities + j, &dims)).collect();
        Self { dims, a, sigma }
    }

    pub fn full_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn tc(&self, cfg: &NetworkConfig<f64>, q: usize) -> M {
        let a = &self.a[q];
        let ad = a.adjoint();
        let mut h = (&ad * a) * c(cfg.omega);
        let first: usize = cfg.atoms_per_cavity[..q].iter().sum();
        let mut sbar = M::zeros(self.full_dim(), self.full_dim());
        for j in first..first + cfg.atoms_per_cavity[q] {
            let s = &self.sigma[j];
            h += (s.adjoint() * s) * c(cfg.omega);
            sbar += s * c(cfg.couplings[j]);
        }
        h += &ad * &sbar + a * sbar.adjoint();
        h
    }

    pub fn hop(&self, hop: &HopSpec<f64>) -> M {
        let z = Complex::from_polar(hop.amplitude, hop.phase);
        let forward = self.a[hop.cavity_i].adjoint() * &self.a[hop.cavity_j] * z;
        let back = forward.adjoint();
        forward + back
    }

    pub fn tch(&self, cfg: &NetworkConfig<f64>, hops: &[HopSpec<f64>]) -> M {
        let mut h = M::zeros(self.full_dim(), self.full_dim());
        for q in 0..cfg.n_cavities {
            h += self.tc(cfg, q);
        }
        for hop in hops {
            h += self.hop(hop);
        }
        h
    }

    pub fn excitations(&self) -> M {
        let mut n = M::zeros(self.full_dim(), self.full_dim());
        for a in &self.a {
            n += a.adjoint() * a;
        }
        for s in &self.sigma {
            n += s.adjoint() * s;
        }
        n
    }
}

/// Position of a sector basis state in the full tensor product (mixed radix,
/// first factor most significant; atom excited = 1).
pub fn full_index(space: &HilbertSpace<f64>, k: usize, dims: &[usize]) -> usize {
    let s = space.state(k);
    let digits = s.photons.iter().copied().chain(s.atoms.iter().map(|b| *b as usize));
    digits.zip(dims).fold(0, |acc, (d, base)| acc * base + d)
}

pub fn project(full: &M, space: &HilbertSpace<f64>, dims: &[usize]) -> M {
    let idx: Vec<usize> = (0..space.dim()).map(|k| full_index(space, k, dims)).collect();
    M::from_fn(space.dim(), space.dim(), |r, col| full[(idx[r], idx[col])])
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Test networks: (config, hops).
pub fn networks() -> Vec<(NetworkConfig<f64>, Vec<HopSpec<f64>>)> {
    vec![
        (NetworkConfig::new(vec![1], 2, vec![0.3], 1.0).unwrap(), vec![]),
        (NetworkConfig::new(vec![2], 2, vec![0.3, 0.55], 1.2).unwrap(), vec![]),
        (NetworkConfig::new(vec![3], 3, vec![0.2, 0.2, 0.7], 0.9).unwrap(), vec![]),
        (
            NetworkConfig::new(vec![1, 1], 2, vec![0.4, 0.25], 1.0).unwrap(),
            vec![HopSpec::new(0, 1, 0.15).with_phase(0.4)],
        ),
        (
            NetworkConfig::new(vec![2, 1], 2, vec![0.1, 0.2, 0.3], 1.0).unwrap(),
            vec![HopSpec::new(1, 0, 0.6).with_phase(-1.1)],
        ),
        (
            NetworkConfig::uniform(3, 1, 2, 1e-3, 1.0).unwrap(),
            vec![HopSpec::new(2, 0, 0.8), HopSpec::new(1, 2, 0.35).with_phase(2.0)],
        ),
        (
            NetworkConfig::new(vec![1, 0, 2], 1, vec![0.5, 0.45, 0.05], 1.3).unwrap(),
            vec![HopSpec::new(0, 1, 0.2), HopSpec::new(1, 2, 0.3).with_phase(0.7), HopSpec::new(0, 2, 0.1)],
        ),
        (
            NetworkConfig::empty(4, 1, 2.0).unwrap(),
            vec![HopSpec::new(0, 1, 1.0), HopSpec::new(1, 2, 0.5).with_phase(0.3), HopSpec::new(3, 0, 0.25)],
        ),
        (NetworkConfig::empty(2, 3, 1.0).unwrap(), vec![HopSpec::new(0, 1, 0.7)]),
    ]
}

/// Compares every builder with its brute-force counterpart on every sector
/// of dimension ≤ `max_dim`; returns (largest deviation, spaces checked).
pub fn oracle_agreement(max_dim: usize) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (cfg, hops) in networks() {
        let ops = FullOps::new(&cfg);
        let full_tch = ops.tch(&cfg, &hops);
        let full_n = ops.excitations();
        let full_tc: Vec<M> = (0..cfg.n_cavities).map(|q| ops.tc(&cfg, q)).collect();
        let full_photons: Vec<M> = ops.a.iter().map(|a| a.adjoint() * a).collect();
        let full_hops: Vec<M> = hops.iter().map(|h| ops.hop(h)).collect();
        for sector in 0..=cfg.max_excitations() {
            let space: Arc<HilbertSpace<f64>> = enumerate_basis(cfg.clone(), sector).unwrap();
            if space.dim() > max_dim {
                continue;
            }
            checked += 1;
            let mut compare = |ours: &M, full: &M| {
                worst = worst.max(max_diff(ours, &project(full, &space, &ops.dims)));
            };
            compare(&build_tch(&space, &hops).unwrap().matrix, &full_tch);
            compare(&excitation_number(&space).matrix, &full_n);
            for q in 0..cfg.n_cavities {
                compare(&build_tc(&space, q).unwrap().matrix, &full_tc[q]);
                compare(&photon_number(&space, q).matrix, &full_photons[q]);
            }
            for (hop, full) in hops.iter().zip(&full_hops) {
                compare(&jump_operator(&space, hop).unwrap().matrix, full);
            }
        }
    }
    (worst, checked)
}
