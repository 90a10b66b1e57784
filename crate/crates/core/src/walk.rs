//! Single-photon quantum walk on an atom-free cavity network whose hopping
//! matrix is the discretised free-particle Hamiltonian p²/2m.
//!
//! Cavity q stands for the coordinate x_q = q/√N ∈ [0, √N); momenta take the
//! values p_a = √N(a/N − 1/2), a = 0 … N−1.

use std::sync::Arc;

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{Propagator, StateVector};
use crate::hamiltonian::{HopSpec, OperatorMatrix};
use crate::hilbert::{enumerate_basis, HilbertSpace, NetworkConfig};
use crate::report::{ExperimentReport, Table};
use crate::scalar::{cabs, cre, expi, hermiticity_defect, lit, to_f64, CMatrix, CVector, Real};

/// QFT|c⟩ = N^{−1/2} Σ_a e^{−2πi ac/N} |a⟩.
pub fn qft_matrix<T: Real>(n: usize) -> CMatrix<T> {
    let norm = T::one() / lit::<T>(n as f64).sqrt();
    CMatrix::from_fn(n, n, |a, c| {
        // phase index ac mod N
        let k = ((a * c) % n) as f64;
        expi(-T::two_pi() * lit::<T>(k) / lit::<T>(n as f64)) * norm
    })
}

/// QFT⁻¹ = QFT†.
pub fn inverse_qft_matrix<T: Real>(n: usize) -> CMatrix<T> {
    qft_matrix::<T>(n).adjoint()
}

/// p_a = √N(a/N − 1/2) for a = 0 … N−1.
pub fn momentum_values<T: Real>(n: usize) -> Vec<T> {
    let nf = lit::<T>(n as f64);
    (0..n).map(|a| nf.sqrt() * (lit::<T>(a as f64) / nf - lit(0.5))).collect()
}

fn conjugate_diagonal<T: Real>(n: usize, diag: &[T]) -> CMatrix<T> {
    let f = qft_matrix::<T>(n);
    let mut scaled = f.clone();
    for (a, mut col) in scaled.column_iter_mut().enumerate() {
        col.iter_mut().for_each(|z| *z *= diag[a]);
    }
    scaled * f.adjoint()
}

/// Discrete momentum operator QFT·diag(p_a)·QFT⁻¹.
pub fn momentum_operator<T: Real>(n: usize) -> Result<CMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidConfig("momentum operator needs N >= 2".into()));
    }
    Ok(conjugate_diagonal(n, &momentum_values::<T>(n)))
}

/// H_free = QFT·diag(p_a²/2m)·QFT⁻¹ in the cavity (coordinate) basis.
pub fn free_hamiltonian<T: Real>(n: usize, mass: T) -> Result<CMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidConfig("free Hamiltonian needs N >= 2".into()));
    }
    if !(mass > T::zero()) {
        return Err(Error::InvalidConfig("mass must be positive".into()));
    }
    let energies: Vec<T> = momentum_values::<T>(n).into_iter().map(|p| p * p / (lit::<T>(2.0) * mass)).collect();
    Ok(conjugate_diagonal(n, &energies))
}

/// One waveguide: ⟨q|H|p⟩ = r e^{iφ}, q < p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Link<T> {
    pub q: usize,
    pub p: usize,
    pub r: T,
    pub phi: T,
}

/// Hopping amplitude and phase averaged over all links of one length |q − p|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceProfile<T> {
    pub distance: usize,
    pub mean_r: T,
    pub max_r: T,
    pub mean_phi: T,
}

/// Cavity frequencies plus the waveguide list realising a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingNetwork<T> {
    pub diagonal: Vec<T>,
    pub links: Vec<Link<T>>,
}

pub fn coupling_network<T: Real>(h: &CMatrix<T>) -> Result<CouplingNetwork<T>> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.ncols() });
    }
    let defect = hermiticity_defect(h);
    if defect > lit::<T>(1e-10) {
        return Err(Error::NotHermitian(to_f64(defect)));
    }
    let mut links = Vec::new();
    for q in 0..n {
        for p in q + 1..n {
            let z = h[(q, p)];
            if z != cre(T::zero()) {
                links.push(Link { q, p, r: cabs(z), phi: z.im.atan2(z.re) });
            }
        }
    }
    Ok(CouplingNetwork { diagonal: (0..n).map(|k| h[(k, k)].re).collect(), links })
}

impl<T: Real> CouplingNetwork<T> {
    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    /// Rebuilds the Hermitian matrix the network realises.
    pub fn to_matrix(&self) -> CMatrix<T> {
        let n = self.size();
        let mut m = CMatrix::zeros(n, n);
        for (k, d) in self.diagonal.iter().enumerate() {
            m[(k, k)] = cre(*d);
        }
        for l in &self.links {
            let z = expi(l.phi) * l.r;
            m[(l.q, l.p)] = z;
            m[(l.p, l.q)] = z.conj();
        }
        m
    }

    /// Links as photon hops for [`crate::hamiltonian::build_tch`].
    pub fn hops(&self) -> Vec<HopSpec<T>> {
        self.links.iter().map(|l| HopSpec::new(l.q, l.p, l.r).with_phase(l.phi)).collect()
    }

    pub fn distance_profile(&self) -> Vec<DistanceProfile<T>> {
        let n = self.size();
        let mut acc = vec![(0usize, T::zero(), T::zero(), T::zero()); n];
        for l in &self.links {
            let e = &mut acc[l.p - l.q];
            e.0 += 1;
            e.1 += l.r;
            if l.r > e.2 {
                e.2 = l.r;
            }
            e.3 += l.phi;
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, e)| e.0 > 0)
            .map(|(d, (count, sum_r, max_r, sum_phi))| {
                let c = lit::<T>(count as f64);
                DistanceProfile { distance: d, mean_r: sum_r / c, max_r, mean_phi: sum_phi / c }
            })
            .collect()
    }
}

/// K(x, t) = A t^{−1/2} e^{i m x²/t}  (ħ = 1).
pub fn feynman_kernel<T: Real>(x: T, t: T, mass: T, a_const: T) -> Result<Complex<T>> {
    if !(t > T::zero()) {
        return Err(Error::Domain { what: "kernel time must be positive", value: to_f64(t) });
    }
    Ok(expi(mass * x * x / t) * (a_const / t.sqrt()))
}

/// Single-photon space of `n` atom-free cavities; basis index = cavity index.
pub fn walk_space<T: Real>(n: usize, omega: T) -> Result<Arc<HilbertSpace<T>>> {
    enumerate_basis(NetworkConfig::empty(n, 1, omega)?, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkConfig<T> {
    pub n: usize,
    pub mass: T,
    pub q0: usize,
    pub t_max: T,
    pub steps: usize,
    /// Normalisation A of the comparison kernel.
    pub kernel_constant: T,
}

impl<T: Real> WalkConfig<T> {
    /// Photon starts in the middle cavity; the time grid ends at 2πm/8.
    pub fn new(n: usize, mass: T) -> Self {
        Self {
            n,
            mass,
            q0: n / 2,
            t_max: Self::default_t_max(mass),
            steps: 100,
            kernel_constant: T::one(),
        }
    }

    pub fn default_t_max(mass: T) -> T {
        T::two_pi() * mass / lit(8.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig("walk needs N >= 2".into()));
        }
        if !(self.mass > T::zero()) {
            return Err(Error::InvalidConfig("mass must be positive".into()));
        }
        if self.q0 >= self.n {
            return Err(Error::InvalidConfig(format!("initial cavity {} outside 0..{}", self.q0, self.n)));
        }
        if !(self.t_max > T::zero()) || self.steps == 0 {
            return Err(Error::InvalidConfig("time grid needs t_max > 0 and steps >= 1".into()));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<T> {
        (0..=self.steps).map(|k| self.t_max * lit(k as f64) / lit(self.steps as f64)).collect()
    }

    /// Physical coordinate q/√N of cavity q.
    pub fn position(&self, q: usize) -> T {
        lit::<T>(q as f64) / lit::<T>(self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct WalkReport<T: Real> {
    pub config: WalkConfig<T>,
    pub times: Vec<T>,
    /// amplitudes[k][q]: photon amplitude in cavity q at times[k].
    pub amplitudes: Vec<CVector<T>>,
    /// Largest change of any |⟨p_a|ψ(t)⟩| over the grid.
    pub momentum_drift: T,
    /// Largest |‖ψ(t)‖² − 1| over the grid.
    pub norm_drift: T,
    /// Σ_q |ψ_q|² (q − q₀)² in cavity units, per time.
    pub variances: Vec<T>,
    /// Slope of log variance against log t over the t > 0 grid.
    pub variance_exponent: T,
    pub network: CouplingNetwork<T>,
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope<T: Real>(x: &[T], y: &[T]) -> T {
    let pts: Vec<(T, T)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = lit::<T>(pts.len() as f64);
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / n;
    let sxy = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    sxy / sxx
}

/// Evolves a photon launched in cavity q₀ under H_free and samples the
/// cavity amplitudes on the configured time grid.
pub fn simulate_walk<T: Real>(config: &WalkConfig<T>) -> Result<WalkReport<T>> {
    config.validate()?;
    let n = config.n;
    let h = free_hamiltonian(n, config.mass)?;
    let network = coupling_network(&h)?;
    let space = walk_space(n, h[(0, 0)].re)?;
    let op = OperatorMatrix::new(space.clone(), h)?;
    let prop = Propagator::new(&op)?;
    let psi0 = StateVector::basis(space, config.q0);
    let times = config.times();
    let inv_qft = inverse_qft_matrix::<T>(n);
    let momentum0: Vec<T> = (&inv_qft * &psi0.amplitudes).iter().map(|z| cabs(*z)).collect();

    let mut amplitudes = Vec::with_capacity(times.len());
    let mut momentum_drift = T::zero();
    let mut norm_drift = T::zero();
    let mut variances = Vec::with_capacity(times.len());
    let half = lit::<T>(n as f64 / 2.0);
    for &t in &times {
        let psi = prop.apply(&psi0, t)?;
        for (a, z) in (&inv_qft * &psi.amplitudes).iter().enumerate() {
            let d = (cabs(*z) - momentum0[a]).abs();
            if d > momentum_drift {
                momentum_drift = d;
            }
        }
        let nd = (psi.norm_sqr() - T::one()).abs();
        if nd > norm_drift {
            norm_drift = nd;
        }
        let var = psi.amplitudes.iter().enumerate().fold(T::zero(), |s, (q, z)| {
            // displacement on the ring, in [−N/2, N/2)
            let mut d = lit::<T>(q as f64) - lit::<T>(config.q0 as f64);
            if d >= half {
                d -= lit(n as f64);
            } else if d < -half {
                d += lit(n as f64);
            }
            s + z.norm_sqr() * d * d
        });
        variances.push(var);
        amplitudes.push(psi.amplitudes);
    }
    let (tx, vy): (Vec<T>, Vec<T>) =
        times.iter().zip(&variances).filter(|(t, _)| **t > T::zero()).map(|(t, v)| (*t, *v)).unzip();
    let variance_exponent = log_log_slope(&tx, &vy);
    Ok(WalkReport {
        config: *config,
        times,
        amplitudes,
        momentum_drift,
        norm_drift,
        variances,
        variance_exponent,
        network,
    })
}

impl<T: Real> WalkReport<T> {
    /// Kernel K(x_q − x_{q₀}, t) on the same cavity × time grid (t > 0 only).
    pub fn kernel_grid(&self) -> Result<Vec<(T, T, Complex<T>)>> {
        let c = &self.config;
        let x0 = c.position(c.q0);
        let mut out = Vec::new();
        for &t in self.times.iter().filter(|t| **t > T::zero()) {
            for q in 0..c.n {
                let x = c.position(q) - x0;
                out.push((x, t, feynman_kernel(x, t, c.mass, c.kernel_constant)?));
            }
        }
        Ok(out)
    }

    pub fn to_experiment_report(&self) -> Result<ExperimentReport> {
        let c = &self.config;
        let mut amp = Table::new(["cavity", "time", "re", "im"]);
        for (t, psi) in self.times.iter().zip(&self.amplitudes) {
            for (q, z) in psi.iter().enumerate() {
                amp.push(vec![q as f64, to_f64(*t), to_f64(z.re), to_f64(z.im)])?;
            }
        }
        let mut kernel = Table::new(["x", "time", "re", "im"]);
        for (x, t, k) in self.kernel_grid()? {
            kernel.push(vec![to_f64(x), to_f64(t), to_f64(k.re), to_f64(k.im)])?;
        }
        let mut network = Table::new(["q", "p", "r", "phi"]);
        for l in &self.network.links {
            network.push(vec![l.q as f64, l.p as f64, to_f64(l.r), to_f64(l.phi)])?;
        }
        let params = serde_json::json!({
            "n": c.n,
            "mass": to_f64(c.mass),
            "q0": c.q0,
            "t_max": to_f64(c.t_max),
            "steps": c.steps,
            "kernel_constant": to_f64(c.kernel_constant),
            "hbar": 1.0,
        });
        let mut report = ExperimentReport::new("walk", params);
        report.set("momentum_conservation", to_f64(self.momentum_drift));
        report.set("norm_drift", to_f64(self.norm_drift));
        report.set("variance_exponent", to_f64(self.variance_exponent));
        report.set("cavity_frequency", to_f64(self.network.diagonal[0]));
        report.set("links", self.network.links.len());
        Ok(report
            .with_table("walk_amplitude", amp)
            .with_table("kernel", kernel)
            .with_table("network", network))
    }
}
