//! Dark (singlet) atomic states and their optical selection through the
//! escape-time statistics of a photon leaking out of the cavity.
//!
//! Atomic basis index b = Σ_j b_j 2^{s−1−j}: atom 0 is the most significant
//! bit, bit value 1 means excited.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{decay_trajectory, EvolutionSettings, StateVector};
use crate::hamiltonian::{build_tc, photon_number, rotating_frame, OperatorMatrix};
use crate::hilbert::{enumerate_basis, BasisState, NetworkConfig};
use crate::scalar::{cplx, cre, lit, norm_sqr, to_f64, CVector, Real};

/// Normalised state of `s` two-level atoms in one cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicState<T: Real> {
    n_atoms: usize,
    amplitudes: CVector<T>,
}

impl<T: Real> AtomicState<T> {
    pub fn new(n_atoms: usize, amplitudes: CVector<T>) -> Result<Self> {
        if amplitudes.len() != 1 << n_atoms {
            return Err(Error::DimensionMismatch { expected: 1 << n_atoms, found: amplitudes.len() });
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - T::one()).abs() > lit(1e-10) {
            return Err(Error::InvalidConfig(format!("atomic state norm² is {}", to_f64(norm))));
        }
        Ok(Self { n_atoms, amplitudes })
    }

    /// All atoms in the ground state.
    pub fn ground(n_atoms: usize) -> Self {
        Self::basis(n_atoms, 0)
    }

    pub fn basis(n_atoms: usize, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(1 << n_atoms);
        amplitudes[index] = cre(T::one());
        Self { n_atoms, amplitudes }
    }

    /// (|01⟩ + |10⟩)/√2.
    pub fn triplet() -> Self {
        let h = T::one() / lit::<T>(2.0).sqrt();
        Self { n_atoms: 2, amplitudes: CVector::from_vec(vec![cre(T::zero()), cre(h), cre(h), cre(T::zero())]) }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Excitation pattern of basis index `b`, atom 0 first.
    pub fn bits(&self, b: usize) -> Vec<bool> {
        (0..self.n_atoms).map(|j| (b >> (self.n_atoms - 1 - j)) & 1 == 1).collect()
    }

    /// Weight of the component with exactly `k` excited atoms.
    pub fn excitation_weight(&self, k: usize) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(b, _)| b.count_ones() as usize == k)
            .fold(T::zero(), |s, (_, z)| s + z.norm_sqr())
    }
}

/// (|01⟩ − |10⟩)/√2.
pub fn singlet_state<T: Real>() -> AtomicState<T> {
    singlet_product(&[(0, 1)], 2).expect("fixed pairing")
}

/// ⊗ over `pairing` of singlets (|0_i 1_j⟩ − |1_i 0_j⟩)/√2.
pub fn singlet_product<T: Real>(pairing: &[(usize, usize)], s: usize) -> Result<AtomicState<T>> {
    if s % 2 == 1 {
        return Err(Error::InvalidConfig(format!("singlet product needs an even atom count, got {s}")));
    }
    let mut used = vec![false; s];
    for &(i, j) in pairing {
        for a in [i, j] {
            if a >= s || used[a] {
                return Err(Error::BadPairing(a));
            }
            used[a] = true;
        }
    }
    if let Some(a) = used.iter().position(|u| !u) {
        return Err(Error::BadPairing(a));
    }
    let bit = |a: usize| 1usize << (s - 1 - a);
    let mut terms: Vec<(usize, T)> = vec![(0, T::one())];
    for &(i, j) in pairing {
        terms = terms.into_iter().flat_map(|(b, c)| [(b | bit(j), c), (b | bit(i), -c)]).collect();
    }
    let scale = T::one() / lit::<T>(terms.len() as f64).sqrt();
    let mut amplitudes = CVector::zeros(1 << s);
    for (b, c) in terms {
        amplitudes[b] += cre(c * scale);
    }
    AtomicState::new(s, amplitudes)
}

/// Pairs (0,1), (2,3), … for an even atom count.
pub fn adjacent_pairing(s: usize) -> Vec<(usize, usize)> {
    (0..s / 2).map(|k| (2 * k, 2 * k + 1)).collect()
}

/// |D₃⟩ = (1/√6) Σ_π sgn(π) |π(0)π(1)π(2)⟩ over three three-level atoms,
/// index 9l₀ + 3l₁ + l₂.
pub fn multi_singlet_d3<T: Real>() -> CVector<T> {
    let mut v = CVector::zeros(27);
    let c = T::one() / lit::<T>(6.0).sqrt();
    for (p, sign) in [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([2, 1, 0], -1.0), ([1, 0, 2], -1.0)] {
        v[9 * p[0] + 3 * p[1] + p[2]] = cre(c * lit(sign));
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Darkness<T> {
    pub dark: bool,
    /// ‖σ̄⁺ψ‖: strength of photon absorption out of the state.
    pub absorption: T,
    /// ‖σ̄ψ‖: strength of photon emission out of the state.
    pub emission: T,
}

fn collective<T: Real>(psi: &AtomicState<T>, g: &[T], raise: bool) -> CVector<T> {
    let s = psi.n_atoms;
    let mut out = CVector::zeros(psi.amplitudes.len());
    for (b, z) in psi.amplitudes.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            let bit = 1usize << (s - 1 - j);
            if (b & bit == 0) == raise {
                out[b ^ bit] += *z * *gj;
            }
        }
    }
    out
}

/// Applies σ̄⁺ = Σ g_j σ_j⁺ and σ̄ = Σ g_j σ_j to `psi`.
pub fn is_dark<T: Real>(psi: &AtomicState<T>, g: &[T], tol: T) -> Result<Darkness<T>> {
    if g.len() != psi.n_atoms {
        return Err(Error::DimensionMismatch { expected: psi.n_atoms, found: g.len() });
    }
    let absorption = norm_sqr(&collective(psi, g, true)).sqrt();
    let emission = norm_sqr(&collective(psi, g, false)).sqrt();
    Ok(Darkness { dark: absorption < tol, absorption, emission })
}

/// Leaky single cavity holding `atoms` identical atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayConfig<T> {
    pub kappa: T,
    pub g: T,
    pub atoms: usize,
    pub omega: T,
    t_max: Option<T>,
    pub grid_points: usize,
    pub n_trials: usize,
    pub rng_seed: u64,
}

impl<T: Real> DecayConfig<T> {
    /// κ = g/10, T_max = 20/κ, 4001 grid points, 10⁴ trials, seed 0.
    pub fn new(g: T, atoms: usize) -> Self {
        Self {
            kappa: g / lit(10.0),
            g,
            atoms,
            omega: T::one(),
            t_max: None,
            grid_points: 4001,
            n_trials: 10_000,
            rng_seed: 0,
        }
    }

    pub fn with_kappa(mut self, kappa: T) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_t_max(mut self, t_max: T) -> Self {
        self.t_max = Some(t_max);
        self
    }

    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.grid_points = points;
        self
    }

    pub fn with_trials(mut self, n_trials: usize, rng_seed: u64) -> Self {
        self.n_trials = n_trials;
        self.rng_seed = rng_seed;
        self
    }

    pub fn t_max(&self) -> T {
        self.t_max.unwrap_or(lit::<T>(20.0) / self.kappa)
    }

    pub fn dt(&self) -> T {
        self.t_max() / lit((self.grid_points - 1) as f64)
    }

    pub fn times(&self) -> Vec<T> {
        let dt = self.dt();
        (0..self.grid_points).map(|k| dt * lit(k as f64)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > T::zero()) {
            return Err(Error::InvalidConfig("kappa must be positive".into()));
        }
        if self.g < T::zero() {
            return Err(Error::InvalidConfig("g must be non-negative".into()));
        }
        if !(self.t_max() > T::zero()) {
            return Err(Error::InvalidConfig("T_max must be positive".into()));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidConfig("emission grid needs at least 3 points".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionReport<T> {
    pub times: Vec<T>,
    pub density: Vec<T>,
    pub survival: Vec<T>,
    /// 1 − S(T_max).
    pub escape_probability: T,
    /// Mean of the emission time censored at T_max.
    pub mean: T,
}

/// −dS/dt with second-order differences, one-sided at both ends.
fn negative_derivative<T: Real>(s: &[T], dt: T) -> Vec<T> {
    let n = s.len();
    let two = lit::<T>(2.0);
    (0..n)
        .map(|k| {
            let d = if k == 0 {
                (-lit::<T>(3.0) * s[0] + lit::<T>(4.0) * s[1] - s[2]) / (two * dt)
            } else if k == n - 1 {
                (lit::<T>(3.0) * s[n - 1] - lit::<T>(4.0) * s[n - 2] + s[n - 3]) / (two * dt)
            } else {
                (s[k + 1] - s[k - 1]) / (two * dt)
            };
            -d
        })
        .collect()
}

fn trapezoid<T: Real>(y: &[T], dt: T) -> Vec<T> {
    let mut acc = Vec::with_capacity(y.len());
    let mut sum = T::zero();
    acc.push(sum);
    for w in y.windows(2) {
        sum += (w[0] + w[1]) * dt / lit(2.0);
        acc.push(sum);
    }
    acc
}

impl<T: Real> EmissionReport<T> {
    /// Builds density, escape probability and censored mean from S(t) on a
    /// uniform grid.
    pub fn from_survival(times: Vec<T>, survival: Vec<T>) -> Result<Self> {
        if times.len() < 3 || times.len() != survival.len() {
            return Err(Error::InvalidConfig("survival curve needs matching grids of ≥ 3 points".into()));
        }
        let dt = times[1] - times[0];
        let density = negative_derivative(&survival, dt);
        let worst = density.iter().fold(T::zero(), |a, b| if *b < a { *b } else { a });
        if worst < -lit::<T>(1e-6) {
            return Err(Error::GridResolution(to_f64(worst)));
        }
        let last = *survival.last().expect("non-empty");
        let t_max = *times.last().expect("non-empty");
        let weighted: Vec<T> = times.iter().zip(&density).map(|(t, p)| *t * *p).collect();
        let mean = *trapezoid(&weighted, dt).last().expect("non-empty") + t_max * last;
        Ok(Self { times, density, survival, escape_probability: T::one() - last, mean })
    }

    pub fn t_max(&self) -> T {
        *self.times.last().expect("non-empty grid")
    }

    /// ∫₀^{T_max} p dt (trapezoid).
    pub fn integrated_density(&self) -> T {
        let dt = self.times[1] - self.times[0];
        *trapezoid(&self.density, dt).last().expect("non-empty")
    }
}

/// Effective Hamiltonian H_TC − i(κ/2)a⁺a on sector `sector`, in the frame
/// rotating at ω.
pub fn decay_hamiltonian<T: Real>(config: &DecayConfig<T>, sector: usize) -> Result<OperatorMatrix<T>> {
    config.validate()?;
    let network = NetworkConfig::uniform(1, config.atoms, config.atoms + 1, config.g, config.omega)?;
    let space = enumerate_basis(network, sector)?;
    let h = rotating_frame(&build_tc(&space, 0)?);
    let loss = photon_number(&space, 0).matrix.map(|z| z * cplx(T::zero(), -config.kappa / lit(2.0)));
    Ok(OperatorMatrix { space, matrix: h.matrix + loss })
}

/// Launches one photon into the cavity with the atoms in `psi_at` and
/// records S(t) = ‖ψ(t)‖² and p(t) = −dS/dt on the configured grid.
pub fn emission_density<T: Real>(psi_at: &AtomicState<T>, config: &DecayConfig<T>) -> Result<EmissionReport<T>> {
    config.validate()?;
    if psi_at.n_atoms != config.atoms {
        return Err(Error::DimensionMismatch { expected: config.atoms, found: psi_at.n_atoms });
    }
    let times = config.times();
    let dt = config.dt();
    let mut survival = vec![T::zero(); times.len()];
    let settings = EvolutionSettings::new(dt)?;
    for k in 0..=config.atoms {
        if psi_at.excitation_weight(k) == T::zero() {
            continue;
        }
        let h_eff = decay_hamiltonian(config, k + 1)?;
        let space = h_eff.space.clone();
        let mut amplitudes = CVector::zeros(space.dim());
        for (b, z) in psi_at.amplitudes.iter().enumerate() {
            if b.count_ones() as usize == k && *z != cre(T::zero()) {
                let idx = crate::hilbert::state_index(&space, &BasisState::new(vec![1], psi_at.bits(b)))?;
                amplitudes[idx] = *z;
            }
        }
        let psi = StateVector { space, amplitudes };
        let trajectory = decay_trajectory(&h_eff, &psi, dt, times.len() - 1, &settings)?;
        for (s, state) in survival.iter_mut().zip(&trajectory) {
            *s += state.norm_sqr();
        }
    }
    EmissionReport::from_survival(times, survival)
}

/// Emission times drawn from one report; censored trials carry T_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionSamples<T> {
    pub times: Vec<T>,
    pub censored: Vec<bool>,
}

impl<T: Real> EmissionSamples<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn censored_count(&self) -> usize {
        self.censored.iter().filter(|c| **c).count()
    }
}

/// (mean, standard error of the mean); the error is 0 below two samples.
pub fn mean_and_error<T: Real>(xs: &[T]) -> (T, T) {
    let n = lit::<T>(xs.len() as f64);
    let mean = xs.iter().fold(T::zero(), |s, x| s + *x) / n;
    if xs.len() < 2 {
        return (mean, T::zero());
    }
    let var = xs.iter().fold(T::zero(), |s, x| s + (*x - mean) * (*x - mean)) / (n - T::one());
    (mean, (var / n).sqrt())
}

/// Inverse-CDF sampling of the numeric density, censored at T_max.
pub fn sample_emission_times<T: Real>(report: &EmissionReport<T>, n_trials: usize, rng_seed: u64) -> EmissionSamples<T> {
    let dt = report.times[1] - report.times[0];
    let clipped: Vec<T> = report.density.iter().map(|p| if *p > T::zero() { *p } else { T::zero() }).collect();
    let cdf = trapezoid(&clipped, dt);
    let f_max = *cdf.last().expect("non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut times = Vec::with_capacity(n_trials);
    let mut censored = Vec::with_capacity(n_trials);
    for _ in 0..n_trials {
        let u: T = lit(rng.random::<f64>());
        if u >= f_max {
            times.push(report.t_max());
            censored.push(true);
            continue;
        }
        let k = cdf.partition_point(|f| *f <= u).max(1) - 1;
        let span = cdf[k + 1] - cdf[k];
        let frac = if span > T::zero() { (u - cdf[k]) / span } else { T::zero() };
        times.push(report.times[k] + frac * dt);
        censored.push(false);
    }
    EmissionSamples { times, censored }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Dark,
    Light,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Hypothesis::Dark => "dark",
            Hypothesis::Light => "light",
        })
    }
}

/// Each sample is misread with probability ε; a misread t is reported as
/// μ_dark + μ_light − t, its mirror image about the decision threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorError<T> {
    pub epsilon: T,
    pub seed: u64,
}

impl<T: Real> DetectorError<T> {
    pub const DEFAULT_EPSILON: f64 = 0.03;

    pub fn new(epsilon: T, seed: u64) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return Err(Error::Domain { what: "detector error probability", value: to_f64(epsilon) });
        }
        Ok(Self { epsilon, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification<T> {
    pub decision: Hypothesis,
    /// (threshold − mean)/SE: positive values favour "dark".
    pub z_score: T,
    pub mean: T,
    pub std_error: T,
    pub threshold: T,
    pub n: usize,
    pub flipped: usize,
    /// Gap between the hypothesis means is at least three standard errors.
    pub distinguishable: bool,
}

/// Nearest-mean decision between the dark and light hypotheses. A sample
/// mean exactly at the threshold is classified as light.
pub fn classify_dark<T: Real>(
    samples: &[T],
    dark_mean: T,
    light_mean: T,
    detector: Option<DetectorError<T>>,
) -> Result<Classification<T>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(dark_mean < light_mean) {
        return Err(Error::InvalidConfig(format!(
            "dark mean {} must be below light mean {}",
            to_f64(dark_mean),
            to_f64(light_mean)
        )));
    }
    let mut observed = samples.to_vec();
    let mut flipped = 0;
    if let Some(det) = detector {
        let mut rng = ChaCha8Rng::seed_from_u64(det.seed);
        let eps = to_f64(det.epsilon);
        for t in observed.iter_mut() {
            if rng.random::<f64>() < eps {
                *t = dark_mean + light_mean - *t;
                flipped += 1;
            }
        }
    }
    let (mean, std_error) = mean_and_error(&observed);
    let threshold = (dark_mean + light_mean) / lit(2.0);
    let decision = if mean < threshold { Hypothesis::Dark } else { Hypothesis::Light };
    let diff = threshold - mean;
    let z_score = if std_error > T::zero() {
        diff / std_error
    } else if diff == T::zero() {
        T::zero()
    } else {
        diff.signum() * lit(f64::INFINITY)
    };
    Ok(Classification {
        decision,
        z_score,
        mean,
        std_error,
        threshold,
        n: observed.len(),
        flipped,
        distinguishable: light_mean - dark_mean >= lit::<T>(3.0) * std_error,
    })
}

/// Repeats sampling and classification for seeds `seed + i`, i < `runs`,
/// in parallel; the detector (if any) uses the same per-run seed offset by
/// `runs`.
pub fn seed_ensemble<T: Real + Send + Sync>(
    report: &EmissionReport<T>,
    n_trials: usize,
    seed: u64,
    runs: usize,
    dark_mean: T,
    light_mean: T,
    epsilon: Option<T>,
) -> Result<Vec<Classification<T>>> {
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let samples = sample_emission_times(report, n_trials, s);
            let detector = epsilon.map(|e| DetectorError::new(e, s.wrapping_add(runs as u64))).transpose()?;
            classify_dark(&samples.times, dark_mean, light_mean, detector)
        })
        .collect()
}

/// Largest |p(t) − κe^{−κt}| over the report grid.
pub fn exponential_deviation<T: Real>(report: &EmissionReport<T>, kappa: T) -> T {
    report
        .times
        .iter()
        .zip(&report.density)
        .map(|(t, p)| (*p - kappa * (-kappa * *t).exp()).abs())
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn singlet_amplitudes() {
        let s = singlet_state::<f64>();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(s.amplitudes().as_slice(), &[cre(0.0), cre(h), cre(-h), cre(0.0)]);
        assert!(s.inner(&AtomicState::triplet()).norm() < 1e-15);
    }

    #[test]
    fn four_atom_product() {
        let s = singlet_product::<f64>(&[(0, 1), (2, 3)], 4).unwrap();
        let nonzero: Vec<(usize, f64)> =
            s.amplitudes().iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(|(b, z)| (b, z.re)).collect();
        assert_eq!(nonzero, vec![(0b0101, 0.5), (0b0110, -0.5), (0b1001, -0.5), (0b1010, 0.5)]);
    }

    #[test]
    fn pairing_errors() {
        assert!(matches!(singlet_product::<f64>(&[(0, 1)], 3), Err(Error::InvalidConfig(_))));
        assert!(matches!(singlet_product::<f64>(&[(0, 1)], 4), Err(Error::BadPairing(2))));
        assert!(matches!(singlet_product::<f64>(&[(0, 1), (1, 2)], 4), Err(Error::BadPairing(1))));
        assert!(matches!(singlet_product::<f64>(&[(0, 4), (1, 2)], 4), Err(Error::BadPairing(4))));
        let empty = singlet_product::<f64>(&[], 0).unwrap();
        assert_eq!(empty.amplitudes().len(), 1);
    }

    #[test]
    fn d3_is_antisymmetric() {
        let v = multi_singlet_d3::<f64>();
        assert_relative_eq!(norm_sqr(&v), 1.0, epsilon = 1e-15);
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 6);
        let idx = |l: [usize; 3]| 9 * l[0] + 3 * l[1] + l[2];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let z = v[idx([a, b, c])];
                    assert!((z + v[idx([b, a, c])]).norm() < 1e-15);
                    assert!((z + v[idx([a, c, b])]).norm() < 1e-15);
                    assert!((z + v[idx([c, b, a])]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn darkness_residuals() {
        let g = 0.37;
        let s = is_dark(&singlet_state::<f64>(), &[g, g], 1e-12).unwrap();
        assert!(s.dark && s.absorption == 0.0 && s.emission == 0.0);
        let t = is_dark(&AtomicState::<f64>::triplet(), &[g, g], 1e-12).unwrap();
        assert!(!t.dark);
        assert_relative_eq!(t.absorption, g * 2f64.sqrt(), epsilon = 1e-15);
        let u = is_dark(&singlet_state::<f64>(), &[1.0, 0.25], 1e-12).unwrap();
        assert_relative_eq!(u.absorption, 0.75 / 2f64.sqrt(), epsilon = 1e-15);
        assert!(is_dark(&singlet_state::<f64>(), &[1.0], 1e-12).is_err());
    }

    #[test]
    fn classification_rules() {
        let c = classify_dark(&[1.5, 1.5], 1.0, 2.0, None).unwrap();
        assert_eq!(c.decision, Hypothesis::Light);
        assert_eq!(c.z_score, 0.0);
        let d = classify_dark(&[1.0, 1.2], 1.0, 2.0, None).unwrap();
        assert_eq!(d.decision, Hypothesis::Dark);
        assert!(d.z_score > 0.0);
        assert!(matches!(classify_dark::<f64>(&[], 1.0, 2.0, None), Err(Error::EmptySamples)));
        assert!(classify_dark(&[1.0], 2.0, 1.0, None).is_err());
        assert!(DetectorError::new(1.5, 0).is_err());
    }

    #[test]
    fn empty_cavity_density() {
        let cfg = DecayConfig::new(0.0, 0).with_kappa(1.0);
        let r = emission_density(&AtomicState::ground(0), &cfg).unwrap();
        assert!(exponential_deviation(&r, 1.0) < 1e-5);
        assert_relative_eq!(r.mean, 1.0, epsilon = 1e-4);
    }
}
