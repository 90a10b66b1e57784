use approx::assert_relative_eq;
use tchlab::hamiltonian::build_tch;
use tchlab::linalg::HermitianEigen;
use tchlab::scalar::max_abs_diff;
use tchlab::walk::*;

#[test]
fn network_realises_free_hamiltonian() {
    for n in [2usize, 5, 16] {
        let h = free_hamiltonian::<f64>(n, 0.8).unwrap();
        let net = coupling_network(&h).unwrap();
        let omega = net.diagonal[0];
        assert!(net.diagonal.iter().all(|d| (d - omega).abs() < 1e-12));
        let space = walk_space(n, omega).unwrap();
        let built = build_tch(&space, &net.hops()).unwrap();
        assert!(max_abs_diff(&built.matrix, &h) < 1e-12);
    }
}

#[test]
fn momentum_spectrum() {
    for n in [2usize, 8, 64] {
        let p = momentum_operator::<f64>(n).unwrap();
        let eig = HermitianEigen::new(&p).sorted_values();
        for (a, (e, v)) in eig.iter().zip(momentum_values::<f64>(n)).enumerate() {
            assert!((e - v).abs() < 1e-8, "N={n} a={a}: {e} vs {v}");
            assert_relative_eq!(v, (n as f64).sqrt() * (a as f64 / n as f64 - 0.5), epsilon = 1e-12);
        }
    }
}

#[test]
fn free_hamiltonian_commutes_with_momentum() {
    let p = momentum_operator::<f64>(32).unwrap();
    let h = free_hamiltonian::<f64>(32, 1.7).unwrap();
    assert!(max_abs_diff(&(&p * &h), &(&h * &p)) < 1e-10);
    let expected = (&p * &p).map(|z| z / (2.0 * 1.7));
    assert!(max_abs_diff(&h, &expected) < 1e-10);
}

#[test]
fn qft_unitarity() {
    for n in [2usize, 8, 64, 128] {
        let f = qft_matrix::<f64>(n);
        let prod = f.adjoint() * &f;
        assert!(max_abs_diff(&prod, &nalgebra::DMatrix::identity(n, n)) < 1e-10);
    }
}

#[test]
fn coupling_decays_with_distance() {
    let net = coupling_network(&free_hamiltonian::<f64>(128, 1.0).unwrap()).unwrap();
    let profile = net.distance_profile();
    let half: Vec<_> = profile.iter().filter(|d| d.distance <= 64).collect();
    assert_eq!(half.len(), 64);
    assert!(half.windows(2).all(|w| w[1].mean_r <= w[0].mean_r));
    for d in &profile {
        assert_relative_eq!(d.mean_r, d.max_r, epsilon = 1e-12);
        assert_relative_eq!(profile[127 - d.distance].mean_r, d.mean_r, epsilon = 1e-12);
    }
}

#[test]
fn default_walk_invariants() {
    let report = simulate_walk(&WalkConfig::new(128, 1.0f64)).unwrap();
    assert!(report.momentum_drift < 1e-10);
    assert!(report.norm_drift < 1e-10);
    assert!((report.variance_exponent - 2.0).abs() < 0.05);
    for psi in &report.amplitudes {
        for q in 1..128 {
            assert!((psi[q] - psi[128 - q]).norm() < 1e-12);
        }
    }
    let exp = report.to_experiment_report().unwrap();
    assert_eq!(exp.table("walk_amplitude").unwrap().rows.len(), 128 * 101);
    assert_eq!(exp.table("kernel").unwrap().rows.len(), 128 * 100);
    assert_eq!(exp.table("network").unwrap().rows.len(), 128 * 127 / 2);
}

#[test]
fn heavier_particle_spreads_slower() {
    let light = simulate_walk(&WalkConfig { t_max: 0.5, ..WalkConfig::new(64, 1.0) }).unwrap();
    let heavy = simulate_walk(&WalkConfig { t_max: 0.5, ..WalkConfig::new(64, 4.0) }).unwrap();
    let (vl, vh) = (light.variances.last().unwrap(), heavy.variances.last().unwrap());
    assert_relative_eq!(vl / vh, 16.0, max_relative = 1e-3);
}
