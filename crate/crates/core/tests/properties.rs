use proptest::prelude::*;
use tchlab::evolution::{evolve_const, StateVector};
use tchlab::hamiltonian::{build_tch, excitation_number, HopSpec};
use tchlab::hilbert::{enumerate_basis, state_index, NetworkConfig};
use tchlab::scalar::max_abs_diff;

fn network() -> impl Strategy<Value = (NetworkConfig<f64>, Vec<HopSpec<f64>>)> {
    (prop::collection::vec(0usize..=2, 1..=3), 1usize..=2, 0.5f64..2.0)
        .prop_flat_map(|(atoms, max_photons, omega)| {
            let n_atoms: usize = atoms.iter().sum();
            let n_cav = atoms.len();
            let pairs: Vec<(usize, usize)> = (0..n_cav).flat_map(|i| (i + 1..n_cav).map(move |j| (i, j))).collect();
            (
                Just(atoms),
                Just(max_photons),
                Just(omega),
                prop::collection::vec(0.0f64..1.0, n_atoms),
                prop::collection::vec((0.0f64..1.0, -3.0f64..3.0, any::<bool>()), pairs.len()),
                Just(pairs),
            )
        })
        .prop_map(|(atoms, max_photons, omega, g, hop_params, pairs)| {
            let cfg = NetworkConfig::new(atoms, max_photons, g, omega).unwrap();
            let hops = pairs
                .into_iter()
                .zip(hop_params)
                .filter(|(_, (_, _, keep))| *keep)
                .map(|((i, j), (nu, phi, _))| HopSpec::new(i, j, nu).with_phase(phi))
                .collect();
            (cfg, hops)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sectors_partition_the_product_space((cfg, _) in network()) {
        let total: usize = (0..=cfg.max_excitations())
            .map(|s| enumerate_basis(cfg.clone(), s).unwrap().dim())
            .sum();
        let expected = (cfg.max_photons + 1).pow(cfg.n_cavities as u32) * (1usize << cfg.total_atoms());
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn enumeration_is_deterministic_and_indexable((cfg, _) in network(), pick in 0usize..100) {
        let sector = pick % (cfg.max_excitations() + 1);
        let a = enumerate_basis(cfg.clone(), sector).unwrap();
        let b = enumerate_basis(cfg.clone(), sector).unwrap();
        prop_assert_eq!(a.states(), b.states());
        for (k, s) in a.states().iter().enumerate() {
            prop_assert_eq!(s.total_excitations(), sector);
            prop_assert_eq!(state_index(&a, s).unwrap(), k);
        }
        for w in a.states().windows(2) {
            let key = |s: &tchlab::hilbert::BasisState| (s.photons.clone(), s.atoms.clone());
            prop_assert!(key(&w[0]) > key(&w[1]));
        }
    }

    #[test]
    fn network_hamiltonian_is_hermitian_and_conserving((cfg, hops) in network(), pick in 0usize..100) {
        let sector = pick % (cfg.max_excitations() + 1);
        let space = enumerate_basis(cfg, sector).unwrap();
        let h = build_tch(&space, &hops).unwrap();
        prop_assert!(h.hermiticity_defect() < 1e-12);
        let n = excitation_number(&space);
        prop_assert!(max_abs_diff(&h.commutator(&n), &nalgebra::DMatrix::zeros(space.dim(), space.dim())) < 1e-12);
    }

    #[test]
    fn exact_evolution_composes((cfg, hops) in network(), pick in 0usize..100, t1 in 0.0f64..20.0, t2 in 0.0f64..20.0) {
        let sector = pick % (cfg.max_excitations() + 1);
        let space = enumerate_basis(cfg, sector).unwrap();
        let h = build_tch(&space, &hops).unwrap();
        let psi = StateVector::basis(space.clone(), pick % space.dim());
        let once = evolve_const(&h, &psi, t1 + t2).unwrap();
        let twice = evolve_const(&h, &evolve_const(&h, &psi, t1).unwrap(), t2).unwrap();
        prop_assert!((once.amplitudes - twice.amplitudes.clone()).norm() < 1e-10);
        prop_assert!((twice.norm_sqr() - 1.0).abs() < 1e-8);
    }
}
