use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbt::certificate::Certificate;
use rbt::contraction::{contract, find_matching, Direction};
use rbt::engine::{solve, Outcome};
use rbt::oracle::verify_two_factor;
use rbt::rewiring::{switch, AntiCycle};
use rbt::tournament::{random_regular, shuffle_sides, RegularBipartiteTournament};

fn instance(k: usize, seed: u64) -> RegularBipartiteTournament {
    shuffle_sides(&random_regular(k, seed), &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(k in 1usize..=10, seed in any::<u64>()) {
        let d = instance(k, seed);
        let back = RegularBipartiteTournament::parse(&d.to_text()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn every_vertex_has_out_degree_k(k in 1usize..=10, seed in any::<u64>()) {
        let d = instance(k, seed);
        let g = d.digraph();
        for v in 0..4 * k {
            prop_assert_eq!(g.out_set(v).count_ones() as usize, k);
            prop_assert_eq!(g.in_set(v).count_ones() as usize, k);
        }
    }

    #[test]
    fn solver_output_verifies_and_survives_json(k in 2usize..=7, seed in any::<u64>(), p_off in 0usize..12) {
        let d = instance(k, seed);
        let p = 2 + p_off % (2 * k - 3).max(1);
        prop_assume!(p <= 2 * k - 2);
        match solve(&d, p).unwrap() {
            Outcome::Solved(cert) => {
                prop_assert!(verify_two_factor(&d, &cert).is_ok());
                let back = Certificate::from_json(&cert.to_json()).unwrap();
                prop_assert!(verify_two_factor(&d, &back).is_ok());
                prop_assert_eq!(back, cert);
            }
            Outcome::Excluded => prop_assert!(k <= 2),
        }
    }

    #[test]
    fn tampered_certificates_are_rejected(k in 3usize..=6, seed in any::<u64>(), i in 0usize..64, j in 0usize..64) {
        let d = instance(k, seed);
        let Outcome::Solved(mut cert) = solve(&d, 3).unwrap() else { return Ok(()) };
        // moving one vertex across the two cycles changes both lengths
        let a = i % cert.cycle_2p.len();
        let v = cert.cycle_2p.remove(a);
        let b = j % (cert.cycle_rest.len() + 1);
        cert.cycle_rest.insert(b, v);
        prop_assert!(verify_two_factor(&d, &cert).is_err());
    }

    #[test]
    fn switching_a_digon_keeps_a_perfect_matching(k in 2usize..=8, seed in any::<u64>(), up in any::<bool>()) {
        let d = instance(k, seed);
        let dir = if up { Direction::Up } else { Direction::Down };
        let cd = contract(&d, &find_matching(&d, dir)).unwrap();
        let g = cd.digraph();
        let vs: Vec<usize> = (0..64).filter(|&v| cd.vertices() >> v & 1 == 1).collect();
        let anti_digon = vs.iter().flat_map(|&a| vs.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a < b && !g.has_arc(a, b) && !g.has_arc(b, a));
        let Some((a, b)) = anti_digon else { return Ok(()) };
        let m2 = switch(&cd, &AntiCycle::new(&cd, vec![a, b]).unwrap());
        prop_assert!(m2.validate(&d).is_ok());
        prop_assert_eq!(m2.partner(a), cd.matching().partner(b));
        prop_assert_eq!(m2.partner(b), cd.matching().partner(a));
    }
}
