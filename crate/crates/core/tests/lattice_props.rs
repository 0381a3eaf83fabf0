use dismantle::lattice::{
    brute_force_dismantlable, dismantle, find_boolean_cube, find_crown, lattice_laws, removable_elements,
    validate_crown, verify_dismantling_witness, CrownSearch, Dismantling, DismantlingWitness, Lattice,
};
use proptest::prelude::*;

/// Subsets of a four-point set closed under intersection, plus the full set.
fn closure_system(seeds: &[u8]) -> Vec<u8> {
    let mut sets: Vec<u8> = vec![0b1111];
    for &s in seeds {
        sets.push(s & 0b1111);
    }
    loop {
        let mut grown = false;
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                let m = sets[i] & sets[j];
                if !sets.contains(&m) {
                    sets.push(m);
                    grown = true;
                }
            }
        }
        if !grown {
            break;
        }
    }
    sets.sort_unstable();
    sets.dedup();
    sets
}

fn lattice_of(sets: &[u8]) -> Lattice {
    Lattice::from_leq(sets.len(), |a, b| sets[a] & sets[b] == sets[a]).unwrap()
}

fn small_lattice() -> impl Strategy<Value = Lattice> {
    prop::collection::vec(any::<u8>(), 0..7)
        .prop_map(|seeds| closure_system(&seeds))
        .prop_filter("at most 12 nodes", |sets| sets.len() <= 12)
        .prop_map(|sets| lattice_of(&sets))
}

fn survivors_closed(lat: &Lattice, order: &[usize]) -> bool {
    (0..=order.len()).all(|k| {
        let alive = &order[k..];
        alive
            .iter()
            .all(|&a| alive.iter().all(|&b| alive.contains(&lat.meet(a, b)) && alive.contains(&lat.join(a, b))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn greedy_matches_exhaustive_search(lat in small_lattice()) {
        prop_assert_eq!(dismantle(&lat).is_dismantlable(), brute_force_dismantlable(&lat).unwrap());
    }

    #[test]
    fn greedy_witnesses_verify(lat in small_lattice()) {
        match dismantle(&lat) {
            Dismantling::Dismantlable(w) => {
                prop_assert!(verify_dismantling_witness(&lat, &w).unwrap());
                prop_assert!(survivors_closed(&lat, &w.elimination));
            }
            Dismantling::Stuck { residue, eliminated } => {
                prop_assert_eq!(residue.len() + eliminated.len(), lat.len());
                let sub = lat.sublattice(&residue).unwrap();
                prop_assert!(removable_elements(&sub).is_empty());
            }
        }
    }

    #[test]
    fn dismantlable_iff_crown_free(lat in small_lattice()) {
        let found = find_crown(&lat, 12).unwrap();
        if let CrownSearch::Found(c) = &found {
            prop_assert!(validate_crown(&lat, c));
        }
        prop_assert_eq!(dismantle(&lat).is_dismantlable(), found.crown().is_none());
    }

    #[test]
    fn modular_lattices_fail_exactly_with_a_cube(lat in small_lattice()) {
        if lattice_laws(&lat).modular {
            let stuck = !dismantle(&lat).is_dismantlable();
            let crown6 = find_crown(&lat, 6).unwrap().crown().is_some();
            prop_assert_eq!(stuck, crown6);
            prop_assert_eq!(stuck, find_boolean_cube(&lat).is_some());
        }
    }

    #[test]
    fn lattice_identities(lat in small_lattice()) {
        for a in lat.nodes() {
            for b in lat.nodes() {
                let m = lat.meet(a, b);
                let j = lat.join(a, b);
                prop_assert_eq!(m, lat.meet(b, a));
                prop_assert_eq!(lat.join(a, m), a);
                prop_assert_eq!(lat.meet(a, j), a);
                prop_assert_eq!(lat.leq(a, b), m == a);
            }
        }
    }

    #[test]
    fn shuffled_orders_verify_like_the_definition(lat in small_lattice(), seed in any::<u64>()) {
        let mut order: Vec<usize> = lat.nodes().collect();
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let w = DismantlingWitness { elimination: order.clone() };
        prop_assert_eq!(verify_dismantling_witness(&lat, &w).unwrap(), survivors_closed(&lat, &order));
    }

    #[test]
    fn seven_nodes_or_fewer_always_dismantle(lat in small_lattice()) {
        if lat.len() <= 7 {
            prop_assert!(dismantle(&lat).is_dismantlable());
        }
    }
}

proptest! {
    #[test]
    fn semimodular_criterion_matches_modular_law(lat in small_lattice()) {
        prop_assert_eq!(lattice_laws(&lat).modular, dismantle::lattice::modular_violation(&lat).is_none());
    }
}
