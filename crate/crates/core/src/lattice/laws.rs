use serde::{Deserialize, Serialize};

use super::{Lattice, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeLaws {
    pub modular: bool,
    pub distributive: bool,
}

/// Decides modularity through semimodularity and distributivity by a triple
/// scan. A non-modular lattice is reported non-distributive without a scan.
pub fn lattice_laws(lat: &Lattice) -> LatticeLaws {
    let modular = is_semimodular(lat, true) && is_semimodular(lat, false);
    let distributive = modular && distributive_violation(lat).is_none();
    LatticeLaws { modular, distributive }
}

/// Upper semimodularity: two distinct upper covers of `u` are both covered by
/// their join. With `upper == false`, the dual condition on lower covers.
///
/// A finite lattice is modular exactly when it is semimodular both ways, so
/// this needs only one join or meet per pair of covers of a common node.
fn is_semimodular(lat: &Lattice, upper: bool) -> bool {
    lat.nodes().all(|u| {
        let covers = if upper { lat.upper_covers(u) } else { lat.lower_covers(u) };
        covers.iter().enumerate().all(|(i, &p)| {
            covers[i + 1..].iter().all(|&q| {
                if upper {
                    let j = lat.join(p, q);
                    lat.upper_covers(p).contains(&j) && lat.upper_covers(q).contains(&j)
                } else {
                    let m = lat.meet(p, q);
                    lat.lower_covers(p).contains(&m) && lat.lower_covers(q).contains(&m)
                }
            })
        })
    })
}

/// `(a, b, c)` with `a <= c` and `a ∨ (b ∧ c) != (a ∨ b) ∧ c`, by direct scan.
pub fn modular_violation(lat: &Lattice) -> Option<(Node, Node, Node)> {
    for a in lat.nodes() {
        for c in lat.up_set(a).iter() {
            for b in lat.nodes() {
                if lat.join(a, lat.meet(b, c)) != lat.meet(lat.join(a, b), c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// `(a, b, c)` with `a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)`.
///
/// Triples are visited by increasing largest index, so large lattices with a
/// violation among their low nodes fail fast.
pub fn distributive_violation(lat: &Lattice) -> Option<(Node, Node, Node)> {
    let fails = |a: Node, b: Node, c: Node| lat.meet(a, lat.join(b, c)) != lat.join(lat.meet(a, b), lat.meet(a, c));
    for m in lat.nodes() {
        for b in 0..m {
            for a in 0..=m {
                if fails(a, b, m) {
                    return Some((a, b, m));
                }
            }
            for c in b + 1..m {
                if fails(m, b, c) {
                    return Some((m, b, c));
                }
            }
        }
    }
    None
}

/// Coatoms `a < b < c` (by index) of an eight-element Boolean sublattice.
///
/// Cubes generated by three upper covers of one node are tried first; that
/// finds a cube whenever one exists in a modular lattice. Otherwise every
/// incomparable pair is extended by a third coatom below their join.
pub fn find_boolean_cube(lat: &Lattice) -> Option<[Node; 3]> {
    for u in lat.nodes() {
        let covers = lat.upper_covers(u);
        for (i, &p) in covers.iter().enumerate() {
            for (j, &q) in covers.iter().enumerate().skip(i + 1) {
                for &r in &covers[j + 1..] {
                    let mut t = [lat.join(p, q), lat.join(p, r), lat.join(q, r)];
                    t.sort_unstable();
                    if is_cube(lat, t) {
                        return Some(t);
                    }
                }
            }
        }
    }
    for a in lat.nodes() {
        let up_a = lat.up_set(a).into_owned();
        let down_a = lat.down_set(a).into_owned();
        for b in a + 1..lat.len() {
            if up_a.contains(b) || down_a.contains(b) {
                continue;
            }
            let mut cands = lat.down_set(lat.join(a, b)).into_owned();
            cands.difference_with(&up_a);
            cands.difference_with(&down_a);
            cands.difference_with(&lat.up_set(b));
            cands.difference_with(&lat.down_set(b));
            for c in cands.iter().filter(|&c| c > b) {
                if is_cube(lat, [a, b, c]) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Whether `T ↦ ⋀T` over subsets `T` of the three coatoms is a lattice
/// embedding of the eight-element Boolean algebra.
pub fn is_cube(lat: &Lattice, coatoms: [Node; 3]) -> bool {
    let [a, b, c] = coatoms;
    let top = lat.join(lat.join(a, b), c);
    let mut el = [top; 8];
    for mask in 1..8usize {
        let mut m = top;
        for (bit, &x) in coatoms.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m = lat.meet(m, x);
            }
        }
        el[mask] = m;
    }
    for i in 0..8 {
        for j in i + 1..8 {
            if el[i] == el[j] {
                return false;
            }
            if lat.meet(el[i], el[j]) != el[i | j] || lat.join(el[i], el[j]) != el[i & j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::group::{build_group, parse_spec};
    use crate::lattice::build_lattice;

    fn lattice(text: &str) -> Lattice {
        build_lattice(&build_group(&parse_spec(text).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn pentagon_is_not_modular() {
        let laws = lattice_laws(&pentagon());
        assert!(!laws.modular && !laws.distributive);
        assert!(modular_violation(&pentagon()).is_some());
        assert!(modular_violation(&diamond()).is_none());
    }

    #[test]
    fn diamond_is_modular_not_distributive() {
        let laws = lattice_laws(&diamond());
        assert!(laws.modular && !laws.distributive);
    }

    #[test]
    fn chains_and_cube_are_distributive() {
        for lat in [chain(5), cube(), lattice("Z:30")] {
            assert_eq!(lattice_laws(&lat), LatticeLaws { modular: true, distributive: true });
        }
    }

    #[test]
    fn group_lattices() {
        // Abelian and Hamiltonian groups have modular lattices.
        assert!(lattice_laws(&lattice("Ab:4,2")).modular);
        assert!(lattice_laws(&lattice("Q:8")).modular);
        assert!(!lattice_laws(&lattice("Ab:2,2")).distributive);
        assert!(!lattice_laws(&lattice("S:4")).modular);
        assert!(lattice_laws(&lattice("M:2,4")).modular);
    }

    #[test]
    fn semimodular_test_matches_direct_scan() {
        for text in ["S:4", "A:4", "D:8", "Q:16", "Ab:4,2", "Ab:2,2,2", "Ham:1", "M:3,3", "QD:16", "SDP:7,3,2,2", "D:18"] {
            let lat = lattice(text);
            assert_eq!(lattice_laws(&lat).modular, modular_violation(&lat).is_none(), "{text}");
        }
    }

    #[test]
    fn cube_detection() {
        assert_eq!(find_boolean_cube(&cube()), Some([3, 5, 6]));
        assert!(find_boolean_cube(&diamond()).is_none());
        assert!(find_boolean_cube(&chain(8)).is_none());
        let lat = lattice("Ab:2,2,2");
        let t = find_boolean_cube(&lat).unwrap();
        assert!(t.iter().all(|&v| lat.subgroup(v).unwrap().order() == 4));
        assert!(find_boolean_cube(&lattice("Ab:4,2")).is_none());
        assert!(find_boolean_cube(&lattice("Z:30")).is_some());
        assert!(find_boolean_cube(&lattice("Z:12")).is_none());
    }

    #[test]
    fn finds_cube_in_non_modular_lattice() {
        // Cube with one edge subdivided: bottom 0, atoms 1 2 3, 4 = 1∨2,
        // 5 = 1∨3, 6 = 2∨3, top 7, and 8 inserted between 1 and 4.
        let lat = Lattice::from_relations(
            9,
            &[(0, 1), (0, 2), (0, 3), (1, 8), (8, 4), (2, 4), (1, 5), (3, 5), (2, 6), (3, 6), (4, 7), (5, 7), (6, 7)],
        )
        .unwrap();
        assert!(!lattice_laws(&lat).modular);
        assert_eq!(find_boolean_cube(&lat), Some([4, 5, 6]));
    }
}
