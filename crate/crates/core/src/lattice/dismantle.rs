use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

use super::{Lattice, Node};

/// An elimination order: removing the nodes front to back leaves a
/// sublattice after every step, one element smaller each time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DismantlingWitness {
    pub elimination: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dismantling {
    Dismantlable(DismantlingWitness),
    /// The greedy loop reached a non-empty sublattice with no removable node.
    Stuck {
        eliminated: Vec<Node>,
        residue: Vec<Node>,
    },
}

impl Dismantling {
    pub fn is_dismantlable(&self) -> bool {
        matches!(self, Dismantling::Dismantlable(_))
    }

    pub fn witness(&self) -> Option<&DismantlingWitness> {
        match self {
            Dismantling::Dismantlable(w) => Some(w),
            Dismantling::Stuck { .. } => None,
        }
    }
}

/// Nodes whose removal leaves the rest closed under meet and join, i.e. nodes
/// that are neither the meet nor the join of two other nodes.
pub fn removable_elements(lat: &Lattice) -> BitSet {
    let n = lat.len();
    let mut removable = BitSet::full(n);
    for a in 0..n {
        for b in a + 1..n {
            let m = lat.meet(a, b);
            if m != a && m != b {
                removable.remove(m);
            }
            let j = lat.join(a, b);
            if j != a && j != b {
                removable.remove(j);
            }
        }
    }
    removable
}

/// Greedy dismantling: repeatedly removes the lowest-indexed removable node.
///
/// Within the surviving sublattice a node is removable exactly when it has at
/// most one upper and at most one lower cover there, so the loop tracks the
/// covers of the survivors instead of rescanning all pairs. Removing `z` with
/// lower cover `a` and upper cover `b` can only create the new cover `a ⋖ b`.
pub fn dismantle(lat: &Lattice) -> Dismantling {
    let n = lat.len();
    let mut up: Vec<Vec<Node>> = lat.upper.clone();
    let mut down: Vec<Vec<Node>> = lat.lower.clone();
    let removable = |up: &[Vec<Node>], down: &[Vec<Node>], z: Node| up[z].len() <= 1 && down[z].len() <= 1;
    let mut ready: BTreeSet<Node> = (0..n).filter(|&z| removable(&up, &down, z)).collect();
    let mut alive = BitSet::full(n);
    let mut eliminated = Vec::with_capacity(n);

    while let Some(z) = ready.pop_first() {
        let a = down[z].first().copied();
        let b = up[z].first().copied();
        if let Some(a) = a {
            up[a].retain(|&v| v != z);
        }
        if let Some(b) = b {
            down[b].retain(|&v| v != z);
        }
        if let (Some(a), Some(b)) = (a, b) {
            if !up[a].iter().any(|&c| lat.leq(c, b)) {
                up[a].push(b);
                down[b].push(a);
            }
        }
        for v in [a, b].into_iter().flatten() {
            if removable(&up, &down, v) {
                ready.insert(v);
            } else {
                ready.remove(&v);
            }
        }
        alive.remove(z);
        eliminated.push(z);
    }

    if alive.is_empty() {
        Dismantling::Dismantlable(DismantlingWitness {
            elimination: eliminated,
        })
    } else {
        Dismantling::Stuck {
            eliminated,
            residue: alive.to_vec(),
        }
    }
}

/// Checks that every set of survivors is closed under meet and join.
///
/// With `pos[v]` the elimination step of `v`, the survivors after step `k`
/// are `{v : pos[v] >= k}`; all of them are closed exactly when every meet
/// and join is eliminated no earlier than its two arguments.
pub fn verify_dismantling_witness(lat: &Lattice, w: &DismantlingWitness) -> Result<bool> {
    let n = lat.len();
    if w.elimination.len() != n {
        return Err(Error::BadWitness);
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in w.elimination.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::BadWitness);
        }
        pos[v] = k;
    }
    for a in 0..n {
        for b in a + 1..n {
            let first = pos[a].min(pos[b]);
            if pos[lat.meet(a, b)] < first || pos[lat.join(a, b)] < first {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two incomparable removable nodes, if the lattice has them.
pub fn incomparable_removable_pair(lat: &Lattice) -> Option<(Node, Node)> {
    let r: Vec<Node> = removable_elements(lat).to_vec();
    r.iter().enumerate().find_map(|(i, &a)| {
        r[i + 1..]
            .iter()
            .find(|&&b| !lat.comparable(a, b))
            .map(|&b| (a, b))
    })
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

    /// Literal form of the witness condition: every suffix is closed.
    fn verify_by_suffixes(lat: &Lattice, order: &[Node]) -> bool {
        (0..=order.len()).all(|k| {
            let alive = &order[k..];
            alive.iter().all(|&a| {
                alive
                    .iter()
                    .all(|&b| alive.contains(&lat.meet(a, b)) && alive.contains(&lat.join(a, b)))
            })
        })
    }

    /// Removability by cover counts, the route the greedy loop uses.
    fn removable_by_covers(lat: &Lattice) -> BitSet {
        BitSet::from_indices(
            lat.len(),
            lat.nodes().filter(|&z| lat.upper_covers(z).len() <= 1 && lat.lower_covers(z).len() <= 1),
        )
    }

    #[test]
    fn chain_nodes_are_all_removable() {
        for n in 1..6 {
            let c = chain(n);
            assert_eq!(removable_elements(&c).len(), n);
        }
    }

    #[test]
    fn cube_bottom_is_not_removable() {
        let lat = lattice("Ab:2,2,2");
        let r = removable_elements(&lat);
        assert!(!r.contains(0));
        assert!(r.is_empty());
        assert!(!removable_elements(&cube()).contains(0));
    }

    #[test]
    fn q8_removable_nodes() {
        let lat = lattice("Q:8");
        assert_eq!(removable_elements(&lat).to_vec(), vec![0, 2, 3, 4]);
    }

    #[test]
    fn closure_and_cover_characterizations_agree() {
        for text in ["Q:8", "S:4", "A:5", "D:24", "Ab:2,2,2", "Ab:9,3", "Z:72", "M:3,3", "QD:32", "Ham:1", "SDP:7,3,2,2"] {
            let lat = lattice(text);
            assert_eq!(removable_elements(&lat), removable_by_covers(&lat), "{text}");
        }
        for lat in [pentagon(), diamond(), cube(), chain(4)] {
            assert_eq!(removable_elements(&lat), removable_by_covers(&lat));
        }
    }

    #[test]
    fn small_lattices_dismantle() {
        let lat = lattice("Z:12");
        let d = dismantle(&lat);
        let w = d.witness().expect("6 nodes");
        assert!(verify_dismantling_witness(&lat, w).unwrap());
        assert!(verify_by_suffixes(&lat, &w.elimination));
    }

    #[test]
    fn cube_is_stuck_immediately() {
        match dismantle(&lattice("Ab:2,2,2")) {
            Dismantling::Stuck { eliminated, residue } => {
                assert!(eliminated.is_empty());
                assert_eq!(residue.len(), 16);
            }
            other => panic!("{other:?}"),
        }
        assert!(!dismantle(&cube()).is_dismantlable());
    }

    #[test]
    fn a4_dismantles() {
        let lat = lattice("A:4");
        let w = dismantle(&lat).witness().cloned().expect("A4 is dismantlable");
        assert!(verify_dismantling_witness(&lat, &w).unwrap());
    }

    #[test]
    fn reversed_witness_fails_for_q8() {
        let lat = lattice("Q:8");
        let w = dismantle(&lat).witness().cloned().unwrap();
        assert_eq!(w.elimination, vec![0, 2, 3, 1, 4, 5]);
        let mut rev = w.clone();
        rev.elimination.reverse();
        assert!(!verify_dismantling_witness(&lat, &rev).unwrap());
        assert!(!verify_by_suffixes(&lat, &rev.elimination));
    }

    #[test]
    fn degenerate_lattices() {
        let single = chain(1);
        let w = dismantle(&single).witness().cloned().unwrap();
        assert_eq!(w.elimination, vec![0]);
        assert!(verify_dismantling_witness(&single, &w).unwrap());

        let empty = Lattice::from_leq(0, |_, _| true).unwrap();
        let w = dismantle(&empty).witness().cloned().unwrap();
        assert!(w.elimination.is_empty());
        assert!(verify_dismantling_witness(&empty, &w).unwrap());
    }

    #[test]
    fn witness_must_be_a_permutation() {
        let lat = chain(3);
        let bad = |v: Vec<Node>| verify_dismantling_witness(&lat, &DismantlingWitness { elimination: v });
        assert_eq!(bad(vec![0, 1]), Err(Error::BadWitness));
        assert_eq!(bad(vec![0, 1, 1]), Err(Error::BadWitness));
        assert_eq!(bad(vec![0, 1, 7]), Err(Error::BadWitness));
    }

    #[test]
    fn pair_witness_matches_suffix_check_on_all_orders() {
        // Every permutation of the pentagon and the diamond.
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for lat in [pentagon(), diamond()] {
            for order in perms(5) {
                let w = DismantlingWitness { elimination: order.clone() };
                assert_eq!(verify_dismantling_witness(&lat, &w).unwrap(), verify_by_suffixes(&lat, &order));
            }
        }
    }

    #[test]
    fn non_chain_has_incomparable_removable_pair() {
        let lat = lattice("Q:8");
        assert_eq!(incomparable_removable_pair(&lat), Some((2, 3)));
        assert_eq!(incomparable_removable_pair(&chain(4)), None);
    }
}
