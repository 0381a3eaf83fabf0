//! Finite lattices: subgroup lattices and small hand-built ones.
//!
//! Lattices with at most [`DENSE_LIMIT`] nodes keep their order relation as
//! bitset rows and their meet/join operations as full tables. Larger subgroup
//! lattices (elementary abelian 2-groups of rank 7 have 29212 subgroups) answer
//! the same queries from the subgroup bitsets instead.

mod crown;
mod dismantle;
mod laws;
mod oracle;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::subgroups::{self, SubgroupSet, DEFAULT_SUBGROUP_LIMIT};

pub use crown::{
    find_crown, find_crown_within, validate_crown, Crown, CrownSearch, SearchOptions, DEFAULT_CROWN_BUDGET,
};
pub use dismantle::{
    dismantle, incomparable_removable_pair, removable_elements, verify_dismantling_witness, Dismantling,
    DismantlingWitness,
};
pub use laws::{
    distributive_violation, find_boolean_cube, is_cube, lattice_laws, modular_violation, LatticeLaws,
};
pub use oracle::{brute_force_dismantlable, brute_force_dismantlable_with_cap, ORACLE_CAP};

/// Largest node count for which order rows and meet/join tables are stored.
pub const DENSE_LIMIT: usize = 2048;

pub type Node = usize;

struct Dense {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
}

struct SubgroupNodes {
    group: Arc<Group>,
    sets: Vec<SubgroupSet>,
    gens: Vec<Vec<Elem>>,
    index: HashMap<BitSet, Node>,
}

/// A finite lattice with its Hasse diagram.
pub struct Lattice {
    len: usize,
    bottom: Option<Node>,
    top: Option<Node>,
    upper: Vec<Vec<Node>>,
    lower: Vec<Vec<Node>>,
    labels: Vec<String>,
    dense: Option<Dense>,
    subgroups: Option<SubgroupNodes>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice")
            .field("len", &self.len)
            .field("upper_covers", &self.upper)
            .finish_non_exhaustive()
    }
}

/// Builds `L(g)` under the default subgroup limit.
pub fn build_lattice(g: &Group) -> Result<Lattice> {
    build_lattice_with_limit(g, DEFAULT_SUBGROUP_LIMIT)
}

pub fn build_lattice_with_limit(g: &Group, limit: usize) -> Result<Lattice> {
    let e = subgroups::enumerate(g, limit)?;
    let n = e.subgroups.len();

    let mut upper = vec![Vec::new(); n];
    let mut lower = vec![Vec::new(); n];
    for (h, over) in e.overgroups.iter().enumerate() {
        for &j in over {
            let minimal = over
                .iter()
                .all(|&k| k == j || !e.subgroups[k].is_subset(&e.subgroups[j]));
            if minimal {
                upper[h].push(j);
                lower[j].push(h);
            }
        }
    }
    for l in &mut lower {
        l.sort_unstable();
    }

    let gens: Vec<Vec<Elem>> = e
        .subgroups
        .iter()
        .map(|h| subgroups::small_generating_set(g, h))
        .collect();
    let labels = e.subgroups.iter().map(|h| h.describe(g)).collect();
    let index = e
        .subgroups
        .iter()
        .enumerate()
        .map(|(i, h)| (h.bits().clone(), i))
        .collect();

    let dense = (n <= DENSE_LIMIT).then(|| {
        let mut up = vec![BitSet::new(n); n];
        let mut down = vec![BitSet::new(n); n];
        for a in 0..n {
            for b in a..n {
                if e.subgroups[a].is_subset(&e.subgroups[b]) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        // Nodes are sorted by order, so the greatest common lower bound is the
        // last one and the least common upper bound the first one.
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let m = down[a].intersection(&down[b]).last().expect("bottom is below both") as u32;
                let j = up[a].intersection(&up[b]).first().expect("top is above both") as u32;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        Dense { up, down, meet, join }
    });

    Ok(Lattice {
        len: n,
        bottom: Some(0),
        top: Some(n - 1),
        upper,
        lower,
        labels,
        dense,
        subgroups: Some(SubgroupNodes {
            group: Arc::new(g.clone()),
            sets: e.subgroups,
            gens,
            index,
        }),
    })
}

impl Lattice {
    /// Builds a lattice from an order relation on `0..n`, checking that it is
    /// a partial order in which every pair has a meet and a join.
    pub fn from_leq(n: usize, leq: impl Fn(Node, Node) -> bool) -> Result<Self> {
        if n > DENSE_LIMIT {
            return Err(Error::InvalidLattice(format!("{n} nodes exceeds {DENSE_LIMIT}")));
        }
        let mut up = vec![BitSet::new(n); n];
        let mut down = vec![BitSet::new(n); n];
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::InvalidLattice(format!("{a} <= {a} fails")));
            }
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(Error::InvalidLattice(format!("{a} and {b} are mutually below")));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::InvalidLattice(format!("order is not transitive at {a} <= {b}")));
                }
            }
        }
        let key_down: Vec<usize> = down.iter().map(BitSet::len).collect();
        let key_up: Vec<usize> = up.iter().map(BitSet::len).collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(&down[b]);
                let m = lower
                    .iter()
                    .max_by_key(|&c| key_down[c])
                    .filter(|&c| lower.is_subset(&down[c]))
                    .ok_or_else(|| Error::InvalidLattice(format!("{a} and {b} have no meet")))?;
                let upper = up[a].intersection(&up[b]);
                let j = upper
                    .iter()
                    .max_by_key(|&c| key_up[c])
                    .filter(|&c| upper.is_subset(&up[c]))
                    .ok_or_else(|| Error::InvalidLattice(format!("{a} and {b} have no join")))?;
                for (x, y) in [(a, b), (b, a)] {
                    meet[x * n + y] = m as u32;
                    join[x * n + y] = j as u32;
                }
            }
        }
        let bottom = (0..n).find(|&a| up[a].len() == n);
        let top = (0..n).find(|&a| down[a].len() == n);
        let (upper, lower) = transitive_reduction(&up, &down);
        Ok(Lattice {
            len: n,
            bottom,
            top,
            upper,
            lower,
            labels: (0..n).map(|i| i.to_string()).collect(),
            dense: Some(Dense { up, down, meet, join }),
            subgroups: None,
        })
    }

    /// Builds a lattice from the strict relations `a < b` listed in `pairs`,
    /// closing them transitively.
    pub fn from_relations(n: usize, pairs: &[(Node, Node)]) -> Result<Self> {
        let mut reach = vec![BitSet::new(n); n];
        for a in 0..n {
            reach[a].insert(a);
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidLattice(format!("relation ({a}, {b}) out of range")));
            }
            reach[a].insert(b);
        }
        // Warshall
        for k in 0..n {
            let row_k = reach[k].clone();
            for row in reach.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_leq(n, |a, b| reach[a].contains(b))
    }

    /// The induced sub-poset on `nodes`, which must be closed under meet and
    /// join. Labels carry over; node `i` of the result is `nodes[i]`.
    pub fn sublattice(&self, nodes: &[Node]) -> Result<Self> {
        let set = BitSet::from_indices(self.len, nodes.iter().copied());
        for &a in nodes {
            for &b in nodes {
                if !set.contains(self.meet(a, b)) || !set.contains(self.join(a, b)) {
                    return Err(Error::InvalidLattice(format!(
                        "nodes are not closed under meet/join at ({a}, {b})"
                    )));
                }
            }
        }
        let mut sub = Self::from_leq(nodes.len(), |i, j| self.leq(nodes[i], nodes[j]))?;
        sub.labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        Ok(sub)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bottom(&self) -> Option<Node> {
        self.bottom
    }

    pub fn top(&self) -> Option<Node> {
        self.top
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.len
    }

    /// Whether meet and join are served from precomputed tables.
    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    #[inline]
    pub fn leq(&self, a: Node, b: Node) -> bool {
        match (&self.dense, &self.subgroups) {
            (Some(d), _) => d.up[a].contains(b),
            (None, Some(s)) => s.sets[a].is_subset(&s.sets[b]),
            (None, None) => unreachable!("lattice without an order"),
        }
    }

    pub fn comparable(&self, a: Node, b: Node) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn meet(&self, a: Node, b: Node) -> Node {
        match (&self.dense, &self.subgroups) {
            (Some(d), _) => d.meet[a * self.len + b] as Node,
            (None, Some(s)) => s.index[s.sets[a].intersection(&s.sets[b]).bits()],
            (None, None) => unreachable!(),
        }
    }

    pub fn join(&self, a: Node, b: Node) -> Node {
        match (&self.dense, &self.subgroups) {
            (Some(d), _) => d.join[a * self.len + b] as Node,
            (None, Some(s)) => {
                let j = subgroups::join_with(&s.group, &s.sets[a], &s.gens[a], &s.gens[b]);
                s.index[j.bits()]
            }
            (None, None) => unreachable!(),
        }
    }

    /// Nodes `b` with `a <= b`.
    pub fn up_set(&self, a: Node) -> Cow<'_, BitSet> {
        match (&self.dense, &self.subgroups) {
            (Some(d), _) => Cow::Borrowed(&d.up[a]),
            (None, Some(s)) => Cow::Owned(BitSet::from_indices(
                self.len,
                (a..self.len).filter(|&b| s.sets[a].is_subset(&s.sets[b])),
            )),
            (None, None) => unreachable!(),
        }
    }

    /// Nodes `b` with `b <= a`.
    pub fn down_set(&self, a: Node) -> Cow<'_, BitSet> {
        match (&self.dense, &self.subgroups) {
            (Some(d), _) => Cow::Borrowed(&d.down[a]),
            (None, Some(s)) => Cow::Owned(BitSet::from_indices(
                self.len,
                (0..=a).filter(|&b| s.sets[b].is_subset(&s.sets[a])),
            )),
            (None, None) => unreachable!(),
        }
    }

    pub fn upper_covers(&self, a: Node) -> &[Node] {
        &self.upper[a]
    }

    pub fn lower_covers(&self, a: Node) -> &[Node] {
        &self.lower[a]
    }

    pub fn label(&self, a: Node) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The subgroup at `node`, for subgroup lattices.
    pub fn subgroup(&self, node: Node) -> Option<&SubgroupSet> {
        self.subgroups.as_ref().and_then(|s| s.sets.get(node))
    }

    pub fn node_of(&self, h: &SubgroupSet) -> Option<Node> {
        self.subgroups.as_ref()?.index.get(h.bits()).copied()
    }

    /// The ambient group, for subgroup lattices.
    pub fn group(&self) -> Option<&Group> {
        self.subgroups.as_ref().map(|s| s.group.as_ref())
    }

    pub fn is_chain(&self) -> bool {
        self.upper.iter().all(|u| u.len() <= 1)
    }

    pub fn cover_count(&self) -> usize {
        self.upper.iter().map(Vec::len).sum()
    }

    /// Checks idempotence, commutativity and absorption on all pairs, and that
    /// meet/join are bounds consistent with the order.
    pub fn check_laws(&self) -> Result<()> {
        for a in self.nodes() {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(Error::InvalidLattice(format!("idempotence fails at {a}")));
            }
            for b in self.nodes() {
                let (m, j) = (self.meet(a, b), self.join(a, b));
                if m != self.meet(b, a) || j != self.join(b, a) {
                    return Err(Error::InvalidLattice(format!("commutativity fails at ({a}, {b})")));
                }
                if self.meet(a, j) != a || self.join(a, m) != a {
                    return Err(Error::InvalidLattice(format!("absorption fails at ({a}, {b})")));
                }
                if !self.leq(m, a) || !self.leq(m, b) || !self.leq(a, j) || !self.leq(b, j) {
                    return Err(Error::InvalidLattice(format!("bounds fail at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    /// Length of the longest chain from the bottom to each node.
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![usize::MAX; self.len];
        fn visit(l: &Lattice, v: Node, height: &mut [usize]) -> usize {
            if height[v] == usize::MAX {
                let h = l.lower[v]
                    .iter()
                    .map(|&w| visit(l, w, height) + 1)
                    .max()
                    .unwrap_or(0);
                height[v] = h;
            }
            height[v]
        }
        for v in self.nodes() {
            visit(self, v, &mut height);
        }
        height
    }

    /// Graphviz rendering of the Hasse diagram, bottom rank first.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for v in self.nodes() {
            let label = self.labels[v].replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  n{v} [label=\"{label}\"];");
        }
        let heights = self.heights();
        let max = heights.iter().copied().max().unwrap_or(0);
        for rank in 0..=max {
            let members: Vec<String> = self
                .nodes()
                .filter(|&v| heights[v] == rank)
                .map(|v| format!("n{v};"))
                .collect();
            if !members.is_empty() {
                let _ = writeln!(out, "  {{ rank=same; {} }}", members.join(" "));
            }
        }
        for v in self.nodes() {
            for &w in &self.upper[v] {
                let _ = writeln!(out, "  n{v} -> n{w};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Covers from order rows: `a ⋖ c` iff nothing lies strictly between them.
fn transitive_reduction(up: &[BitSet], down: &[BitSet]) -> (Vec<Vec<Node>>, Vec<Vec<Node>>) {
    let n = up.len();
    let mut upper = vec![Vec::new(); n];
    let mut lower = vec![Vec::new(); n];
    for a in 0..n {
        for c in up[a].iter() {
            if c != a && up[a].intersection(&down[c]).len() == 2 {
                upper[a].push(c);
                lower[c].push(a);
            }
        }
    }
    (upper, lower)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Pentagon: 0 < 1 < 2 < 4, 0 < 3 < 4.
    pub fn pentagon() -> Lattice {
        Lattice::from_relations(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    /// Diamond M3: 0 < 1,2,3 < 4.
    pub fn diamond() -> Lattice {
        Lattice::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    /// Subsets of {0,1,2} as bitmasks.
    pub fn cube() -> Lattice {
        Lattice::from_leq(8, |a, b| a & b == a).unwrap()
    }

    pub fn chain(n: usize) -> Lattice {
        Lattice::from_leq(n, |a, b| a <= b).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::group::{build_group, parse_spec};

    fn lattice(text: &str) -> Lattice {
        build_lattice(&build_group(&parse_spec(text).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn cyclic_12_is_divisor_grid() {
        let lat = lattice("Z:12");
        assert_eq!(lat.len(), 6);
        let sizes: Vec<usize> = lat.nodes().map(|v| lat.subgroup(v).unwrap().order()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 6, 12]);
        // d | e iff the subgroup of order d lies in the one of order e.
        for a in lat.nodes() {
            for b in lat.nodes() {
                assert_eq!(lat.leq(a, b), sizes[b] % sizes[a] == 0);
            }
        }
        assert_eq!(lat.cover_count(), 7);
        lat.check_laws().unwrap();
    }

    #[test]
    fn q8_lattice() {
        let lat = lattice("Q:8");
        assert_eq!(lat.len(), 6);
        let sizes: Vec<usize> = lat.nodes().map(|v| lat.subgroup(v).unwrap().order()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 4, 4, 8]);
        assert_eq!(lat.upper_covers(1), &[2, 3, 4]);
    }

    #[test]
    fn elementary_abelian_eight() {
        let lat = lattice("Ab:2,2,2");
        assert_eq!(lat.len(), 16);
        lat.check_laws().unwrap();
    }

    #[test]
    fn subgroup_covers_match_transitive_reduction() {
        for text in ["S:4", "D:24", "Ab:4,2,2", "Q:16", "A:5", "SDP:7,3,2,2"] {
            let lat = lattice(text);
            let d = lat.dense.as_ref().unwrap();
            let (upper, _) = transitive_reduction(&d.up, &d.down);
            assert_eq!(upper, lat.upper, "{text}");
        }
    }

    #[test]
    fn meet_is_intersection_and_join_is_generated() {
        let lat = lattice("S:4");
        let g = lat.group().unwrap().clone();
        for a in lat.nodes() {
            for b in lat.nodes() {
                let (ha, hb) = (lat.subgroup(a).unwrap(), lat.subgroup(b).unwrap());
                assert_eq!(lat.subgroup(lat.meet(a, b)).unwrap(), &ha.intersection(hb));
                let union: Vec<usize> = ha.iter().chain(hb.iter()).collect();
                let joined = crate::subgroups::generated_subgroup(&g, &union);
                assert_eq!(lat.subgroup(lat.join(a, b)).unwrap(), &joined);
            }
        }
    }

    #[test]
    fn generic_constructors() {
        let p = pentagon();
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.top(), Some(4));
        assert_eq!(p.meet(2, 3), 0);
        assert_eq!(p.join(1, 3), 4);
        p.check_laws().unwrap();
        assert!(chain(4).is_chain());
        assert!(!cube().is_chain());
        let empty = Lattice::from_leq(0, |_, _| true).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.bottom(), None);
    }

    #[test]
    fn rejects_non_lattices() {
        // Two minimal elements and no bottom.
        assert!(Lattice::from_relations(3, &[(0, 2), (1, 2)]).is_err());
        // Not antisymmetric.
        assert!(Lattice::from_leq(2, |_, _| true).is_err());
        // Bowtie: 0,1 < 2,3 has no join of 0 and 1.
        assert!(Lattice::from_relations(6, &[(4, 0), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 5), (3, 5)]).is_err());
    }

    #[test]
    fn sublattice_requires_closure() {
        let c = cube();
        let sub = c.sublattice(&[0, 1, 3, 7]).unwrap();
        assert!(sub.is_chain());
        assert!(c.sublattice(&[1, 2, 7]).is_err());
    }

    #[test]
    fn dot_output_is_stable() {
        let lat = lattice("Z:8");
        let dot = lat.to_dot();
        assert_eq!(dot, lat.to_dot());
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("n0 [label=\"1:<1>\"]"));
        assert!(dot.contains("{ rank=same; n0; }"));
    }

    #[test]
    fn lazy_backend_agrees_with_dense() {
        let g = build_group(&parse_spec("Ab:2,2,2,2").unwrap()).unwrap();
        let dense = build_lattice(&g).unwrap();
        let mut lazy = build_lattice(&g).unwrap();
        lazy.dense = None;
        assert_eq!(dense.len(), 67);
        for a in dense.nodes() {
            assert_eq!(dense.up_set(a).as_ref(), lazy.up_set(a).as_ref());
            assert_eq!(dense.down_set(a).as_ref(), lazy.down_set(a).as_ref());
            for b in dense.nodes() {
                assert_eq!(dense.leq(a, b), lazy.leq(a, b));
                assert_eq!(dense.meet(a, b), lazy.meet(a, b));
                assert_eq!(dense.join(a, b), lazy.join(a, b));
            }
        }
    }
}
