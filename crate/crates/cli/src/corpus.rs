//! Group families checked by the verification suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dismantle::group::{parse_spec, Group, GroupSpec, Permutation};
use dismantle::lattice::{Crown, Lattice};
use dismantle::subgroups::generated_subgroup;
use dismantle::{Error, Result};

/// Which classification statement an entry exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SymmetricAlternating,
    Abelian,
    Dihedral,
    CyclicMaximal,
    Hamiltonian,
    Cyclic,
    Example,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub family: Family,
    pub spec: GroupSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub dihedral_max: usize,
    pub abelian_max: usize,
    /// Largest order used for the dihedral, quaternion and quasi-dihedral 2-groups.
    pub two_group_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            dihedral_max: 48,
            abelian_max: 128,
            two_group_max: 64,
        }
    }
}

/// Invariant-factor lists `d1, d2, ...` with `d_{i+1} | d_i`, all factors
/// above 1 and product at most `max_order`; the empty list is the trivial group.
pub fn abelian_invariant_lists(max_order: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, budget: usize, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        let bound = prefix.last().copied().unwrap_or(budget).min(budget);
        for d in 2..=bound {
            if prefix.last().is_some_and(|&last| last % d != 0) {
                continue;
            }
            prefix.push(d);
            extend(prefix, budget / d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_order, &mut out);
    out.sort_by_key(|l| (l.iter().product::<usize>(), l.clone()));
    out
}

fn abelian_spec(list: &[usize]) -> GroupSpec {
    match list {
        [] => GroupSpec::Cyclic(1),
        [n] => GroupSpec::Cyclic(*n),
        _ => GroupSpec::Abelian(list.to_vec()),
    }
}

fn spec(text: &str) -> GroupSpec {
    parse_spec(text).expect("corpus specs are well formed")
}

pub fn symmetric_alternating() -> Vec<(GroupSpec, bool)> {
    vec![
        (GroupSpec::Alternating(3), true),
        (GroupSpec::Alternating(4), true),
        (GroupSpec::Symmetric(3), true),
        (GroupSpec::Alternating(5), false),
        (GroupSpec::Symmetric(4), false),
    ]
}

pub fn modular_p_groups() -> Vec<GroupSpec> {
    [(3, 3), (3, 4), (5, 3), (2, 4), (2, 5)]
        .into_iter()
        .map(|(p, n)| GroupSpec::ModularM { p, n })
        .collect()
}

/// Dihedral and quaternion groups of orders 8 up to `max`, quasi-dihedral from 16.
pub fn two_groups(max: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    let mut n = 8;
    while n <= max {
        out.push(GroupSpec::Dihedral(n));
        out.push(GroupSpec::Quaternion(n));
        if n >= 16 {
            out.push(GroupSpec::QuasiDihedral(n));
        }
        n *= 2;
    }
    out
}

/// `Q8`, then the Hamiltonian groups that are not `Q8`.
pub fn hamiltonians() -> Vec<GroupSpec> {
    ["Ham:0", "Ham:1", "Ham:0;3", "Ham:1;3"].into_iter().map(spec).collect()
}

/// Cyclic p-groups `Z_{p^n}` with the expected subgroup count `n + 1`.
pub fn cyclic_prime_powers() -> Vec<(GroupSpec, usize)> {
    let mut out = Vec::new();
    for (p, max_n) in [(2, 7), (3, 5), (5, 3), (7, 3), (11, 2), (13, 2)] {
        for n in 1..=max_n {
            out.push((GroupSpec::Cyclic(usize::pow(p, n as u32)), n + 1));
        }
    }
    out
}

pub fn examples() -> Vec<GroupSpec> {
    ["Z:72", "Ab:3,3,3", "Ab:2,2,3", "QD:16", "D:60", "SDP:7,3,2,2", "SDP:5,2,2,4", "D:8 x Z:3", "S:5", "Z:30"]
        .into_iter()
        .map(spec)
        .collect()
}

pub fn corpus(bounds: &Bounds) -> Vec<Entry> {
    let mut out = Vec::new();
    let mut push = |family, spec| out.push(Entry { family, spec });
    for (s, _) in symmetric_alternating() {
        push(Family::SymmetricAlternating, s);
    }
    for list in abelian_invariant_lists(bounds.abelian_max) {
        push(Family::Abelian, abelian_spec(&list));
    }
    for n in 2..=bounds.dihedral_max {
        push(Family::Dihedral, GroupSpec::Dihedral(2 * n));
    }
    for s in modular_p_groups().into_iter().chain(two_groups(bounds.two_group_max)) {
        push(Family::CyclicMaximal, s);
    }
    for s in hamiltonians() {
        push(Family::Hamiltonian, s);
    }
    for (s, _) in cyclic_prime_powers() {
        push(Family::Cyclic, s);
    }
    for s in examples() {
        push(Family::Example, s);
    }
    out
}

/// Lattices of subsets of a small set closed under intersection, with at
/// most 12 elements, drawn from a seeded generator.
pub fn random_lattices(count: usize, seed: u64) -> Vec<Lattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let ground = rng.gen_range(3..=5u32);
        let full = (1u32 << ground) - 1;
        let mut sets = vec![full];
        for _ in 0..rng.gen_range(0..=6) {
            let s = rng.gen_range(0..=full);
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        let mut i = 0;
        while i < sets.len() && sets.len() <= 12 {
            for j in 0..i {
                let m = sets[i] & sets[j];
                if !sets.contains(&m) {
                    sets.push(m);
                }
            }
            i += 1;
        }
        if sets.len() > 12 {
            continue;
        }
        sets.sort_unstable();
        out.push(Lattice::from_leq(sets.len(), |a, b| sets[a] & sets[b] == sets[a]).expect("closure systems are lattices"));
    }
    out
}

/// A crown given by subgroup generators in the ambient group.
#[derive(Debug, Clone)]
pub struct NamedCrown {
    pub ambient: GroupSpec,
    pub xs: Vec<Vec<String>>,
    pub ys: Vec<Vec<String>>,
}

fn gens(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The explicit order-6 crowns of `A5` and `S4`, as cycle notation.
pub fn permutation_crowns() -> Vec<NamedCrown> {
    vec![
        NamedCrown {
            ambient: GroupSpec::Alternating(5),
            xs: vec![gens(&["(12)(34)"]), gens(&["(25)(34)"]), gens(&["(13)(25)"])],
            ys: vec![
                gens(&["(125)", "(12)(34)"]),
                gens(&["(143)", "(25)(34)"]),
                gens(&["(15234)", "(13)(25)"]),
            ],
        },
        NamedCrown {
            ambient: GroupSpec::Symmetric(4),
            xs: vec![gens(&["(12)"]), gens(&["(13)"]), gens(&["(14)"])],
            ys: vec![gens(&["(123)", "(12)"]), gens(&["(134)", "(13)"]), gens(&["(124)", "(14)"])],
        },
    ]
}

/// The order-6 crown of `L(D_24)` built from the rotation `x` and reflection `y`.
pub fn dihedral_24_crown() -> NamedCrown {
    NamedCrown {
        ambient: GroupSpec::Dihedral(24),
        xs: vec![gens(&["x^6"]), gens(&["y"]), gens(&["x^4"])],
        ys: vec![gens(&["x^6", "y"]), gens(&["x^4", "y"]), gens(&["x"])],
    }
}

/// Element named by a permutation in cycle notation or by its label.
fn element(g: &Group, name: &str) -> Result<usize> {
    if name.starts_with('(') {
        let degree = g
            .permutation(0)
            .map(Permutation::degree)
            .ok_or_else(|| Error::Mismatch("group has no permutation representation".into()))?;
        let perm = match parse_spec(&format!("Perm:{degree};{name}"))? {
            GroupSpec::Permutations { generators, .. } => Permutation::from_cycles(degree, &generators[0])?,
            _ => unreachable!("Perm specs parse to permutations"),
        };
        g.element_of_permutation(&perm)
            .ok_or_else(|| Error::Mismatch(format!("{name} is not an element of the group")))
    } else {
        g.element_by_label(name)
            .ok_or_else(|| Error::Mismatch(format!("no element labelled {name}")))
    }
}

impl NamedCrown {
    /// Lattice nodes of the named subgroups.
    pub fn resolve(&self, g: &Group, lat: &Lattice) -> Result<Crown> {
        let node = |names: &Vec<String>| -> Result<usize> {
            let seed = names.iter().map(|n| element(g, n)).collect::<Result<Vec<_>>>()?;
            lat.node_of(&generated_subgroup(g, &seed))
                .ok_or_else(|| Error::Mismatch("subgroup missing from lattice".into()))
        };
        Ok(Crown {
            xs: self.xs.iter().map(node).collect::<Result<_>>()?,
            ys: self.ys.iter().map(node).collect::<Result<_>>()?,
        })
    }
}
