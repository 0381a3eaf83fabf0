//! Subgroups as element bitsets, and their enumeration.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::lattice::Lattice;

pub const DEFAULT_SUBGROUP_LIMIT: usize = 20_000;

/// A set of elements of an ambient group, normally closed under its product.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubgroupSet {
    members: BitSet,
}

impl SubgroupSet {
    pub fn trivial(ambient_order: usize) -> Self {
        Self::from_elements(ambient_order, [0])
    }

    pub fn whole(ambient_order: usize) -> Self {
        Self {
            members: BitSet::full(ambient_order),
        }
    }

    /// Wraps an arbitrary element set; use [`SubgroupSet::is_subgroup_of`]
    /// to check closure.
    pub fn from_elements(ambient_order: usize, elements: impl IntoIterator<Item = Elem>) -> Self {
        Self {
            members: BitSet::from_indices(ambient_order, elements),
        }
    }

    pub fn from_bits(members: BitSet) -> Self {
        Self { members }
    }

    pub fn bits(&self) -> &BitSet {
        &self.members
    }

    pub fn ambient_order(&self) -> usize {
        self.members.capacity()
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            members: self.members.intersection(&other.members),
        }
    }

    /// Contains the identity and is closed under the product of `g`.
    pub fn is_subgroup_of(&self, g: &Group) -> bool {
        if self.ambient_order() != g.order() || !self.contains(0) {
            return false;
        }
        let elems: Vec<Elem> = self.iter().collect();
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| self.contains(g.mul(a, b))))
    }

    pub fn is_cyclic(&self, g: &Group) -> bool {
        let n = self.order();
        self.iter().any(|e| g.element_order(e) == n)
    }

    /// Labels of a small generating set, for display.
    pub fn describe(&self, g: &Group) -> String {
        let gens = small_generating_set(g, self);
        let body = if gens.is_empty() {
            g.label(0).to_string()
        } else {
            gens.iter().map(|&e| g.label(e)).collect::<Vec<_>>().join(", ")
        };
        format!("{}:<{}>", self.order(), body)
    }
}

/// A subgroup under construction: membership bits plus an element list.
struct Closure {
    set: BitSet,
    list: Vec<Elem>,
}

impl Closure {
    fn trivial(n: usize) -> Self {
        Closure {
            set: BitSet::from_indices(n, [0]),
            list: vec![0],
        }
    }

    fn of(h: &SubgroupSet) -> Self {
        Closure {
            set: h.members.clone(),
            list: h.iter().collect(),
        }
    }

    /// Extends the subgroup generated by `gens` with `new`, adding whole right
    /// cosets of the current subgroup at a time.
    fn adjoin(&mut self, g: &Group, gens: &mut Vec<Elem>, new: Elem) {
        if self.set.contains(new) {
            return;
        }
        gens.push(new);
        let base: Vec<Elem> = self.list.clone();
        let mut reps = vec![0];
        let add_coset = |t: Elem, this: &mut Closure, reps: &mut Vec<Elem>| {
            for &h in &base {
                let e = g.mul(h, t);
                this.set.insert(e);
                this.list.push(e);
            }
            reps.push(t);
        };
        add_coset(new, self, &mut reps);
        let mut i = 1;
        while i < reps.len() {
            let r = reps[i];
            for &s in gens.iter() {
                let t = g.mul(r, s);
                if !self.set.contains(t) {
                    add_coset(t, self, &mut reps);
                }
            }
            i += 1;
        }
    }

    fn into_set(self) -> SubgroupSet {
        SubgroupSet { members: self.set }
    }
}

/// Smallest subgroup containing `seed`.
pub fn generated_subgroup(g: &Group, seed: &[Elem]) -> SubgroupSet {
    let mut c = Closure::trivial(g.order());
    let mut gens = Vec::new();
    for &s in seed {
        c.adjoin(g, &mut gens, s);
    }
    c.into_set()
}

/// Subgroup generated by `h` together with `extra` elements.
pub(crate) fn join_with(g: &Group, h: &SubgroupSet, h_gens: &[Elem], extra: &[Elem]) -> SubgroupSet {
    let mut c = Closure::of(h);
    let mut gens = h_gens.to_vec();
    for &e in extra {
        c.adjoin(g, &mut gens, e);
    }
    c.into_set()
}

/// A deterministic, usually small generating set: greedily adjoins elements of
/// largest order first.
pub fn small_generating_set(g: &Group, h: &SubgroupSet) -> Vec<Elem> {
    let mut order: Vec<Elem> = h.iter().collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(g.element_order(e)), e));
    let mut c = Closure::trivial(g.order());
    let mut gens = Vec::new();
    for e in order {
        if c.set.len() == h.order() {
            break;
        }
        c.adjoin(g, &mut gens, e);
    }
    gens
}

/// All subgroups with their cover candidates, sorted by `(order, bits)`.
pub(crate) struct Enumeration {
    pub subgroups: Vec<SubgroupSet>,
    /// For each subgroup `H`, the distinct subgroups `⟨H, g⟩` with `g ∉ H`.
    pub overgroups: Vec<Vec<usize>>,
}

/// Enumerates every subgroup: starting from the trivial subgroup, each
/// subgroup found is joined with every element outside it until no new
/// subgroup appears. Every subgroup is reached, since it is an iterated join
/// of cyclic subgroups.
pub(crate) fn enumerate(g: &Group, limit: usize) -> Result<Enumeration> {
    let n = g.order();
    let trivial = Closure::trivial(n);
    let mut found: Vec<(Closure, Vec<Elem>)> = vec![(trivial, vec![])];
    let mut index: HashMap<BitSet, usize> = HashMap::from([(found[0].0.set.clone(), 0)]);
    let mut overgroups: Vec<Vec<usize>> = vec![Vec::new()];
    let mut head = 0;
    while head < found.len() {
        let mut covered = found[head].0.set.clone();
        for e in 0..n {
            if covered.contains(e) {
                continue;
            }
            let (h, h_gens) = &found[head];
            for &x in &h.list {
                covered.insert(g.mul(x, e));
            }
            let mut c = Closure {
                set: h.set.clone(),
                list: h.list.clone(),
            };
            let mut gens = h_gens.clone();
            c.adjoin(g, &mut gens, e);
            let id = match index.get(&c.set) {
                Some(&id) => id,
                None => {
                    let id = found.len();
                    if id >= limit {
                        return Err(Error::TooManySubgroups {
                            limit,
                            partial: id + 1,
                        });
                    }
                    index.insert(c.set.clone(), id);
                    found.push((c, gens));
                    overgroups.push(Vec::new());
                    id
                }
            };
            if !overgroups[head].contains(&id) {
                overgroups[head].push(id);
            }
        }
        head += 1;
    }

    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&found[a].0.set, &found[b].0.set);
        (sa.len(), sa).cmp(&(sb.len(), sb))
    });
    let mut rank = vec![0; found.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut subgroups = vec![None; found.len()];
    let mut sorted_over = vec![Vec::new(); found.len()];
    for (old, (c, _)) in found.into_iter().enumerate() {
        subgroups[rank[old]] = Some(c.into_set());
        let mut over: Vec<usize> = overgroups[old].iter().map(|&o| rank[o]).collect();
        over.sort_unstable();
        sorted_over[rank[old]] = over;
    }
    Ok(Enumeration {
        subgroups: subgroups.into_iter().map(Option::unwrap).collect(),
        overgroups: sorted_over,
    })
}

/// Every subgroup of `g`, sorted by `(order, bits)`, aborting once more than
/// `limit` have been found.
pub fn all_subgroups(g: &Group, limit: usize) -> Result<Vec<SubgroupSet>> {
    Ok(enumerate(g, limit)?.subgroups)
}

/// Whether `h` is closed under conjugation by every element of `g`.
pub fn is_normal(g: &Group, h: &SubgroupSet) -> Result<bool> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    Ok(is_normal_unchecked(g, h))
}

pub(crate) fn is_normal_unchecked(g: &Group, h: &SubgroupSet) -> bool {
    let gens = small_generating_set(g, h);
    g.elements()
        .all(|x| gens.iter().all(|&a| h.contains(g.conjugate(a, x))))
}

/// Intersection of the maximal subgroups; the whole group when it is trivial.
pub fn frattini_subgroup(g: &Group, lat: &Lattice) -> Result<SubgroupSet> {
    check_ambient(g, lat)?;
    let top = lat.top().expect("subgroup lattices are non-empty");
    let mut phi = SubgroupSet::whole(g.order());
    for &m in lat.lower_covers(top) {
        phi = phi.intersection(lat.subgroup(m).expect("subgroup lattice"));
    }
    Ok(phi)
}

/// Orbits of the subgroups under conjugation, each sorted, and listed in
/// order of their smallest node.
pub fn subgroup_conjugacy_classes(g: &Group, lat: &Lattice) -> Result<Vec<Vec<usize>>> {
    check_ambient(g, lat)?;
    let mut class_of = vec![usize::MAX; lat.len()];
    let mut classes = Vec::new();
    for node in 0..lat.len() {
        if class_of[node] != usize::MAX {
            continue;
        }
        let h = lat.subgroup(node).expect("subgroup lattice");
        let members: Vec<Elem> = h.iter().collect();
        let mut class = vec![node];
        class_of[node] = classes.len();
        for x in g.elements() {
            let conj = SubgroupSet::from_elements(g.order(), members.iter().map(|&a| g.conjugate(a, x)));
            let other = lat
                .node_of(&conj)
                .ok_or_else(|| Error::Mismatch("conjugate subgroup missing from lattice".into()))?;
            if class_of[other] == usize::MAX {
                class_of[other] = classes.len();
                class.push(other);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    Ok(classes)
}

pub(crate) fn check_ambient(g: &Group, lat: &Lattice) -> Result<()> {
    match lat.group() {
        Some(h) if h.order() == g.order() && lat.subgroup(0).is_some() => Ok(()),
        Some(h) => Err(Error::Mismatch(format!(
            "lattice built from a group of order {}, not {}",
            h.order(),
            g.order()
        ))),
        None => Err(Error::Mismatch("lattice is not a subgroup lattice".into())),
    }
}
