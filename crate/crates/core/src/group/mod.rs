//! Finite groups stored as Cayley tables.
//!
//! Element `0` is always the identity. Every constructor renumbers its
//! elements so that this holds, and [`validate_group`] checks the remaining
//! group axioms directly on the table.

mod families;
mod perm;
mod spec;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::subgroups::SubgroupSet;

pub use families::{build_group, build_group_with_cap, DEFAULT_ORDER_CAP};
pub use perm::Permutation;
pub use spec::{parse_spec, GroupSpec};

/// Index of a group element. `0` is the identity.
pub type Elem = usize;

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<Elem>,
    element_order: Vec<usize>,
    labels: Vec<String>,
    perms: Option<Vec<Permutation>>,
    spec: Option<GroupSpec>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

impl Group {
    /// Builds a group from a row-major table and checks every group axiom.
    pub fn from_table(table: Vec<Vec<Elem>>, labels: Vec<String>) -> Result<Self> {
        let group = Self::from_table_unchecked(table, labels)?;
        let report = validate_group(&group);
        if let Some(v) = report.first_failure() {
            return Err(Error::Constraint(format!("table is not a group: {v}")));
        }
        Ok(group)
    }

    /// Builds a group value from a table without checking the axioms.
    ///
    /// Only the shape of the table is checked. Inverses and element orders are
    /// filled in on a best-effort basis (missing values are recorded as `0`),
    /// so the result is meant for [`validate_group`] and little else.
    pub fn from_table_unchecked(table: Vec<Vec<Elem>>, labels: Vec<String>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::Constraint("empty multiplication table".into()));
        }
        if labels.len() != order {
            return Err(Error::Constraint(format!(
                "{} labels for {order} elements",
                labels.len()
            )));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Constraint(format!("row {i} has length {}", row.len())));
            }
            for &e in row {
                if e >= order {
                    return Err(Error::Constraint(format!("row {i} has entry {e} out of range")));
                }
                flat.push(e as u32);
            }
        }
        Ok(Self::from_flat(order, flat, labels))
    }

    pub(crate) fn from_flat(order: usize, table: Vec<u32>, labels: Vec<String>) -> Self {
        let mut group = Group {
            order,
            table,
            inverse: vec![0; order],
            element_order: vec![0; order],
            labels,
            perms: None,
            spec: None,
        };
        for g in 0..order {
            group.inverse[g] = (0..order).find(|&h| group.mul(g, h) == 0).unwrap_or(0);
            let mut x = g;
            for k in 1..=order {
                if x == 0 {
                    group.element_order[g] = k;
                    break;
                }
                x = group.mul(x, g);
            }
        }
        group
    }

    pub(crate) fn with_perms(mut self, perms: Vec<Permutation>) -> Self {
        self.perms = Some(perms);
        self
    }

    pub(crate) fn with_spec(mut self, spec: GroupSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    /// `g⁻¹ a g`.
    pub fn conjugate(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn element_order(&self, a: Elem) -> usize {
        self.element_order[a]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.element_order
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    /// The permutation realizing `a`, for groups built from permutations.
    pub fn permutation(&self, a: Elem) -> Option<&Permutation> {
        self.perms.as_ref().map(|p| &p[a])
    }

    /// Looks up the element acting as `perm`, for permutation groups.
    pub fn element_of_permutation(&self, perm: &Permutation) -> Option<Elem> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    /// The spec this group was built from, when it came from [`build_group`].
    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_order.contains(&self.order)
    }

    /// Multiset of element orders, sorted ascending.
    pub fn order_spectrum(&self) -> Vec<usize> {
        let mut spectrum = self.element_order.clone();
        spectrum.sort_unstable();
        spectrum
    }

    /// The subgroup `h` as a group in its own right.
    ///
    /// Elements keep their relative order (so the identity stays first) and
    /// their labels.
    pub fn restrict(&self, h: &SubgroupSet) -> Result<Group> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        let members: Vec<Elem> = h.iter().collect();
        let index: HashMap<Elem, usize> = members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(index[&self.mul(a, b)] as u32);
            }
        }
        let labels = members.iter().map(|&e| self.labels[e].clone()).collect();
        let mut group = Group::from_flat(n, table, labels);
        if let Some(perms) = &self.perms {
            group.perms = Some(members.iter().map(|&e| perms[e].clone()).collect());
        }
        Ok(group)
    }
}

/// A failed group axiom together with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Identity { element: Elem },
    LatinRow { row: Elem },
    LatinColumn { column: Elem },
    Inverse { element: Elem },
    Associativity { a: Elem, b: Elem, c: Elem },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Identity { element } => write!(f, "identity law fails at {element}"),
            Violation::LatinRow { row } => write!(f, "row {row} is not a permutation"),
            Violation::LatinColumn { column } => write!(f, "column {column} is not a permutation"),
            Violation::Inverse { element } => write!(f, "element {element} has no inverse"),
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails at ({a}, {b}, {c})")
            }
        }
    }
}

/// Outcome of each axiom check run by [`validate_group`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub identity: Result<(), Violation>,
    pub latin_square: Result<(), Violation>,
    pub inverses: Result<(), Violation>,
    pub associativity: Result<(), Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&Violation> {
        [
            &self.identity,
            &self.latin_square,
            &self.inverses,
            &self.associativity,
        ]
        .into_iter()
        .find_map(|r| r.as_ref().err())
    }
}

/// Checks identity, Latin-square, inverse and associativity laws on the
/// table. Associativity is checked on all triples.
pub fn validate_group(g: &Group) -> ValidationReport {
    let n = g.order;

    let identity = (0..n)
        .find(|&a| g.mul(0, a) != a || g.mul(a, 0) != a)
        .map_or(Ok(()), |element| Err(Violation::Identity { element }));

    let latin_square = (|| {
        for a in 0..n {
            let mut row = BitSet::new(n);
            let mut col = BitSet::new(n);
            for b in 0..n {
                row.insert(g.mul(a, b));
                col.insert(g.mul(b, a));
            }
            if row.len() != n {
                return Err(Violation::LatinRow { row: a });
            }
            if col.len() != n {
                return Err(Violation::LatinColumn { column: a });
            }
        }
        Ok(())
    })();

    let inverses = (0..n)
        .find(|&a| {
            let b = g.inverse[a];
            g.mul(a, b) != 0 || g.mul(b, a) != 0
        })
        .map_or(Ok(()), |element| Err(Violation::Inverse { element }));

    let associativity = (|| {
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                        return Err(Violation::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    })();

    ValidationReport {
        identity,
        latin_square,
        inverses,
        associativity,
    }
}

/// The quotient of `g` by the normal subgroup `n`.
///
/// Cosets are numbered by their smallest element, so the coset of the
/// identity is element `0`; each coset is labelled by that representative.
pub fn quotient_group(g: &Group, n: &SubgroupSet) -> Result<Group> {
    if !n.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    if !crate::subgroups::is_normal(g, n)? {
        return Err(Error::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for m in n.iter() {
            coset_of[g.mul(a, m)] = id;
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(coset_of[g.mul(a, b)] as u32);
        }
    }
    let labels = reps.iter().map(|&r| g.labels[r].clone()).collect();
    Ok(Group::from_flat(k, table, labels))
}
