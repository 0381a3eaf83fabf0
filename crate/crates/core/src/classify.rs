//! Group-theoretic predicates and the membership rules built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::Result;
use crate::group::{quotient_group, Elem, Group, GroupSpec};
use crate::lattice::{
    dismantle, find_crown_within, validate_crown, Crown, CrownSearch, Dismantling, DismantlingWitness, Lattice,
    Node, SearchOptions,
};
use crate::subgroups::{check_ambient, is_normal_unchecked, small_generating_set, SubgroupSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupProfile {
    pub order: usize,
    pub is_abelian: bool,
    pub is_cyclic: bool,
    /// The prime `p` when the order is a positive power of `p`.
    pub p_group: Option<usize>,
    pub is_nilpotent: bool,
    pub is_hamiltonian: bool,
    pub has_cyclic_maximal: bool,
    /// Invariant factors, largest first, for abelian groups.
    pub abelian_invariants: Option<Vec<usize>>,
    /// Number of invariant factors of an abelian p-group.
    pub abelian_p_rank: Option<usize>,
    /// Every element order has at most two distinct prime divisors.
    pub order_spectrum_ok: bool,
    pub is_metacyclic: bool,
    /// For p-groups, whether some section is elementary abelian of order `p^3`.
    pub has_ppp_section: Option<bool>,
}

/// Prime factorization as `(p, e)` pairs, primes ascending.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_power(n: usize) -> bool {
    factorize(n).len() == 1
}

/// Largest `k` with `p^k <= n`, for `n` a power of `p`.
fn log(p: usize, mut n: usize) -> usize {
    let mut k = 0;
    while n >= p {
        n /= p;
        k += 1;
    }
    k
}

pub fn profile(g: &Group, lat: &Lattice) -> Result<GroupProfile> {
    check_ambient(g, lat)?;
    let n = g.order();
    let primes = factorize(n);
    let is_abelian = g.is_abelian();
    let is_cyclic = g.is_cyclic();
    let p_group = match primes.as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    };
    let is_nilpotent = is_abelian
        || primes.iter().all(|&(p, e)| {
            let size = p.pow(e);
            lat.nodes().filter(|&v| node_order(lat, v) == size).count() == 1
        });
    let is_hamiltonian =
        !is_abelian && lat.nodes().all(|v| is_normal_unchecked(g, lat.subgroup(v).expect("subgroup lattice")));
    let top = lat.top().expect("subgroup lattices are non-empty");
    let has_cyclic_maximal = lat
        .lower_covers(top)
        .iter()
        .any(|&m| lat.subgroup(m).expect("subgroup lattice").is_cyclic(g));
    let abelian_invariants = is_abelian.then(|| abelian_invariants(g));
    let abelian_p_rank = match (is_abelian, p_group) {
        (true, Some(p)) => Some(log(p, g.elements().filter(|&a| p % g.element_order(a) == 0).count())),
        _ => None,
    };
    let order_spectrum_ok = g.element_orders().iter().all(|&k| factorize(k).len() <= 2);
    let is_metacyclic = is_metacyclic(g, lat)?;
    let has_ppp_section = match p_group {
        Some(p) => Some(has_section_ppp(g, lat, p)?),
        None => None,
    };
    Ok(GroupProfile {
        order: n,
        is_abelian,
        is_cyclic,
        p_group,
        is_nilpotent,
        is_hamiltonian,
        has_cyclic_maximal,
        abelian_invariants,
        abelian_p_rank,
        order_spectrum_ok,
        is_metacyclic,
        has_ppp_section,
    })
}

fn node_order(lat: &Lattice, v: Node) -> usize {
    lat.subgroup(v).expect("subgroup lattice").order()
}

/// Invariant factors of an abelian group from its element-order counts.
///
/// In the p-part, `#{a : a^(p^k) = 1} = p^(Σ min(e_i, k))`, so successive
/// ratios count the cyclic factors of exponent at least `k`.
fn abelian_invariants(g: &Group) -> Vec<usize> {
    let mut factors: Vec<usize> = Vec::new();
    for (p, e) in factorize(g.order()) {
        let mut prev = 1usize;
        let mut at_least = Vec::new();
        for k in 1..=e {
            let pk = p.pow(k);
            let count = g.element_orders().iter().filter(|&&o| pk % o == 0).count();
            at_least.push(log(p, count / prev));
            prev = count;
        }
        // at_least[k-1] factors have exponent >= k; factor i has exponent
        // #{k : at_least[k-1] > i}.
        let rank = at_least.first().copied().unwrap_or(0);
        if factors.len() < rank {
            factors.resize(rank, 1);
        }
        for (i, f) in factors.iter_mut().enumerate().take(rank) {
            let exp = at_least.iter().filter(|&&c| c > i).count() as u32;
            *f *= p.pow(exp);
        }
    }
    factors
}

/// Some normal cyclic subgroup has a cyclic quotient.
fn is_metacyclic(g: &Group, lat: &Lattice) -> Result<bool> {
    for v in lat.nodes() {
        let h = lat.subgroup(v).expect("subgroup lattice");
        if h.is_cyclic(g) && is_normal_unchecked(g, h) && quotient_group(g, h)?.is_cyclic() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some section `H/K` is elementary abelian of order `p^3`.
pub fn has_section_ppp(g: &Group, lat: &Lattice, p: usize) -> Result<bool> {
    check_ambient(g, lat)?;
    let p3 = p * p * p;
    for h_node in lat.nodes().rev() {
        let h = lat.subgroup(h_node).expect("subgroup lattice");
        if h.order() % p3 != 0 {
            continue;
        }
        let h_gens = small_generating_set(g, h);
        let h_elems: Vec<Elem> = h.iter().collect();
        for k_node in lat.down_set(h_node).iter() {
            let k = lat.subgroup(k_node).expect("subgroup lattice");
            if k.order() * p3 != h.order() {
                continue;
            }
            if section_is_ppp(g, p, h, &h_gens, &h_elems, k)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn section_is_ppp(g: &Group, p: usize, h: &SubgroupSet, h_gens: &[Elem], h_elems: &[Elem], k: &SubgroupSet) -> Result<bool> {
    let k_gens = small_generating_set(g, k);
    let normal = h_gens
        .iter()
        .all(|&x| k_gens.iter().all(|&a| k.contains(g.conjugate(a, x))));
    if !normal {
        return Ok(false);
    }
    // Cheap filters before building the quotient: p-th powers and
    // commutators of generators land in K.
    if !h_elems.iter().all(|&x| k.contains(g.pow(x, p))) {
        return Ok(false);
    }
    let commutes = h_gens.iter().all(|&x| {
        h_gens
            .iter()
            .all(|&y| k.contains(g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))))
    });
    if !commutes {
        return Ok(false);
    }
    let hg = g.restrict(h)?;
    let kk = SubgroupSet::from_elements(hg.order(), h_elems.iter().enumerate().filter(|(_, &x)| k.contains(x)).map(|(i, _)| i));
    let q = quotient_group(&hg, &kk)?;
    Ok(q.is_abelian() && q.element_orders().iter().all(|&o| o == 1 || o == p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InD,
    NotInD,
    Unknown,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::InD => "in D",
            Membership::NotInD => "not in D",
            Membership::Unknown => "unknown",
        })
    }
}

/// The classification rule behind a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Members have only element orders `p^n` or `p^n q^m`.
    OrderSpectrum,
    /// Abelian members are the cyclic ones and the p-groups of rank at most 2.
    Abelian,
    /// Q8 is the only Hamiltonian member.
    Hamiltonian,
    /// p-groups with a cyclic maximal subgroup are members.
    CyclicMaximal,
    /// Non-cyclic nilpotent members are p-groups.
    NilpotentMixed,
    /// Members have no elementary abelian section of order `p^3`.
    PppSection,
    /// `D_2n` is a member iff `n` is a prime power.
    Dihedral,
    /// `S_n` is a member iff `n <= 3`, `A_n` iff `n <= 4`.
    SymmetricAlternating,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::OrderSpectrum => "order spectrum",
            Rule::Abelian => "abelian",
            Rule::Hamiltonian => "hamiltonian",
            Rule::CyclicMaximal => "cyclic maximal subgroup",
            Rule::NilpotentMixed => "nilpotent non-p-group",
            Rule::PppSection => "(p,p,p) section",
            Rule::Dihedral => "dihedral",
            Rule::SymmetricAlternating => "symmetric/alternating",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub verdict: Membership,
    pub rule: Option<Rule>,
}

impl Prediction {
    fn by(rule: Rule, member: bool) -> Self {
        Prediction {
            verdict: if member { Membership::InD } else { Membership::NotInD },
            rule: Some(rule),
        }
    }

    pub const UNKNOWN: Prediction = Prediction {
        verdict: Membership::Unknown,
        rule: None,
    };
}

/// First applicable rule of the classification ladder.
pub fn predicted_membership(g: &Group, prof: &GroupProfile) -> Prediction {
    if !prof.order_spectrum_ok {
        return Prediction::by(Rule::OrderSpectrum, false);
    }
    if prof.is_abelian {
        let member = prof.is_cyclic || prof.abelian_p_rank.is_some_and(|r| r <= 2);
        return Prediction::by(Rule::Abelian, member);
    }
    if prof.is_hamiltonian {
        let involutions = g.element_orders().iter().filter(|&&o| o == 2).count();
        return Prediction::by(Rule::Hamiltonian, prof.order == 8 && involutions == 1);
    }
    if prof.p_group.is_some() && prof.has_cyclic_maximal {
        return Prediction::by(Rule::CyclicMaximal, true);
    }
    if prof.is_nilpotent && prof.p_group.is_none() && !prof.is_cyclic {
        return Prediction::by(Rule::NilpotentMixed, false);
    }
    if prof.has_ppp_section == Some(true) {
        return Prediction::by(Rule::PppSection, false);
    }
    if let Some(n) = dihedral_half_order(g) {
        return Prediction::by(Rule::Dihedral, is_prime_power(n));
    }
    match g.spec() {
        Some(GroupSpec::Symmetric(n)) => Prediction::by(Rule::SymmetricAlternating, *n <= 3),
        Some(GroupSpec::Alternating(n)) => Prediction::by(Rule::SymmetricAlternating, *n <= 4),
        _ => Prediction::UNKNOWN,
    }
}

/// `n` when `g` has a cyclic subgroup of order `n = |g|/2` inverted by an
/// involution outside it.
pub fn dihedral_half_order(g: &Group) -> Option<usize> {
    let order = g.order();
    if order < 4 || order % 2 != 0 {
        return None;
    }
    let n = order / 2;
    let involutions: Vec<Elem> = g.elements().filter(|&a| g.element_order(a) == 2).collect();
    for x in g.elements().filter(|&a| g.element_order(a) == n) {
        let cyclic: BitSet = BitSet::from_indices(order, (0..n).map(|k| g.pow(x, k)));
        let x_inv = g.inv(x);
        if involutions
            .iter()
            .any(|&y| !cyclic.contains(y) && g.mul(g.mul(y, x), y) == x_inv)
        {
            return Some(n);
        }
    }
    None
}

/// Why a group is outside the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Nodes left when greedy dismantling stopped.
    pub residue: Vec<Node>,
    /// A crown inside the residue, when the search finished within its bounds.
    pub crown: Option<Crown>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Computed {
    InD { witness: DismantlingWitness },
    NotInD { obstruction: Obstruction },
}

impl Computed {
    pub fn membership(&self) -> Membership {
        match self {
            Computed::InD { .. } => Membership::InD,
            Computed::NotInD { .. } => Membership::NotInD,
        }
    }
}

/// Dismantles the lattice, or certifies failure with a crown from the
/// residue. The residue is a non-dismantlable lattice, so it contains a
/// crown; the search only gives up when its bounds are hit.
pub fn computed_membership(lat: &Lattice) -> Result<Computed> {
    computed_membership_with(lat, None)
}

pub fn computed_membership_with(lat: &Lattice, opts: Option<SearchOptions>) -> Result<Computed> {
    match dismantle(lat) {
        Dismantling::Dismantlable(witness) => Ok(Computed::InD { witness }),
        Dismantling::Stuck { residue, .. } => {
            let within = BitSet::from_indices(lat.len(), residue.iter().copied());
            let opts = opts.unwrap_or_else(|| SearchOptions::for_nodes(residue.len()));
            let crown = match find_crown_within(lat, &within, opts)? {
                CrownSearch::Found(c) => {
                    debug_assert!(validate_crown(lat, &c));
                    Some(c)
                }
                _ => None,
            };
            Ok(Computed::NotInD {
                obstruction: Obstruction { residue, crown },
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub predicted: Prediction,
    pub computed: Computed,
}

impl MembershipVerdict {
    /// A prediction other than unknown matches the computation.
    pub fn agrees(&self) -> bool {
        self.predicted.verdict == Membership::Unknown || self.predicted.verdict == self.computed.membership()
    }
}

pub fn membership(g: &Group, lat: &Lattice) -> Result<(GroupProfile, MembershipVerdict)> {
    let prof = profile(g, lat)?;
    let predicted = predicted_membership(g, &prof);
    let computed = computed_membership(lat)?;
    Ok((prof, MembershipVerdict { predicted, computed }))
}
