//! Finite groups as Cayley tables, their subgroup lattices, and decisions
//! about dismantlability with checkable witnesses.

pub mod bitset;
pub mod classify;
pub mod error;
pub mod group;
pub mod lattice;
pub mod subgroups;

pub use bitset::BitSet;
pub use classify::{
    computed_membership, has_section_ppp, membership, predicted_membership, profile, Computed, GroupProfile,
    Membership, MembershipVerdict, Prediction, Rule,
};
pub use error::{Error, Result};
pub use group::{build_group, build_group_with_cap, parse_spec, validate_group, Group, GroupSpec};
pub use lattice::{build_lattice, build_lattice_with_limit, Lattice};
pub use subgroups::SubgroupSet;
