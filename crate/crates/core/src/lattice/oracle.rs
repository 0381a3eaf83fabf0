use std::collections::HashSet;

use crate::error::{Error, Result};

use super::Lattice;

/// Largest lattice the exhaustive search accepts by default.
pub const ORACLE_CAP: usize = 12;

/// Decides dismantlability by trying every elimination order.
///
/// Removability is tested directly against the surviving set, independent of
/// the cover bookkeeping used by [`super::dismantle`].
pub fn brute_force_dismantlable(lat: &Lattice) -> Result<bool> {
    brute_force_dismantlable_with_cap(lat, ORACLE_CAP)
}

pub fn brute_force_dismantlable_with_cap(lat: &Lattice, cap: usize) -> Result<bool> {
    let n = lat.len();
    if n > cap || n > 63 {
        return Err(Error::OracleCap { nodes: n, cap });
    }
    let full = (1u64 << n) - 1;
    let mut failed = HashSet::new();
    Ok(search(lat, full, &mut failed))
}

fn search(lat: &Lattice, alive: u64, failed: &mut HashSet<u64>) -> bool {
    if alive == 0 {
        return true;
    }
    if failed.contains(&alive) {
        return false;
    }
    let members: Vec<usize> = (0..lat.len()).filter(|&v| alive >> v & 1 == 1).collect();
    for &z in &members {
        let removable = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| a == z || b == z || (lat.meet(a, b) != z && lat.join(a, b) != z))
        });
        if removable && search(lat, alive & !(1 << z), failed) {
            return true;
        }
    }
    failed.insert(alive);
    false
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::lattice::dismantle;

    #[test]
    fn small_fixtures() {
        assert!(brute_force_dismantlable(&pentagon()).unwrap());
        assert!(brute_force_dismantlable(&diamond()).unwrap());
        assert!(brute_force_dismantlable(&chain(7)).unwrap());
        assert!(!brute_force_dismantlable(&cube()).unwrap());
        assert!(brute_force_dismantlable(&Lattice::from_leq(0, |_, _| true).unwrap()).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            brute_force_dismantlable(&chain(13)),
            Err(Error::OracleCap { nodes: 13, cap: 12 })
        );
        assert!(brute_force_dismantlable_with_cap(&chain(13), 13).unwrap());
    }

    #[test]
    fn agrees_with_greedy_on_fixtures() {
        for lat in [pentagon(), diamond(), cube(), chain(4)] {
            assert_eq!(brute_force_dismantlable(&lat).unwrap(), dismantle(&lat).is_dismantlable());
        }
    }
}
