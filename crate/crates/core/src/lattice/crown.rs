use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

use super::{Lattice, Node};

/// A crown `x1 < y1 > x2 < y2 > ... > xn < yn > x1`: the only comparabilities
/// among its `2n` elements are `x_i <= y_i`, `x_{i+1} <= y_i` and `x_1 <= y_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crown {
    pub xs: Vec<Node>,
    pub ys: Vec<Node>,
}

impl Crown {
    /// Number of elements, `2n`.
    pub fn order(&self) -> usize {
        self.xs.len() + self.ys.len()
    }

    /// Elements in cyclic order `x1, y1, x2, y2, ...`.
    pub fn cycle(&self) -> Vec<Node> {
        self.xs.iter().zip(&self.ys).flat_map(|(&x, &y)| [x, y]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrownSearch {
    Found(Crown),
    /// Every crown with at most `max_order` elements was ruled out.
    NoneUpTo { max_order: usize },
    /// The step budget ran out before the search finished.
    BudgetExhausted { max_order: usize, steps: u64 },
}

impl CrownSearch {
    pub fn crown(&self) -> Option<&Crown> {
        match self {
            CrownSearch::Found(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest crown size searched; odd values are rounded down.
    pub max_order: usize,
    /// Candidate extensions tried before giving up.
    pub budget: u64,
}

pub const DEFAULT_CROWN_BUDGET: u64 = 50_000_000;

impl SearchOptions {
    /// Exhaustive for up to 40 nodes, crowns of at most 12 elements beyond.
    pub fn for_nodes(n: usize) -> Self {
        let max_order = if n <= 40 { (n / 2 * 2).max(6) } else { 12 };
        SearchOptions {
            max_order,
            budget: DEFAULT_CROWN_BUDGET,
        }
    }
}

pub fn validate_crown(lat: &Lattice, c: &Crown) -> bool {
    let n = c.xs.len();
    if n < 3 || c.ys.len() != n {
        return false;
    }
    let all = c.cycle();
    if all.iter().any(|&v| v >= lat.len()) {
        return false;
    }
    let mut seen = BitSet::new(lat.len());
    if !all.iter().all(|&v| seen.insert(v)) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && (lat.leq(c.xs[i], c.xs[j]) || lat.leq(c.ys[i], c.ys[j])) {
                return false;
            }
            if lat.leq(c.ys[j], c.xs[i]) {
                return false;
            }
            let wanted = j == i || j + 1 == i || (i == 0 && j == n - 1);
            if lat.leq(c.xs[i], c.ys[j]) != wanted {
                return false;
            }
        }
    }
    true
}

/// Looks for a crown with at most `max_order` elements anywhere in `lat`.
pub fn find_crown(lat: &Lattice, max_order: usize) -> Result<CrownSearch> {
    let within = BitSet::full(lat.len());
    find_crown_within(
        lat,
        &within,
        SearchOptions {
            max_order,
            budget: DEFAULT_CROWN_BUDGET,
        },
    )
}

/// Looks for a crown whose elements all lie in `within`, smallest first.
///
/// Crowns are built along their cycle `x1, y1, x2, ...` with `x1` the least
/// index among the `x`s, so each crown is reached once per direction.
pub fn find_crown_within(lat: &Lattice, within: &BitSet, opts: SearchOptions) -> Result<CrownSearch> {
    if opts.max_order < 6 {
        return Err(Error::CrownBound(opts.max_order));
    }
    let mut search = Search::new(lat, within, opts.budget);
    let largest = (opts.max_order / 2).min(within.len() / 2);
    for k in 3..=largest {
        match search.run(k) {
            Some(Ok(c)) => {
                debug_assert!(validate_crown(lat, &c));
                return Ok(CrownSearch::Found(c));
            }
            Some(Err(())) => {
                return Ok(CrownSearch::BudgetExhausted {
                    max_order: opts.max_order,
                    steps: search.steps,
                })
            }
            None => {}
        }
    }
    Ok(CrownSearch::NoneUpTo {
        max_order: opts.max_order,
    })
}

struct Search<'a> {
    lat: &'a Lattice,
    within: &'a BitSet,
    /// Strict up and down sets restricted to `within`, filled on demand.
    up: Vec<Option<BitSet>>,
    down: Vec<Option<BitSet>>,
    steps: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(lat: &'a Lattice, within: &'a BitSet, budget: u64) -> Self {
        Search {
            lat,
            within,
            up: vec![None; lat.len()],
            down: vec![None; lat.len()],
            steps: 0,
            budget,
        }
    }

    fn ensure(&mut self, v: Node) {
        if self.up[v].is_none() {
            let mut u = self.lat.up_set(v).into_owned();
            u.intersect_with(self.within);
            u.remove(v);
            let mut d = self.lat.down_set(v).into_owned();
            d.intersect_with(self.within);
            d.remove(v);
            self.up[v] = Some(u);
            self.down[v] = Some(d);
        }
    }

    fn up(&self, v: Node) -> &BitSet {
        self.up[v].as_ref().expect("row computed")
    }

    fn down(&self, v: Node) -> &BitSet {
        self.down[v].as_ref().expect("row computed")
    }

    /// Closed comparability set of `v`: itself, everything above and below.
    fn comparable(&self, v: Node) -> BitSet {
        let mut c = self.up(v).union(self.down(v));
        c.insert(v);
        c
    }

    /// `None` if no crown of `2k` elements exists, `Some(Err)` on budget.
    fn run(&mut self, k: usize) -> Option<Result<Crown, ()>> {
        let cands: Vec<Node> = self.within.iter().collect();
        for x1 in cands {
            self.ensure(x1);
            if self.up(x1).len() < 2 || self.comparable(x1).len() == self.within.len() {
                continue;
            }
            let mut path = vec![x1];
            // blocked[t]: comparability sets of path[..t]; tail[t]: of path[1..t].
            let mut blocked = vec![BitSet::new(self.lat.len()), self.comparable(x1)];
            let mut tail = vec![BitSet::new(self.lat.len()), BitSet::new(self.lat.len())];
            match self.extend(k, &mut path, &mut blocked, &mut tail) {
                Ok(true) => {
                    let xs = path.iter().step_by(2).copied().collect();
                    let ys = path.iter().skip(1).step_by(2).copied().collect();
                    return Some(Ok(Crown { xs, ys }));
                }
                Ok(false) => {}
                Err(()) => return Some(Err(())),
            }
        }
        None
    }

    fn extend(&mut self, k: usize, path: &mut Vec<Node>, blocked: &mut Vec<BitSet>, tail: &mut Vec<BitSet>) -> Result<bool, ()> {
        let t = path.len();
        let last = path[t - 1];
        let x1 = path[0];
        let cands = if t % 2 == 1 {
            // Next is y_i above x_i = last.
            let mut c = self.up(last).clone();
            if t == 2 * k - 1 {
                c.intersect_with(self.up(x1));
                c.difference_with(&tail[t - 1]);
            } else {
                c.difference_with(&blocked[t - 1]);
            }
            c
        } else {
            // Next is x_{i+1} below y_i = last, with index above x1.
            let mut c = self.down(last).clone();
            c.difference_with(&blocked[t - 1]);
            c
        };
        for v in cands.iter() {
            if t % 2 == 0 && v <= x1 {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(());
            }
            if t == 2 * k - 1 {
                path.push(v);
                return Ok(true);
            }
            self.ensure(v);
            if t % 2 == 0 && self.up(v).is_empty() {
                continue;
            }
            let cv = self.comparable(v);
            blocked.push(blocked[t].union(&cv));
            tail.push(tail[t].union(&cv));
            path.push(v);
            if self.extend(k, path, blocked, tail)? {
                return Ok(true);
            }
            path.pop();
            blocked.pop();
            tail.pop();
        }
        Ok(false)
    }
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

    /// Six-element crown with a bottom and top added.
    fn crown6() -> Lattice {
        // 0 bottom, xs 1 2 3, ys 4 5 6, 7 top.
        let mut rel = vec![(1, 4), (2, 4), (2, 5), (3, 5), (3, 6), (1, 6)];
        for v in 1..=3 {
            rel.push((0, v));
        }
        for v in 4..=6 {
            rel.push((v, 7));
        }
        Lattice::from_relations(8, &rel).unwrap()
    }

    #[test]
    fn bound_below_six_is_rejected() {
        assert_eq!(find_crown(&chain(3), 4), Err(Error::CrownBound(4)));
    }

    #[test]
    fn finds_explicit_crown() {
        let lat = crown6();
        let found = find_crown(&lat, 8).unwrap();
        let c = found.crown().expect("crown");
        assert_eq!(c.order(), 6);
        assert!(validate_crown(&lat, c));
        assert_eq!(c.xs[0], 1);
    }

    #[test]
    fn cube_contains_crown() {
        let lat = cube();
        let c = find_crown(&lat, 8).unwrap().crown().cloned().unwrap();
        assert!(validate_crown(&lat, &c));
    }

    #[test]
    fn no_crown_in_small_dismantlable_lattices() {
        for lat in [pentagon(), diamond(), chain(6)] {
            assert_eq!(find_crown(&lat, 6).unwrap(), CrownSearch::NoneUpTo { max_order: 6 });
        }
        let q = lattice("Q:16");
        assert!(find_crown(&q, 12).unwrap().crown().is_none());
    }

    #[test]
    fn validation_rejects_malformed() {
        let lat = crown6();
        let good = Crown { xs: vec![1, 2, 3], ys: vec![4, 5, 6] };
        assert!(validate_crown(&lat, &good));
        assert!(!validate_crown(&lat, &Crown { xs: vec![1, 2, 3], ys: vec![5, 6, 4] }));
        assert!(!validate_crown(&lat, &Crown { xs: vec![1, 2], ys: vec![4, 5] }));
        assert!(!validate_crown(&lat, &Crown { xs: vec![1, 2, 3], ys: vec![4, 5] }));
        assert!(!validate_crown(&lat, &Crown { xs: vec![1, 1, 3], ys: vec![4, 5, 6] }));
        assert!(!validate_crown(&lat, &Crown { xs: vec![1, 2, 30], ys: vec![4, 5, 6] }));
        // Adding the bottom creates extra comparabilities.
        assert!(!validate_crown(&lat, &Crown { xs: vec![0, 2, 3], ys: vec![4, 5, 6] }));
    }

    #[test]
    fn d24_crown() {
        let lat = lattice("D:24");
        let c = find_crown(&lat, 12).unwrap().crown().cloned().unwrap();
        assert!(validate_crown(&lat, &c));
        assert_eq!(c.order(), 6);
    }

    #[test]
    fn search_within_subset_stays_inside() {
        let lat = crown6();
        let within = BitSet::from_indices(8, [1, 2, 3, 4, 5, 6]);
        let c = find_crown_within(&lat, &within, SearchOptions::for_nodes(6)).unwrap();
        assert!(c.crown().unwrap().cycle().iter().all(|&v| within.contains(v)));
        let small = BitSet::from_indices(8, [1, 2, 4, 5, 6]);
        assert_eq!(
            find_crown_within(&lat, &small, SearchOptions::for_nodes(8)).unwrap(),
            CrownSearch::NoneUpTo { max_order: 8 }
        );
    }

    #[test]
    fn budget_is_reported() {
        let lat = lattice("S:4");
        let opts = SearchOptions { max_order: 12, budget: 3 };
        let within = BitSet::full(lat.len());
        assert!(matches!(
            find_crown_within(&lat, &within, opts).unwrap(),
            CrownSearch::BudgetExhausted { steps: 4, .. }
        ));
    }
}
