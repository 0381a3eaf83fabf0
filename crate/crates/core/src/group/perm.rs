use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::Group;

/// A permutation of `{0, …, degree-1}` stored as its image list.
///
/// Products compose left to right: `(a * b)(i) = b(a(i))`. Cycle notation
/// is 1-based, as usual in print.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u16>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u16).collect())
    }

    /// Builds a permutation from 1-based cycles, composing them left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let bad = |reason: String| Error::BadPermutation {
            index: 0,
            degree,
            reason,
        };
        let mut result = Self::identity(degree);
        for cycle in cycles {
            let mut seen = Vec::with_capacity(cycle.len());
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(bad(format!("point {p} outside 1..={degree}")));
                }
                if seen.contains(&p) {
                    return Err(bad(format!("point {p} repeated in a cycle")));
                }
                seen.push(p);
            }
            let mut images: Vec<u16> = (0..degree as u16).collect();
            for (i, &p) in cycle.iter().enumerate() {
                images[p - 1] = (cycle[(i + 1) % cycle.len()] - 1) as u16;
            }
            result = result.compose(&Permutation(images));
        }
        Ok(result)
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &i in &images {
            if i >= degree || std::mem::replace(&mut seen[i], true) {
                return Err(Error::BadPermutation {
                    index: 0,
                    degree,
                    reason: format!("image list {images:?} is not a bijection"),
                });
            }
        }
        Ok(Permutation(images.into_iter().map(|i| i as u16).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        transpositions % 2 == 0
    }

    /// Non-trivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let points: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", points.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Breadth-first closure of `generators`, returning the Cayley table of the
/// generated group with the identity as element 0.
pub(crate) fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<Group> {
    for (index, g) in generators.iter().enumerate() {
        if g.degree() != degree {
            return Err(Error::BadPermutation {
                index,
                degree,
                reason: format!("has degree {}", g.degree()),
            });
        }
    }
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in generators {
            let next = current.compose(g);
            if !index.contains_key(&next) {
                if elements.len() == cap {
                    return Err(Error::ClosureCap {
                        cap,
                        partial: elements.len() + 1,
                    });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.compose(b)] as u32);
        }
    }
    let labels = elements.iter().map(|p| p.to_string()).collect();
    Ok(Group::from_flat(n, table, labels).with_perms(elements))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Permutation::from_cycles(5, &[vec![1, 2, 5], vec![3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1,2,5)(3,4)");
        assert_eq!(p.image(0), 1);
        assert_eq!(p.image(4), 0);
        assert!(!p.is_even());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.compose(&b).image(0), 2);
        let ab = Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(ab, a.compose(&b));
    }

    #[test]
    fn rejects_bad_cycles() {
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2, 1]]).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn closure_of_s3() {
        let gens = [
            Permutation::from_cycles(3, &[vec![1, 2]]).unwrap(),
            Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap(),
        ];
        let g = closure(3, &gens, 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(0), "()");
        assert!(matches!(
            closure(3, &gens, 4),
            Err(Error::ClosureCap { cap: 4, partial: 5 })
        ));
    }
}
