//! Constructors for the supported group families.
//!
//! The two-generator families (dihedral, generalized quaternion, modular,
//! quasi-dihedral, and the `p·q^m` semidirect products) are built on normal
//! forms `x^i y^j` and multiplied through a closed-form rewrite rather than by
//! coset enumeration.

use crate::error::{Error, Result};

use super::perm::{closure, Permutation};
use super::spec::multiplicative_order;
use super::{Group, GroupSpec};

pub const DEFAULT_ORDER_CAP: usize = 400;

/// Builds the group described by `spec` under the default order cap.
pub fn build_group(spec: &GroupSpec) -> Result<Group> {
    build_group_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn build_group_with_cap(spec: &GroupSpec, cap: usize) -> Result<Group> {
    spec.check()?;
    if let Some(order) = spec.expected_order() {
        if order > cap as u128 {
            return Err(Error::OrderCap { order, cap });
        }
    }
    Ok(build(spec, cap)?.with_spec(spec.clone()))
}

fn build(spec: &GroupSpec, cap: usize) -> Result<Group> {
    match spec {
        GroupSpec::Symmetric(n) => {
            let mut gens = Vec::new();
            if *n >= 2 {
                gens.push(Permutation::from_cycles(*n, &[vec![1, 2]])?);
                gens.push(Permutation::from_cycles(*n, &[(1..=*n).collect()])?);
            }
            closure(*n, &gens, cap)
        }
        GroupSpec::Alternating(n) => {
            let gens = (3..=*n)
                .map(|k| Permutation::from_cycles(*n, &[vec![1, 2, k]]))
                .collect::<Result<Vec<_>>>()?;
            closure(*n, &gens, cap)
        }
        GroupSpec::Cyclic(n) => Ok(metacyclic(Metacyclic {
            x_order: *n,
            y_order: 1,
            y_power: 0,
            action: 1,
        })),
        GroupSpec::Abelian(list) if list.len() == 1 => build(&GroupSpec::Cyclic(list[0]), cap),
        GroupSpec::Abelian(list) => Ok(abelian(list)),
        GroupSpec::Dihedral(order) => {
            let n = order / 2;
            Ok(metacyclic(Metacyclic {
                x_order: n,
                y_order: 2,
                y_power: 0,
                action: n - 1,
            }))
        }
        GroupSpec::Quaternion(order) => {
            let m = order / 2;
            Ok(metacyclic(Metacyclic {
                x_order: m,
                y_order: 2,
                y_power: m / 2,
                action: m - 1,
            }))
        }
        GroupSpec::ModularM { p, n } => {
            let m = p.pow(*n as u32 - 1);
            // y⁻¹xy = x^(p^(n-2)+1), so yxy⁻¹ is the inverse exponent.
            let r = p.pow(*n as u32 - 2) + 1;
            Ok(metacyclic(Metacyclic {
                x_order: m,
                y_order: *p,
                y_power: 0,
                action: mod_inverse(r, m).expect("1 + p^(n-2) is a unit mod p^(n-1)"),
            }))
        }
        GroupSpec::QuasiDihedral(order) => {
            let m = order / 2;
            Ok(metacyclic(Metacyclic {
                x_order: m,
                y_order: 2,
                y_power: 0,
                action: m / 2 - 1,
            }))
        }
        GroupSpec::SemidirectPQ { p, q, m, r } => {
            debug_assert_eq!(multiplicative_order(*r, *p), Some(*q));
            Ok(metacyclic(Metacyclic {
                x_order: *p,
                y_order: q.pow(*m as u32),
                y_power: 0,
                action: r % p,
            }))
        }
        GroupSpec::Hamiltonian { n, odd } => {
            let q8 = build(&GroupSpec::Quaternion(8), cap)?;
            let mut rest = vec![2; *n];
            rest.extend(odd.iter().copied().filter(|&a| a > 1));
            if rest.is_empty() {
                Ok(q8)
            } else {
                Ok(direct_product(&q8, &build(&GroupSpec::Abelian(rest), cap)?))
            }
        }
        GroupSpec::Permutations { degree, generators } => {
            let gens = generators
                .iter()
                .enumerate()
                .map(|(index, cycles)| {
                    Permutation::from_cycles(*degree, cycles).map_err(|e| match e {
                        Error::BadPermutation { degree, reason, .. } => Error::BadPermutation {
                            index,
                            degree,
                            reason,
                        },
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            closure(*degree, &gens, cap)
        }
        GroupSpec::Product(a, b) => {
            let a = build(a, cap)?;
            let b = build(b, cap)?;
            let order = a.order() as u128 * b.order() as u128;
            if order > cap as u128 {
                return Err(Error::OrderCap { order, cap });
            }
            Ok(direct_product(&a, &b))
        }
    }
}

fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    (1..m).find(|&b| a * b % m == 1)
}

/// `⟨x, y | x^x_order = 1, y^y_order = x^y_power, y x y⁻¹ = x^action⟩`.
///
/// Requires `action^y_order ≡ 1` and `y_power·action ≡ y_power` modulo
/// `x_order`; every caller satisfies both.
struct Metacyclic {
    x_order: usize,
    y_order: usize,
    y_power: usize,
    action: usize,
}

fn metacyclic(p: Metacyclic) -> Group {
    let (m, k) = (p.x_order, p.y_order);
    let n = m * k;
    // action^j mod m for j < k
    let mut twist = vec![1 % m; k];
    for j in 1..k {
        twist[j] = twist[j - 1] * p.action % m;
    }
    // x^i y^j · x^a y^b = x^(i + a·t^j) y^(j+b), then y^k = x^s.
    let mut table = Vec::with_capacity(n * n);
    for lhs in 0..n {
        let (i, j) = (lhs % m, lhs / m);
        for rhs in 0..n {
            let (a, b) = (rhs % m, rhs / m);
            let mut x = (i + a * twist[j]) % m;
            let mut y = j + b;
            if y >= k {
                y -= k;
                x = (x + p.y_power) % m;
            }
            table.push((x + m * y) as u32);
        }
    }
    let labels = (0..n).map(|e| word(e % m, e / m)).collect();
    Group::from_flat(n, table, labels)
}

fn word(i: usize, j: usize) -> String {
    let part = |sym: &str, e: usize| match e {
        0 => String::new(),
        1 => sym.to_string(),
        e => format!("{sym}^{e}"),
    };
    let w = part("x", i) + &part("y", j);
    if w.is_empty() {
        "1".into()
    } else {
        w
    }
}

/// Direct product of cyclic groups; labels are exponent vectors.
fn abelian(orders: &[usize]) -> Group {
    let n: usize = orders.iter().product();
    let digits = |mut e: usize| {
        let mut d = vec![0; orders.len()];
        for (slot, &o) in d.iter_mut().zip(orders).rev() {
            *slot = e % o;
            e /= o;
        }
        d
    };
    let encode = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &o)| acc * o + x);
    let vectors: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let mut table = Vec::with_capacity(n * n);
    for a in &vectors {
        for b in &vectors {
            let sum: Vec<usize> = a.iter().zip(b).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
            table.push(encode(&sum) as u32);
        }
    }
    let labels = vectors
        .iter()
        .map(|v| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Group::from_flat(n, table, labels)
}

/// Componentwise product; element `(a, b)` has index `a·|B| + b`.
pub(crate) fn direct_product(a: &Group, b: &Group) -> Group {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut table = Vec::with_capacity(n * n);
    for lhs in 0..n {
        let (a1, b1) = (lhs / nb, lhs % nb);
        for rhs in 0..n {
            let (a2, b2) = (rhs / nb, rhs % nb);
            table.push((a.mul(a1, a2) * nb + b.mul(b1, b2)) as u32);
        }
    }
    let labels = (0..n)
        .map(|e| format!("({},{})", a.label(e / nb), b.label(e % nb)))
        .collect();
    Group::from_flat(n, table, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_spec, validate_group};

    fn built(text: &str) -> Group {
        let g = build_group(&parse_spec(text).unwrap()).unwrap();
        let report = validate_group(&g);
        assert!(report.passed(), "{text}: {report:?}");
        g
    }

    fn count_order(g: &Group, k: usize) -> usize {
        g.elements().filter(|&e| g.element_order(e) == k).count()
    }

    #[test]
    fn cyclic_generator_has_full_order() {
        let g = built("Z:12");
        assert_eq!(g.order(), 12);
        assert_eq!(g.element_order(g.element_by_label("x").unwrap()), 12);
    }

    #[test]
    fn dihedral_relations() {
        let g = built("D:12");
        assert_eq!(g.order(), 12);
        let x = g.element_by_label("x").unwrap();
        let y = g.element_by_label("y").unwrap();
        assert_eq!(g.element_order(x), 6);
        assert_eq!(g.element_order(y), 2);
        assert_eq!(g.mul(g.mul(y, x), y), g.inv(x));
    }

    #[test]
    fn quaternion_has_unique_involution() {
        for order in [8, 16, 32, 64] {
            let g = built(&format!("Q:{order}"));
            assert_eq!(g.order(), order);
            assert_eq!(count_order(&g, 2), 1, "Q:{order}");
            assert!(!g.is_abelian());
        }
    }

    #[test]
    fn modular_group() {
        let g = built("M:3,3");
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert!(g.elements().any(|e| g.element_order(e) == 9));
        let x = g.element_by_label("x").unwrap();
        let y = g.element_by_label("y").unwrap();
        // y⁻¹xy = x^4
        assert_eq!(g.conjugate(x, y), g.pow(x, 4));

        let m16 = built("M:2,4");
        let (x, y) = (m16.element_by_label("x").unwrap(), m16.element_by_label("y").unwrap());
        assert_eq!(m16.conjugate(x, y), m16.pow(x, 5));
    }

    #[test]
    fn quasi_dihedral_relation() {
        let g = built("QD:16");
        let x = g.element_by_label("x").unwrap();
        let y = g.element_by_label("y").unwrap();
        assert_eq!(g.mul(g.mul(y, x), y), g.pow(x, 3));
        assert_eq!(g.element_order(y), 2);
    }

    #[test]
    fn hamiltonian_q8_times_z2() {
        let g = built("Ham:1");
        assert_eq!(g.order(), 16);
        assert!(!g.is_abelian());
        assert_eq!(built("Ham:0").order(), 8);
        assert_eq!(built("Ham:1;3").order(), 48);
        assert_eq!(built("Ham:0;3,5").order(), 120);
    }

    #[test]
    fn semidirect_pq() {
        let g = built("SDP:7,3,2,2");
        assert_eq!(g.order(), 63);
        assert!(!g.is_abelian());
        // Oracle: the centre, computed by brute force over the table, is the
        // subgroup of order 3 generated by y^3.
        let centre: Vec<_> = g
            .elements()
            .filter(|&z| g.elements().all(|h| g.mul(z, h) == g.mul(h, z)))
            .collect();
        assert_eq!(centre.len(), 3);
        assert!(centre.contains(&g.element_by_label("y^3").unwrap()));
    }

    #[test]
    fn symmetric_and_alternating() {
        assert_eq!(built("S:4").order(), 24);
        assert_eq!(built("A:5").order(), 60);
        assert_eq!(built("S:1").order(), 1);
        assert_eq!(built("A:2").order(), 1);
        assert_eq!(built("A:3").order(), 3);
        let a4 = built("A:4");
        assert!(a4.elements().all(|e| a4.permutation(e).unwrap().is_even()));
    }

    #[test]
    fn product_orders_are_lcms() {
        let a = built("Z:4");
        let b = built("Z:6");
        let p = built("Z:4 x Z:6");
        assert_eq!(p.order(), 24);
        for e in p.elements() {
            let (oa, ob) = (a.element_order(e / 6), b.element_order(e % 6));
            let lcm = oa * ob / gcd(oa, ob);
            assert_eq!(p.element_order(e), lcm);
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn abelian_from_list() {
        let g = built("Ab:4,2,9");
        assert_eq!(g.order(), 72);
        assert!(g.is_abelian());
        assert_eq!(g.label(0), "(0,0,0)");
    }

    #[test]
    fn caps_and_bad_generators() {
        let err = build_group(&parse_spec("S:6").unwrap()).unwrap_err();
        assert_eq!(err, Error::OrderCap { order: 720, cap: 400 });
        assert_eq!(build_group_with_cap(&parse_spec("S:6").unwrap(), 720).unwrap().order(), 720);
        let err = build_group_with_cap(&parse_spec("Perm:5;(1 2),(1 2 3 4 5)").unwrap(), 50).unwrap_err();
        assert!(matches!(err, Error::ClosureCap { cap: 50, partial: 51 }), "{err:?}");
        let err = build_group(&parse_spec("Perm:3;(1 2),(1 4)").unwrap()).unwrap_err();
        assert!(matches!(err, Error::BadPermutation { index: 1, .. }), "{err:?}");
        let err = build_group(&parse_spec("Z:30 x Z:30").unwrap()).unwrap_err();
        assert!(matches!(err, Error::OrderCap { order: 900, .. }));
    }

    #[test]
    fn identity_is_element_zero() {
        for text in ["D:10", "Q:16", "M:5,3", "QD:32", "SDP:5,2,2,4", "Ham:1;3", "Ab:3,3", "S:3 x Z:2"] {
            let g = built(text);
            assert_eq!(g.element_order(0), 1, "{text}");
        }
    }
}
