//! Brute-force reference implementations, straight from the definitions.
//!
//! Everything in this module is written as literal tuple enumeration with no
//! shared machinery from the optimized paths, so the two can be compared as
//! independent routes. Costs are exponential in tuple arity; intended for
//! small sets in tests and for the differential suites.


use crate::error::{Error, Result};
use crate::rational::{GaussianRational, Rational};
use crate::set::FiniteComplexSet;

/// `E(A,B)`: quadruples with `a1 - a2 = b1 - b2`, counted one by one.
pub fn additive_energy(a: &FiniteComplexSet, b: &FiniteComplexSet) -> u128 {
    let mut count: u128 = 0;
    for a1 in a.iter() {
        for a2 in a.iter() {
            let d = a1 - a2;
            for b1 in b.iter() {
                for b2 in b.iter() {
                    if b1 - b2 == d {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `E_*(A)`: quadruples with `a1/a2 = a3/a4`, via cross-multiplication.
pub fn multiplicative_energy(a: &FiniteComplexSet) -> Result<u128> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let mut count: u128 = 0;
    for a1 in a.iter() {
        for a2 in a.iter() {
            for a3 in a.iter() {
                for a4 in a.iter() {
                    if (a1 * a4) == (a2 * a3) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `E_3(A)`: sextuples with `a1 - a2 = a3 - a4 = a5 - a6`. O(|A|^6).
pub fn cubic_energy(a: &FiniteComplexSet) -> u128 {
    let mut count: u128 = 0;
    for a1 in a.iter() {
        for a2 in a.iter() {
            let d = a1 - a2;
            for a3 in a.iter() {
                for a4 in a.iter() {
                    if (a3 - a4) != d {
                        continue;
                    }
                    for a5 in a.iter() {
                        for a6 in a.iter() {
                            if (a5 - a6) == d {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

/// `A_d` by direct filtering.
pub fn slice(a: &FiniteComplexSet, d: &GaussianRational) -> FiniteComplexSet {
    FiniteComplexSet::from_elements(a.iter().filter(|z| a.contains(&(*z + d))).cloned())
}

/// Squared Euclidean edge lengths of a minimum spanning tree, computed with
/// Prim's algorithm and exact rational comparisons, returned sorted.
///
/// All minimum spanning trees of a graph share the same multiset of edge
/// weights, so this is a sound oracle for any correct MST regardless of
/// tie-breaking.
pub fn mst_weight_multiset(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let dist_sq = |i: usize, j: usize| -> Rational {
        let dx = &points[i].0 - &points[j].0;
        let dy = &points[i].1 - &points[j].1;
        &dx * &dx + &dy * &dy
    };
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    let mut best: Vec<Option<Rational>> = (0..n)
        .map(|j| if j == 0 { None } else { Some(dist_sq(0, j)) })
        .collect();
    let mut weights = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let bj = best[j].as_ref().expect("graph is complete");
            match pick {
                None => pick = Some(j),
                Some(p) => {
                    if bj < best[p].as_ref().unwrap() {
                        pick = Some(j);
                    }
                }
            }
        }
        let p = pick.expect("tree not yet spanning");
        in_tree[p] = true;
        weights.push(best[p].clone().unwrap());
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = dist_sq(p, j);
            if best[j].as_ref().is_none_or(|cur| &d < cur) {
                best[j] = Some(d);
            }
        }
    }
    weights.sort();
    weights
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn quadruple_counts_on_tiny_sets() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        assert_eq!(additive_energy(&a, &a), 6);
        assert_eq!(multiplicative_energy(&a).unwrap(), 6);
        assert_eq!(cubic_energy(&a), 10);

        let b = FiniteComplexSet::from_reals(&[1, 2, 3]);
        assert_eq!(additive_energy(&b, &b), 19);
        assert_eq!(cubic_energy(&b), 45);

        let c = FiniteComplexSet::from_reals(&[1, 2, 4]);
        assert_eq!(multiplicative_energy(&c).unwrap(), 19);
    }

    #[test]
    fn prim_mst_on_collinear_points() {
        let pts = vec![
            (rat_int(0), rat_int(0)),
            (rat_int(1), rat_int(0)),
            (rat_int(3), rat_int(0)),
        ];
        assert_eq!(mst_weight_multiset(&pts), vec![rat_int(1), rat_int(4)]);
    }

}
