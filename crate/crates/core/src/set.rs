//! Finite sets of Gaussian rationals and their element-wise set algebra:
//! sum, difference, product and ratio sets, representation counts, and the
//! exact sector membership test.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, GaussianRational, Rational};

/// The four element-wise binary operations of the set algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Sum,
    Diff,
    Prod,
    Ratio,
}

/// A deduplicated finite set of [`GaussianRational`] elements.
///
/// Iteration order is the lexicographic order on `(re, im)`, so every
/// derived artifact (files, reports, hashes of traversals) is deterministic
/// across runs.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FiniteComplexSet {
    elements: BTreeSet<GaussianRational>,
}

impl FiniteComplexSet {
    pub fn new() -> Self {
        FiniteComplexSet::default()
    }

    pub fn from_elements<I: IntoIterator<Item = GaussianRational>>(iter: I) -> Self {
        FiniteComplexSet {
            elements: iter.into_iter().collect(),
        }
    }

    /// Convenience constructor from integer pairs `(re, im)`.
    pub fn from_integer_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::from_elements(
            pairs
                .iter()
                .map(|&(re, im)| GaussianRational::from_integers(re, im)),
        )
    }

    /// Real integer sets `{a_1, a_2, ...}`, the workhorse of small examples.
    pub fn from_reals(values: &[i64]) -> Self {
        Self::from_integer_pairs(&values.iter().map(|&v| (v, 0)).collect::<Vec<_>>())
    }

    pub fn insert(&mut self, z: GaussianRational) -> bool {
        self.elements.insert(z)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        self.elements.contains(z)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&GaussianRational::zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = &GaussianRational> + Clone {
        self.elements.iter()
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }

    /// Applies `op` to one ordered pair. Ratio with a zero divisor is a
    /// precondition failure surfaced by the set-level entry points.
    fn apply(a: &GaussianRational, b: &GaussianRational, op: SetOp) -> Result<GaussianRational> {
        Ok(match op {
            SetOp::Sum => a + b,
            SetOp::Diff => a - b,
            SetOp::Prod => a * b,
            SetOp::Ratio => a.checked_div(b)?,
        })
    }

    fn element_wise(&self, other: &FiniteComplexSet, op: SetOp) -> Result<FiniteComplexSet> {
        self.require_nonempty()?;
        other.require_nonempty()?;
        if op == SetOp::Ratio && other.contains_zero() {
            return Err(Error::ZeroInRatioDenominator);
        }
        let mut out = BTreeSet::new();
        for a in self.iter() {
            for b in other.iter() {
                out.insert(Self::apply(a, b, op)?);
            }
        }
        Ok(FiniteComplexSet { elements: out })
    }

    /// `A + B = {a + b}`.
    pub fn sumset(&self, other: &FiniteComplexSet) -> Result<FiniteComplexSet> {
        self.element_wise(other, SetOp::Sum)
    }

    /// `A - B = {a - b}`.
    pub fn difference_set(&self, other: &FiniteComplexSet) -> Result<FiniteComplexSet> {
        self.element_wise(other, SetOp::Diff)
    }

    /// `A * B = {a * b}`.
    pub fn product_set(&self, other: &FiniteComplexSet) -> Result<FiniteComplexSet> {
        self.element_wise(other, SetOp::Prod)
    }

    /// `A : B = {a / b}`; fails with [`Error::ZeroInRatioDenominator`] when `0 ∈ B`.
    pub fn ratio_set(&self, other: &FiniteComplexSet) -> Result<FiniteComplexSet> {
        self.element_wise(other, SetOp::Ratio)
    }

    /// Representation counts `n(v) = |{(a, b) ∈ A × B : a op b = v}|`.
    pub fn representation_counts(
        &self,
        other: &FiniteComplexSet,
        op: SetOp,
    ) -> Result<RepCounts> {
        self.require_nonempty()?;
        other.require_nonempty()?;
        if op == SetOp::Ratio && other.contains_zero() {
            return Err(Error::ZeroInRatioDenominator);
        }
        let mut counts: BTreeMap<GaussianRational, u64> = BTreeMap::new();
        for a in self.iter() {
            for b in other.iter() {
                *counts.entry(Self::apply(a, b, op)?).or_insert(0) += 1;
            }
        }
        Ok(RepCounts { counts })
    }

    /// Translate: `A + c`.
    pub fn translate(&self, c: &GaussianRational) -> FiniteComplexSet {
        FiniteComplexSet::from_elements(self.iter().map(|a| a + c))
    }

    /// Dilate: `c * A` for `c ≠ 0` (zero would collapse the set).
    pub fn dilate(&self, c: &GaussianRational) -> Result<FiniteComplexSet> {
        if c.is_zero() {
            return Err(Error::BadParams("dilation by zero".into()));
        }
        Ok(FiniteComplexSet::from_elements(self.iter().map(|a| a * c)))
    }

    /// Exact sector membership: every `z ∈ A` satisfies `|tan(2 arg z)| < eps`.
    ///
    /// Evaluated with no trigonometry via `tan(2θ) = 2t/(1 - t^2)` for
    /// `t = im/re`, which requires `re > 0` and `|t| < 1`; the comparison
    /// `2|t| < eps (1 - t^2)` is then a rational inequality.
    pub fn sector_check(&self, eps: &Rational) -> Result<bool> {
        if self.contains_zero() {
            return Err(Error::ZeroElement);
        }
        if !eps.is_positive() {
            return Err(Error::BadParams("epsilon must be positive".into()));
        }
        for z in self.iter() {
            if !z.re().is_positive() {
                return Ok(false);
            }
            let t = z.im() / z.re();
            let t_abs = t.abs();
            if t_abs >= Rational::one() {
                return Ok(false);
            }
            // |tan 2θ| = 2|t| / (1 - t²) with 1 - t² > 0 here.
            if rat2(&t_abs) >= eps * (Rational::one() - &t * &t) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn rat2(t: &Rational) -> Rational {
    t + t
}

impl fmt::Debug for FiniteComplexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<GaussianRational> for FiniteComplexSet {
    fn from_iter<I: IntoIterator<Item = GaussianRational>>(iter: I) -> Self {
        FiniteComplexSet::from_elements(iter)
    }
}

/// Counts of realisations of each value of a binary set operation.
///
/// For sum/diff/prod the counts always total `|A||B|`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepCounts {
    counts: BTreeMap<GaussianRational, u64>,
}

impl RepCounts {
    pub fn get(&self, v: &GaussianRational) -> u64 {
        self.counts.get(v).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GaussianRational, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    /// `Σ n(v)^2`, the energy attached to these counts.
    pub fn sum_of_squares(&self) -> u128 {
        self.counts
            .values()
            .map(|&c| (c as u128) * (c as u128))
            .sum()
    }

    /// `Σ n(v)^3`.
    pub fn sum_of_cubes(&self) -> u128 {
        self.counts
            .values()
            .map(|&c| (c as u128) * (c as u128) * (c as u128))
            .sum()
    }

    pub fn support(&self) -> FiniteComplexSet {
        FiniteComplexSet::from_elements(self.counts.keys().cloned())
    }

    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

/// Parses the set file format: one element per line as
/// `re_num/re_den im_num/im_den`, integers may omit `/1`, `#` starts a
/// comment, blank lines ignored.
pub fn parse_set(text: &str) -> Result<FiniteComplexSet> {
    let mut set = FiniteComplexSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (re_str, im_str) = match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected `re im`, got {line:?}"),
                })
            }
        };
        let re = parse_rational(re_str).map_err(|msg| Error::Parse { line: idx + 1, msg })?;
        let im = parse_rational(im_str).map_err(|msg| Error::Parse { line: idx + 1, msg })?;
        set.insert(GaussianRational::new(re, im));
    }
    Ok(set)
}

/// Renders a set in the file format (LF line endings, deterministic order).
pub fn render_set(set: &FiniteComplexSet) -> String {
    let mut out = String::new();
    for z in set.iter() {
        out.push_str(&format_rational(z.re()));
        out.push(' ');
        out.push_str(&format_rational(z.im()));
        out.push('\n');
    }
    out
}

pub fn read_set_file(path: &std::path::Path) -> Result<FiniteComplexSet> {
    let text = std::fs::read_to_string(path)?;
    parse_set(&text)
}

pub fn write_set_file(path: &std::path::Path, set: &FiniteComplexSet) -> Result<()> {
    std::fs::write(path, render_set(set))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn reals(v: &[i64]) -> FiniteComplexSet {
        FiniteComplexSet::from_reals(v)
    }

    #[test]
    fn sumset_small_cases() {
        assert_eq!(
            reals(&[1, 2]).sumset(&reals(&[1, 2])).unwrap(),
            reals(&[2, 3, 4])
        );
        assert_eq!(reals(&[0]).sumset(&reals(&[0])).unwrap(), reals(&[0]));
        // {1,2,4} + {1,2,4} = {2,3,4,5,6,8}, six distinct sums.
        let s = reals(&[1, 2, 4]).sumset(&reals(&[1, 2, 4])).unwrap();
        assert_eq!(s, reals(&[2, 3, 4, 5, 6, 8]));
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn difference_product_ratio_small_cases() {
        assert_eq!(
            reals(&[1, 2]).difference_set(&reals(&[1, 2])).unwrap(),
            reals(&[-1, 0, 1])
        );
        let r = reals(&[1, 2]).ratio_set(&reals(&[1, 2])).unwrap();
        assert_eq!(
            r,
            FiniteComplexSet::from_elements(vec![
                GaussianRational::new(rat(1, 2), rat(0, 1)),
                GaussianRational::from_integers(1, 0),
                GaussianRational::from_integers(2, 0),
            ])
        );
        assert_eq!(
            reals(&[1, 2, 4]).product_set(&reals(&[1, 2, 4])).unwrap(),
            reals(&[1, 2, 4, 8, 16])
        );
    }

    #[test]
    fn ratio_rejects_zero_divisor() {
        assert_eq!(
            reals(&[1, 2]).ratio_set(&reals(&[0, 1])),
            Err(Error::ZeroInRatioDenominator)
        );
    }

    #[test]
    fn empty_operands_are_rejected() {
        let empty = FiniteComplexSet::new();
        assert_eq!(reals(&[1]).sumset(&empty), Err(Error::EmptySet));
        assert_eq!(empty.sumset(&reals(&[1])), Err(Error::EmptySet));
    }

    #[test]
    fn representation_counts_match_enumeration() {
        let a = reals(&[1, 2]);
        let diff = a.representation_counts(&a, SetOp::Diff).unwrap();
        assert_eq!(diff.get(&GaussianRational::zero()), 2);
        assert_eq!(diff.get(&GaussianRational::one()), 1);
        assert_eq!(diff.get(&GaussianRational::from_integers(-1, 0)), 1);
        assert_eq!(diff.total(), 4);

        let ratio = a.representation_counts(&a, SetOp::Ratio).unwrap();
        assert_eq!(ratio.get(&GaussianRational::one()), 2);
        assert_eq!(ratio.get(&GaussianRational::from_integers(2, 0)), 1);
        assert_eq!(ratio.get(&GaussianRational::new(rat(1, 2), rat(0, 1))), 1);

        let single = reals(&[0]).representation_counts(&reals(&[0]), SetOp::Sum).unwrap();
        assert_eq!(single.get(&GaussianRational::zero()), 1);
        assert_eq!(single.total(), 1);
    }

    #[test]
    fn counts_total_equals_pair_count() {
        let a = reals(&[1, 2, 3, 5]);
        let b = reals(&[-1, 4]);
        for op in [SetOp::Sum, SetOp::Diff, SetOp::Prod] {
            let c = a.representation_counts(&b, op).unwrap();
            assert_eq!(c.total(), (a.len() * b.len()) as u128);
        }
    }

    #[test]
    fn sector_check_examples() {
        let eps = rat(1, 100);
        assert!(reals(&[1, 2, 3]).sector_check(&eps).unwrap());
        // arg = π/4 fails the |t| < 1 requirement.
        assert!(!FiniteComplexSet::from_integer_pairs(&[(1, 1)])
            .sector_check(&eps)
            .unwrap());
        // tan(2 arg z) = (2/100)/(1 - 1/10000) slightly exceeds 1/100.
        assert!(!FiniteComplexSet::from_integer_pairs(&[(100, 1)])
            .sector_check(&eps)
            .unwrap());
        assert_eq!(
            reals(&[0, 1]).sector_check(&eps),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn sector_check_scale_invariant_under_positive_reals() {
        let eps = rat(1, 100);
        let a = FiniteComplexSet::from_integer_pairs(&[(1000, 1), (500, 2), (300, 0)]);
        let scaled = a
            .dilate(&GaussianRational::new(rat(7, 3), rat(0, 1)))
            .unwrap();
        assert_eq!(a.sector_check(&eps).unwrap(), scaled.sector_check(&eps).unwrap());
    }

    #[test]
    fn set_file_round_trip() {
        let text = "# a comment\n1/2 -3/4\n5 0\n\n-1 2/3 # trailing comment\n";
        let set = parse_set(text).unwrap();
        assert_eq!(set.len(), 3);
        let rendered = render_set(&set);
        assert_eq!(parse_set(&rendered).unwrap(), set);
        assert_eq!(rendered, "-1 2/3\n1/2 -3/4\n5 0\n");
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(matches!(parse_set("1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_set("1 2 3"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_set("1 x"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_set("ok 1\n1/0 2"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn dilation_preserves_sumset_size() {
        let a = reals(&[1, 2, 4, 9]);
        let c = GaussianRational::new(rat(3, 7), rat(2, 5));
        let ca = a.dilate(&c).unwrap();
        assert_eq!(
            a.sumset(&a).unwrap().len(),
            ca.sumset(&ca).unwrap().len()
        );
    }
}
