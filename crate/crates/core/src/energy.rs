//! Additive, multiplicative and cubic energies, slice sets, popular
//! differences, and exact verification of the inequality chain that links
//! them:
//!
//! - `E(A,B) = Σ n²(d) = Σ n²(x)` over differences and sums, with the
//!   Cauchy-Schwarz bound `E(A,B)|A±B| ≥ |A|²|B|²`;
//! - `E_*(A) = Σ n²(l)` over ratios, with `E_*(A)|A·A| ≥ |A|⁴`;
//! - `E_3(A) = Σ n³(d)` and the slice identity `E_3(A) = Σ_d E(A, A_d)`;
//! - the slice-set lower bound `Σ_{d∈D'} |A_d||A-A_d| ≥ |A|²(Σ|A_d|^{3/2})²/E_3(A)`
//!   (half-integer powers certified by interval square roots);
//! - the realisation-count bound `E(A, A-A) ≥ Σ_d |A_d||A-A_d|`;
//! - the combined bound `E_3(A)·E(A,A-A) ≥ |A|⁸/(16|A-A|)`.
//!
//! All quantities are exact integers (or exact rationals for thresholds);
//! the only certified-interval step is the half-integer power comparison.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::powcmp::{cmp_sqrt_sum, SqrtCmp};
use crate::rational::{GaussianRational, Rational};
use crate::set::{FiniteComplexSet, RepCounts, SetOp};

/// Which energy a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyKind {
    Additive,
    Multiplicative,
    Cubic,
}

/// An exact energy value with its per-value counts and the lower bound the
/// crate checks it against.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub kind: EnergyKind,
    pub energy: u128,
    pub counts: RepCounts,
    /// Right-hand side of the cited lower bound for this energy.
    pub lower_bound_rhs: Rational,
    /// `energy - lower_bound_rhs`, nonnegative whenever the bound applies.
    pub slack: Rational,
}

impl EnergyReport {
    fn new(kind: EnergyKind, energy: u128, counts: RepCounts, rhs: Rational) -> Self {
        let slack = Rational::from_integer(energy.into()) - rhs.clone();
        EnergyReport {
            kind,
            energy,
            counts,
            lower_bound_rhs: rhs,
            slack,
        }
    }

    pub fn bound_holds(&self) -> bool {
        !self.slack.is_negative()
    }

    /// JSON with all integers as decimal strings.
    pub fn to_json(&self) -> Value {
        let counts: Vec<Value> = self
            .counts
            .iter()
            .map(|(v, c)| json!([v.to_string(), c.to_string()]))
            .collect();
        json!({
            "kind": match self.kind {
                EnergyKind::Additive => "additive",
                EnergyKind::Multiplicative => "multiplicative",
                EnergyKind::Cubic => "cubic",
            },
            "energy": self.energy.to_string(),
            "lower_bound_rhs": rational_string(&self.lower_bound_rhs),
            "slack": rational_string(&self.slack),
            "per_value_counts": counts,
        })
    }
}

pub(crate) fn rational_string(r: &Rational) -> String {
    crate::rational::format_rational(r)
}

/// `E(A,B)`, computed over the difference counts and cross-checked against
/// the sum counts; the two routes must agree exactly.
pub fn additive_energy(a: &FiniteComplexSet, b: &FiniteComplexSet) -> Result<EnergyReport> {
    let diff = a.representation_counts(b, SetOp::Diff)?;
    let sum = a.representation_counts(b, SetOp::Sum)?;
    let via_diff = diff.sum_of_squares();
    let via_sum = sum.sum_of_squares();
    if via_diff != via_sum {
        return Err(Error::IdentityViolation {
            lhs: via_diff.to_string(),
            rhs: via_sum.to_string(),
        });
    }
    let a2b2 = Rational::from_integer(((a.len() * a.len() * b.len() * b.len()) as u128).into());
    let denom = diff.len().min(sum.len()) as u128;
    let rhs = a2b2 / Rational::from_integer(denom.into());
    Ok(EnergyReport::new(EnergyKind::Additive, via_diff, diff, rhs))
}

/// `E_*(A) = Σ_{l ∈ A:A} n²(l)`, with the bound `E_*(A) ≥ |A|⁴/|A·A|`.
pub fn multiplicative_energy(a: &FiniteComplexSet) -> Result<EnergyReport> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let ratio = a.representation_counts(a, SetOp::Ratio)?;
    let energy = ratio.sum_of_squares();
    let prod_size = a.product_set(a)?.len() as u128;
    let a4 = (a.len() as u128).pow(4);
    let rhs = Rational::from_integer(a4.into()) / Rational::from_integer(prod_size.into());
    Ok(EnergyReport::new(
        EnergyKind::Multiplicative,
        energy,
        ratio,
        rhs,
    ))
}

/// `E_3(A) = Σ_{d ∈ A-A} n³(d)`, with the power-mean bound
/// `E_3(A) ≥ |A|⁶/|A-A|²`.
pub fn cubic_energy(a: &FiniteComplexSet) -> Result<EnergyReport> {
    let diff = a.representation_counts(a, SetOp::Diff)?;
    let energy = diff.sum_of_cubes();
    let a6 = (a.len() as u128).pow(6);
    let d2 = (diff.len() as u128) * (diff.len() as u128);
    let rhs = Rational::from_integer(a6.into()) / Rational::from_integer(d2.into());
    Ok(EnergyReport::new(EnergyKind::Cubic, energy, diff, rhs))
}

/// The slice `A_d = {a ∈ A : a + d ∈ A}` together with its shift.
#[derive(Debug, Clone)]
pub struct SliceSet {
    pub d: GaussianRational,
    pub set: FiniteComplexSet,
}

/// Builds `A_d`; a shift outside `A - A` yields the empty slice.
pub fn slice(a: &FiniteComplexSet, d: &GaussianRational) -> SliceSet {
    let set = FiniteComplexSet::from_elements(a.iter().filter(|z| a.contains(&(*z + d))).cloned());
    SliceSet { d: d.clone(), set }
}

/// All slices of `A`, indexed by `d ∈ A - A`; `|A_d|` always equals the
/// difference representation count `n(d)`.
pub fn all_slices(a: &FiniteComplexSet) -> Result<BTreeMap<GaussianRational, FiniteComplexSet>> {
    let counts = a.representation_counts(a, SetOp::Diff)?;
    let mut out = BTreeMap::new();
    for (d, n) in counts.iter() {
        let s = slice(a, d);
        debug_assert_eq!(s.set.len() as u64, n);
        out.insert(d.clone(), s.set);
    }
    Ok(out)
}

/// Both sides of an exact integer identity or inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BothSides {
    pub lhs: u128,
    pub rhs: u128,
}

/// Checks `E_3(A) = Σ_{d ∈ A-A} E(A, A_d)` exactly.
///
/// Returns both sides; a mismatch is an implementation bug and comes back
/// as [`Error::IdentityViolation`].
pub fn verify_e3_identity(a: &FiniteComplexSet) -> Result<BothSides> {
    let lhs = cubic_energy(a)?.energy;
    let mut rhs: u128 = 0;
    for (_, a_d) in all_slices(a)? {
        rhs += additive_energy(a, &a_d)?.energy;
    }
    if lhs != rhs {
        return Err(Error::IdentityViolation {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(BothSides { lhs, rhs })
}

/// The popular difference set `D' = {d : |A_d| ≥ |A|²/(2|A-A|)}` with its
/// exact threshold.
#[derive(Debug, Clone)]
pub struct PopularDifferences {
    pub threshold: Rational,
    pub set: FiniteComplexSet,
}

pub fn popular_differences(a: &FiniteComplexSet) -> Result<PopularDifferences> {
    let counts = a.representation_counts(a, SetOp::Diff)?;
    let threshold = Rational::from_integer(((a.len() * a.len()) as u128).into())
        / Rational::from_integer(((2 * counts.len()) as u128).into());
    let set = FiniteComplexSet::from_elements(
        counts
            .iter()
            .filter(|(_, n)| Rational::from_integer((*n as u128).into()) >= threshold)
            .map(|(d, _)| d.clone()),
    );
    Ok(PopularDifferences { threshold, set })
}

/// Outcome of the slice-set lower bound check
/// `Σ_{d∈D'} |A_d||A-A_d| ≥ |A|²(Σ_{d∈D'} |A_d|^{3/2})²/E_3(A)`.
#[derive(Debug, Clone)]
pub struct SliceBoundCheck {
    /// `Σ_{d∈D'} |A_d||A-A_d|`, exact.
    pub lhs: u128,
    /// `E_3(A)`, exact.
    pub cubic: u128,
    /// Certified verdict for the half-integer-power comparison, stated as
    /// `|A|·Σ|A_d|^{3/2} ≤ sqrt(E_3(A)·lhs)`.
    pub verdict: SqrtCmp,
}

impl SliceBoundCheck {
    pub fn holds(&self) -> bool {
        self.verdict.is_le()
    }
}

/// Verifies the slice-set bound for a given `D' ⊆ A - A`.
///
/// The half-integer powers are compared in the equivalent form
/// `Σ_d sqrt(|A|²|A_d|³) ≤ sqrt(E_3(A)·Σ_d |A_d||A-A_d|)`, decided by
/// directed-rounding interval square roots (exact when all roots are
/// perfect squares, e.g. singleton slices).
pub fn verify_slice_bound(a: &FiniteComplexSet, dprime: &FiniteComplexSet) -> Result<SliceBoundCheck> {
    if dprime.is_empty() {
        return Err(Error::EmptySet);
    }
    let diff_counts = a.representation_counts(a, SetOp::Diff)?;
    for d in dprime.iter() {
        if diff_counts.get(d) == 0 {
            return Err(Error::BadParams(format!("{d} is outside A - A")));
        }
    }
    let cubic = cubic_energy(a)?.energy;
    let a_sq = (a.len() as u128) * (a.len() as u128);
    let mut lhs: u128 = 0;
    let mut sqrt_terms: Vec<BigUint> = Vec::with_capacity(dprime.len());
    for d in dprime.iter() {
        let a_d = slice(a, d).set;
        let k = a_d.len() as u128;
        let shifted_diff = a.difference_set(&a_d)?;
        lhs += k * shifted_diff.len() as u128;
        // |A|² |A_d|³ under a single square root per term
        sqrt_terms.push(BigUint::from(a_sq) * BigUint::from(k * k * k));
    }
    let target = BigUint::from(cubic) * BigUint::from(lhs);
    let verdict = cmp_sqrt_sum(&sqrt_terms, &target);
    Ok(SliceBoundCheck { lhs, cubic, verdict })
}

/// Checks `E(A, A-A) ≥ Σ_{d ∈ A-A} |A_d||A-A_d|` exactly.
pub fn verify_realisation_bound(a: &FiniteComplexSet) -> Result<BothSides> {
    let diff_set = a.difference_set(a)?;
    let lhs = additive_energy(a, &diff_set)?.energy;
    let mut rhs: u128 = 0;
    for (_, a_d) in all_slices(a)? {
        rhs += (a_d.len() as u128) * (a.difference_set(&a_d)?.len() as u128);
    }
    if lhs < rhs {
        return Err(Error::IdentityViolation {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(BothSides { lhs, rhs })
}

/// Outcome of the combined lower bound
/// `E_3(A)·E(A,A-A) ≥ |A|⁸/(16|A-A|)`, with the explicit constant `1/16`
/// obtained by chaining the popularity threshold (`1/2`) and the
/// slice-sum estimate (`1/4`, squared).
#[derive(Debug, Clone)]
pub struct CombinedBoundCheck {
    pub lhs: u128,
    pub rhs: Rational,
    /// `lhs / rhs`, the observed headroom over the derived constant.
    pub ratio: Rational,
}

impl CombinedBoundCheck {
    pub fn holds(&self) -> bool {
        Rational::from_integer(self.lhs.into()) >= self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_string(),
            "rhs": rational_string(&self.rhs),
            "ratio": rational_string(&self.ratio),
            "holds": self.holds(),
        })
    }
}

pub fn verify_combined_bound(a: &FiniteComplexSet) -> Result<CombinedBoundCheck> {
    if a.len() < 2 {
        return Err(Error::BadParams("need |A| >= 2".into()));
    }
    let diff_set = a.difference_set(a)?;
    let e3 = cubic_energy(a)?.energy;
    let e_mixed = additive_energy(a, &diff_set)?.energy;
    let lhs = e3
        .checked_mul(e_mixed)
        .expect("energy product overflows u128 only far beyond desk scale");
    let a8 = BigUint::from(a.len() as u128).pow(8);
    let rhs = Rational::new(
        a8.into(),
        (BigUint::from(16u32) * BigUint::from(diff_set.len() as u128)).into(),
    );
    let ratio = Rational::from_integer(lhs.into()) / rhs.clone();
    Ok(CombinedBoundCheck { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;
    use crate::rational::{rat, rat_int};

    fn reals(v: &[i64]) -> FiniteComplexSet {
        FiniteComplexSet::from_reals(v)
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_integers(re, im)
    }

    #[test]
    fn additive_energy_frozen_values() {
        // brute-force oracle values: 6 over 16 quadruples, 19 over 81
        assert_eq!(additive_energy(&reals(&[1, 2]), &reals(&[1, 2])).unwrap().energy, 6);
        assert_eq!(
            additive_energy(&reals(&[1, 2, 3]), &reals(&[1, 2, 3])).unwrap().energy,
            19
        );
        assert_eq!(additive_energy(&reals(&[7]), &reals(&[-3])).unwrap().energy, 1);
    }

    #[test]
    fn additive_energy_matches_naive_on_complex_sets() {
        let a = FiniteComplexSet::from_integer_pairs(&[(1, 1), (2, -1), (3, 0), (0, 2)]);
        let b = FiniteComplexSet::from_integer_pairs(&[(1, 0), (1, 1), (-2, 3)]);
        assert_eq!(
            additive_energy(&a, &b).unwrap().energy,
            naive::additive_energy(&a, &b)
        );
    }

    #[test]
    fn multiplicative_energy_frozen_values() {
        assert_eq!(multiplicative_energy(&reals(&[1, 2])).unwrap().energy, 6);
        assert_eq!(multiplicative_energy(&reals(&[1, 2, 4])).unwrap().energy, 19);
        assert_eq!(multiplicative_energy(&reals(&[5])).unwrap().energy, 1);
        assert!(matches!(
            multiplicative_energy(&reals(&[0, 1])),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn multiplicative_energy_bound_is_reported() {
        let r = multiplicative_energy(&reals(&[1, 2, 4])).unwrap();
        // |A|⁴/|A·A| = 81/5
        assert_eq!(r.lower_bound_rhs, rat(81, 5));
        assert!(r.bound_holds());
    }

    #[test]
    fn cubic_energy_frozen_values() {
        assert_eq!(cubic_energy(&reals(&[1, 2])).unwrap().energy, 10);
        assert_eq!(cubic_energy(&reals(&[1, 2, 3])).unwrap().energy, 45);
        assert_eq!(cubic_energy(&reals(&[9])).unwrap().energy, 1);
    }

    #[test]
    fn slices_match_definition() {
        let a = reals(&[1, 2, 3]);
        assert_eq!(slice(&a, &g(1, 0)).set, reals(&[1, 2]));
        assert_eq!(slice(&reals(&[1, 2]), &GaussianRational::zero()).set, reals(&[1, 2]));
        assert!(slice(&reals(&[1, 2]), &g(5, 0)).set.is_empty());
        // |A_d| = n(d)
        let counts = a.representation_counts(&a, SetOp::Diff).unwrap();
        for (d, n) in counts.iter() {
            assert_eq!(slice(&a, d).set.len() as u64, n);
        }
    }

    #[test]
    fn e3_identity_examples() {
        let s = verify_e3_identity(&reals(&[1, 2])).unwrap();
        assert_eq!((s.lhs, s.rhs), (10, 10));
        let s = verify_e3_identity(&reals(&[1, 2, 3])).unwrap();
        assert_eq!((s.lhs, s.rhs), (45, 45));
        let s = verify_e3_identity(&reals(&[4])).unwrap();
        assert_eq!((s.lhs, s.rhs), (1, 1));
    }

    #[test]
    fn popular_differences_examples() {
        // threshold 9/10 < 1, so all of A-A is popular
        let p = popular_differences(&reals(&[1, 2, 3])).unwrap();
        assert_eq!(p.threshold, rat(9, 10));
        assert_eq!(p.set, reals(&[-2, -1, 0, 1, 2]));

        let p = popular_differences(&reals(&[3])).unwrap();
        assert_eq!(p.set, reals(&[0]));

        // GP {1,2,4,8,16}: |A-A| = 21, threshold 25/42 < 1, all differences stay
        let gp = reals(&[1, 2, 4, 8, 16]);
        let p = popular_differences(&gp).unwrap();
        assert_eq!(p.threshold, rat(25, 42));
        assert!(p.set.contains(&GaussianRational::zero()));
        assert_eq!(p.set.len(), 21);
    }

    #[test]
    fn slice_bound_examples() {
        // D' = {0}: lhs = |A||A-A| = 6; |A|·Σ|A_d|^{3/2} = 2·2^{3/2} = sqrt(32)
        // against sqrt(E_3·lhs) = sqrt(60)
        let a = reals(&[1, 2]);
        let c = verify_slice_bound(&a, &reals(&[0])).unwrap();
        assert_eq!(c.lhs, 6);
        assert_eq!(c.cubic, 10);
        assert!(c.holds());

        // full D' = A-A: lhs = 6 + 1·2 + 1·2 = 10
        let c = verify_slice_bound(&a, &reals(&[-1, 0, 1])).unwrap();
        assert_eq!(c.lhs, 10);
        assert!(c.holds());

        // singleton: exact equality 1 = 1
        let c = verify_slice_bound(&reals(&[5]), &reals(&[0])).unwrap();
        assert_eq!(c.lhs, 1);
        assert_eq!(c.verdict, SqrtCmp::Equal);
    }

    #[test]
    fn slice_bound_rejects_bad_dprime() {
        let a = reals(&[1, 2]);
        assert!(matches!(
            verify_slice_bound(&a, &FiniteComplexSet::new()),
            Err(Error::EmptySet)
        ));
        assert!(matches!(
            verify_slice_bound(&a, &reals(&[7])),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn realisation_bound_examples() {
        // both sides 10 for {1,2}: equality
        let s = verify_realisation_bound(&reals(&[1, 2])).unwrap();
        assert_eq!((s.lhs, s.rhs), (10, 10));
        let s = verify_realisation_bound(&reals(&[7])).unwrap();
        assert_eq!((s.lhs, s.rhs), (1, 1));
        let s = verify_realisation_bound(&reals(&[1, 2, 3])).unwrap();
        assert!(s.lhs >= s.rhs);
        // cross-check the lhs against the quadruple-enumeration oracle
        let a = reals(&[1, 2, 3]);
        let d = a.difference_set(&a).unwrap();
        assert_eq!(s.lhs, naive::additive_energy(&a, &d));
    }

    #[test]
    fn combined_bound_examples() {
        // 10·10 = 100 ≥ 2⁸/(16·3) = 16/3
        let c = verify_combined_bound(&reals(&[1, 2])).unwrap();
        assert_eq!(c.lhs, 100);
        assert_eq!(c.rhs, rat(16, 3));
        assert!(c.holds());

        // 8-term AP: rhs = 8⁸/(16·15)
        let ap = reals(&[1, 2, 3, 4, 5, 6, 7, 8]);
        let c = verify_combined_bound(&ap).unwrap();
        assert_eq!(c.rhs, Rational::from_integer(16777216.into()) / rat_int(240));
        assert!(c.holds());

        // dilation invariance of the ratio
        let c1 = verify_combined_bound(&reals(&[1, 2])).unwrap();
        let c2 = verify_combined_bound(&reals(&[3, 6])).unwrap();
        assert_eq!(c1.ratio, c2.ratio);
    }

    #[test]
    fn energy_report_json_uses_strings() {
        let r = multiplicative_energy(&reals(&[1, 2])).unwrap();
        let v = r.to_json();
        assert_eq!(v["energy"], "6");
        assert_eq!(v["kind"], "multiplicative");
    }
}
