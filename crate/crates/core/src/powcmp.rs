//! Certified comparisons for the two places where exact integer arithmetic
//! is not enough: sums of square roots (half-integer powers of counts) and
//! thresholds involving `log2 |A|`.
//!
//! Both comparators use two-sided integer bounds that are widened until the
//! comparison is decided, so a verdict is always sound. `Undecided` is
//! returned only when the maximum precision is exhausted, which the callers
//! log rather than assume away.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Outcome of comparing `Σ_i sqrt(terms_i)` against `sqrt(target)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtCmp {
    /// Certified `Σ sqrt(terms) < sqrt(target)`.
    Less,
    /// Exactly equal; only certifiable when every root is exact.
    Equal,
    /// Certified `Σ sqrt(terms) > sqrt(target)`.
    Greater,
    /// Not decided at the maximum precision (bits recorded).
    Undecided { max_bits: u32 },
}

impl SqrtCmp {
    pub fn is_le(self) -> bool {
        matches!(self, SqrtCmp::Less | SqrtCmp::Equal)
    }
}

const PRECISIONS: [u32; 5] = [32, 64, 128, 256, 512];

/// Compares `Σ_i sqrt(terms_i)` with `sqrt(target)` using directed-rounding
/// integer square roots at increasing precision.
///
/// When every scaled root is exact at some precision (in particular when all
/// terms and the target are perfect squares) the comparison is exact,
/// including the `Equal` verdict.
pub fn cmp_sqrt_sum(terms: &[BigUint], target: &BigUint) -> SqrtCmp {
    for &bits in &PRECISIONS {
        let scale_sq = BigUint::one() << (2 * bits);
        let mut sum_lo = BigUint::zero();
        let mut sum_hi = BigUint::zero();
        let mut all_exact = true;
        for t in terms {
            let scaled = t * &scale_sq;
            let lo = scaled.sqrt();
            let exact = &lo * &lo == scaled;
            sum_hi += if exact { lo.clone() } else { &lo + BigUint::one() };
            sum_lo += lo;
            all_exact &= exact;
        }
        let scaled_target = target * &scale_sq;
        let t_lo = scaled_target.sqrt();
        let t_exact = &t_lo * &t_lo == scaled_target;
        let t_hi = if t_exact {
            t_lo.clone()
        } else {
            &t_lo + BigUint::one()
        };
        if all_exact && t_exact {
            return match sum_lo.cmp(&t_lo) {
                std::cmp::Ordering::Less => SqrtCmp::Less,
                std::cmp::Ordering::Equal => SqrtCmp::Equal,
                std::cmp::Ordering::Greater => SqrtCmp::Greater,
            };
        }
        if sum_hi <= t_lo {
            return SqrtCmp::Less;
        }
        if sum_lo >= t_hi {
            return SqrtCmp::Greater;
        }
    }
    SqrtCmp::Undecided {
        max_bits: PRECISIONS[PRECISIONS.len() - 1],
    }
}

/// Decides `lhs <= coeff * log2(base)` with certified rational bounds on the
/// logarithm, refining `log2(base) = log2(base^k)/k` until the comparison is
/// separated. `None` means the two sides are provably within `1/4096` of
/// each other in `log2(base)` units and the caller should treat the result
/// as undecided.
pub fn le_coeff_log2(lhs: &BigUint, coeff: &BigUint, base: u64) -> Option<bool> {
    assert!(base >= 2, "log2 threshold needs base >= 2");
    for k in [1u32, 16, 256, 4096] {
        let pow = BigUint::from(base).pow(k);
        // floor(k * log2 base) = bits - 1; exact iff pow is a power of two.
        let floor_k = pow.bits() - 1;
        let exact = pow.count_ones() == 1;
        let ceil_k = if exact { floor_k } else { floor_k + 1 };
        let lhs_k = lhs * BigUint::from(k);
        if lhs_k <= coeff * BigUint::from(floor_k) {
            return Some(true);
        }
        if lhs_k > coeff * BigUint::from(ceil_k) {
            return Some(false);
        }
        if exact {
            // bounds coincide and neither branch fired: impossible
            unreachable!("exact log2 bound must decide the comparison");
        }
    }
    None
}

/// Floor of `sqrt(x)` for a nonnegative rational, with the requested number
/// of binary fraction bits: a certified lower bound on the true root.
pub fn sqrt_lower_bound(x: &crate::rational::Rational, frac_bits: u32) -> crate::rational::Rational {
    use num_bigint::BigInt;
    assert!(!num_traits::Signed::is_negative(x));
    let scale = BigInt::from(1) << frac_bits;
    // floor(sqrt(num * scale^2 / den)) / scale ≤ sqrt(x)
    let scaled = (x.numer() * &scale * &scale) / x.denom();
    let root = scaled.to_biguint().expect("nonnegative").sqrt();
    crate::rational::Rational::new(BigInt::from(root), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn sqrt_lower_bound_is_a_lower_bound() {
        let x = rat(7, 3);
        let lb = sqrt_lower_bound(&x, 48);
        assert!(&lb * &lb <= x);
        let next = &lb + &rat(1, 1 << 20);
        assert!(&next * &next > x);
    }

    #[test]
    fn sqrt_sum_strict_cases() {
        // sqrt(32) < sqrt(60)
        assert_eq!(cmp_sqrt_sum(&[b(32)], &b(60)), SqrtCmp::Less);
        // sqrt(2) + sqrt(2) vs sqrt(9): 2.828 < 3
        assert_eq!(cmp_sqrt_sum(&[b(2), b(2)], &b(9)), SqrtCmp::Less);
        // sqrt(2) + sqrt(2) vs sqrt(4): 2.828 > 2
        assert_eq!(cmp_sqrt_sum(&[b(2), b(2)], &b(4)), SqrtCmp::Greater);
    }

    #[test]
    fn sqrt_sum_exact_equality() {
        assert_eq!(cmp_sqrt_sum(&[b(1)], &b(1)), SqrtCmp::Equal);
        assert_eq!(cmp_sqrt_sum(&[b(4), b(9)], &b(25)), SqrtCmp::Equal);
    }

    #[test]
    fn sqrt_sum_near_miss_is_still_decided() {
        // sqrt(2) + sqrt(8) = 3 sqrt(2) = sqrt(18); against sqrt(18)+tiny
        // the verdict must come out Less without an exactness shortcut.
        let lhs = [b(2), b(8)];
        assert_eq!(cmp_sqrt_sum(&lhs, &b(19)), SqrtCmp::Less);
        assert_eq!(cmp_sqrt_sum(&lhs, &b(17)), SqrtCmp::Greater);
        // dead-on equality of irrational sums is genuinely undecidable here
        assert!(matches!(
            cmp_sqrt_sum(&lhs, &b(18)),
            SqrtCmp::Undecided { .. }
        ));
    }

    #[test]
    fn log2_threshold_powers_of_two() {
        // lhs <= coeff * log2(4) = 2*coeff
        assert_eq!(le_coeff_log2(&b(6), &b(3), 4), Some(true));
        assert_eq!(le_coeff_log2(&b(7), &b(3), 4), Some(false));
    }

    #[test]
    fn log2_threshold_general_base() {
        // log2(3) = 1.58496...; 158 <= 100*log2(3) but 159 is not
        assert_eq!(le_coeff_log2(&b(158), &b(100), 3), Some(true));
        assert_eq!(le_coeff_log2(&b(159), &b(100), 3), Some(false));
    }
}
