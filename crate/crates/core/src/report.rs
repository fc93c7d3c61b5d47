//! Size/energy reports for a set, with observed exponent ratios printed
//! from exact integers: the ratio `x / n^(p/q)` is rendered by taking an
//! integer `q`-th root of a scaled power, so repeated runs emit identical
//! bytes with no floating point involved.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::energy::{additive_energy, cubic_energy, multiplicative_energy};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::FiniteComplexSet;

const GUARD_DIGITS: usize = 6;

/// Renders `scaled ≈ value · 10^frac_digits` as a decimal truncated to
/// `sig` significant digits.
fn format_scaled_decimal(scaled: &BigUint, frac_digits: usize, sig: usize) -> String {
    let digits = scaled.to_str_radix(10);
    // place the decimal point `frac_digits` from the right
    let (int_part, frac_part) = if digits.len() > frac_digits {
        let split = digits.len() - frac_digits;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        (
            "0".to_string(),
            format!("{:0>width$}", digits, width = frac_digits),
        )
    };
    // truncate to `sig` significant digits
    let mut out = String::new();
    let mut significant = 0usize;
    let mut seen_nonzero = false;
    for ch in int_part.chars() {
        if significant >= sig {
            out.push('0'); // keep magnitude
            continue;
        }
        out.push(ch);
        if ch != '0' {
            seen_nonzero = true;
        }
        if seen_nonzero {
            significant += 1;
        }
    }
    let mut frac_out = String::new();
    for ch in frac_part.chars() {
        if significant >= sig {
            break;
        }
        frac_out.push(ch);
        if ch != '0' {
            seen_nonzero = true;
        }
        if seen_nonzero {
            significant += 1;
        }
    }
    let frac_out = frac_out.trim_end_matches('0');
    if frac_out.is_empty() {
        out
    } else {
        format!("{out}.{frac_out}")
    }
}

/// Decimal rendering of `numer / base^(exp_num/exp_den)` truncated to
/// `sig` significant digits.
pub fn root_ratio_decimal(numer: u128, base: u64, exp_num: u32, exp_den: u32, sig: usize) -> String {
    assert!(base >= 1 && exp_den >= 1 && sig >= 1);
    if numer == 0 {
        return "0".to_string();
    }
    let frac_digits = sig + GUARD_DIGITS;
    // floor( (numer^q · 10^(q·k) / base^p) ^ (1/q) ) = floor(value · 10^k)
    // up to the final digit
    let scaled = BigUint::from(numer).pow(exp_den)
        * BigUint::from(10u32).pow((exp_den as usize * frac_digits) as u32);
    let denom = BigUint::from(base).pow(exp_num);
    let v = (scaled / denom).nth_root(exp_den);
    format_scaled_decimal(&v, frac_digits, sig)
}

/// Decimal rendering of a nonnegative rational, truncated.
pub fn rational_decimal(value: &Rational, sig: usize) -> String {
    assert!(!num_traits::Signed::is_negative(value));
    if num_traits::Zero::is_zero(value) {
        return "0".to_string();
    }
    let frac_digits = sig + GUARD_DIGITS;
    let scaled = (value.numer() * num_bigint::BigInt::from(10u8).pow(frac_digits as u32))
        / value.denom();
    format_scaled_decimal(&scaled.to_biguint().expect("nonnegative"), frac_digits, sig)
}

/// Decimal rendering of `sqrt(value_sq)` for a nonnegative rational,
/// truncated.
pub fn sqrt_decimal(value_sq: &Rational, sig: usize) -> String {
    assert!(!num_traits::Signed::is_negative(value_sq));
    if num_traits::Zero::is_zero(value_sq) {
        return "0".to_string();
    }
    let frac_digits = sig + GUARD_DIGITS;
    let pow = num_bigint::BigInt::from(10u8).pow(2 * frac_digits as u32);
    let scaled_sq = (value_sq.numer() * pow) / value_sq.denom();
    let root = scaled_sq.to_biguint().expect("nonnegative").sqrt();
    format_scaled_decimal(&root, frac_digits, sig)
}

/// Sizes, energies and observed exponent ratios for one set.
///
/// Integer fields are exact; the ratio strings are decimal renderings of
/// `x / n^e` for the exponents `4/3`, `40/31` and `50/39`, with the exact
/// integer numerators beside them.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub set_id: String,
    pub n: usize,
    pub sum_size: usize,
    pub diff_size: usize,
    pub prod_size: usize,
    pub ratio_size: usize,
    pub additive_energy: u128,
    pub mult_energy: u128,
    pub cubic_energy: u128,
    /// `(|A+A| + |A:A|) / n^(4/3)`.
    pub sum_ratio_obs: String,
    /// `(|A+A| + |A·A|) / n^(4/3)`.
    pub sum_prod_obs: String,
    /// `(|A-A| + |A:A|) / n^(40/31)`.
    pub diff_ratio_obs: String,
    /// `(|A-A| + |A·A|) / n^(50/39)`.
    pub diff_prod_obs: String,
}

const OBS_DIGITS: usize = 12;

pub fn bound_report(set_id: &str, a: &FiniteComplexSet) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let n = a.len();
    let sum_size = a.sumset(a)?.len();
    let diff_size = a.difference_set(a)?.len();
    let prod_size = a.product_set(a)?.len();
    let ratio_size = a.ratio_set(a)?.len();
    let additive = additive_energy(a, a)?.energy;
    let mult = multiplicative_energy(a)?.energy;
    let cubic = cubic_energy(a)?.energy;
    let nb = n as u64;
    Ok(BoundReport {
        set_id: set_id.to_string(),
        n,
        sum_size,
        diff_size,
        prod_size,
        ratio_size,
        additive_energy: additive,
        mult_energy: mult,
        cubic_energy: cubic,
        sum_ratio_obs: root_ratio_decimal((sum_size + ratio_size) as u128, nb, 4, 3, OBS_DIGITS),
        sum_prod_obs: root_ratio_decimal((sum_size + prod_size) as u128, nb, 4, 3, OBS_DIGITS),
        diff_ratio_obs: root_ratio_decimal((diff_size + ratio_size) as u128, nb, 40, 31, OBS_DIGITS),
        diff_prod_obs: root_ratio_decimal((diff_size + prod_size) as u128, nb, 50, 39, OBS_DIGITS),
    })
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "set_id": self.set_id,
            "n": self.n,
            "sizes": {
                "sum": self.sum_size,
                "diff": self.diff_size,
                "prod": self.prod_size,
                "ratio": self.ratio_size,
            },
            "energies": {
                "additive": self.additive_energy.to_string(),
                "multiplicative": self.mult_energy.to_string(),
                "cubic": self.cubic_energy.to_string(),
            },
            "observed_ratios": {
                "sum_ratio_over_n_4_3": self.sum_ratio_obs,
                "sum_prod_over_n_4_3": self.sum_prod_obs,
                "diff_ratio_over_n_40_31": self.diff_ratio_obs,
                "diff_prod_over_n_50_39": self.diff_prod_obs,
            },
        })
    }

    pub fn csv_header() -> &'static str {
        "set_id,n,sum_size,diff_size,prod_size,ratio_size,additive_energy,mult_energy,cubic_energy,sum_ratio_obs,sum_prod_obs,diff_ratio_obs,diff_prod_obs"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.set_id,
            self.n,
            self.sum_size,
            self.diff_size,
            self.prod_size,
            self.ratio_size,
            self.additive_energy,
            self.mult_energy,
            self.cubic_energy,
            self.sum_ratio_obs,
            self.sum_prod_obs,
            self.diff_ratio_obs,
            self.diff_prod_obs,
        )
    }
}
