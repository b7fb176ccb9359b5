//! Exact closed-form counts and the recursion and convolution forms they
//! decompose into. No floating point is used anywhere in this module.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::system::{CircleSystem, Element};

/// An exact nonnegative count of arbitrary size. Serializes as a decimal
/// string.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountValue(BigUint);

impl CountValue {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn one() -> Self {
        Self(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }
}

impl From<BigUint> for CountValue {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for CountValue {
            fn from(v: $t) -> Self {
                Self(BigUint::from(v))
            }
        }

        impl PartialEq<$t> for CountValue {
            fn eq(&self, other: &$t) -> bool {
                self.0 == BigUint::from(*other)
            }
        }
    )*};
}

from_prim!(u8, u32, u64, u128, usize);

impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for CountValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<BigUint>()
            .map(Self)
            .map_err(|_| Error::Parse(format!("invalid count {s:?}")))
    }
}

impl Serialize for CountValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CountValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for CountValue {
    type Output = CountValue;

    fn add(self, rhs: CountValue) -> CountValue {
        CountValue(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a CountValue> for &'a CountValue {
    type Output = CountValue;

    fn add(self, rhs: &CountValue) -> CountValue {
        CountValue(&self.0 + &rhs.0)
    }
}

impl Mul for CountValue {
    type Output = CountValue;

    fn mul(self, rhs: CountValue) -> CountValue {
        CountValue(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a CountValue> for &'a CountValue {
    type Output = CountValue;

    fn mul(self, rhs: &CountValue) -> CountValue {
        CountValue(&self.0 * &rhs.0)
    }
}

impl Sum for CountValue {
    fn sum<I: Iterator<Item = CountValue>>(iter: I) -> Self {
        iter.fold(CountValue::zero(), Add::add)
    }
}

/// `C(n, k)`, zero when `k < 0`, `n < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> CountValue {
    if n < 0 || k < 0 || k > n {
        return CountValue::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so acc * (n - i) is divisible by i + 1
        acc *= n - i;
        acc /= i + 1;
    }
    CountValue(acc)
}

/// Multiplies out `numerator` and divides by `denominator`, failing if the
/// division leaves a remainder.
pub(crate) fn exact_div(numerator: BigUint, denominator: &BigUint) -> Result<BigUint> {
    let (q, r) = numerator.div_rem(denominator);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::Inexact {
            numerator: numerator.to_string(),
            denominator: denominator.to_string(),
        })
    }
}

fn product(a: usize, b: usize, what: &str) -> Result<usize> {
    a.checked_mul(b)
        .ok_or_else(|| Error::domain(format!("{what} overflows the native integer range")))
}

fn as_i64(v: usize) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::domain(format!("{v} is too large")))
}

/// Number of `s`-separated `k`-subsets of a circle of `n` objects,
/// `n / (n - sk) * C(n - sk, k)`.
///
/// Defined for `k = 0` (one empty set) and for `n >= sk + 1`.
pub fn count_circle(n: usize, s: usize, k: usize) -> Result<CountValue> {
    if k == 0 {
        return Ok(CountValue::one());
    }
    let sk = product(s, k, "s*k")?;
    if n <= sk {
        return Err(Error::domain(format!(
            "count_circle requires n ≥ sk+1 (n = {n}, s = {s}, k = {k}); \
             use enumeration for smaller circles"
        )));
    }
    let free = n - sk;
    let numerator = BigUint::from(n) * binomial(as_i64(free)?, as_i64(k)?).0;
    exact_div(numerator, &BigUint::from(free)).map(CountValue)
}

/// Number of `s`-separated `k`-subsets of a circle of `n` objects containing
/// one fixed object, `C(n - ks - 1, k - 1)`.
pub fn count_circle_fixed(n: usize, s: usize, k: usize) -> Result<CountValue> {
    if k == 0 {
        return Err(Error::domain(
            "count_circle_fixed requires k ≥ 1: a set containing a fixed element is nonempty",
        ));
    }
    let sk = product(s, k, "s*k")?;
    if n <= sk {
        return Err(Error::domain(format!(
            "count_circle_fixed requires n ≥ sk+1 (n = {n}, s = {s}, k = {k})"
        )));
    }
    Ok(binomial(as_i64(n - sk - 1)?, as_i64(k - 1)?))
}

/// Checks the fixed-element bounds: the circle holding the fixed element needs
/// `n_j >= sk + 1` and every other circle `n_i >= sk`.
fn check_fixed_bounds(sys: &CircleSystem, s: usize, k: usize, fixed_circle: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain(
            "fixed-element counts require k ≥ 1: a set containing a fixed element is nonempty",
        ));
    }
    let sk = product(s, k, "s*k")?;
    for (i, &n) in sys.sizes().iter().enumerate() {
        let j = i + 1;
        if j == fixed_circle && n <= sk {
            return Err(Error::domain(format!(
                "requires n_{j} ≥ sk+1 for the circle holding the fixed element \
                 (n_{j} = {n}, s = {s}, k = {k})"
            )));
        }
        if j != fixed_circle && n < sk {
            return Err(Error::domain(format!(
                "requires n_{j} ≥ sk for circles without the fixed element \
                 (n_{j} = {n}, s = {s}, k = {k})"
            )));
        }
    }
    Ok(())
}

fn check_all_circles(sys: &CircleSystem, s: usize, k: usize, what: &str) -> Result<()> {
    let sk = product(s, k, "s*k")?;
    for (i, &n) in sys.sizes().iter().enumerate() {
        if n <= sk {
            return Err(Error::domain(format!(
                "{what} requires n_i ≥ sk+1 for every circle (n_{} = {n}, s = {s}, k = {k})",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Number of `s`-separated `k`-sets of `sys` containing `fixed`,
/// `C(N - sk - 1, k - 1)` with `N` the total size.
pub fn count_system_fixed(
    sys: &CircleSystem,
    s: usize,
    k: usize,
    fixed: &Element,
) -> Result<CountValue> {
    sys.check(fixed)?;
    check_fixed_bounds(sys, s, k, fixed.circle())?;
    let big_n = sys.total();
    let sk = s * k;
    Ok(binomial(as_i64(big_n - sk - 1)?, as_i64(k - 1)?))
}

/// Number of `s`-separated `k`-sets of `sys`, `N / k * C(N - sk - 1, k - 1)`.
///
/// Defined for `k = 0` and whenever every circle has at least `sk + 1`
/// objects.
pub fn count_system(sys: &CircleSystem, s: usize, k: usize) -> Result<CountValue> {
    if k == 0 {
        return Ok(CountValue::one());
    }
    check_all_circles(sys, s, k, "count_system")?;
    let big_n = sys.total();
    let numerator = BigUint::from(big_n) * binomial(as_i64(big_n - s * k - 1)?, as_i64(k - 1)?).0;
    exact_div(numerator, &BigUint::from(k)).map(CountValue)
}

/// The summands `j = 1..=k` of the outermost level of the fixed-element
/// recursion: `count(n_1..n_{p-1}; j) * |[n_p]^s_{k-j}|`.
///
/// For a single circle there is no recursion and the only term is the closed
/// fixed-element count.
pub fn fixed_recursion_terms(sys: &CircleSystem, s: usize, k: usize) -> Result<Vec<CountValue>> {
    check_fixed_bounds(sys, s, k, 1)?;
    let sizes = sys.sizes();
    let Some((&last, prefix)) = sizes.split_last().filter(|(_, prefix)| !prefix.is_empty()) else {
        return Ok(vec![count_circle_fixed(sizes[0], s, k)?]);
    };
    let prefix = CircleSystem::new(prefix.to_vec())?;
    (1..=k)
        .map(|j| {
            let inner = recursive_fixed(&prefix, s, j)?;
            let outer = count_circle(last, s, k - j)?;
            Ok(inner * outer)
        })
        .collect()
}

fn recursive_fixed(sys: &CircleSystem, s: usize, k: usize) -> Result<CountValue> {
    Ok(fixed_recursion_terms(sys, s, k)?.into_iter().sum())
}

/// The fixed-element count for `(1,1)` evaluated through the recursion on
/// the last circle, with the single-circle fixed count as the base case.
pub fn count_system_fixed_recursive(sys: &CircleSystem, s: usize, k: usize) -> Result<CountValue> {
    recursive_fixed(sys, s, k)
}

/// Per-circle counts `|[n]^s_j|` for `j = 0..=k`.
fn circle_series(n: usize, s: usize, k: usize) -> Result<Vec<CountValue>> {
    (0..=k).map(|j| count_circle(n, s, j)).collect()
}

/// The summands `|[n_1]^s_j| * |[n_2]^s_{k-j}|` for `j = 0..=k`.
pub fn convolution_terms(n1: usize, n2: usize, s: usize, k: usize) -> Result<Vec<CountValue>> {
    let sys = CircleSystem::new(vec![n1, n2])?;
    check_all_circles(&sys, s, k, "the convolution")?;
    let a = circle_series(n1, s, k)?;
    let b = circle_series(n2, s, k)?;
    Ok((0..=k).map(|j| &a[j] * &b[k - j]).collect())
}

/// `|[n_1,...,n_p]^s_k|` as the sum over all compositions
/// `j_1 + ... + j_p = k` of the products of single-circle counts.
pub fn count_system_convolution(sys: &CircleSystem, s: usize, k: usize) -> Result<CountValue> {
    check_all_circles(sys, s, k, "count_system_convolution")?;
    // acc[j] = sum over compositions of j into the circles seen so far
    let mut acc = vec![CountValue::zero(); k + 1];
    acc[0] = CountValue::one();
    for &n in sys.sizes() {
        let series = circle_series(n, s, k)?;
        acc = (0..=k)
            .map(|total| (0..=total).map(|j| &acc[total - j] * &series[j]).sum())
            .collect();
    }
    Ok(acc.swap_remove(k))
}
