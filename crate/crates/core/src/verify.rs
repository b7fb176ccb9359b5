//! Sweep harness: evaluates every closed form, recursion, identity and the
//! bijection over a parameter grid and reports each comparison.
//!
//! Reports come out in canonical order (check, then grid point) regardless of
//! how many threads evaluate them.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bijection::check_bijectivity;
use crate::count::{
    binomial, convolution_terms, count_circle, count_circle_fixed, count_system,
    count_system_convolution, count_system_fixed, count_system_fixed_recursive,
    fixed_recursion_terms, CountValue,
};
use crate::enumerate::{count_by_enumeration, EnumerationRequest};
use crate::error::{Error, Result};
use crate::par;
use crate::system::{CircleSystem, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// Single-circle closed form against enumeration.
    Circle,
    /// Single-circle fixed-element count against enumeration, every rotation.
    CircleFixed,
    /// Multi-circle closed form against enumeration.
    System,
    /// Multi-circle fixed-element count against enumeration, every element.
    SystemFixed,
    /// Fixed-element recursion against the closed fixed-element count.
    Recursion,
    /// Summing per-element counts over all elements gives k times the total.
    DoubleCount,
    /// `k * count_system = N * count_system_fixed`.
    Consistency,
    /// Exactness of the divisions in the closed forms.
    Divisibility,
    /// Exhaustive two-circle bijectivity.
    Bijection,
    /// Fixed-element convolution identity with the corrected binomial.
    FixedSum,
    /// The same identity with the binomial `C(m - sj, j - 1)`; expected to fail.
    FixedSumPrinted,
    /// Two-circle convolution identity.
    Convolution,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Circle,
        Check::CircleFixed,
        Check::System,
        Check::SystemFixed,
        Check::Recursion,
        Check::DoubleCount,
        Check::Consistency,
        Check::Divisibility,
        Check::Bijection,
        Check::FixedSum,
        Check::FixedSumPrinted,
        Check::Convolution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Circle => "circle",
            Check::CircleFixed => "circle-fixed",
            Check::System => "system",
            Check::SystemFixed => "system-fixed",
            Check::Recursion => "recursion",
            Check::DoubleCount => "double-count",
            Check::Consistency => "consistency",
            Check::Divisibility => "divisibility",
            Check::Bijection => "bijection",
            Check::FixedSum => "fixed-sum",
            Check::FixedSumPrinted => "fixed-sum-printed",
            Check::Convolution => "convolution",
        }
    }

    /// Documentation checks record known-false variants; their failures do
    /// not count against a sweep.
    pub fn is_documentation(self) -> bool {
        self == Check::FixedSumPrinted
    }

    fn shape(self) -> Shape {
        match self {
            Check::Circle | Check::CircleFixed => Shape::SingleCircle,
            Check::Bijection | Check::FixedSum | Check::FixedSumPrinted | Check::Convolution => {
                Shape::TwoCircles
            }
            _ => Shape::System,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown check {s:?}; expected one of {}",
                    Check::ALL.iter().map(|c| c.name()).join(", ")
                ))
            })
    }
}

impl Serialize for Check {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Parses a comma-separated check list; `all` selects every check.
pub fn parse_checks(list: &str) -> Result<Vec<Check>> {
    if list.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut checks = list
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Check>>>()?;
    checks.sort_unstable();
    checks.dedup();
    Ok(checks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    SingleCircle,
    TwoCircles,
    System,
}

/// Inclusive ranges for the sweep plus the checks to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepGrid {
    pub s: (usize, usize),
    pub k: (usize, usize),
    /// Per-circle sizes.
    pub sizes: (usize, usize),
    /// Number of circles for multi-circle checks.
    pub circles: (usize, usize),
    pub checks: Vec<Check>,
    /// Thread-count hint; see [`par::ordered_map`].
    pub jobs: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            s: (1, 2),
            k: (1, 3),
            sizes: (1, 10),
            circles: (1, 2),
            checks: Check::ALL.to_vec(),
            jobs: 0,
        }
    }
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        let ranges = [
            ("s", self.s),
            ("k", self.k),
            ("sizes", self.sizes),
            ("circles", self.circles),
        ];
        for (name, (lo, hi)) in ranges {
            if lo > hi {
                return Err(Error::domain(format!("empty {name} range {lo}..={hi}")));
            }
        }
        if self.sizes.0 == 0 || self.circles.0 == 0 {
            return Err(Error::domain("sizes and circle counts start at 1"));
        }
        Ok(())
    }

    fn systems(&self, shape: Shape) -> Vec<Vec<usize>> {
        let sizes = self.sizes.0..=self.sizes.1;
        let arity: Vec<usize> = match shape {
            Shape::SingleCircle => vec![1],
            Shape::TwoCircles => vec![2],
            Shape::System => (self.circles.0..=self.circles.1).collect(),
        };
        arity
            .into_iter()
            .flat_map(|p| {
                (0..p)
                    .map(|_| sizes.clone())
                    .multi_cartesian_product()
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// All (check, point) pairs in canonical order.
    pub fn points(&self) -> Vec<(Check, Point)> {
        let mut checks = self.checks.clone();
        checks.sort_unstable();
        checks.dedup();
        let mut out = Vec::new();
        for check in checks {
            for sizes in self.systems(check.shape()) {
                for s in self.s.0..=self.s.1 {
                    for k in self.k.0..=self.k.1 {
                        out.push((
                            check,
                            Point {
                                sizes: sizes.clone(),
                                s,
                                k,
                            },
                        ));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Point {
    pub sizes: Vec<usize>,
    pub s: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        })
    }
}

/// One comparison at one parameter point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IdentityReport {
    pub check: Check,
    pub sizes: Vec<usize>,
    pub s: usize,
    pub k: usize,
    pub outcome: Outcome,
    pub left: Option<String>,
    pub right: Option<String>,
    pub documentation: bool,
    pub note: Option<String>,
}

impl IdentityReport {
    fn compare(check: Check, point: &Point, left: impl ToString, right: impl ToString) -> Self {
        let (left, right) = (left.to_string(), right.to_string());
        Self {
            check,
            sizes: point.sizes.clone(),
            s: point.s,
            k: point.k,
            outcome: if left == right {
                Outcome::Pass
            } else {
                Outcome::Fail
            },
            left: Some(left),
            right: Some(right),
            documentation: check.is_documentation(),
            note: None,
        }
    }

    fn without_values(check: Check, point: &Point, outcome: Outcome, note: String) -> Self {
        Self {
            check,
            sizes: point.sizes.clone(),
            s: point.s,
            k: point.k,
            outcome,
            left: None,
            right: None,
            documentation: check.is_documentation(),
            note: Some(note),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// A failure that counts against the sweep.
    pub fn is_failure(&self) -> bool {
        self.outcome == Outcome::Fail && !self.documentation
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Failures of documentation checks.
    pub documented: usize,
}

impl Summary {
    pub fn of(reports: &[IdentityReport]) -> Self {
        let mut sum = Summary::default();
        for r in reports {
            match r.outcome {
                Outcome::Pass => sum.passed += 1,
                Outcome::Skipped => sum.skipped += 1,
                Outcome::Fail if r.documentation => sum.documented += 1,
                Outcome::Fail => sum.failed += 1,
            }
        }
        sum
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn oracle(sys: &CircleSystem, s: usize, k: usize, fixed: Option<Element>) -> Result<CountValue> {
    let mut req = EnumerationRequest::new(sys.clone(), s, k);
    if let Some(f) = fixed {
        req = req.with_fixed(f)?;
    }
    Ok(count_by_enumeration(&req))
}

fn join_terms(terms: &[CountValue]) -> String {
    terms.iter().join("+")
}

fn sk(s: usize, k: usize) -> usize {
    s.saturating_mul(k)
}

/// Corrected fixed-element identity for circles of sizes `m` (free) and `n`
/// (holding the fixed element):
/// `sum_{j<k} C(n - s(k-j) - 1, k-j-1) * |[m]^s_j| = C(m + n - sk - 1, k - 1)`.
pub fn verify_fixed_sum_identity(m: usize, n: usize, s: usize, k: usize) -> Result<IdentityReport> {
    check_fixed_sum_bounds(m, n, s, k)?;
    let terms = (0..k)
        .map(|j| Ok(count_circle_fixed(n, s, k - j)? * count_circle(m, s, j)?))
        .collect::<Result<Vec<_>>>()?;
    let left: CountValue = terms.iter().cloned().sum();
    let right = binomial((m + n - sk(s, k)) as i64 - 1, k as i64 - 1);
    let point = Point {
        sizes: vec![m, n],
        s,
        k,
    };
    Ok(
        IdentityReport::compare(Check::FixedSum, &point, left, right).with_note(format!(
            "terms j=0..{}: {}",
            k - 1,
            join_terms(&terms)
        )),
    )
}

fn check_fixed_sum_bounds(m: usize, n: usize, s: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("the fixed-sum identity requires k ≥ 1"));
    }
    if n <= sk(s, k) {
        return Err(Error::domain(format!(
            "the fixed-sum identity requires n ≥ sk+1 for the circle holding the fixed element \
             (n = {n}, s = {s}, k = {k})"
        )));
    }
    if m < sk(s, k) {
        return Err(Error::domain(format!(
            "the fixed-sum identity requires m ≥ sk (m = {m}, s = {s}, k = {k})"
        )));
    }
    Ok(())
}

fn rational_binomial(n: i64, k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, k).into_biguint()))
}

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The fixed-sum identity with `C(m - sj, j - 1)` in place of `C(m - sj, j)`.
/// Terms are evaluated as exact rationals; a non-integer left side is
/// reported as a fraction.
pub fn verify_fixed_sum_printed(m: usize, n: usize, s: usize, k: usize) -> Result<IdentityReport> {
    check_fixed_sum_bounds(m, n, s, k)?;
    let mut terms = Vec::with_capacity(k);
    for j in 0..k {
        let free = m as i64 - (s * j) as i64;
        if free <= 0 {
            return Err(Error::domain(format!(
                "term j={j} divides by m - sj = {free}"
            )));
        }
        let talbot = rational_binomial((n - s * (k - j)) as i64 - 1, (k - j) as i64 - 1);
        let ratio = BigRational::new(BigInt::from(m), BigInt::from(free));
        terms.push(talbot * ratio * rational_binomial(free, j as i64 - 1));
    }
    let left = terms.iter().fold(BigRational::zero(), |acc, t| acc + t);
    let right = binomial((m + n - sk(s, k)) as i64 - 1, k as i64 - 1);
    let fractional: Vec<usize> = (0..k).filter(|&j| !terms[j].is_integer()).collect();
    let mut note = format!(
        "terms j=0..{}: {}",
        k - 1,
        terms.iter().map(format_rational).join("+")
    );
    if !fractional.is_empty() {
        note.push_str(&format!(
            "; non-integer terms at j={}",
            fractional.iter().join(",")
        ));
    }
    let point = Point {
        sizes: vec![m, n],
        s,
        k,
    };
    Ok(IdentityReport::compare(
        Check::FixedSumPrinted,
        &point,
        format_rational(&left),
        right,
    )
    .with_note(note))
}

/// `(n_1+n_2)/k * C(n_1+n_2-sk-1, k-1) = sum_j |[n_1]^s_j| * |[n_2]^s_{k-j}|`.
pub fn verify_convolution_identity(
    n1: usize,
    n2: usize,
    s: usize,
    k: usize,
) -> Result<IdentityReport> {
    if k == 0 {
        return Err(Error::domain("the convolution identity requires k ≥ 1"));
    }
    let sys = CircleSystem::new(vec![n1, n2])?;
    let left = count_system(&sys, s, k)?;
    let terms = convolution_terms(n1, n2, s, k)?;
    let right = count_system_convolution(&sys, s, k)?;
    let point = Point {
        sizes: vec![n1, n2],
        s,
        k,
    };
    Ok(
        IdentityReport::compare(Check::Convolution, &point, left, right)
            .with_note(format!("terms j=0..{k}: {}", join_terms(&terms))),
    )
}

fn remainder(numerator: BigUint, denominator: usize) -> BigUint {
    numerator.mod_floor(&BigUint::from(denominator))
}

fn evaluate(check: Check, point: &Point) -> Result<IdentityReport> {
    let Point { sizes, s, k } = point;
    let (s, k) = (*s, *k);
    let sys = CircleSystem::new(sizes.clone())?;
    let cmp =
        |left: CountValue, right: CountValue| IdentityReport::compare(check, point, left, right);

    match check {
        Check::Circle => {
            let n = sizes[0];
            Ok(cmp(count_circle(n, s, k)?, oracle(&sys, s, k, None)?))
        }
        Check::CircleFixed => {
            let n = sizes[0];
            let closed = count_circle_fixed(n, s, k)?;
            let mut common = None;
            for a in 1..=n {
                let e = sys.element(a, 1)?;
                let got = oracle(&sys, s, k, Some(e))?;
                if got != closed {
                    return Ok(cmp(closed, got).with_note(format!("mismatch at fixed {e}")));
                }
                common = Some(got);
            }
            Ok(cmp(closed, common.unwrap_or_default()).with_note(format!("{n} rotations")))
        }
        Check::System => Ok(cmp(count_system(&sys, s, k)?, oracle(&sys, s, k, None)?)),
        Check::SystemFixed => {
            let mut checked = 0;
            let mut closed_value = None;
            for e in sys.elements() {
                let closed = match count_system_fixed(&sys, s, k, &e) {
                    Ok(v) => v,
                    Err(Error::Domain(_)) => continue,
                    Err(err) => return Err(err),
                };
                let got = oracle(&sys, s, k, Some(e))?;
                if got != closed {
                    return Ok(cmp(closed, got).with_note(format!("mismatch at fixed {e}")));
                }
                checked += 1;
                closed_value = Some(closed);
            }
            match closed_value {
                Some(v) => Ok(cmp(v.clone(), v).with_note(format!("{checked} fixed elements"))),
                None => Err(Error::domain(
                    "no circle has n_j ≥ sk+1 with the others ≥ sk, so no element qualifies",
                )),
            }
        }
        Check::Recursion => {
            let terms = fixed_recursion_terms(&sys, s, k)?;
            let recursive = count_system_fixed_recursive(&sys, s, k)?;
            let closed = count_system_fixed(&sys, s, k, &Element::new_unchecked(1, 1))?;
            Ok(cmp(recursive, closed).with_note(format!("terms j=1..: {}", join_terms(&terms))))
        }
        Check::DoubleCount => {
            let per_element: CountValue = sys
                .elements()
                .map(|e| oracle(&sys, s, k, Some(e)))
                .sum::<Result<CountValue>>()?;
            let total = oracle(&sys, s, k, None)?;
            Ok(cmp(per_element, CountValue::from(k) * total))
        }
        Check::Consistency => {
            let total = count_system(&sys, s, k)?;
            let fixed = count_system_fixed(&sys, s, k, &Element::new_unchecked(1, 1))?;
            Ok(cmp(
                CountValue::from(k) * total,
                CountValue::from(sys.total()) * fixed,
            ))
        }
        Check::Divisibility => {
            if k == 0 {
                return Err(Error::domain("divisibility is only asserted for k ≥ 1"));
            }
            // surface domain errors before computing remainders
            count_system(&sys, s, k)?;
            let mut worst = BigUint::zero();
            let mut where_ = String::new();
            for (i, &n) in sizes.iter().enumerate() {
                let free = n - s * k;
                let num = BigUint::from(n) * binomial(free as i64, k as i64).into_biguint();
                let r = remainder(num, free);
                if r > worst {
                    worst = r;
                    where_ = format!("n_{} = {n}", i + 1);
                }
            }
            let big_n = sys.total();
            let num = BigUint::from(big_n)
                * binomial((big_n - s * k) as i64 - 1, k as i64 - 1).into_biguint();
            let r = remainder(num, k);
            if r > worst {
                worst = r;
                where_ = format!("N = {big_n} over k");
            }
            let report = IdentityReport::compare(check, point, worst, 0u32);
            Ok(if where_.is_empty() {
                report
            } else {
                report.with_note(where_)
            })
        }
        Check::Bijection => {
            let report = check_bijectivity(&sys, s, k, 1)?;
            let note = match report.failures.first() {
                Some(first) => format!("first violation: {first}"),
                None => format!(
                    "domain={} codomain={} expected={}",
                    report.domain_size, report.codomain_size, report.expected
                ),
            };
            Ok(IdentityReport::compare(check, point, report.failures.len(), 0u32).with_note(note))
        }
        Check::FixedSum => verify_fixed_sum_identity(sizes[0], sizes[1], s, k),
        Check::FixedSumPrinted => verify_fixed_sum_printed(sizes[0], sizes[1], s, k),
        Check::Convolution => verify_convolution_identity(sizes[0], sizes[1], s, k),
    }
}

/// Evaluates one check at one point. Precondition failures become skipped
/// reports; inexact divisions and broken invariants become failures.
pub fn run_check(check: Check, point: &Point) -> IdentityReport {
    match evaluate(check, point) {
        Ok(report) => report,
        Err(err @ (Error::Domain(_) | Error::InvalidSystem(_) | Error::InvalidElement(_))) => {
            IdentityReport::without_values(check, point, Outcome::Skipped, err.to_string())
        }
        Err(err) => IdentityReport::without_values(check, point, Outcome::Fail, err.to_string()),
    }
}

/// Runs every selected check over the grid.
pub fn verify_all(grid: &SweepGrid) -> Result<Vec<IdentityReport>> {
    grid.validate()?;
    let points = grid.points();
    Ok(par::ordered_map(&points, grid.jobs, |(check, point)| {
        run_check(*check, point)
    }))
}
