//! The zig and zag switch procedures and the bijection they induce between
//! `s`-separated `k`-sets of a two-circle system `[n_1, n_2]` containing
//! `1@1` and `s`-separated `k`-sets of the single circle of size `n_1 + n_2`
//! containing position 1.
//!
//! Flattening a two-circle set can create separation violations across the
//! splice points. Zig repairs them by moving elements between the circles,
//! one per step, through a window of width `s` just below the last inserted
//! position. Zag is the mirror procedure, and `backward` inverts `forward`.

use serde::Serialize;

use crate::count::{binomial, CountValue};
use crate::enumerate::{enumerate_naive, EnumerationRequest};
use crate::error::{Error, Result};
use crate::par;
use crate::system::{
    flatten_set, is_s_separated, unflatten_set, CircleSystem, Element, SelectionSet,
};

const ANCHOR: Element = Element::new_unchecked(1, 1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Zig,
    Zag,
}

impl Direction {
    /// Circle addressed by the window at even steps; odd steps use the other.
    fn even_circle(self) -> usize {
        match self {
            Direction::Zig => 2,
            Direction::Zag => 1,
        }
    }
}

/// Positions `lo..=hi` on one circle. `lo > hi` encodes an empty window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub circle: usize,
    pub lo: usize,
    pub hi: usize,
}

impl Window {
    pub fn contains(&self, e: &Element) -> bool {
        e.circle() == self.circle && (self.lo..=self.hi).contains(&e.position())
    }

    pub fn width(&self) -> usize {
        (self.hi + 1).saturating_sub(self.lo)
    }
}

/// One executed switch: `removed` leaves the window's circle and `added`
/// enters the other circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SwitchStep {
    pub i: usize,
    pub window: Window,
    pub removed: usize,
    pub d: usize,
    pub added: usize,
}

impl SwitchStep {
    pub fn removed_element(&self) -> Element {
        Element::new_unchecked(self.removed, self.window.circle)
    }

    pub fn added_element(&self) -> Element {
        Element::new_unchecked(self.added, 3 - self.window.circle)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ZigZagTrace {
    pub direction: Direction,
    /// Number of executed switches.
    pub order: usize,
    pub steps: Vec<SwitchStep>,
}

impl ZigZagTrace {
    /// Reapplies the steps to `start`, returning every intermediate set
    /// (`start` first, the final set last).
    pub fn replay(&self, start: &SelectionSet) -> Result<Vec<SelectionSet>> {
        let mut states = vec![start.clone()];
        let mut cur = start.clone();
        for step in &self.steps {
            if !cur.remove(&step.removed_element()) {
                return Err(Error::invariant(format!(
                    "step {}: {} is not in the current set",
                    step.i,
                    step.removed_element()
                )));
            }
            if !cur.insert(step.added_element()) {
                return Err(Error::invariant(format!(
                    "step {}: {} is already in the current set",
                    step.i,
                    step.added_element()
                )));
            }
            states.push(cur.clone());
        }
        Ok(states)
    }
}

fn two_circles(sys: &CircleSystem) -> Result<(usize, usize)> {
    match sys.sizes() {
        &[n1, n2] => Ok((n1, n2)),
        other => Err(Error::InvalidSystem(format!(
            "the bijection needs exactly two circles, got {}",
            other.len()
        ))),
    }
}

fn check_bounds(sys: &CircleSystem, s: usize, k: usize) -> Result<(usize, usize)> {
    let (n1, n2) = two_circles(sys)?;
    if k == 0 {
        return Err(Error::domain("the bijection requires k ≥ 1"));
    }
    let sk = s
        .checked_mul(k)
        .ok_or_else(|| Error::domain("s*k overflows the native integer range"))?;
    if n1 <= sk {
        return Err(Error::domain(format!(
            "the bijection requires n_1 ≥ sk+1 (n_1 = {n1}, s = {s}, k = {k})"
        )));
    }
    if n2 < sk {
        return Err(Error::domain(format!(
            "the bijection requires n_2 ≥ sk (n_2 = {n2}, s = {s}, k = {k})"
        )));
    }
    Ok((n1, n2))
}

/// Shared switch loop. `seed_a` and `seed_z` are the values before step 0.
fn run_switches(
    start: SelectionSet,
    s: usize,
    k: usize,
    direction: Direction,
    seed_a: usize,
    seed_z: usize,
) -> Result<(SelectionSet, ZigZagTrace)> {
    let mut cur = start;
    let mut steps = Vec::new();
    let (mut a_prev, mut z_prev) = (seed_a, seed_z);
    let even = direction.even_circle();

    for i in 0.. {
        let circle = if i % 2 == 0 { even } else { 3 - even };
        let window = Window {
            circle,
            lo: z_prev.saturating_sub(s).max(1),
            hi: z_prev - 1,
        };
        let mut hits = cur.iter().filter(|e| window.contains(e));
        let Some(&hit) = hits.next() else {
            break;
        };
        if let Some(other) = hits.next() {
            return Err(Error::invariant(format!(
                "{direction:?} step {i}: window {circle}:{}..{} holds both {hit} and {other}",
                window.lo, window.hi
            )));
        }
        if i + 1 > k.saturating_sub(1) {
            return Err(Error::invariant(format!(
                "{direction:?} would exceed k-1 = {} switches",
                k.saturating_sub(1)
            )));
        }
        let a = hit.position();
        let d = z_prev - a;
        let z = a_prev.checked_sub(d).filter(|&z| z >= 1).ok_or_else(|| {
            Error::invariant(format!("{direction:?} step {i}: inserted position below 1"))
        })?;
        let added = Element::new_unchecked(z, 3 - circle);
        cur.remove(&hit);
        if !cur.insert(added) {
            return Err(Error::invariant(format!(
                "{direction:?} step {i}: {added} is already present"
            )));
        }
        steps.push(SwitchStep {
            i,
            window,
            removed: a,
            d,
            added: z,
        });
        a_prev = a;
        z_prev = z;
    }

    let trace = ZigZagTrace {
        direction,
        order: steps.len(),
        steps,
    };
    Ok((cur, trace))
}

/// Runs zig on a two-circle set containing `1@1`.
///
/// The result has the same size, still contains `1@1`, and flattens to an
/// `s`-separated set of the `(n_1 + n_2)`-circle. It need not be
/// `s`-separated in the two-circle system itself.
pub fn zig(a: &SelectionSet, sys: &CircleSystem, s: usize) -> Result<(SelectionSet, ZigZagTrace)> {
    let k = a.len();
    let (n1, n2) = check_bounds(sys, s, k)?;
    a.validate(sys)?;
    if !a.contains(&ANCHOR) {
        return Err(Error::domain("zig requires the set to contain 1@1"));
    }
    if !is_s_separated(a, sys, s) {
        return Err(Error::domain(format!(
            "zig requires an {s}-separated set, got {a}"
        )));
    }
    run_switches(a.clone(), s, k, Direction::Zig, n1 + 1, n2 + 1)
}

/// Runs zag on the unflattening of an `s`-separated set of the
/// `(n_1 + n_2)`-circle containing position 1.
pub fn zag(
    set: &SelectionSet,
    sys: &CircleSystem,
    s: usize,
) -> Result<(SelectionSet, ZigZagTrace)> {
    let k = set.len();
    let (n1, n2) = check_bounds(sys, s, k)?;
    set.validate(sys)?;
    if !set.contains(&ANCHOR) {
        return Err(Error::domain("zag requires the set to contain 1@1"));
    }
    let flat = flatten_set(set, sys)?;
    let big = CircleSystem::single(n1 + n2)?;
    if !is_s_separated(&flat, &big, s) {
        return Err(Error::domain(format!(
            "zag requires a set whose flattening is {s}-separated in the {}-circle",
            n1 + n2
        )));
    }
    run_switches(set.clone(), s, k, Direction::Zag, n2 + 1, n1 + 1)
}

/// Zig followed by flattening. The result lives on the single circle of size
/// `n_1 + n_2` (all elements on circle 1).
pub fn forward(a: &SelectionSet, sys: &CircleSystem, s: usize) -> Result<SelectionSet> {
    let (z, _) = zig(a, sys, s)?;
    flatten_set(&z, sys)
}

/// Unflattening followed by zag; the inverse of [`forward`].
pub fn backward(flat: &SelectionSet, sys: &CircleSystem, s: usize) -> Result<SelectionSet> {
    let (n1, n2) = two_circles(sys)?;
    flat.validate(&CircleSystem::single(n1 + n2)?)?;
    let set = unflatten_set(flat, sys)?;
    zag(&set, sys, s).map(|(z, _)| z)
}

/// Outcome of an exhaustive bijectivity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectivityReport {
    pub sizes: Vec<usize>,
    pub s: usize,
    pub k: usize,
    pub domain_size: usize,
    pub codomain_size: usize,
    pub expected: CountValue,
    /// Images of the domain, in domain order.
    pub image: Vec<SelectionSet>,
    /// Human-readable descriptions of every violated property.
    pub failures: Vec<String>,
}

impl BijectivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-step invariants of a trace produced from `start`: gaps in `1..=s`,
/// removals inside their window and taken from the original input, distinct
/// removals, `1@1` present throughout, and the set size constant.
pub fn trace_violations(start: &SelectionSet, trace: &ZigZagTrace, s: usize) -> Vec<String> {
    let mut out = Vec::new();
    let k = start.len();
    if trace.order != trace.steps.len() {
        out.push(format!(
            "order {} != {} steps",
            trace.order,
            trace.steps.len()
        ));
    }
    if trace.order > k.saturating_sub(1) {
        out.push(format!("order {} exceeds k-1 = {}", trace.order, k - 1));
    }
    let mut removed = Vec::new();
    for step in &trace.steps {
        if !(1..=s).contains(&step.d) {
            out.push(format!("step {}: d = {} outside 1..={s}", step.i, step.d));
        }
        if step.window.width() > s {
            out.push(format!("step {}: window wider than s", step.i));
        }
        let r = step.removed_element();
        if !step.window.contains(&r) {
            out.push(format!("step {}: removed {r} outside its window", step.i));
        }
        if !start.contains(&r) {
            out.push(format!("step {}: removed {r} was not in the input", step.i));
        }
        if r == ANCHOR {
            out.push(format!("step {}: removed 1@1", step.i));
        }
        if removed.contains(&r) {
            out.push(format!("step {}: {r} removed twice", step.i));
        }
        removed.push(r);
    }
    match trace.replay(start) {
        Ok(states) => {
            for (i, st) in states.iter().enumerate() {
                if st.len() != k {
                    out.push(format!("state {i} has {} elements, expected {k}", st.len()));
                }
                if !st.contains(&ANCHOR) {
                    out.push(format!("state {i} lost 1@1"));
                }
                if let Some(step) = trace.steps.get(i) {
                    let hits = st.iter().filter(|e| step.window.contains(e)).count();
                    if hits != 1 {
                        out.push(format!("step {i}: window holds {hits} elements"));
                    }
                }
            }
        }
        Err(e) => out.push(e.to_string()),
    }
    out
}

struct DomainResult {
    image: Option<SelectionSet>,
    failures: Vec<String>,
}

fn check_domain_element(
    a: &SelectionSet,
    sys: &CircleSystem,
    big: &CircleSystem,
    s: usize,
) -> DomainResult {
    let mut failures = Vec::new();
    let tag = |msg: String| format!("A = {a}: {msg}");
    let (z, trace) = match zig(a, sys, s) {
        Ok(r) => r,
        Err(e) => {
            return DomainResult {
                image: None,
                failures: vec![tag(format!("zig failed: {e}"))],
            }
        }
    };
    failures.extend(trace_violations(a, &trace, s).into_iter().map(&tag));
    let image = match flatten_set(&z, sys) {
        Ok(f) => f,
        Err(e) => {
            failures.push(tag(e.to_string()));
            return DomainResult {
                image: None,
                failures,
            };
        }
    };
    if image.len() != a.len() || !image.contains(&ANCHOR) || !is_s_separated(&image, big, s) {
        failures.push(tag(format!(
            "image {} is not a separated set through 1",
            image.to_position_string()
        )));
    }
    match unflatten_set(&image, sys).and_then(|u| zag(&u, sys, s)) {
        Ok((back, zag_trace)) => {
            if &back != a {
                failures.push(tag(format!("backward(forward(A)) = {back}")));
            }
            if zag_trace.order != trace.order {
                failures.push(tag(format!(
                    "z-order {} != zag order {}",
                    trace.order, zag_trace.order
                )));
            }
            let mirrored =
                trace.steps.iter().zip(&zag_trace.steps).all(|(zi, za)| {
                    za.removed == zi.added && za.d == zi.d && za.added == zi.removed
                });
            if !mirrored {
                failures.push(tag("zag steps do not mirror zig steps".into()));
            }
        }
        Err(e) => failures.push(tag(format!("backward failed: {e}"))),
    }
    DomainResult {
        image: Some(image),
        failures,
    }
}

/// Exhaustively checks that `forward` is a bijection from the `k`-sets of
/// `sys` containing `1@1` onto the `k`-sets of the `(n_1 + n_2)`-circle
/// containing 1, with `backward` as its inverse. Work over domain elements
/// is spread across `jobs` threads (`0` = all cores, `1` = sequential).
pub fn check_bijectivity(
    sys: &CircleSystem,
    s: usize,
    k: usize,
    jobs: usize,
) -> Result<BijectivityReport> {
    let (n1, n2) = check_bounds(sys, s, k)?;
    let big = CircleSystem::single(n1 + n2)?;

    let domain_req = EnumerationRequest::new(sys.clone(), s, k).with_fixed(ANCHOR)?;
    let codomain_req = EnumerationRequest::new(big.clone(), s, k).with_fixed(ANCHOR)?;
    let domain: Vec<SelectionSet> = enumerate_naive(&domain_req).collect();
    let codomain: Vec<SelectionSet> = enumerate_naive(&codomain_req).collect();
    let expected = binomial((n1 + n2 - s * k) as i64 - 1, k as i64 - 1);

    let results = par::ordered_map(&domain, jobs, |a| check_domain_element(a, sys, &big, s));
    let mut failures = Vec::new();
    let mut image = Vec::with_capacity(domain.len());
    for r in results {
        failures.extend(r.failures);
        image.extend(r.image);
    }

    if expected != domain.len() {
        failures.push(format!(
            "|domain| = {} but expected {expected}",
            domain.len()
        ));
    }
    if expected != codomain.len() {
        failures.push(format!(
            "|codomain| = {} but expected {expected}",
            codomain.len()
        ));
    }

    let mut sorted = image.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        failures.push(format!(
            "not injective: {} is hit twice",
            w[0].to_position_string()
        ));
    }
    sorted.dedup();
    // codomain is produced in canonical order
    if sorted != codomain {
        let missing = codomain.iter().find(|c| sorted.binary_search(c).is_err());
        match missing {
            Some(c) => failures.push(format!(
                "not surjective: {} is never hit",
                c.to_position_string()
            )),
            None => failures.push("image contains sets outside the codomain".into()),
        }
    }

    let back_failures = par::ordered_map(&codomain, jobs, |c| {
        match backward(c, sys, s).and_then(|b| forward(&b, sys, s)) {
            Ok(round) if &round == c => None,
            Ok(round) => Some(format!(
                "forward(backward({})) = {}",
                c.to_position_string(),
                round.to_position_string()
            )),
            Err(e) => Some(format!("S = {}: {e}", c.to_position_string())),
        }
    });
    failures.extend(back_failures.into_iter().flatten());

    Ok(BijectivityReport {
        sizes: sys.sizes().to_vec(),
        s,
        k,
        domain_size: domain.len(),
        codomain_size: codomain.len(),
        expected,
        image,
        failures,
    })
}
