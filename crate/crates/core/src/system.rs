//! Ground sets made of several circles, the separation predicate, and the
//! relabeling maps between a two-circle system and a single circle.
//!
//! Positions and circle indices are 1-based throughout. Elements are written
//! `POS@CIRCLE` (for example `3@2`) and sets as comma-separated lists of
//! elements in canonical `(circle, position)` order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The sizes `n_1, ..., n_p` of the circles forming a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CircleSystem {
    sizes: Vec<usize>,
}

impl CircleSystem {
    pub fn new(sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::InvalidSystem(
                "at least one circle is required".into(),
            ));
        }
        if let Some(j) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidSystem(format!(
                "circle {} has size 0; every circle needs at least one object",
                j + 1
            )));
        }
        Ok(Self { sizes })
    }

    /// A system with a single circle of `n` objects.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of circles `p`.
    pub fn circles(&self) -> usize {
        self.sizes.len()
    }

    /// Size of circle `circle` (1-based). Panics if the circle does not exist.
    pub fn size(&self, circle: usize) -> usize {
        self.sizes[circle - 1]
    }

    /// Total number of objects `N`.
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.circle <= self.sizes.len() && e.position <= self.sizes[e.circle - 1]
    }

    /// Checked constructor: an element that belongs to this system.
    pub fn element(&self, position: usize, circle: usize) -> Result<Element> {
        let e = Element::new(position, circle)?;
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else if e.circle > self.sizes.len() {
            Err(Error::InvalidElement(format!(
                "{e}: the system has only {} circle(s)",
                self.sizes.len()
            )))
        } else {
            Err(Error::InvalidElement(format!(
                "{e}: circle {} has only {} positions",
                e.circle,
                self.size(e.circle)
            )))
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.sizes.iter().enumerate().flat_map(|(j, &n)| {
            (1..=n).map(move |position| Element {
                circle: j + 1,
                position,
            })
        })
    }

    fn require_two(&self) -> Result<(usize, usize)> {
        match self.sizes[..] {
            [n1, n2] => Ok((n1, n2)),
            _ => Err(Error::InvalidSystem(format!(
                "expected exactly two circles, got {}",
                self.sizes.len()
            ))),
        }
    }
}

impl fmt::Display for CircleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CircleSystem {
    type Err = Error;

    /// Parses a comma-separated list of sizes, e.g. `8,7`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid circle size {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

/// One object of the ground set: a position on a circle.
///
/// Ordering is by circle first, then position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    circle: usize,
    position: usize,
}

impl Element {
    /// Both coordinates are 1-based. Whether the element fits a particular
    /// system is checked by [`CircleSystem::check`].
    pub fn new(position: usize, circle: usize) -> Result<Self> {
        if position == 0 || circle == 0 {
            return Err(Error::InvalidElement(format!(
                "{position}@{circle}: positions and circles are numbered from 1"
            )));
        }
        Ok(Self { circle, position })
    }

    pub(crate) const fn new_unchecked(position: usize, circle: usize) -> Self {
        Self { circle, position }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn circle(&self) -> usize {
        self.circle
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.position, self.circle)
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pos, circle) = s
            .split_once('@')
            .ok_or_else(|| Error::Parse(format!("expected POS@CIRCLE, got {s:?}")))?;
        let pos = pos
            .parse()
            .map_err(|_| Error::Parse(format!("invalid position in {s:?}")))?;
        let circle = circle
            .parse()
            .map_err(|_| Error::Parse(format!("invalid circle in {s:?}")))?;
        Element::new(pos, circle)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A duplicate-free set of elements kept in canonical order.
///
/// The derived ordering compares the sorted element sequences
/// lexicographically, which is the canonical enumeration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SelectionSet {
    elements: Vec<Element>,
}

impl SelectionSet {
    pub fn new(elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut elements: Vec<Element> = elements.into_iter().collect();
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidElement(format!("duplicate element {}", w[0])));
        }
        Ok(Self { elements })
    }

    /// Builds a set from elements already sorted and distinct.
    pub(crate) fn from_sorted(elements: Vec<Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    /// Points of a single circle, all on circle 1.
    pub fn on_single_circle(positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let elements = positions
            .into_iter()
            .map(|p| Element::new(p, 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// Inserts `e`; returns false if it was already present.
    pub fn insert(&mut self, e: Element) -> bool {
        match self.elements.binary_search(&e) {
            Ok(_) => false,
            Err(at) => {
                self.elements.insert(at, e);
                true
            }
        }
    }

    /// Removes `e`; returns false if it was absent.
    pub fn remove(&mut self, e: &Element) -> bool {
        match self.elements.binary_search(e) {
            Ok(at) => {
                self.elements.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    pub fn validate(&self, sys: &CircleSystem) -> Result<()> {
        self.elements.iter().try_for_each(|e| sys.check(e))
    }

    /// Positions of the elements, in order. Intended for single-circle sets.
    pub fn positions(&self) -> Vec<usize> {
        self.elements.iter().map(Element::position).collect()
    }

    /// Comma-separated bare positions, the syntax used for single-circle
    /// sets such as the image of [`flatten`].
    pub fn to_position_string(&self) -> String {
        self.elements
            .iter()
            .map(|e| e.position.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for SelectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for SelectionSet {
    type Err = Error;

    /// Parses `POS@CIRCLE` lists; the empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        Self::new(
            s.split(',')
                .map(str::parse)
                .collect::<Result<Vec<Element>>>()?,
        )
    }
}

impl<'a> IntoIterator for &'a SelectionSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// The separation distance `s` and the selection size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeparationParams {
    pub s: usize,
    pub k: usize,
}

impl SeparationParams {
    pub fn new(s: usize, k: usize) -> Self {
        Self { s, k }
    }
}

/// Shorter-arc distance between two elements, or `None` when they lie on
/// different circles.
pub fn circular_distance(a: &Element, b: &Element, sys: &CircleSystem) -> Option<usize> {
    if a.circle != b.circle {
        return None;
    }
    let n = sys.size(a.circle);
    let d = a.position.abs_diff(b.position);
    Some(d.min(n - d))
}

/// Whether no two elements of `set` on the same circle have fewer than `s`
/// objects strictly between them, i.e. every same-circle pair is at
/// distance at least `s + 1`.
pub fn is_s_separated(set: &SelectionSet, sys: &CircleSystem, s: usize) -> bool {
    let elems = set.elements();
    // Elements are grouped by circle, so each pair is visited once.
    elems.iter().enumerate().all(|(i, a)| {
        elems[i + 1..]
            .iter()
            .take_while(|b| b.circle == a.circle)
            .all(|b| circular_distance(a, b, sys).is_some_and(|d| d > s))
    })
}

/// Splices circle 2 after position `n_1` of circle 1: `(i,1) -> i`,
/// `(i,2) -> n_1 + i`.
pub fn flatten(e: &Element, sys: &CircleSystem) -> Result<usize> {
    let (n1, _) = sys.require_two()?;
    sys.check(e)?;
    Ok(match e.circle {
        1 => e.position,
        _ => n1 + e.position,
    })
}

/// Inverse of [`flatten`]. Circle-2 positions are reported in `1..=n_2`.
pub fn unflatten(i: usize, sys: &CircleSystem) -> Result<Element> {
    let (n1, n2) = sys.require_two()?;
    match i {
        0 => Err(Error::InvalidElement("position 0 is out of range".into())),
        i if i <= n1 => Ok(Element::new_unchecked(i, 1)),
        i if i <= n1 + n2 => Ok(Element::new_unchecked(i - n1, 2)),
        i => Err(Error::InvalidElement(format!(
            "position {i} exceeds n_1 + n_2 = {}",
            n1 + n2
        ))),
    }
}

/// Applies [`flatten`] elementwise, giving a set on circle 1 of the single
/// circle of size `n_1 + n_2`.
pub fn flatten_set(set: &SelectionSet, sys: &CircleSystem) -> Result<SelectionSet> {
    let elements = set
        .iter()
        .map(|e| flatten(e, sys).map(|p| Element::new_unchecked(p, 1)))
        .collect::<Result<Vec<_>>>()?;
    // flatten is increasing in canonical order
    Ok(SelectionSet::from_sorted(elements))
}

/// Applies [`unflatten`] to every position of a single-circle set.
pub fn unflatten_set(set: &SelectionSet, sys: &CircleSystem) -> Result<SelectionSet> {
    if let Some(e) = set.iter().find(|e| e.circle != 1) {
        return Err(Error::InvalidElement(format!(
            "{e}: expected a set on a single circle"
        )));
    }
    let elements = set
        .iter()
        .map(|e| unflatten(e.position, sys))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionSet::from_sorted(elements))
}
