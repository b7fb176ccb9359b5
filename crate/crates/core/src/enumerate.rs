//! Enumeration of `s`-separated `k`-sets, optionally required to contain a
//! fixed element.
//!
//! [`enumerate_naive`] filters every `k`-subset of the ground set and is the
//! reference oracle. [`enumerate_gap`] builds sets position by position and
//! prunes candidates that conflict with an earlier choice on the same circle.
//! Both yield sets in canonical lexicographic order.

use itertools::Itertools;

use crate::count::CountValue;
use crate::error::Result;
use crate::system::{is_s_separated, CircleSystem, Element, SelectionSet, SeparationParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRequest {
    pub sys: CircleSystem,
    pub params: SeparationParams,
    pub fixed: Option<Element>,
}

impl EnumerationRequest {
    pub fn new(sys: CircleSystem, s: usize, k: usize) -> Self {
        Self {
            sys,
            params: SeparationParams::new(s, k),
            fixed: None,
        }
    }

    /// Requires every yielded set to contain `fixed`.
    pub fn with_fixed(mut self, fixed: Element) -> Result<Self> {
        self.sys.check(&fixed)?;
        self.fixed = Some(fixed);
        Ok(self)
    }
}

/// Brute force: every `k`-subset of the ground set, kept if it is
/// `s`-separated and contains the fixed element.
pub fn enumerate_naive(req: &EnumerationRequest) -> impl Iterator<Item = SelectionSet> + '_ {
    let SeparationParams { s, k } = req.params;
    let elements: Vec<Element> = req.sys.elements().collect();
    elements
        .into_iter()
        .combinations(k)
        .map(SelectionSet::from_sorted)
        .filter(move |set| {
            req.fixed.is_none_or(|f| set.contains(&f)) && is_s_separated(set, &req.sys, s)
        })
}

/// Pruned generator producing the same sets as [`enumerate_naive`], in the
/// same order.
pub fn enumerate_gap(req: &EnumerationRequest) -> GapSets {
    GapSets {
        cursor: GapCursor::new(req),
    }
}

/// Number of sets [`enumerate_gap`] yields, counted without materializing
/// them.
pub fn count_by_enumeration(req: &EnumerationRequest) -> CountValue {
    let mut cursor = GapCursor::new(req);
    let mut n: u128 = 0;
    while cursor.advance() {
        n += 1;
    }
    CountValue::from(n)
}

/// Iterator adapter over [`GapCursor`].
#[derive(Debug, Clone)]
pub struct GapSets {
    cursor: GapCursor,
}

impl Iterator for GapSets {
    type Item = SelectionSet;

    fn next(&mut self) -> Option<SelectionSet> {
        if self.cursor.advance() {
            Some(self.cursor.current())
        } else {
            None
        }
    }
}

/// Depth-first search over indices into the canonical element list. The
/// working state is the stack of chosen indices, so memory is `O(k)` beyond
/// the per-element tables.
#[derive(Debug, Clone)]
struct GapCursor {
    elements: Vec<Element>,
    /// `capacity[i]` bounds how many more elements can be chosen from index
    /// `i` onward; nonincreasing in `i`.
    capacity: Vec<usize>,
    sizes: Vec<usize>,
    s: usize,
    k: usize,
    fixed: Option<usize>,
    chosen: Vec<usize>,
    next: usize,
    state: CursorState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CursorState {
    Fresh,
    Running,
    Done,
}

impl GapCursor {
    fn new(req: &EnumerationRequest) -> Self {
        let SeparationParams { s, k } = req.params;
        let elements: Vec<Element> = req.sys.elements().collect();
        let sizes = req.sys.sizes().to_vec();

        // Line bound inside the current circle plus the circular maximum of
        // every later circle.
        let circle_max = |n: usize| (n / (s + 1)).max(1);
        let mut capacity = vec![0; elements.len() + 1];
        let mut later = 0;
        for i in (0..elements.len()).rev() {
            let e = elements[i];
            let n = sizes[e.circle() - 1];
            capacity[i] = later + (n - e.position() + 1).div_ceil(s + 1);
            if e.position() == 1 {
                later += circle_max(n);
            }
        }

        let fixed = req.fixed.map(|f| {
            elements
                .binary_search(&f)
                .expect("fixed element belongs to the system")
        });

        Self {
            elements,
            capacity,
            sizes,
            s,
            k,
            fixed,
            chosen: Vec::with_capacity(k),
            next: 0,
            state: CursorState::Fresh,
        }
    }

    fn current(&self) -> SelectionSet {
        SelectionSet::from_sorted(self.chosen.iter().map(|&i| self.elements[i]).collect())
    }

    fn compatible(&self, candidate: usize) -> bool {
        let e = self.elements[candidate];
        let n = self.sizes[e.circle() - 1];
        let same_circle = || {
            self.chosen
                .iter()
                .rev()
                .map(|&i| self.elements[i])
                .take_while(|c| c.circle() == e.circle())
        };
        // Chosen positions on a circle are increasing, so only the latest
        // (forward gap) and the first (wraparound gap) can conflict.
        let Some(last) = same_circle().next() else {
            return true;
        };
        let first = same_circle().last().unwrap_or(last);
        let forward = e.position() - last.position();
        let wrap = n - e.position() + first.position();
        forward > self.s && wrap > self.s
    }

    fn fixed_chosen(&self) -> bool {
        match self.fixed {
            Some(f) => self.chosen.contains(&f),
            None => true,
        }
    }

    fn find_candidate(&self, from: usize) -> Option<usize> {
        let need = self.k - self.chosen.len();
        let limit = match self.fixed {
            Some(f) if !self.fixed_chosen() => f + 1,
            _ => self.elements.len(),
        };
        (from..limit)
            .take_while(|&c| self.capacity[c] >= need)
            .find(|&c| self.compatible(c))
    }

    /// Backtracks one level; returns false when the search is exhausted.
    fn backtrack(&mut self) -> bool {
        match self.chosen.pop() {
            Some(last) => {
                self.next = last + 1;
                true
            }
            None => {
                self.state = CursorState::Done;
                false
            }
        }
    }

    /// Moves to the next complete set; returns false when there is none.
    fn advance(&mut self) -> bool {
        match self.state {
            CursorState::Done => return false,
            CursorState::Fresh => {
                self.state = CursorState::Running;
                if self.k > self.elements.len() {
                    self.state = CursorState::Done;
                    return false;
                }
            }
            CursorState::Running => {
                if !self.backtrack() {
                    return false;
                }
            }
        }
        loop {
            if self.chosen.len() == self.k {
                if self.fixed_chosen() {
                    return true;
                }
                if !self.backtrack() {
                    return false;
                }
                continue;
            }
            match self.find_candidate(self.next) {
                Some(c) => {
                    self.chosen.push(c);
                    self.next = c + 1;
                }
                None => {
                    if !self.backtrack() {
                        return false;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(sizes: &[usize]) -> CircleSystem {
        CircleSystem::new(sizes.to_vec()).unwrap()
    }

    fn req(sizes: &[usize], s: usize, k: usize) -> EnumerationRequest {
        EnumerationRequest::new(sys(sizes), s, k)
    }

    fn strings(it: impl Iterator<Item = SelectionSet>) -> Vec<String> {
        it.map(|s| s.to_string()).collect()
    }

    #[test]
    fn naive_fixed_example() {
        let r = req(&[4, 3], 1, 2)
            .with_fixed("1@1".parse().unwrap())
            .unwrap();
        let expected = ["1@1,3@1", "1@1,1@2", "1@1,2@2", "1@1,3@2"];
        assert_eq!(strings(enumerate_naive(&r)), expected);
        assert_eq!(strings(enumerate_gap(&r)), expected);
    }

    #[test]
    fn five_circle_has_no_two_sets_at_distance_three() {
        let r = req(&[5], 2, 2);
        assert_eq!(enumerate_naive(&r).count(), 0);
        assert_eq!(enumerate_gap(&r).count(), 0);
    }

    #[test]
    fn unrestricted_when_s_is_zero() {
        for n in 1..=8 {
            for k in 0..=n + 1 {
                let r = req(&[n], 0, k);
                let expected = crate::count::binomial(n as i64, k as i64);
                assert_eq!(count_by_enumeration(&r), expected);
                assert_eq!(CountValue::from(enumerate_naive(&r).count()), expected);
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_by_enumeration(&req(&[10], 1, 3)), 50u32);
        assert_eq!(count_by_enumeration(&req(&[8, 7], 2, 3)), 140u32);
        let fixed = req(&[10], 1, 3).with_fixed("1@1".parse().unwrap()).unwrap();
        assert_eq!(count_by_enumeration(&fixed), 15u32);
        assert_eq!(count_by_enumeration(&req(&[6], 3, 0)), 1u32);
        assert_eq!(count_by_enumeration(&req(&[3], 0, 4)), 0u32);
    }

    #[test]
    fn empty_set_with_fixed_element_is_excluded() {
        let r = req(&[5], 1, 0).with_fixed("2@1".parse().unwrap()).unwrap();
        assert_eq!(enumerate_gap(&r).count(), 0);
        assert_eq!(enumerate_naive(&r).count(), 0);
    }

    #[test]
    fn small_circles_hold_one_element() {
        // circles with fewer than 2(s+1) objects host at most one choice
        let r = req(&[3, 5, 2], 2, 2);
        let naive: Vec<_> = enumerate_naive(&r).collect();
        assert_eq!(enumerate_gap(&r).collect::<Vec<_>>(), naive);
        assert_eq!(naive.len(), 3 * 5 + 3 * 2 + 5 * 2);
    }

    #[test]
    fn gap_matches_naive_exhaustively() {
        let systems: &[&[usize]] = &[
            &[1],
            &[7],
            &[12],
            &[4, 3],
            &[6, 6],
            &[9, 8],
            &[2, 1, 3],
            &[5, 4, 6],
            &[3, 3, 3, 3],
        ];
        for sizes in systems {
            let sys = sys(sizes);
            for s in 0..=3 {
                for k in 0..=5 {
                    let base = EnumerationRequest::new(sys.clone(), s, k);
                    let naive: Vec<_> = enumerate_naive(&base).collect();
                    let gap: Vec<_> = enumerate_gap(&base).collect();
                    assert_eq!(gap, naive, "{sys} s={s} k={k}");
                    for fixed in sys.elements() {
                        let r = base.clone().with_fixed(fixed).unwrap();
                        let naive: Vec<_> = enumerate_naive(&r).collect();
                        let gap: Vec<_> = enumerate_gap(&r).collect();
                        assert_eq!(gap, naive, "{sys} s={s} k={k} fixed={fixed}");
                    }
                }
            }
        }
    }

    #[test]
    fn early_termination() {
        let r = req(&[40, 40], 1, 6);
        let first: Vec<_> = enumerate_gap(&r).take(3).collect();
        assert_eq!(first[0].to_string(), "1@1,3@1,5@1,7@1,9@1,11@1");
        assert_eq!(first[1].to_string(), "1@1,3@1,5@1,7@1,9@1,12@1");
    }
}
