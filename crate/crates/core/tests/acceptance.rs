//! Acceptance suite. Every comparison is exact; each criterion prints one
//! PASS/FAIL line and the process exits nonzero if any criterion fails.

use std::time::Instant;

use circsep::bijection::{check_bijectivity, trace_violations, zag, zig};
use circsep::count::{
    binomial, count_circle, count_circle_fixed, count_system, count_system_fixed,
    count_system_fixed_recursive, fixed_recursion_terms, CountValue,
};
use circsep::enumerate::{count_by_enumeration, enumerate_naive, EnumerationRequest};
use circsep::par::ordered_map;
use circsep::system::flatten_set;
use circsep::verify::{
    verify_all, verify_convolution_identity, verify_fixed_sum_identity, verify_fixed_sum_printed,
    Outcome, SweepGrid,
};
use circsep::{CircleSystem, Element, Error, SelectionSet};

type Outcomes = Vec<String>;
type Criterion = (&'static str, fn() -> Outcomes);

fn sys(sizes: &[usize]) -> CircleSystem {
    CircleSystem::new(sizes.to_vec()).unwrap()
}

fn el(p: usize, c: usize) -> Element {
    Element::new(p, c).unwrap()
}

fn naive_count(sys: &CircleSystem, s: usize, k: usize, fixed: Option<Element>) -> CountValue {
    let mut req = EnumerationRequest::new(sys.clone(), s, k);
    if let Some(f) = fixed {
        req = req.with_fixed(f).unwrap();
    }
    CountValue::from(enumerate_naive(&req).count())
}

fn gap_count(sys: &CircleSystem, s: usize, k: usize, fixed: Option<Element>) -> CountValue {
    let mut req = EnumerationRequest::new(sys.clone(), s, k);
    if let Some(f) = fixed {
        req = req.with_fixed(f).unwrap();
    }
    count_by_enumeration(&req)
}

macro_rules! expect {
    ($fails:expr, $cond:expr, $($msg:tt)*) => {
        if !$cond {
            $fails.push(format!($($msg)*));
        }
    };
}

/// Systems with `p` circles, every size in `lo..=hi`.
fn systems(p: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |n| {
                    let mut v = prefix.clone();
                    v.push(n);
                    v
                })
            })
            .collect();
    }
    out
}

/// (sizes, s, k) for p ∈ {2,3}, s ≤ 2, k ≤ 3, sizes in [sk+1, 10].
fn theorem_grid() -> Vec<(Vec<usize>, usize, usize)> {
    let mut grid = Vec::new();
    for p in 2..=3 {
        for s in 1..=2 {
            for k in 1..=3 {
                for sizes in systems(p, s * k + 1, 10) {
                    grid.push((sizes, s, k));
                }
            }
        }
    }
    grid
}

/// (n1, n2, s, k) with n1 ≥ sk+1, n2 ≥ sk, n1+n2 ≤ 16, k ≤ 4.
fn bijection_grid() -> Vec<(usize, usize, usize, usize)> {
    let mut grid = Vec::new();
    for k in 1..=4 {
        for s in 1..=15 {
            for n1 in s * k + 1..=16 {
                for n2 in (s * k).max(1)..=16 - n1 {
                    grid.push((n1, n2, s, k));
                }
            }
        }
    }
    grid
}

fn criterion_1() -> Outcomes {
    let mut fails = Vec::new();
    expect!(
        fails,
        count_circle(10, 1, 3).unwrap() == 50u32,
        "count_circle(10,1,3) != 50"
    );
    expect!(
        fails,
        naive_count(&sys(&[10]), 1, 3, None) == 50u32,
        "oracle(10,1,3) != 50"
    );
    let mut points = 0;
    for s in 1..=3 {
        for k in 1..=5 {
            for n in s * k + 1..=14 {
                let closed = count_circle(n, s, k).unwrap();
                let oracle = naive_count(&sys(&[n]), s, k, None);
                expect!(
                    fails,
                    closed == oracle,
                    "n={n} s={s} k={k}: {closed} != {oracle}"
                );
                points += 1;
            }
        }
    }
    expect!(fails, points > 0, "empty grid");
    fails
}

fn criterion_2() -> Outcomes {
    let mut fails = Vec::new();
    expect!(
        fails,
        count_circle_fixed(10, 1, 3).unwrap() == 15u32,
        "count_circle_fixed(10,1,3) != 15"
    );
    expect!(
        fails,
        naive_count(&sys(&[10]), 1, 3, Some(el(1, 1))) == 15u32,
        "oracle fixed (10,1,3) != 15"
    );
    for s in 1..=3 {
        for k in 1..=5 {
            for n in s * k + 1..=14 {
                let system = sys(&[n]);
                let fixed = count_circle_fixed(n, s, k).unwrap();
                for a in 1..=n {
                    let oracle = naive_count(&system, s, k, Some(el(a, 1)));
                    expect!(
                        fails,
                        fixed == oracle,
                        "n={n} s={s} k={k} fixed={a}@1: {fixed} != {oracle}"
                    );
                }
                let total = count_circle(n, s, k).unwrap();
                expect!(
                    fails,
                    CountValue::from(k) * total.clone() == CountValue::from(n) * fixed.clone(),
                    "n={n} s={s} k={k}: k*{total} != n*{fixed}"
                );
            }
        }
    }
    fails
}

fn criterion_3() -> Outcomes {
    let mut fails = Vec::new();
    let s87 = sys(&[8, 7]);
    expect!(
        fails,
        count_system(&s87, 2, 3).unwrap() == 140u32,
        "count_system([8,7],2,3) != 140"
    );
    expect!(
        fails,
        count_system_fixed(&s87, 2, 3, &el(1, 1)).unwrap() == 28u32,
        "count_system_fixed([8,7],2,3) != 28"
    );
    expect!(
        fails,
        naive_count(&s87, 2, 3, None) == 140u32,
        "naive oracle [8,7] != 140"
    );
    expect!(
        fails,
        naive_count(&s87, 2, 3, Some(el(1, 1))) == 28u32,
        "naive oracle fixed [8,7] != 28"
    );

    let grid = theorem_grid();
    let results = ordered_map(&grid, 0, |(sizes, s, k)| {
        let (s, k) = (*s, *k);
        let system = sys(sizes);
        let mut fails = Vec::new();
        let closed = count_system(&system, s, k).unwrap();
        let oracle = gap_count(&system, s, k, None);
        expect!(
            fails,
            closed == oracle,
            "{system} s={s} k={k}: {closed} != {oracle}"
        );
        for e in system.elements() {
            let fixed = count_system_fixed(&system, s, k, &e).unwrap();
            let oracle = gap_count(&system, s, k, Some(e));
            expect!(
                fails,
                fixed == oracle,
                "{system} s={s} k={k} fixed={e}: {fixed} != {oracle}"
            );
        }
        fails
    });
    fails.extend(results.into_iter().flatten());
    fails
}

fn criterion_4() -> Outcomes {
    let mut fails = Vec::new();
    let report = check_bijectivity(&sys(&[4, 3]), 1, 2, 1).unwrap();
    let mut image: Vec<String> = report
        .image
        .iter()
        .map(SelectionSet::to_position_string)
        .collect();
    image.sort();
    expect!(
        fails,
        report.passed(),
        "[4,3] s=1 k=2: {:?}",
        report.failures
    );
    expect!(
        fails,
        image == ["1,3", "1,4", "1,5", "1,6"],
        "[4,3] image {image:?}"
    );
    let report = check_bijectivity(&sys(&[8, 7]), 2, 3, 1).unwrap();
    expect!(
        fails,
        report.passed() && report.domain_size == 28 && report.codomain_size == 28,
        "[8,7] s=2 k=3: {:?}",
        report.failures
    );

    let grid = bijection_grid();
    let results = ordered_map(&grid, 0, |&(n1, n2, s, k)| {
        let report = check_bijectivity(&sys(&[n1, n2]), s, k, 1).unwrap();
        let expected = binomial((n1 + n2 - s * k) as i64 - 1, k as i64 - 1);
        let mut fails: Vec<String> = report
            .failures
            .iter()
            .map(|f| format!("[{n1},{n2}] s={s} k={k}: {f}"))
            .collect();
        expect!(
            fails,
            expected == report.domain_size && expected == report.codomain_size,
            "[{n1},{n2}] s={s} k={k}: sizes {}/{} vs {expected}",
            report.domain_size,
            report.codomain_size
        );
        fails
    });
    fails.extend(results.into_iter().flatten());
    fails
}

fn criterion_5() -> Outcomes {
    let mut fails = Vec::new();
    let terms = fixed_recursion_terms(&sys(&[8, 7]), 2, 3).unwrap();
    let expected: Vec<CountValue> = vec![7u32.into(), 21u32.into(), 0u32.into()];
    expect!(fails, terms == expected, "[8,7] terms {terms:?}");
    for (sizes, s, k) in theorem_grid() {
        let system = sys(&sizes);
        let recursive = count_system_fixed_recursive(&system, s, k).unwrap();
        let closed = count_system_fixed(&system, s, k, &el(1, 1)).unwrap();
        expect!(
            fails,
            recursive == closed,
            "{system} s={s} k={k}: {recursive} != {closed}"
        );
    }
    fails
}

fn criterion_6() -> Outcomes {
    let mut fails = Vec::new();
    let conv = verify_convolution_identity(7, 8, 2, 3).unwrap();
    expect!(
        fails,
        conv.passed()
            && conv.left.as_deref() == Some("140")
            && conv.note.as_deref() == Some("terms j=0..3: 0+84+56+0"),
        "[7,8] convolution {conv:?}"
    );
    let fixed = verify_fixed_sum_identity(8, 7, 2, 3).unwrap();
    expect!(
        fails,
        fixed.passed()
            && fixed.left.as_deref() == Some("28")
            && fixed.note.as_deref() == Some("terms j=0..2: 0+16+12"),
        "fixed-sum (8,7,2,3) {fixed:?}"
    );
    let printed = verify_fixed_sum_printed(8, 7, 2, 3).unwrap();
    expect!(
        fails,
        printed.outcome == Outcome::Fail && printed.documentation,
        "printed exponent variant should fail at (8,7,2,3): {printed:?}"
    );
    for s in 1..=2 {
        for k in 1..=3 {
            for n1 in s * k + 1..=10 {
                for n2 in s * k + 1..=10 {
                    let r = verify_convolution_identity(n1, n2, s, k).unwrap();
                    expect!(
                        fails,
                        r.passed(),
                        "convolution {n1},{n2} s={s} k={k}: {r:?}"
                    );
                }
            }
            // n carries the fixed element
            for n in s * k + 1..=10 {
                for m in s * k..=10 {
                    let r = verify_fixed_sum_identity(m, n, s, k).unwrap();
                    expect!(
                        fails,
                        r.passed(),
                        "fixed-sum m={m} n={n} s={s} k={k}: {r:?}"
                    );
                    let oracle = gap_count(&sys(&[n, m]), s, k, Some(el(1, 1)));
                    expect!(
                        fails,
                        r.left.as_deref() == Some(oracle.to_string().as_str()),
                        "fixed-sum m={m} n={n} s={s} k={k}: oracle {oracle}"
                    );
                }
            }
        }
    }
    fails
}

fn criterion_7() -> Outcomes {
    let mut fails = Vec::new();
    let inexact = |r: &Result<CountValue, Error>| matches!(r, Err(Error::Inexact { .. }));
    for s in 1..=3 {
        for k in 1..=5 {
            for n in s * k + 1..=14 {
                let r = count_circle(n, s, k);
                expect!(
                    fails,
                    !inexact(&r) && r.is_ok(),
                    "count_circle({n},{s},{k}): {r:?}"
                );
            }
        }
    }
    for (sizes, s, k) in theorem_grid() {
        let r = count_system(&sys(&sizes), s, k);
        expect!(
            fails,
            !inexact(&r) && r.is_ok(),
            "count_system({sizes:?},{s},{k}): {r:?}"
        );
    }

    let grid = bijection_grid();
    let results = ordered_map(&grid, 0, |&(n1, n2, s, k)| {
        let system = sys(&[n1, n2]);
        let req = EnumerationRequest::new(system.clone(), s, k)
            .with_fixed(el(1, 1))
            .unwrap();
        let mut fails = Vec::new();
        for a in enumerate_naive(&req) {
            let tag = format!("[{n1},{n2}] s={s} k={k} A={a}");
            let (z, zig_trace) = match zig(&a, &system, s) {
                Ok(r) => r,
                Err(e) => {
                    fails.push(format!("{tag}: zig: {e}"));
                    continue;
                }
            };
            fails.extend(
                trace_violations(&a, &zig_trace, s)
                    .into_iter()
                    .map(|v| format!("{tag}: zig {v}")),
            );
            // zag starts from the unflattened image, which equals z itself
            let flat = flatten_set(&z, &system).unwrap();
            match zag(&z, &system, s) {
                Ok((_, zag_trace)) => fails.extend(
                    trace_violations(&z, &zag_trace, s)
                        .into_iter()
                        .map(|v| format!("{tag}: zag from {} {v}", flat.to_position_string())),
                ),
                Err(e) => fails.push(format!("{tag}: zag: {e}")),
            }
        }
        fails
    });
    fails.extend(results.into_iter().flatten());
    fails
}

fn criterion_8() -> Outcomes {
    let mut fails = Vec::new();
    let render = |jobs: usize| -> String {
        let grid = SweepGrid {
            jobs,
            ..SweepGrid::default()
        };
        verify_all(&grid)
            .unwrap()
            .iter()
            .map(|r| serde_json::to_string(r).unwrap() + "\n")
            .collect()
    };
    let one = render(1);
    let four = render(4);
    let all = render(0);
    expect!(fails, !one.is_empty(), "empty report");
    expect!(fails, one == four, "jobs=1 and jobs=4 reports differ");
    expect!(fails, one == all, "jobs=1 and jobs=0 reports differ");
    fails
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 single-circle closed form vs oracle", criterion_1),
        ("2 fixed-element lemma, all rotations", criterion_2),
        ("3 two- and three-circle theorems", criterion_3),
        ("4 bijection suite", criterion_4),
        ("5 fixed-element recursion", criterion_5),
        ("6 convolution and fixed-sum identities", criterion_6),
        ("7 structural invariants", criterion_7),
        ("8 verify determinism across job counts", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let fails = run();
        let secs = start.elapsed().as_secs_f64();
        if fails.is_empty() {
            println!("criterion {name}: PASS ({secs:.2}s)");
        } else {
            failed += 1;
            println!(
                "criterion {name}: FAIL ({} problems, {secs:.2}s)",
                fails.len()
            );
            for f in fails.iter().take(10) {
                println!("    {f}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
