//! Cross-validation: every counting route against the golden fixture, the
//! brute-force oracle, and each other. Backs the `verify` CLI command.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::closed_forms::{
    a_triangle, b_triangle, cp_empty, cp_pair, cp_single, cp_tail_run, cp_tail_run_b, f_polynomial,
};
use crate::genfunc::gf_polynomials;
use crate::oracle::oracle_table_threaded;
use crate::paths::{cp_count, w_by_enumeration, w_closed};
use crate::perm::{mask_elements, mask_is_feasible};
use crate::recurrences::dp_tables;
use crate::table::CountTable;
use crate::table3::{golden_cells, GoldenCell};
use crate::{oracle_limit, Error, PeakSet, Result};
use num_rational::BigRational;

/// Result of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Options for [`run_verify`]. `max_n` caps every order-dependent phase;
/// `threads` parallelizes oracle table construction.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub max_n: u32,
    pub threads: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n: 8,
            threads: 1,
        }
    }
}

/// Runs the full suite. Oracle phases require `max_n` within the oracle
/// limit; table phases are additionally capped by their own limits.
pub fn run_verify(cfg: VerifyConfig) -> Result<VerifyReport> {
    if cfg.max_n < 3 {
        return Err(Error::Domain(format!(
            "verify needs max_n >= 3, got {}",
            cfg.max_n
        )));
    }
    if cfg.max_n > oracle_limit() {
        return Err(Error::ScaleLimit(format!(
            "oracle scale exceeded: max_n = {} > limit {}",
            cfg.max_n,
            oracle_limit()
        )));
    }

    let oracle: Vec<CountTable> = (3..=cfg.max_n)
        .map(|n| oracle_table_threaded(n, cfg.threads))
        .collect::<Result<_>>()?;
    let dp = dp_tables(cfg.max_n.min(crate::dp_limit()))?;

    let checks = vec![
        check_table3(&golden_cells(), cfg.max_n, &oracle, &dp),
        check_completeness(&oracle, &dp),
        check_triangles(),
        check_polynomial_identities(),
        check_path_weights(),
        check_example_listing(cfg.max_n),
        check_feasibility_criterion(&oracle),
        check_insertion_recurrence(&oracle, "insertion-recurrence-oracle"),
        check_insertion_recurrence(&dp, "insertion-recurrence-dp"),
        check_tail_recurrence(&oracle, "tail-recurrence-oracle"),
        check_tail_recurrence(&dp, "tail-recurrence-dp"),
        check_genfunc_matches_dp(&dp),
        check_scaling_smoke(),
    ];
    Ok(VerifyReport { checks })
}

/// Every fixture cell against every applicable route. `oracle` and `dp`
/// are prebuilt tables indexed from order 3.
pub fn check_table3(
    cells: &[GoldenCell],
    max_n: u32,
    oracle: &[CountTable],
    dp: &[CountTable],
) -> CheckOutcome {
    const NAME: &str = "table3-all-routes";
    let top = max_n.min(8);
    if oracle.len() + 2 < top as usize || dp.len() + 2 < top as usize {
        return CheckOutcome::fail(
            NAME,
            "prebuilt tables do not reach the fixture range".into(),
        );
    }
    let genfunc = match gf_polynomials(top) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
    };
    let mut checked = 0usize;
    for cell in cells.iter().filter(|c| c.n <= top) {
        let n = cell.n;
        let s = match PeakSet::new(n, cell.elements.clone()) {
            Ok(s) => s,
            Err(e) => return CheckOutcome::fail(NAME, format!("{}: {e}", cell.label())),
        };
        let mut routes: Vec<(&str, BigUint)> = vec![
            ("oracle", oracle[(n - 3) as usize].get(&cell.elements)),
            ("dp", dp[(n - 3) as usize].get(&cell.elements)),
            (
                "genfunc",
                genfunc[(n - 3) as usize].coefficient(&cell.elements),
            ),
            ("paths", cp_count(&s).expect("n >= 3")),
        ];
        if let Some(value) = closed_route(&s) {
            routes.push(("closed", value));
        }
        for (route, value) in routes {
            if value != cell.count {
                return CheckOutcome::fail(
                    NAME,
                    format!(
                        "{}: {route} gave {value}, table says {}",
                        cell.label(),
                        cell.count
                    ),
                );
            }
            checked += 1;
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{checked} route evaluations over the fixture agree"),
    )
}

/// The closed-form value when one applies: explicit formulas for
/// `|S| <= 2`, the scaled tail-run formula for longer single runs.
pub fn closed_route(s: &PeakSet) -> Option<BigUint> {
    let n = s.n();
    match s.elements() {
        [] => cp_empty(n).ok(),
        [i] => cp_single(n, *i).ok(),
        [i, j] => cp_pair(n, *i, *j).ok(),
        _ => {
            let runs = s.run_decomposition();
            if runs.num_runs() == 1 {
                let run = runs.runs()[0];
                let scaled = crate::closed_forms::pow2(n - run.max) * cp_tail_run(run.max, run.len);
                // the b-form triangle must agree wherever it applies
                debug_assert_eq!(
                    cp_tail_run(run.max, run.len),
                    cp_tail_run_b(run.max, run.len)
                );
                Some(scaled)
            } else {
                None
            }
        }
    }
}

fn check_completeness(oracle: &[CountTable], dp: &[CountTable]) -> CheckOutcome {
    const NAME: &str = "completeness";
    let mut fact = BigUint::from(2u32);
    for n in 3..=(oracle.len() as u32 + 2).max(dp.len() as u32 + 2) {
        fact *= n;
        for (label, tables) in [("oracle", oracle), ("dp", dp)] {
            if let Some(t) = tables.get((n - 3) as usize) {
                let total = t.total();
                if total != fact {
                    return CheckOutcome::fail(
                        NAME,
                        format!("{label} table n={n} sums to {total}, expected {fact}"),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!(
            "oracle sums n <= {}, dp sums n <= {}",
            oracle.len() + 2,
            dp.len() + 2
        ),
    )
}

fn render_row(row: &[BigRational]) -> String {
    row.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_triangles() -> CheckOutcome {
    const NAME: &str = "coefficient-triangles";
    let b = b_triangle(4);
    let expect_b = ["1/2", "2 1/2", "27 12 1", "768 486 96 3"];
    for (k, expected) in (1..=4u32).zip(expect_b) {
        let got = render_row(b.row(k));
        if got != expected {
            return CheckOutcome::fail(NAME, format!("b row k={k} is {got}, expected {expected}"));
        }
    }
    let a = a_triangle(3);
    let expect_a = ["1/2", "1 1", "9 12 3", "192 324 144 12"];
    for (k, expected) in (0..=3u32).zip(expect_a) {
        let got = render_row(a.row(k));
        if got != expected {
            return CheckOutcome::fail(NAME, format!("a row k={k} is {got}, expected {expected}"));
        }
    }
    CheckOutcome::pass(
        NAME,
        "b rows 1-4 and a rows 0-3 match the published values".into(),
    )
}

fn check_polynomial_identities() -> CheckOutcome {
    const NAME: &str = "polynomial-identities";
    let minus_one = BigRational::from_integer((-1).into());
    for k in 0..=10u32 {
        let fk1 = f_polynomial(k + 1);
        if !fk1.eval(&minus_one).is_zero() {
            return CheckOutcome::fail(NAME, format!("f_{}(-1) != 0", k + 1));
        }
        // f'_{k+1}(x) = (k+1)^2 (k+2) f_k(x) - (k+1)(k+2) x f'_k(x)
        let fk = f_polynomial(k);
        let lhs = fk1.derivative();
        let c1 =
            BigRational::from_integer(((k as i64 + 1) * (k as i64 + 1) * (k as i64 + 2)).into());
        let c2 = BigRational::from_integer(((k as i64 + 1) * (k as i64 + 2)).into());
        let dfk = fk.derivative();
        for e in 0..=lhs.degree().max(fk.degree() + 1) {
            let lhs_c = lhs
                .coefficients()
                .get(e)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            let t1 = fk
                .coefficients()
                .get(e)
                .cloned()
                .unwrap_or_else(BigRational::zero)
                * &c1;
            let t2 = if e >= 1 {
                dfk.coefficients()
                    .get(e - 1)
                    .cloned()
                    .unwrap_or_else(BigRational::zero)
                    * &c2
            } else {
                BigRational::zero()
            };
            if lhs_c != t1 - t2 {
                return CheckOutcome::fail(
                    NAME,
                    format!("differential identity fails at k={k}, x^{e}"),
                );
            }
        }
    }
    let a = a_triangle(10);
    let b = b_triangle(10);
    for k in 1..=10u32 {
        let scale = BigRational::from_integer((k as i64 * (k as i64 + 1)).into());
        for i in 1..=k {
            if a.entry(k, i) != &(&scale * b.entry(k, i)) {
                return CheckOutcome::fail(NAME, format!("a/b bridge fails at k={k}, i={i}"));
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        "f_{k+1}(-1) = 0, differential identity, a/b bridge for k <= 10".into(),
    )
}

fn check_path_weights() -> CheckOutcome {
    const NAME: &str = "path-weights";
    let mut checked = 0usize;
    for shift in 0..=4u32 {
        for k in 0..=4u32 {
            for d in 0..=8u32 {
                let r = 3;
                let n = r + 2 * k + d;
                let by_enum = w_by_enumeration(shift, r, n, k);
                let closed = w_closed(shift, r, n, k);
                if by_enum != closed {
                    return CheckOutcome::fail(
                        NAME,
                        format!("w({shift},{r},{n},{k}): enumeration {by_enum}, closed {closed}"),
                    );
                }
                checked += 1;
            }
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{checked} grid points agree across both routes"),
    )
}

fn check_example_listing(max_n: u32) -> CheckOutcome {
    const NAME: &str = "example-class-listing";
    if max_n < 5 {
        return CheckOutcome::pass(NAME, "skipped (needs max_n >= 5)".into());
    }
    let s = PeakSet::new(5, vec![4, 5]).expect("valid set");
    let listed = match crate::oracle::enumerate_class(&s) {
        Ok(l) => l,
        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
    };
    let mut got: Vec<Vec<u32>> = listed.iter().map(|p| p.values().to_vec()).collect();
    got.sort();
    let mut expected: Vec<Vec<u32>> = [
        "14253", "14352", "24153", "34152", "24351", "34251", "15243", "15342", "25143", "35142",
        "25341", "35241",
    ]
    .iter()
    .map(|w| w.chars().map(|c| c.to_digit(10).unwrap()).collect())
    .collect();
    expected.sort();
    if got != expected {
        return CheckOutcome::fail(
            NAME,
            "CP_5({4,5}) does not match the published class".into(),
        );
    }
    CheckOutcome::pass(
        NAME,
        "CP_5({4,5}) matches the published 12-element class".into(),
    )
}

fn check_feasibility_criterion(oracle: &[CountTable]) -> CheckOutcome {
    const NAME: &str = "feasibility-criterion";
    let mut checked = 0usize;
    for t in oracle {
        let n = t.n();
        for raw in 0u64..(1 << n) {
            let mask = raw << 1;
            let elements = mask_elements(mask);
            let feasible = PeakSet::new(n, elements.clone())
                .expect("subset of [n]")
                .is_feasible();
            let positive = !t.get(&elements).is_zero();
            if feasible != positive {
                return CheckOutcome::fail(
                    NAME,
                    format!("n={n}, S={elements:?}: feasible={feasible}, count>0={positive}"),
                );
            }
            checked += 1;
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("{checked} subsets: feasibility iff positive count"),
    )
}

/// The insertion recurrence as an identity on finished tables:
/// `cp_n(S ∪ {n}) = (n-2-2|S|)·cp_{n-1}(S) + Σ_j 2·cp_{n-1}(S ∪ {j})`.
fn check_insertion_recurrence(tables: &[CountTable], name: &'static str) -> CheckOutcome {
    use num_bigint::BigInt;
    let mut checked = 0usize;
    for window in tables.windows(2) {
        let (prev, cur) = (&window[0], &window[1]);
        let n = cur.n();
        for raw in 0u64..(1 << (n - 3)) {
            let mask = raw << 3; // S ⊆ [3, n-1]
            let elements = mask_elements(mask);
            let size = elements.len() as i64;
            let mut target = elements.clone();
            target.push(n);
            let lhs = BigInt::from(cur.get(&target));
            let mut rhs = BigInt::from(prev.get(&elements)) * (n as i64 - 2 - 2 * size);
            for j in 3..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let mut with_j = elements.clone();
                with_j.push(j);
                with_j.sort_unstable();
                rhs += BigInt::from(prev.get(&with_j)) * 2;
            }
            if lhs != rhs {
                return CheckOutcome::fail(
                    name,
                    format!("n={n}, S={elements:?}: lhs {lhs}, rhs {rhs}"),
                );
            }
            checked += 1;
        }
    }
    CheckOutcome::pass(name, format!("{checked} insertion identities hold"))
}

/// The two-term tail recurrence as an identity on finished tables, over its
/// validated domain `n >= k + 4`.
fn check_tail_recurrence(tables: &[CountTable], name: &'static str) -> CheckOutcome {
    let mut checked = 0usize;
    for idx in 0..tables.len() {
        let n = tables[idx].n();
        if n < 4 {
            continue;
        }
        for k in 0..=(n - 4) {
            let bound = n - k - 1; // S ⊆ [3, bound], bound >= 3
            for raw in 0u64..(1 << (bound - 2)) {
                let mask = raw << 3;
                if !mask_is_feasible(mask) {
                    continue;
                }
                let elements = mask_elements(mask);
                let mut target = elements.clone();
                target.extend(n - k + 1..=n);
                let lhs = tables[idx].get(&target);

                let mut shorter = elements.clone();
                shorter.extend(n - k..n);
                let mut rhs = tables[idx - 1].get(&shorter) * (2 * (k + 1)) as u64;
                if k >= 1 {
                    let mut shorter2 = elements.clone();
                    shorter2.extend(n - k..n - 1);
                    rhs += tables[idx - 2].get(&shorter2) * (k * (k + 1)) as u64;
                }
                if lhs != rhs {
                    return CheckOutcome::fail(
                        name,
                        format!("n={n}, k={k}, S={elements:?}: lhs {lhs}, rhs {rhs}"),
                    );
                }
                checked += 1;
            }
        }
    }
    CheckOutcome::pass(name, format!("{checked} tail identities hold"))
}

fn check_genfunc_matches_dp(dp: &[CountTable]) -> CheckOutcome {
    const NAME: &str = "genfunc-vs-dp";
    let top = dp.last().map(|t| t.n()).unwrap_or(3).min(12);
    let polys = match gf_polynomials(top) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
    };
    for g in &polys {
        if g.to_count_table() != dp[(g.n() - 3) as usize] {
            return CheckOutcome::fail(NAME, format!("tables differ at n = {}", g.n()));
        }
    }
    CheckOutcome::pass(
        NAME,
        format!("coefficient tables equal DP tables for n <= {top}"),
    )
}

fn check_scaling_smoke() -> CheckOutcome {
    const NAME: &str = "scaling-smoke";
    let cases: [(u32, &[u32]); 2] = [(200, &[3, 7]), (100, &[10, 20, 30])];
    for (n, elements) in cases {
        let started = std::time::Instant::now();
        let s = PeakSet::new(n, elements.to_vec()).expect("valid set");
        let value = match cp_count(&s) {
            Ok(v) => v,
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        };
        if value.is_zero() {
            return CheckOutcome::fail(NAME, format!("cp_{n}({elements:?}) came out zero"));
        }
        let elapsed = started.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return CheckOutcome::fail(NAME, format!("cp_{n}({elements:?}) took {elapsed:?}"));
        }
        // doubling law over 50 consecutive orders past max S
        let base = elements.last().copied().unwrap_or(3);
        let mut prev = cp_count(&PeakSet::new(base, elements.to_vec()).unwrap()).unwrap();
        for order in base + 1..=base + 50 {
            let next = cp_count(&PeakSet::new(order, elements.to_vec()).unwrap()).unwrap();
            if next != &prev * 2u32 {
                return CheckOutcome::fail(NAME, format!("doubling law fails at order {order}"));
            }
            prev = next;
        }
    }
    CheckOutcome::pass(
        NAME,
        "large-order counts are fast, exact, and obey the doubling law".into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_passes_at_small_scale() {
        let report = run_verify(VerifyConfig {
            max_n: 6,
            threads: 2,
        })
        .unwrap();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn verify_minimal_suite() {
        let report = run_verify(VerifyConfig {
            max_n: 3,
            threads: 1,
        })
        .unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn corrupted_fixture_is_caught_and_named() {
        let mut cells = golden_cells();
        let idx = cells
            .iter()
            .position(|c| c.n == 5 && c.elements == [4, 5])
            .unwrap();
        cells[idx].count = BigUint::from(13u32);
        let oracle: Vec<CountTable> = (3..=5)
            .map(|n| oracle_table_threaded(n, 1).unwrap())
            .collect();
        let dp = dp_tables(5).unwrap();
        let outcome = check_table3(&cells, 5, &oracle, &dp);
        assert!(!outcome.passed);
        assert!(
            outcome.detail.contains("n=5 S={4,5}"),
            "detail: {}",
            outcome.detail
        );
    }

    #[test]
    fn verify_rejects_out_of_range_max_n() {
        assert!(matches!(
            run_verify(VerifyConfig {
                max_n: crate::oracle_limit() + 1,
                threads: 1
            }),
            Err(Error::ScaleLimit(_))
        ));
        assert!(matches!(
            run_verify(VerifyConfig {
                max_n: 2,
                threads: 1
            }),
            Err(Error::Domain(_))
        ));
    }
}
