//! Complete count tables by dynamic programming.
//!
//! The table at order `n + 1` is built from the table at order `n` with two
//! rules, one per placement of the new maximum letter `n + 1`:
//!
//! - `n + 1` sits at an end and is no peak: every set `S` keeps its
//!   elements and its count doubles;
//! - `n + 1` is a peak: `cp_{n+1}(S ∪ {n+1}) = (n - 1 - 2|S|)·cp_n(S)
//!   + Σ_{j ∈ [3,n]∖S} 2·cp_n(S ∪ {j})`, from inserting `n + 1` into a
//!   shorter permutation either away from all peaks or right beside a
//!   then-demoted peak `j`.
//!
//! Keys are bitmasks over `[3, n]`; only feasible sets are stored, all
//! others implicitly count zero.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::closed_forms::pow2;
use crate::perm::{mask_elements, mask_is_feasible};
use crate::table::CountTable;
use crate::{dp_limit, Error, PeakSet, Result};

/// Default DP ceiling. Tables stay small (the feasible-key count grows like
/// a central binomial coefficient) but counts grow as `n!`.
pub const DEFAULT_DP_LIMIT: u32 = 20;

/// Hard cap on the DP order; key masks must stay well within a machine word
/// and table sizes within memory.
pub const DP_HARD_CAP: u32 = 24;

fn check_scale(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("DP tables start at n = 3, got {n}")));
    }
    let limit = dp_limit();
    if n > limit {
        return Err(Error::ScaleLimit(format!(
            "DP scale exceeded: n = {n} > limit {limit}"
        )));
    }
    Ok(())
}

fn base_table() -> HashMap<u64, BigUint> {
    let mut t = HashMap::new();
    t.insert(0u64, BigUint::from(4u32));
    t.insert(1u64 << 3, BigUint::from(2u32));
    t
}

fn dp_step(n: u32, cur: &HashMap<u64, BigUint>) -> HashMap<u64, BigUint> {
    let new_bit = 1u64 << (n + 1);
    let mut next = HashMap::with_capacity(cur.len() * 2);
    for (&mask, count) in cur {
        next.insert(mask, count * 2u32);

        let size = mask.count_ones();
        let coeff = n as i64 - 1 - 2 * size as i64;
        // coeff >= 1 is exactly feasibility of S ∪ {n+1}; smaller targets
        // would count zero and are not stored.
        if coeff < 1 {
            continue;
        }
        let mut acc = count * coeff as u64;
        for j in 3..=n {
            let bit = 1u64 << j;
            if mask & bit != 0 {
                continue;
            }
            if let Some(cj) = cur.get(&(mask | bit)) {
                acc += cj * 2u32;
            }
        }
        debug_assert!(mask_is_feasible(mask | new_bit));
        next.insert(mask | new_bit, acc);
    }
    next
}

/// Tables for every order `3 ..= n_max`, in order.
pub fn dp_tables(n_max: u32) -> Result<Vec<CountTable>> {
    check_scale(n_max)?;
    let mut masks = base_table();
    let mut out = Vec::with_capacity((n_max - 2) as usize);
    out.push(to_count_table(3, &masks));
    for n in 3..n_max {
        masks = dp_step(n, &masks);
        out.push(to_count_table(n + 1, &masks));
    }
    Ok(out)
}

/// The single table at order `n`.
pub fn dp_table(n: u32) -> Result<CountTable> {
    Ok(dp_tables(n)?.pop().expect("at least the base table"))
}

fn to_count_table(n: u32, masks: &HashMap<u64, BigUint>) -> CountTable {
    CountTable::from_counts(
        n,
        masks
            .iter()
            .map(|(&mask, count)| (mask_elements(mask), count.clone())),
    )
}

/// `cp_n(S) = 2^{n-m} cp_m(S)` with `m = max S`: past its maximum element,
/// every order increment exactly doubles the count. The base value is read
/// off a DP table at order `m` (order 3 for the empty set).
pub fn scale_by_doubling(s: &PeakSet, n_target: u32) -> Result<BigUint> {
    if n_target < 3 {
        return Err(Error::Domain(format!(
            "counting requires order >= 3, got {n_target}"
        )));
    }
    let base_order = s.max().unwrap_or(3).max(3);
    if n_target < base_order {
        return Err(Error::Domain(format!(
            "target order {n_target} is below max element {base_order}"
        )));
    }
    let base = dp_table(base_order)?.get(s.elements());
    Ok(base * pow2(n_target - base_order))
}

/// The two-term tail-run recurrence: with `S ⊆ [3, n-k-1]`,
///
/// `cp_n(S ∪ [n-k+1, n]) = 2(k+1)·cp_{n-1}(S ∪ [n-k, n-1])
///                        + k(k+1)·cp_{n-2}(S ∪ [n-k, n-2])`.
///
/// The ambient order is `s.n()`; `k` is the tail-run length. Evaluation
/// reads both right-hand counts off DP tables. Only the domain `n >= k + 4`
/// is accepted: below it the recurrence is not validated, and shrinking the
/// run can reach orders under 3.
pub fn tail_run_recurrence(k: u32, s: &PeakSet) -> Result<BigUint> {
    let n = s.n();
    if (n as u64) < k as u64 + 4 {
        return Err(Error::Domain(format!(
            "tail recurrence needs n >= k + 4, got n = {n}, k = {k}"
        )));
    }
    if let Some(mx) = s.max() {
        if mx as u64 + k as u64 + 1 > n as u64 {
            return Err(Error::Domain(format!(
                "S must lie in [3, n-k-1] = [3, {}], got element {mx}",
                n - k - 1
            )));
        }
    }
    if s.elements().first().is_some_and(|&v| v < 3) {
        return Err(Error::Domain("S must lie in [3, n-k-1]".into()));
    }
    let tables = dp_tables(n - 1)?;
    let table_at = |order: u32| &tables[(order - 3) as usize];

    let mut shorter: Vec<u32> = s.elements().to_vec();
    shorter.extend(n - k..n); // [n-k, n-1]
    let mut acc = table_at(n - 1).get(&shorter) * (2 * (k + 1)) as u64;

    if k >= 1 {
        let mut shorter2: Vec<u32> = s.elements().to_vec();
        shorter2.extend(n - k..n - 1); // [n-k, n-2]
        acc += table_at(n - 2).get(&shorter2) * (k * (k + 1)) as u64;
    }
    Ok(acc)
}
