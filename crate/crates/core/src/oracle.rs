//! Ground truth by exhaustive search: walk `S_n` in lexicographic order and
//! classify every permutation by its circular peak set.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::perm::mask_elements;
use crate::table::CountTable;
use crate::{oracle_limit, Error, PeakSet, Permutation, Result};

/// Default order cap: `9! = 362880` permutations, well under a second.
pub const DEFAULT_ORACLE_LIMIT: u32 = 9;

/// Hard cap. A full pass over `S_12` is feasible but takes minutes; anything
/// beyond is out of reach for exhaustive search.
pub const ORACLE_HARD_CAP: u32 = 12;

fn check_scale(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "enumeration requires n >= 3, got {n}"
        )));
    }
    let limit = oracle_limit();
    if n > limit {
        return Err(Error::ScaleLimit(format!(
            "oracle scale exceeded: n = {n} > limit {limit}"
        )));
    }
    Ok(())
}

/// Advances `values` to its lexicographic successor in place; returns false
/// after the final (descending) permutation.
pub(crate) fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Circular peak set of a one-line word as a bitmask (bit `v` = value `v`).
fn peaks_mask(values: &[u32]) -> u64 {
    let mut mask = 0u64;
    for i in 1..values.len().saturating_sub(1) {
        if values[i - 1] < values[i] && values[i] > values[i + 1] {
            mask |= 1u64 << values[i];
        }
    }
    mask
}

/// `cp_n(S)` by exhaustive enumeration of `S_n`.
pub fn oracle_count(s: &PeakSet) -> Result<BigUint> {
    check_scale(s.n())?;
    let target = s.mask();
    let mut values: Vec<u32> = (1..=s.n()).collect();
    let mut count = 0u64;
    loop {
        if peaks_mask(&values) == target {
            count += 1;
        }
        if !next_permutation(&mut values) {
            break;
        }
    }
    Ok(BigUint::from(count))
}

/// All permutations with circular peak set `S`, in lexicographic order of
/// one-line notation.
pub fn enumerate_class(s: &PeakSet) -> Result<Vec<Permutation>> {
    check_scale(s.n())?;
    let target = s.mask();
    let mut values: Vec<u32> = (1..=s.n()).collect();
    let mut out = Vec::new();
    loop {
        if peaks_mask(&values) == target {
            out.push(Permutation::from_values_unchecked(values.clone()));
        }
        if !next_permutation(&mut values) {
            break;
        }
    }
    Ok(out)
}

/// One pass over `S_n` producing every class count.
pub fn oracle_table(n: u32) -> Result<CountTable> {
    oracle_table_threaded(n, 1)
}

/// Table construction with the permutation stream partitioned across
/// workers. Partial count maps merge by addition, so any thread count
/// yields the same table as a single-threaded pass.
pub fn oracle_table_threaded(n: u32, threads: usize) -> Result<CountTable> {
    check_scale(n)?;
    let total = factorial_u64(n);
    let threads = threads.clamp(1, 64).min(total as usize);

    let merged: HashMap<u64, u64> = if threads == 1 {
        count_range(n, 0, total)
    } else {
        let chunk = total.div_ceil(threads as u64);
        let partials = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let start = chunk * t as u64;
                    let len = chunk.min(total - start);
                    scope.spawn(move || count_range(n, start, len))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("oracle worker"))
                .collect::<Vec<_>>()
        });
        let mut merged = HashMap::new();
        for partial in partials {
            for (mask, c) in partial {
                *merged.entry(mask).or_insert(0) += c;
            }
        }
        merged
    };

    Ok(CountTable::from_counts(
        n,
        merged
            .into_iter()
            .map(|(mask, c)| (mask_elements(mask), BigUint::from(c))),
    ))
}

fn count_range(n: u32, start_rank: u64, len: u64) -> HashMap<u64, u64> {
    let mut counts = HashMap::new();
    if len == 0 {
        return counts;
    }
    let mut values = unrank(n, start_rank);
    for _ in 0..len {
        *counts.entry(peaks_mask(&values)).or_insert(0) += 1;
        if !next_permutation(&mut values) {
            break;
        }
    }
    counts
}

fn factorial_u64(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Permutation at the given lexicographic rank (factorial number system).
fn unrank(n: u32, mut rank: u64) -> Vec<u32> {
    let mut available: Vec<u32> = (1..=n).collect();
    let mut out = Vec::with_capacity(n as usize);
    for pos in (0..n as u64).rev() {
        let f = factorial_u64(pos as u32);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(available.remove(idx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn set(n: u32, elements: &[u32]) -> PeakSet {
        PeakSet::new(n, elements.to_vec()).unwrap()
    }

    #[test]
    fn counts_match_known_values() {
        assert_eq!(
            oracle_count(&set(5, &[4, 5])).unwrap(),
            BigUint::from(12u32)
        );
        assert_eq!(oracle_count(&set(4, &[3, 4])).unwrap(), BigUint::zero());
        assert_eq!(
            oracle_count(&set(8, &[6, 7, 8])).unwrap(),
            BigUint::from(2880u32)
        );
    }

    #[test]
    fn class_listing_for_example_1_1() {
        let listed = enumerate_class(&set(5, &[4, 5])).unwrap();
        let expected = [
            "14253", "14352", "24153", "34152", "24351", "34251", "15243", "15342", "25143",
            "35142", "25341", "35241",
        ];
        let mut expected: Vec<Vec<u32>> = expected
            .iter()
            .map(|w| w.chars().map(|c| c.to_digit(10).unwrap()).collect())
            .collect();
        expected.sort();
        let got: Vec<Vec<u32>> = listed.iter().map(|p| p.values().to_vec()).collect();
        assert_eq!(got, expected, "lexicographic listing must match as a set");
    }

    #[test]
    fn class_listing_order_3() {
        let empty: Vec<String> = enumerate_class(&set(3, &[]))
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(empty, vec!["1 2 3", "2 1 3", "3 1 2", "3 2 1"]);
        let three: Vec<String> = enumerate_class(&set(3, &[3]))
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(three, vec!["1 3 2", "2 3 1"]);
    }

    #[test]
    fn table_base_case() {
        let t = oracle_table(3).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&[]), BigUint::from(4u32));
        assert_eq!(t.get(&[3]), BigUint::from(2u32));
    }

    #[test]
    fn table_n5_shape() {
        let t = oracle_table(5).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.total(), BigUint::from(120u32));
    }

    #[test]
    fn table_n6_spot_value() {
        assert_eq!(oracle_table(6).unwrap().get(&[4, 6]), BigUint::from(72u32));
    }

    #[test]
    fn totals_are_factorials() {
        let mut fact = BigUint::from(2u32);
        for n in 3..=7u32 {
            fact *= n;
            assert_eq!(oracle_table(n).unwrap().total(), fact);
        }
    }

    #[test]
    fn scale_limit_is_enforced() {
        let err = oracle_count(&set(13, &[])).unwrap_err();
        assert!(matches!(err, Error::ScaleLimit(_)));
        assert!(matches!(oracle_table(2), Err(Error::Domain(_))));
    }

    #[test]
    fn threaded_table_matches_single() {
        let single = oracle_table_threaded(7, 1).unwrap();
        for threads in [2, 3, 8] {
            assert_eq!(oracle_table_threaded(7, threads).unwrap(), single);
        }
    }

    #[test]
    fn unrank_agrees_with_iteration() {
        let mut values: Vec<u32> = (1..=5).collect();
        let mut rank = 0u64;
        loop {
            assert_eq!(unrank(5, rank), values);
            rank += 1;
            if !next_permutation(&mut values) {
                break;
            }
        }
        assert_eq!(rank, 120);
    }

    #[test]
    fn class_members_have_the_right_peak_set() {
        let s = set(6, &[3, 6]);
        let members = enumerate_class(&s).unwrap();
        assert_eq!(members.len(), 24);
        for p in &members {
            assert_eq!(p.circular_peak_set().elements(), s.elements());
        }
    }
}
