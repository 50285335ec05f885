//! Weighted lattice paths and the general counting formula.
//!
//! A circular-peak path runs from `(r, 0)` to `(n, k)` using horizon steps
//! `H = (1,0)` and rise steps `R = (2,1)`. Under the shift parameter `i`,
//! an `H` at height `y` weighs `2i + 2(y+1)` and an `R` leaving height `y`
//! weighs `(y+i+1)(y+i+2)`; `w(i,r,n,k)` totals the path weights.
//!
//! Stripping the tail run of a set expands `cp_n(S ∪ [n-k+1, n])` into a
//! `w`-weighted combination of counts with shorter run structure, and
//! iterating that over all runs gives a closed evaluation of `cp_n(S)` for
//! any feasible `S` — the scalable single-entry route, no tables needed.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::closed_forms::{cp_empty, cp_tail_run, pow2};
use crate::{Error, PeakSet, Result, Run};

/// One step of a circular-peak path.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Step {
    /// Horizon step `(1, 0)`.
    H,
    /// Rise step `(2, 1)`.
    R,
}

/// A path from `(start, 0)` encoded as its step word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePath {
    start: u32,
    word: Vec<Step>,
}

impl LatticePath {
    pub fn new(start: u32, word: Vec<Step>) -> Self {
        Self { start, word }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start, 0)
    }

    pub fn word(&self) -> &[Step] {
        &self.word
    }

    pub fn end(&self) -> (u32, u32) {
        let rises = self.word.iter().filter(|s| matches!(s, Step::R)).count() as u32;
        let horizons = self.word.len() as u32 - rises;
        (self.start + horizons + 2 * rises, rises)
    }

    pub fn word_string(&self) -> String {
        self.word
            .iter()
            .map(|s| match s {
                Step::H => 'H',
                Step::R => 'R',
            })
            .collect()
    }
}

/// All paths from `(r, 0)` to `(n, k)`, in lexicographic word order with
/// `H < R`. Empty when `n - r - 2k < 0`; the single empty path when the
/// word length is zero.
pub fn enumerate_paths(r: u32, n: u32, k: u32) -> Vec<LatticePath> {
    let Some(horizons) = (n as i64 - r as i64 - 2 * k as i64).try_into().ok() else {
        return Vec::new();
    };
    let horizons: u32 = horizons;
    let mut out = Vec::new();
    let mut word = Vec::with_capacity((horizons + k) as usize);
    fill_words(horizons, k, &mut word, r, &mut out);
    out
}

fn fill_words(
    h_left: u32,
    r_left: u32,
    word: &mut Vec<Step>,
    start: u32,
    out: &mut Vec<LatticePath>,
) {
    if h_left == 0 && r_left == 0 {
        out.push(LatticePath::new(start, word.clone()));
        return;
    }
    if h_left > 0 {
        word.push(Step::H);
        fill_words(h_left - 1, r_left, word, start, out);
        word.pop();
    }
    if r_left > 0 {
        word.push(Step::R);
        fill_words(h_left, r_left - 1, word, start, out);
        word.pop();
    }
}

/// Weight of a single step under shift `i` from the given height.
pub fn step_weight(shift: u32, height: u32, step: Step) -> u128 {
    let i = shift as u128;
    let y = height as u128;
    match step {
        Step::H => 2 * i + 2 * (y + 1),
        Step::R => (y + i + 1) * (y + i + 2),
    }
}

/// Product of the per-step weights under shift `i`; 1 for the empty path.
pub fn path_weight(shift: u32, path: &LatticePath) -> BigUint {
    let mut height = 0u32;
    let mut product = BigUint::one();
    for &step in path.word() {
        product *= step_weight(shift, height, step);
        if matches!(step, Step::R) {
            height += 1;
        }
    }
    product
}

/// `w(i, r, n, k)` summed over the explicit path list.
pub fn w_by_enumeration(shift: u32, r: u32, n: u32, k: u32) -> BigUint {
    enumerate_paths(r, n, k)
        .iter()
        .map(|p| path_weight(shift, p))
        .sum()
}

/// `w(i, r, n, k)` in closed form:
/// `2^{n-r-2k} · Π_{m=0}^{k-1} (m+i+1)(m+i+2) · h_d(i+1, …, i+k+1)`
/// where `h_d` is the complete homogeneous symmetric function of degree
/// `d = n - r - 2k` in the `k + 1` shifted values.
///
/// The symmetric function is evaluated by the variable-by-degree
/// recurrence, not by enumerating exponent tuples.
pub fn w_closed(shift: u32, r: u32, n: u32, k: u32) -> BigUint {
    if (n as i64) - (r as i64) - 2 * (k as i64) < 0 {
        return BigUint::zero();
    }
    let degree = n - r - 2 * k;
    let mut product = pow2(degree);
    for m in 0..k as u64 {
        let i = shift as u64;
        product *= m + i + 1;
        product *= m + i + 2;
    }
    product * h_complete(degree, shift as u64 + 1, shift as u64 + k as u64 + 1)
}

/// CSV export of closed-form weights, keyed `i,r,n,k`, over the full grid
/// `0 <= i <= max_shift`, `0 <= k <= max_k`, `r <= n <= r + 2k + max_extra`.
pub fn weight_grid_csv(max_shift: u32, r: u32, max_k: u32, max_extra: u32) -> String {
    let mut out = String::from("i,r,n,k,w\n");
    for shift in 0..=max_shift {
        for k in 0..=max_k {
            for extra in 0..=max_extra {
                let Some(n) = (r as u64 + 2 * k as u64 + extra as u64).try_into().ok() else {
                    break;
                };
                let n: u32 = n;
                out.push_str(&format!(
                    "{shift},{r},{n},{k},{}\n",
                    w_closed(shift, r, n, k)
                ));
            }
        }
    }
    out
}

/// Complete homogeneous symmetric function of the given degree in the
/// integer values `lo ..= hi`, via `h[e] += v·h[e-1]` per variable.
fn h_complete(degree: u32, lo: u64, hi: u64) -> BigUint {
    let mut table = vec![BigUint::zero(); degree as usize + 1];
    table[0] = BigUint::one();
    for v in lo..=hi {
        for e in 1..=degree as usize {
            let prev = table[e - 1].clone() * v;
            table[e] += prev;
        }
    }
    table[degree as usize].clone()
}

/// Strips the tail run: with `r = max S` and `S ⊆ [3, n-k-1]` nonempty,
///
/// `cp_n(S ∪ [n-k+1, n]) = Σ_{i=0}^{k} w(i, r, n-i, k-i)·cp_{r+i}(S ∪ [r+1, r+i])`.
///
/// The ambient order is `s.n()`; `k` is the tail-run length. Each inner
/// count has the last run of `S` extended by `i` and its ambient order at
/// its maximum, so it recurses over strictly fewer runs.
pub fn cp_strip_last_run(k: u32, s: &PeakSet) -> Result<BigUint> {
    let n = s.n();
    let Some(r) = s.max() else {
        return Err(Error::Domain(
            "tail-run stripping needs a nonempty S; use the tail-run closed form".into(),
        ));
    };
    if s.elements().first().is_some_and(|&v| v < 3) || r as u64 + k as u64 + 1 > n as u64 {
        return Err(Error::Domain(format!(
            "S must lie in [3, n-k-1] = [3, {}]",
            n as i64 - k as i64 - 1
        )));
    }
    let mut acc = BigUint::zero();
    for i in 0..=k {
        let weight = w_closed(i, r, n - i, k - i);
        if weight.is_zero() {
            continue;
        }
        let mut extended = s.elements().to_vec();
        extended.extend(r + 1..=r + i);
        acc += weight * cp_at_max(&extended);
    }
    Ok(acc)
}

/// `cp_m(T)` for a set whose ambient order equals its maximum element.
/// Single runs go to the tail-run closed form; longer run structures strip
/// their last run per the expansion above. Infeasible sets come out zero.
fn cp_at_max(elements: &[u32]) -> BigUint {
    debug_assert!(!elements.is_empty());
    let n = *elements.last().unwrap();
    let runs = run_list(elements);
    let last = *runs.last().unwrap();
    debug_assert_eq!(last.max, n);
    if runs.len() == 1 {
        return cp_tail_run(n, last.len);
    }
    let rest = &elements[..elements.len() - last.len as usize];
    let r = *rest.last().unwrap();
    let mut acc = BigUint::zero();
    for i in 0..=last.len {
        let weight = w_closed(i, r, n - i, last.len - i);
        if weight.is_zero() {
            continue;
        }
        let mut extended = rest.to_vec();
        extended.extend(r + 1..=r + i);
        acc += weight * cp_at_max(&extended);
    }
    acc
}

fn run_list(elements: &[u32]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for &v in elements {
        match runs.last_mut() {
            Some(run) if run.max + 1 == v => {
                run.max = v;
                run.len += 1;
            }
            _ => runs.push(Run { max: v, len: 1 }),
        }
    }
    runs
}

/// The general multi-run formula: for `S` of type `(r_1^{k_1}, …, r_m^{k_m})`
/// with `m >= 2`,
///
/// `cp_n(S) = 2^{n-r_m} Σ_{i_1=0}^{k_m} Σ_{i_2=0}^{k_{m-1}+i_1} ⋯
///     Π_{j=1}^{m-1} w(i_j, r_{m-j}, r_{m-j+1}+i_{j-1}-i_j, k_{m-j+1}+i_{j-1}-i_j)
///     · cp_{r_1+i_{m-1}}([r_1-k_1+1, r_1+i_{m-1}])`
///
/// with `i_0 = 0`. The nested bounds are implemented exactly as stated;
/// infeasible base terms contribute zero on their own.
pub fn cp_multi_run(s: &PeakSet) -> Result<BigUint> {
    let n = s.n();
    let runs = s.run_decomposition();
    let m = runs.num_runs();
    if m < 2 {
        return Err(Error::Domain(format!(
            "the nested-sum formula needs at least two runs, got {m}"
        )));
    }
    if s.elements()[0] < 3 {
        return Ok(BigUint::zero());
    }
    let runs = runs.runs();
    let r_m = runs[m - 1].max;
    let total = nested_sum(runs, 1, 0, BigUint::one());
    Ok(total * pow2(n - r_m))
}

/// Recursive evaluation of the nested sums: `level` is `j`, `i_prev` is
/// `i_{j-1}`, `weight` the product of the factors chosen so far.
fn nested_sum(runs: &[Run], level: usize, i_prev: u32, weight: BigUint) -> BigUint {
    let m = runs.len();
    if level == m {
        let first = runs[0];
        return weight * cp_tail_run(first.max + i_prev, first.len + i_prev);
    }
    // the j-th factor pairs run m-j (as the new base) with run m-j+1
    let outer = runs[m - level];
    let inner_r = runs[m - level - 1].max;
    let mut acc = BigUint::zero();
    for i in 0..=outer.len + i_prev {
        let n_arg = outer.max as i64 + i_prev as i64 - i as i64;
        let k_arg = outer.len as i64 + i_prev as i64 - i as i64;
        debug_assert!(k_arg >= 0 && n_arg > inner_r as i64);
        let w = w_closed(i, inner_r, n_arg as u32, k_arg as u32);
        if w.is_zero() {
            continue;
        }
        acc += nested_sum(runs, level + 1, i, weight.clone() * w);
    }
    acc
}

/// `cp_n(S)` for arbitrary `S` — the scalable dispatcher.
///
/// Infeasible sets count zero; the empty set is `2^{n-1}`; a single run
/// `[r-k+1, r]` is `2^{n-r}·cp_r([r-k+1, r])` by the doubling law; multiple
/// runs go through the nested-sum formula. No table is ever built, so this
/// route works far beyond the DP and oracle limits.
pub fn cp_count(s: &PeakSet) -> Result<BigUint> {
    let n = s.n();
    if n < 3 {
        return Err(Error::Domain(format!("counting requires n >= 3, got {n}")));
    }
    if !s.is_feasible() {
        return Ok(BigUint::zero());
    }
    if s.is_empty() {
        return cp_empty(n);
    }
    let runs = s.run_decomposition();
    if runs.num_runs() == 1 {
        let run = runs.runs()[0];
        return Ok(pow2(n - run.max) * cp_tail_run(run.max, run.len));
    }
    cp_multi_run(s)
}
