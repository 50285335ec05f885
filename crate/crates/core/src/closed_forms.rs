//! Explicit formulas: `cp_n(S)` for `|S| <= 2`, and the tail-run counts
//! `cp_n([n-k+1, n])` through the exact-rational coefficient triangles
//! `b_{k,i}` and `a_{k,i}`.
//!
//! Both triangles contain genuine halves (`b_{1,1} = a_{0,0} = 1/2`), so all
//! triangle arithmetic is exact rational; a count is only converted to an
//! integer after asserting it is one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::{Error, Result};

pub(crate) fn pow2(e: u32) -> BigUint {
    BigUint::one() << (e as usize)
}

fn pow3(e: u32) -> BigUint {
    BigUint::from(3u32).pow(e)
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `cp_n(∅) = 2^{n-1}`: the permutations with no interior peak are exactly
/// the valley-shaped words, one per placement of the letters around 1.
pub fn cp_empty(n: u32) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::Domain(format!("cp_empty requires n >= 3, got {n}")));
    }
    Ok(pow2(n - 1))
}

/// `cp_n({i}) = 2^{n-2} (2^{i-2} - 1)` for `i ∈ [3, n]`; zero for the
/// infeasible singletons `{1}` and `{2}`.
pub fn cp_single(n: u32, i: u32) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::Domain(format!("cp_single requires n >= 3, got {n}")));
    }
    if i > n {
        return Err(Error::Domain(format!("peak value {i} exceeds order {n}")));
    }
    if i < 3 {
        return Ok(BigUint::zero());
    }
    Ok(pow2(n - 2) * (pow2(i - 2) - BigUint::one()))
}

/// `cp_n({i, j}) = 2^{n-3}(2^{i-2}-1)(2^{j-i-1}-1)
///              + 2^{n+j-i-5}·3(3^{i-2} - 2^{i-1} + 1)` for `3 <= i < j <= n`.
///
/// Adjacent pairs (`j = i + 1`) kill the first term; `i = 3` kills the
/// second, which covers the `{3, 4}` boundary where the whole count is zero.
/// Pairs with `i < 3` are infeasible and count zero.
pub fn cp_pair(n: u32, i: u32, j: u32) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::Domain(format!("cp_pair requires n >= 3, got {n}")));
    }
    if i >= j {
        return Err(Error::Domain(format!(
            "cp_pair requires i < j, got i={i}, j={j}"
        )));
    }
    if j > n {
        return Err(Error::Domain(format!("peak value {j} exceeds order {n}")));
    }
    if i < 3 {
        return Ok(BigUint::zero());
    }
    let first = pow2(n - 3) * (pow2(i - 2) - BigUint::one()) * (pow2(j - i - 1) - BigUint::one());
    // 3^{i-2} + 1 >= 2^{i-1} for i >= 3, so the factor is a nonnegative integer.
    let second_factor = BigUint::from(3u32) * (pow3(i - 2) + BigUint::one() - pow2(i - 1));
    if second_factor.is_zero() {
        return Ok(first);
    }
    let exp = n as i64 + j as i64 - i as i64 - 5;
    debug_assert!(
        exp >= 0,
        "exponent n+j-i-5 is nonnegative once i >= 3 and j <= n"
    );
    Ok(first + pow2(exp as u32) * second_factor)
}

/// Which of the two coefficient triangles a [`CoeffTriangle`] holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriangleKind {
    /// `b_{k,i}` for `k >= 1`, `i ∈ [1, k]`.
    B,
    /// `a_{k,i}` for `k >= 0`, `i ∈ [0, k]`.
    A,
}

/// Rows of exact-rational coefficients for the tail-run formulas.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffTriangle {
    kind: TriangleKind,
    rows: Vec<Vec<BigRational>>,
}

impl CoeffTriangle {
    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    fn first_k(&self) -> u32 {
        match self.kind {
            TriangleKind::B => 1,
            TriangleKind::A => 0,
        }
    }

    pub fn k_max(&self) -> u32 {
        self.first_k() + self.rows.len() as u32 - 1
    }

    /// The row for a given `k`, indexed from `i = 1` (B) or `i = 0` (A).
    pub fn row(&self, k: u32) -> &[BigRational] {
        assert!(
            k >= self.first_k() && k <= self.k_max(),
            "row k={k} not built"
        );
        &self.rows[(k - self.first_k()) as usize]
    }

    pub fn entry(&self, k: u32, i: u32) -> &BigRational {
        let row = self.row(k);
        let offset = match self.kind {
            TriangleKind::B => {
                assert!(
                    i >= 1 && i <= k,
                    "b_{{k,i}} needs i in [1,k], got i={i}, k={k}"
                );
                (i - 1) as usize
            }
            TriangleKind::A => {
                assert!(i <= k, "a_{{k,i}} needs i in [0,k], got i={i}, k={k}");
                i as usize
            }
        };
        &row[offset]
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &[BigRational])> {
        let first = self.first_k();
        self.rows
            .iter()
            .enumerate()
            .map(move |(idx, row)| (first + idx as u32, row.as_slice()))
    }

    /// Column-aligned rows, matching the printed triangle layout.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = Vec::new();
        for (_, row) in self.rows() {
            for (col, value) in row.iter().enumerate() {
                let len = value.to_string().len();
                if col == widths.len() {
                    widths.push(len);
                } else {
                    widths[col] = widths[col].max(len);
                }
            }
        }
        let mut out = String::new();
        for (k, row) in self.rows() {
            out.push_str(&format!("k={k}:"));
            for (col, value) in row.iter().enumerate() {
                out.push_str(&format!(
                    " {:>width$}",
                    value.to_string(),
                    width = widths[col]
                ));
            }
            out.push('\n');
        }
        out
    }

    /// CSV with columns `k,i,value`, rationals rendered as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,i,value\n");
        let i_base = match self.kind {
            TriangleKind::B => 1,
            TriangleKind::A => 0,
        };
        for (k, row) in self.rows() {
            for (off, value) in row.iter().enumerate() {
                out.push_str(&format!("{k},{},{}\n", i_base + off as u32, value));
            }
        }
        out
    }

    /// JSON map keyed `"k,i"`, rationals as `"p/q"` strings.
    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        let i_base = match self.kind {
            TriangleKind::B => 1,
            TriangleKind::A => 0,
        };
        for (k, row) in self.rows() {
            for (off, value) in row.iter().enumerate() {
                map.insert(
                    format!("{k},{}", i_base + off as u32),
                    serde_json::Value::String(value.to_string()),
                );
            }
        }
        let kind = match self.kind {
            TriangleKind::B => "b",
            TriangleKind::A => "a",
        };
        let obj = serde_json::json!({ "kind": kind, "entries": map });
        serde_json::to_string_pretty(&obj).expect("serializing triangle")
    }
}

/// Builds rows `b_{1,*} .. b_{k_max,*}` from `b_{1,1} = 1/2`:
///
/// `b_{k+1,1} = k(k+1)^2 Σ_j (-1)^{j+1} b_{k,j}` and
/// `b_{k+1,i} = k(k+1)·(k+2-i)/i · b_{k,i-1}` for `2 <= i <= k+1`.
pub fn b_triangle(k_max: u32) -> CoeffTriangle {
    assert!(k_max >= 1, "b triangle starts at k = 1");
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::new(1.into(), 2.into())]];
    for k in 1..k_max as u64 {
        let prev = rows.last().unwrap();
        let alternating: BigRational = prev
            .iter()
            .enumerate()
            .map(|(idx, v)| if idx % 2 == 0 { v.clone() } else { -v.clone() })
            .sum();
        let mut row = Vec::with_capacity(k as usize + 1);
        row.push(big(k) * big(k + 1) * big(k + 1) * alternating);
        for i in 2..=k + 1 {
            let factor = big(k)
                * big(k + 1)
                * BigRational::new((k as i64 + 2 - i as i64).into(), (i as i64).into());
            row.push(factor * prev[(i - 2) as usize].clone());
        }
        rows.push(row);
    }
    CoeffTriangle {
        kind: TriangleKind::B,
        rows,
    }
}

/// Builds rows `a_{0,*} .. a_{k_max,*}` from `a_{0,0} = 1/2`:
///
/// `a_{k+1,i} = (k+1)(k+2)·(k+2-i)/i · a_{k,i-1}` for `1 <= i <= k+1`, then
/// `a_{k+1,0} = Σ_j (-1)^{j+1} a_{k+1,j}` over the row just written.
pub fn a_triangle(k_max: u32) -> CoeffTriangle {
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::new(1.into(), 2.into())]];
    for k in 0..k_max as u64 {
        let prev = rows.last().unwrap();
        let mut tail = Vec::with_capacity(k as usize + 1);
        for i in 1..=k + 1 {
            let factor = big(k + 1)
                * big(k + 2)
                * BigRational::new((k as i64 + 2 - i as i64).into(), (i as i64).into());
            tail.push(factor * prev[(i - 1) as usize].clone());
        }
        let head: BigRational = tail
            .iter()
            .enumerate()
            .map(|(idx, v)| if idx % 2 == 0 { v.clone() } else { -v.clone() })
            .sum();
        let mut row = vec![head];
        row.extend(tail);
        rows.push(row);
    }
    CoeffTriangle {
        kind: TriangleKind::A,
        rows,
    }
}

fn rational_to_count(value: BigRational, context: &str) -> BigUint {
    assert!(value.is_integer(), "{context}: non-integer count {value}");
    assert!(!value.is_negative(), "{context}: negative count {value}");
    value
        .to_integer()
        .to_biguint()
        .expect("nonnegative integer")
}

/// `cp_n([n-k+1, n]) = Σ_{i=0}^{k} (-1)^i a_{k,i} (2k+2-2i)^{n-2k}`.
///
/// `k = 0` is the empty tail and yields `2^{n-1}`. For `k >= 1` the tail is
/// feasible only when `n >= 2k + 1`; outside that the count is zero (at
/// `n = 2k` the sum itself vanishes, since `f_k(-1) = 0`).
pub fn cp_tail_run(n: u32, k: u32) -> BigUint {
    debug_assert!(n >= 3);
    if k == 0 {
        return pow2(n - 1);
    }
    // infeasible when n < 2k+1; the run start n-k+1 < 3 is then impossible anyway
    if n < 2 * k + 1 || n < k + 2 {
        return BigUint::zero();
    }
    let tri = a_triangle(k);
    let exp = (n - 2 * k) as i32;
    let mut acc = BigRational::zero();
    for i in 0..=k {
        let base = big((2 * k + 2 - 2 * i) as u64);
        let term = tri.entry(k, i) * base.pow(exp);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    rational_to_count(acc, "cp_tail_run")
}

/// The `b`-form of the same count:
/// `cp_n([n-k+1, n]) = k(k+1) Σ_{i=1}^{k} (-1)^{i+1} b_{k,i}
///                     [(2k+2)^{n-2k} - (2k+2-2i)^{n-2k}]`.
///
/// Kept as an independent evaluation route; it must agree with
/// [`cp_tail_run`] everywhere.
pub fn cp_tail_run_b(n: u32, k: u32) -> BigUint {
    debug_assert!(n >= 3);
    assert!(k >= 1, "the b-form triangle starts at k = 1");
    if n < 2 * k {
        return BigUint::zero();
    }
    let tri = b_triangle(k);
    let exp = (n - 2 * k) as i32;
    let lead = big((2 * k + 2) as u64).pow(exp);
    let mut acc = BigRational::zero();
    for i in 1..=k {
        let bracket = lead.clone() - big((2 * k + 2 - 2 * i) as u64).pow(exp);
        let term = tri.entry(k, i) * bracket;
        if i % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc *= big(k as u64) * big(k as u64 + 1);
    rational_to_count(acc, "cp_tail_run_b")
}

/// A polynomial with exact rational coefficients, low degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RationalPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(e, c)| c * big(e as u64))
            .collect();
        RationalPolynomial { coeffs }
    }

    pub fn scale(&self, factor: &BigRational) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

/// `f_k(x) = Σ_{i=0}^{k} a_{k,i} x^i`. Satisfies `f_{k+1}(-1) = 0` and the
/// differential identity
/// `f'_{k+1}(x) = (k+1)^2 (k+2) f_k(x) - (k+1)(k+2) x f'_k(x)`.
pub fn f_polynomial(k: u32) -> RationalPolynomial {
    RationalPolynomial::new(a_triangle(k).row(k).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_table;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn int(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn empty_set_counts() {
        assert_eq!(cp_empty(3).unwrap(), int(4));
        assert_eq!(cp_empty(4).unwrap(), int(8));
        assert_eq!(cp_empty(8).unwrap(), int(128));
        assert!(cp_empty(2).is_err());
    }

    #[test]
    fn singleton_counts() {
        assert_eq!(cp_single(4, 4).unwrap(), int(12));
        assert_eq!(cp_single(3, 3).unwrap(), int(2));
        assert_eq!(cp_single(8, 5).unwrap(), int(448));
        assert_eq!(cp_single(6, 2).unwrap(), int(0));
        assert!(cp_single(5, 6).is_err());
    }

    #[test]
    fn pair_counts() {
        assert_eq!(cp_pair(6, 4, 6).unwrap(), int(72));
        assert_eq!(cp_pair(5, 3, 5).unwrap(), int(4));
        assert_eq!(cp_pair(5, 4, 5).unwrap(), int(12));
        assert_eq!(
            cp_pair(4, 3, 4).unwrap(),
            int(0),
            "the {{3,4}} boundary is infeasible"
        );
        assert_eq!(cp_pair(9, 1, 5).unwrap(), int(0));
        assert!(cp_pair(6, 4, 4).is_err());
        assert!(cp_pair(6, 6, 4).is_err());
        assert!(cp_pair(6, 4, 7).is_err());
    }

    #[test]
    fn b_rows_match_published_values() {
        let tri = b_triangle(4);
        assert_eq!(tri.row(1), &[rat(1, 2)]);
        assert_eq!(tri.row(2), &[rat(2, 1), rat(1, 2)]);
        assert_eq!(tri.row(3), &[rat(27, 1), rat(12, 1), rat(1, 1)]);
        assert_eq!(
            tri.row(4),
            &[rat(768, 1), rat(486, 1), rat(96, 1), rat(3, 1)]
        );
    }

    #[test]
    fn a_rows_match_published_values() {
        let tri = a_triangle(3);
        assert_eq!(tri.row(0), &[rat(1, 2)]);
        assert_eq!(tri.row(1), &[rat(1, 1), rat(1, 1)]);
        assert_eq!(tri.row(2), &[rat(9, 1), rat(12, 1), rat(3, 1)]);
        assert_eq!(
            tri.row(3),
            &[rat(192, 1), rat(324, 1), rat(144, 1), rat(12, 1)]
        );
    }

    #[test]
    fn triangle_entries_positive_and_head_is_alternating_sum() {
        let tri = a_triangle(10);
        for (k, row) in tri.rows() {
            for value in row {
                assert!(
                    value.is_positive(),
                    "a_{{{k},*}} has nonpositive entry {value}"
                );
            }
            if k >= 1 {
                let alt: BigRational = row[1..]
                    .iter()
                    .enumerate()
                    .map(|(idx, v)| if idx % 2 == 0 { v.clone() } else { -v.clone() })
                    .sum();
                assert_eq!(row[0], alt);
            }
        }
        for (k, row) in b_triangle(10).rows() {
            for value in row {
                assert!(
                    value.is_positive(),
                    "b_{{{k},*}} has nonpositive entry {value}"
                );
            }
        }
    }

    #[test]
    fn a_is_k_k_plus_1_times_b() {
        let a = a_triangle(10);
        let b = b_triangle(10);
        for k in 1..=10u32 {
            let scale = big(k as u64) * big(k as u64 + 1);
            for i in 1..=k {
                assert_eq!(a.entry(k, i), &(&scale * b.entry(k, i)));
            }
            let alt: BigRational = (1..=k)
                .map(|j| {
                    let v = b.entry(k, j).clone();
                    if j % 2 == 1 {
                        v
                    } else {
                        -v
                    }
                })
                .sum();
            assert_eq!(a.entry(k, 0), &(&scale * &alt));
        }
    }

    #[test]
    fn tail_run_counts() {
        assert_eq!(cp_tail_run(6, 2), int(144));
        assert_eq!(cp_tail_run(7, 3), int(144));
        assert_eq!(cp_tail_run(5, 1), int(56));
        assert_eq!(cp_tail_run(9, 0), int(256));
        assert_eq!(
            cp_tail_run(4, 2),
            int(0),
            "n = 2k sits on the infeasibility boundary"
        );
        assert_eq!(cp_tail_run(3, 2), int(0));
    }

    #[test]
    fn tail_run_b_form() {
        assert_eq!(cp_tail_run_b(4, 1), int(12));
        assert_eq!(cp_tail_run_b(6, 2), int(144));
        assert_eq!(cp_tail_run_b(6, 3), int(0));
    }

    #[test]
    fn tail_run_forms_agree() {
        for k in 1..=6u32 {
            for n in (2 * k + 1).max(3)..=(2 * k + 12) {
                assert_eq!(cp_tail_run(n, k), cp_tail_run_b(n, k), "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn f_polynomials() {
        assert_eq!(f_polynomial(0).coefficients(), &[rat(1, 2)]);
        assert_eq!(f_polynomial(1).coefficients(), &[rat(1, 1), rat(1, 1)]);
        let minus_one = rat(-1, 1);
        assert_eq!(f_polynomial(2).eval(&minus_one), BigRational::zero());
        for k in 1..=11u32 {
            assert_eq!(
                f_polynomial(k).eval(&minus_one),
                BigRational::zero(),
                "f_{k}(-1)"
            );
        }
    }

    #[test]
    fn f_differential_identity() {
        for k in 0..=10u32 {
            let fk = f_polynomial(k);
            let fk1 = f_polynomial(k + 1);
            let kk = big(k as u64 + 1);
            let kk2 = big(k as u64 + 2);
            // (k+1)^2 (k+2) f_k(x) - (k+1)(k+2) x f'_k(x), coefficientwise
            let lhs = fk1.derivative();
            let term1 = fk.scale(&(&kk * &kk * &kk2));
            let shifted: Vec<BigRational> = std::iter::once(BigRational::zero())
                .chain(fk.derivative().coefficients().iter().cloned())
                .collect();
            let term2 = RationalPolynomial::new(shifted).scale(&(&kk * &kk2));
            let mut rhs: Vec<BigRational> = term1.coefficients().to_vec();
            for (idx, c) in term2.coefficients().iter().enumerate() {
                if idx < rhs.len() {
                    rhs[idx] -= c;
                } else {
                    rhs.push(-c.clone());
                }
            }
            while rhs.last().map(|c| c.is_zero()).unwrap_or(false) {
                rhs.pop();
            }
            let mut lhs_c = lhs.coefficients().to_vec();
            while lhs_c.last().map(|c| c.is_zero()).unwrap_or(false) {
                lhs_c.pop();
            }
            assert_eq!(lhs_c, rhs, "differential identity at k={k}");
        }
    }

    #[test]
    fn doubling_law_for_closed_forms() {
        for i in 3..=9u32 {
            for n in i.max(3)..i + 8 {
                assert_eq!(
                    cp_single(n + 1, i).unwrap(),
                    cp_single(n, i).unwrap() * 2u32
                );
            }
        }
        for i in 3..=6u32 {
            for j in (i + 1)..=8 {
                for n in j..j + 6 {
                    assert_eq!(
                        cp_pair(n + 1, i, j).unwrap(),
                        cp_pair(n, i, j).unwrap() * 2u32
                    );
                }
            }
        }
        for n in 3..=12u32 {
            assert_eq!(cp_empty(n + 1).unwrap(), cp_empty(n).unwrap() * 2u32);
        }
    }

    #[test]
    fn closed_forms_agree_with_oracle_small() {
        for n in 3..=7u32 {
            let table = oracle_table(n).unwrap();
            assert_eq!(cp_empty(n).unwrap(), table.get(&[]));
            for i in 3..=n {
                assert_eq!(cp_single(n, i).unwrap(), table.get(&[i]), "n={n}, {{{i}}}");
            }
            for i in 3..n {
                for j in (i + 1)..=n {
                    assert_eq!(
                        cp_pair(n, i, j).unwrap(),
                        table.get(&[i, j]),
                        "n={n}, {{{i},{j}}}"
                    );
                }
            }
            for k in 1..=(n - 1) / 2 {
                let tail: Vec<u32> = (n - k + 1..=n).collect();
                assert_eq!(cp_tail_run(n, k), table.get(&tail), "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn triangle_exports() {
        let tri = b_triangle(2);
        assert_eq!(tri.to_text(), "k=1: 1/2\nk=2:   2 1/2\n");
        assert_eq!(tri.to_csv(), "k,i,value\n1,1,1/2\n2,1,2\n2,2,1/2\n");
        let json: serde_json::Value = serde_json::from_str(&tri.to_json()).unwrap();
        assert_eq!(json["kind"], "b");
        assert_eq!(json["entries"]["2,1"], "2");
    }
}
