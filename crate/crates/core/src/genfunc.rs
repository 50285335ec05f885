//! The formal generating-function route.
//!
//! `g_n = Σ_σ x_{CP(σ)} y^{|CP(σ)|}` over `S_n` is a multilinear polynomial
//! in `x_3..x_n` and `y` whose coefficients are exactly the counts
//! `cp_n(S)`. It satisfies the recursion
//!
//! `g_{n+1} = [2 + (n-1) x_{n+1} y] g_n
//!          + 2 x_{n+1} Σ_i ∂g_n/∂x_i  -  2 x_{n+1} y² ∂g_n/∂y`
//!
//! with `g_3 = 4 + 2 x_3 y`. This is the counting DP in symbolic clothing;
//! coefficient extraction must agree with the DP tables everywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::perm::mask_elements;
use crate::table::{CountTable, SetKey};
use crate::{dp_limit, Error, PeakSet, Result};

/// A monomial key: the x-support as a bitmask plus the y-exponent.
///
/// The y-exponent is stored separately rather than derived from the mask:
/// the derivative pieces of the recursion individually break the pairing
/// `y == |S|` and only their sum restores it, so carrying `y` explicitly
/// lets [`gf_step`] assert the restored invariant instead of trusting it.
type TermKey = (u64, u32);

/// `g_n` with verified invariants: nonnegative coefficients and `y = |S|`
/// on every term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeakPolynomial {
    n: u32,
    terms: BTreeMap<TermKey, BigUint>,
}

/// The initial polynomial `g_3 = 4 + 2 x_3 y`.
pub fn gf_initial() -> PeakPolynomial {
    let mut terms = BTreeMap::new();
    terms.insert((0u64, 0u32), BigUint::from(4u32));
    terms.insert((1u64 << 3, 1u32), BigUint::from(2u32));
    PeakPolynomial { n: 3, terms }
}

fn add_term(acc: &mut BTreeMap<TermKey, BigInt>, key: TermKey, value: BigInt) {
    let slot = acc.entry(key).or_insert_with(BigInt::zero);
    *slot += value;
    if slot.is_zero() {
        acc.remove(&key);
    }
}

/// One application of the recursion, from `g_n` to `g_{n+1}`.
pub fn gf_step(g: &PeakPolynomial) -> PeakPolynomial {
    let n = g.n;
    assert!(
        n + 1 < 64,
        "variable index would overflow the monomial mask"
    );
    let new_bit = 1u64 << (n + 1);
    let mut acc: BTreeMap<TermKey, BigInt> = BTreeMap::new();

    for (&(mask, y), coeff) in &g.terms {
        let c = BigInt::from(coeff.clone());

        // 2·g_n
        add_term(&mut acc, (mask, y), &c * 2);

        // (n-1)·x_{n+1} y·g_n
        add_term(&mut acc, (mask | new_bit, y + 1), &c * (n as i64 - 1));

        // 2·x_{n+1}·Σ_i ∂/∂x_i : each x_i in the support is struck out
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            add_term(&mut acc, ((mask & !bit) | new_bit, y), &c * 2);
        }

        // -2·x_{n+1} y²·∂/∂y : y^s ↦ s·y^{s+1}
        if y > 0 {
            add_term(&mut acc, (mask | new_bit, y + 1), &c * (-2 * y as i64));
        }
    }

    let mut terms = BTreeMap::new();
    for ((mask, y), coeff) in acc {
        assert_eq!(
            y,
            mask.count_ones(),
            "y-exponent must equal the x-support size after the full step"
        );
        let coeff = coeff
            .to_biguint()
            .unwrap_or_else(|| panic!("negative coefficient {coeff} survived the step at n = {n}"));
        terms.insert((mask, y), coeff);
    }
    PeakPolynomial { n: n + 1, terms }
}

/// All polynomials `g_3 ..= g_{n_max}`.
pub fn gf_polynomials(n_max: u32) -> Result<Vec<PeakPolynomial>> {
    if n_max < 3 {
        return Err(Error::Domain(format!("g_n starts at n = 3, got {n_max}")));
    }
    let limit = dp_limit();
    if n_max > limit {
        return Err(Error::ScaleLimit(format!(
            "generating-function scale exceeded: n = {n_max} > limit {limit}"
        )));
    }
    let mut out = vec![gf_initial()];
    while out.last().unwrap().n < n_max {
        let next = gf_step(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

/// `cp_n(S)` as the coefficient of `x_S y^{|S|}` in `g_n`.
pub fn gf_coefficient(s: &PeakSet) -> Result<BigUint> {
    let polys = gf_polynomials(s.n())?;
    Ok(polys.last().unwrap().coefficient(s.elements()))
}

impl PeakPolynomial {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x_S y^{|S|}`; zero when the monomial is absent.
    pub fn coefficient(&self, elements: &[u32]) -> BigUint {
        let mask = elements.iter().fold(0u64, |m, &v| m | (1u64 << v));
        self.terms
            .get(&(mask, elements.len() as u32))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Specializing every `x_i := 1` and `y := 1` counts all of `S_n`.
    pub fn specialized_total(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Specializing every `x_i := 1` leaves the distribution of `|CP(σ)|`:
    /// entry `s` is the number of permutations with exactly `s` peaks.
    pub fn y_profile(&self) -> Vec<BigUint> {
        let degree = self.terms.keys().map(|&(_, y)| y).max().unwrap_or(0);
        let mut profile = vec![BigUint::zero(); degree as usize + 1];
        for (&(_, y), coeff) in &self.terms {
            profile[y as usize] += coeff;
        }
        profile
    }

    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, y)| y).max().unwrap_or(0)
    }

    pub fn to_count_table(&self) -> CountTable {
        CountTable::from_counts(
            self.n,
            self.terms
                .iter()
                .map(|(&(mask, _), coeff)| (mask_elements(mask), coeff.clone())),
        )
    }
}

impl fmt::Display for PeakPolynomial {
    /// Terms sorted by `(|S|, S lexicographic)`, e.g. `4 + 2*x3*y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sorted: Vec<(SetKey, &BigUint)> = self
            .terms
            .iter()
            .map(|(&(mask, _), coeff)| (SetKey::new(mask_elements(mask)), coeff))
            .collect();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut first = true;
        for (key, coeff) in sorted {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}")?;
            for v in key.elements() {
                write!(f, "*x{v}")?;
            }
            match key.elements().len() {
                0 => {}
                1 => write!(f, "*y")?,
                s => write!(f, "*y^{s}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrences::dp_tables;

    fn int(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn set(n: u32, elements: &[u32]) -> PeakSet {
        PeakSet::new(n, elements.to_vec()).unwrap()
    }

    #[test]
    fn initial_polynomial() {
        let g3 = gf_initial();
        assert_eq!(g3.coefficient(&[]), int(4));
        assert_eq!(g3.coefficient(&[3]), int(2));
        assert_eq!(g3.num_terms(), 2);
        // a y-exponent that disagrees with |S| addresses no stored monomial
        assert_eq!(g3.terms.get(&(1 << 3, 2)), None);
    }

    #[test]
    fn first_step_matches_table_row_4() {
        let g4 = gf_step(&gf_initial());
        assert_eq!(g4.n(), 4);
        assert_eq!(g4.coefficient(&[]), int(8));
        assert_eq!(g4.coefficient(&[3]), int(4));
        assert_eq!(g4.coefficient(&[4]), int(12));
        // the x3·x4·y² contributions cancel exactly: {3,4} is infeasible
        assert_eq!(g4.coefficient(&[3, 4]), int(0));
        assert_eq!(g4.num_terms(), 3);
    }

    #[test]
    fn g5_spot_checks() {
        let g5 = gf_step(&gf_step(&gf_initial()));
        assert_eq!(g5.coefficient(&[4, 5]), int(12));
        assert_eq!(g5.specialized_total(), int(120));
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(gf_coefficient(&set(7, &[3, 6, 7])).unwrap(), int(24));
        assert_eq!(gf_coefficient(&set(6, &[3, 4])).unwrap(), int(0));
        assert_eq!(gf_coefficient(&set(8, &[])).unwrap(), int(128));
    }

    #[test]
    fn agrees_with_dp_through_9() {
        let tables = dp_tables(9).unwrap();
        for g in gf_polynomials(9).unwrap() {
            assert_eq!(
                g.to_count_table(),
                tables[(g.n() - 3) as usize],
                "n = {}",
                g.n()
            );
        }
    }

    #[test]
    fn specializations() {
        let mut fact = BigUint::from(2u32);
        for g in gf_polynomials(9).unwrap() {
            fact *= g.n();
            assert_eq!(g.specialized_total(), fact);
            assert_eq!(g.y_degree(), (g.n() - 1) / 2, "max |S| at n = {}", g.n());
            let profile = g.y_profile();
            assert_eq!(profile.iter().sum::<BigUint>(), fact);
            assert_eq!(profile[0], crate::closed_forms::cp_empty(g.n()).unwrap());
        }
    }

    #[test]
    fn display_form() {
        assert_eq!(gf_initial().to_string(), "4 + 2*x3*y");
        let g4 = gf_step(&gf_initial());
        assert_eq!(g4.to_string(), "8 + 4*x3*y + 12*x4*y");
        let g5 = gf_step(&g4);
        assert!(g5.to_string().ends_with("4*x3*x5*y^2 + 12*x4*x5*y^2"));
    }

    #[test]
    fn scale_checks() {
        assert!(matches!(gf_polynomials(2), Err(Error::Domain(_))));
        let limit = crate::dp_limit();
        assert!(matches!(
            gf_polynomials(limit + 1),
            Err(Error::ScaleLimit(_))
        ));
    }
}
