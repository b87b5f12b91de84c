//! Sparse exact multivariate polynomials over the rationals and the
//! composition monoid of endomorphisms of affine n-space.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomial order,
//! so equality, iteration and printing are deterministic. All values are
//! immutable after construction and safe to share across threads.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::Budget;
use crate::error::DdError;

type Int = BigInt;
type Rat = BigRational;

/// Exponent vector of length `arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn unit(arity: usize) -> Self {
        Monomial {
            exps: vec![0; arity],
        }
    }

    pub fn var(arity: usize, idx: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[idx] = 1;
        Monomial { exps }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Largest variable index with a positive exponent, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded lexicographic
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(arity), c);
        }
        p
    }

    pub fn constant_int(arity: usize, c: i64) -> Self {
        Self::constant(arity, Rat::from_integer(Int::from(c)))
    }

    pub fn variable(arity: usize, idx: usize) -> Self {
        assert!(idx < arity, "variable index out of range");
        let mut p = Polynomial::zero(arity);
        p.terms.insert(Monomial::var(arity, idx), Rat::one());
        p
    }

    /// Single term `c · x^mono`.
    pub fn term(mono: Monomial, c: Rat) -> Self {
        let mut p = Polynomial::zero(mono.arity());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: Vec<(Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// All coefficients strictly positive (degree growth is then
    /// cancellation-free under composition).
    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Total degree; `None` encodes −∞ for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Max over monomials of the exponent sum restricted to `vars`.
    pub fn partial_degree(&self, vars: &[usize]) -> Option<u64> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.exp(v) as u64).sum())
            .max()
    }

    pub fn degree_in_var(&self, v: usize) -> Option<u64> {
        self.terms.keys().map(|m| m.exp(v) as u64).max()
    }

    /// Largest variable index actually used.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    /// True when the polynomial only involves variables from `vars`.
    pub fn uses_only(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|m| {
            m.exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || vars.contains(&i))
        })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = Polynomial::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32, budget: &Budget) -> Result<Polynomial, DdError> {
        let mut acc = Polynomial::constant(self.arity, Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
            budget.check(acc.num_terms())?;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[v] = e - 1;
            out.add_term(Monomial::new(exps), c * Rat::from_integer(Int::from(e)));
        }
        out
    }

    /// Multiplication that refuses up front when the pairwise product work
    /// would dwarf the term budget (a single dense square can otherwise
    /// blow past any post-hoc check).
    fn mul_budgeted(&self, other: &Polynomial, budget: &Budget) -> Result<Polynomial, DdError> {
        if let Some(max) = budget.max_terms {
            let pairs = self.num_terms().saturating_mul(other.num_terms());
            if pairs > max.saturating_mul(20) {
                return Err(DdError::resource(format!(
                    "product of {} x {} terms exceeds the term budget {max}",
                    self.num_terms(),
                    other.num_terms()
                )));
            }
        }
        let out = self.mul(other);
        budget.check(out.num_terms())?;
        Ok(out)
    }

    /// Substitute `inner[j]` for variable `j`. Powers of each component are
    /// memoized across the terms of `self`.
    pub fn compose(&self, inner: &[Polynomial], budget: &Budget) -> Result<Polynomial, DdError> {
        assert_eq!(self.arity, inner.len(), "arity mismatch");
        let out_arity = if let Some(first) = inner.first() {
            first.arity()
        } else {
            0
        };
        let mut powers: Vec<Vec<Polynomial>> = inner
            .iter()
            .map(|p| vec![Polynomial::constant(out_arity, Rat::one()), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(out_arity);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(out_arity, c.clone());
            for (j, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[j];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_budgeted(&inner[j], budget)?;
                    cache.push(next);
                }
                term = term.mul_budgeted(&cache[e as usize], budget)?;
            }
            acc = acc.add(&term);
            budget.check(acc.num_terms())?;
        }
        Ok(acc)
    }

    /// Keep only the monomials satisfying the predicate.
    pub fn filter_terms(&self, mut pred: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// An endomorphism of affine n-space: `n` polynomials in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    components: Vec<Polynomial>,
}

impl Endomorphism {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, DdError> {
        let n = components.len();
        if n == 0 {
            return Err(DdError::structural("endomorphism needs at least one component"));
        }
        for c in &components {
            if c.arity() != n {
                return Err(DdError::structural(format!(
                    "component arity {} does not match component count {}",
                    c.arity(),
                    n
                )));
            }
        }
        Ok(Endomorphism { components })
    }

    pub fn identity(n: usize) -> Self {
        Endomorphism {
            components: (0..n).map(|i| Polynomial::variable(n, i)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_identity(&self) -> bool {
        self == &Endomorphism::identity(self.arity())
    }

    /// Standard degree `max(deg f_1, ..., deg f_n)`; `None` when every
    /// component is zero.
    pub fn degree(&self) -> Option<u64> {
        self.components.iter().filter_map(|c| c.total_degree()).max()
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.components.iter().all(|c| c.all_coeffs_positive())
    }

    /// `outer ∘ inner`: substitute `inner`'s components into each component
    /// of `outer`.
    pub fn compose(outer: &Endomorphism, inner: &Endomorphism, budget: &Budget) -> Result<Endomorphism, DdError> {
        if outer.arity() != inner.arity() {
            return Err(DdError::structural(format!(
                "arity mismatch in composition: {} vs {}",
                outer.arity(),
                inner.arity()
            )));
        }
        let comps = outer
            .components
            .iter()
            .map(|c| c.compose(&inner.components, budget))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Endomorphism { components: comps })
    }

    /// `f^r` by sequential composition (`r ≥ 1`). Exact associativity makes
    /// the association order irrelevant.
    pub fn iterate(&self, r: u32, budget: &Budget) -> Result<Endomorphism, DdError> {
        assert!(r >= 1, "iterate needs r >= 1");
        let mut acc = self.clone();
        for _ in 1..r {
            acc = Endomorphism::compose(self, &acc, budget)?;
        }
        Ok(acc)
    }

    /// Triangular shape: component `i` only uses variables `0..=i`.
    pub fn is_triangular(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(i, c)| c.max_var().map_or(true, |v| v <= i))
    }

    /// Jacobian matrix of partial derivatives.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        let n = self.arity();
        (0..n)
            .map(|i| (0..n).map(|j| self.components[i].derivative(j)).collect())
            .collect()
    }

    /// Dominance over a field of characteristic zero: non-vanishing Jacobian
    /// determinant. Triangular inputs use the cheaper per-variable criterion.
    pub fn is_dominant(&self) -> bool {
        if self.is_triangular() {
            return self
                .components
                .iter()
                .enumerate()
                .all(|(i, c)| c.degree_in_var(i).unwrap_or(0) >= 1);
        }
        !self.jacobian_determinant().is_zero()
    }

    /// Determinant of the Jacobian, by division-free minor expansion over
    /// column subsets.
    pub fn jacobian_determinant(&self) -> Polynomial {
        let n = self.arity();
        let jac = self.jacobian();
        // dp over bitmasks: det of rows 0..popcount(mask), columns in mask
        let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
        dp[0] = Some(Polynomial::constant(n, Rat::one()));
        for mask in 1usize..(1 << n) {
            let r = (mask as u32).count_ones() as usize - 1;
            let mut acc = Polynomial::zero(n);
            let mut idx = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let sub = dp[mask ^ (1 << j)].clone().unwrap();
                let contrib = jac[r][j].mul(&sub);
                if (r + idx) % 2 == 0 {
                    acc = acc.add(&contrib);
                } else {
                    acc = acc.sub(&contrib);
                }
                idx += 1;
            }
            dp[mask] = Some(acc);
        }
        dp[(1 << n) - 1].clone().unwrap()
    }

    /// Largest per-component term count (size diagnostics).
    pub fn max_terms(&self) -> usize {
        self.components.iter().map(|c| c.num_terms()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_endomorphism;

    fn endo(s: &str) -> Endomorphism {
        parse_endomorphism(s).unwrap()
    }

    fn unlimited() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn identity_composes_trivially() {
        let f = endo("(x3 + x1^2*x2, x2 + x1^3, x1)");
        let id = Endomorphism::identity(3);
        assert_eq!(Endomorphism::compose(&id, &f, &unlimited()).unwrap(), f);
        assert_eq!(Endomorphism::compose(&f, &id, &unlimited()).unwrap(), f);
    }

    #[test]
    fn swap_is_an_involution() {
        let f = endo("(x2, x1)");
        let f2 = f.iterate(2, &unlimited()).unwrap();
        assert!(f2.is_identity());
    }

    #[test]
    fn degree_of_square_from_manual_expansion() {
        // oracle: expand by hand; f2_1 = x1 + (x3+x1x2)(x2+x1^2) has degree 4
        let f = endo("(x3 + x1*x2, x2 + x1^2, x1)");
        let f2 = f.iterate(2, &unlimited()).unwrap();
        assert_eq!(f2.degree(), Some(4));
        let naive = naive_compose(&f, &f);
        assert_eq!(f2, naive);
    }

    #[test]
    fn paper_period_three_example_first_family() {
        // f = (x3 - x2^n, x1, x2 + x1^n), f^3 = id (n = 2)
        let f = endo("(x3 - x2^2, x1, x2 + x1^2)");
        assert!(f.iterate(3, &unlimited()).unwrap().is_identity());
    }

    #[test]
    fn paper_period_three_example_second_family() {
        // f = (x2 - x1^n, x3 + (x2-x1^n)^n, x1), f^3 = id (n = 2)
        let f = endo("(x2 - x1^2, x3 + (x2 - x1^2)^2, x1)");
        assert!(f.iterate(3, &unlimited()).unwrap().is_identity());
    }

    #[test]
    fn iterate_one_is_f() {
        let f = endo("(x1^2 + x2, x1)");
        assert_eq!(f.iterate(1, &unlimited()).unwrap(), f);
    }

    #[test]
    fn partial_degree_examples() {
        let f = endo("(x1^5*x2, x2, x3)");
        assert_eq!(f.component(0).partial_degree(&[1, 2]), Some(1));
        let g = endo("(x1^3, x2)");
        assert_eq!(g.component(0).partial_degree(&[1]), Some(0));
        // deg_{x2,x3}((x2 + x1 x3)^2) = 2
        let h = endo("((x2 + x1*x3)^2, x2, x3)");
        assert_eq!(h.component(0).partial_degree(&[1, 2]), Some(2));
    }

    #[test]
    fn dominance_criteria() {
        assert!(!endo("(x1, x1^2)").is_dominant());
        assert!(endo("(x1, x2 + x1^3, x3*x2 + 1)").is_dominant());
        // monomial map with singular exponent matrix
        assert!(!endo("(x1*x2, x1*x2)").is_dominant());
        assert!(endo("(x1^2, x2^3)").is_dominant());
    }

    #[test]
    fn budget_violation_reports_resource_error() {
        let f = endo("(x1^2 + x2^2, x1*x2)");
        let err = f.iterate(6, &Budget::terms(10)).unwrap_err();
        assert!(matches!(err, DdError::Resource(_)));
    }

    /// Independent substitution oracle: expand term by term without any
    /// power memoization.
    fn naive_compose(outer: &Endomorphism, inner: &Endomorphism) -> Endomorphism {
        let n = outer.arity();
        let comps = outer
            .components()
            .iter()
            .map(|p| {
                let mut acc = Polynomial::zero(n);
                for (m, c) in p.terms() {
                    let mut term = Polynomial::constant(n, c.clone());
                    for (j, &e) in m.exps().iter().enumerate() {
                        for _ in 0..e {
                            term = term.mul(inner.component(j));
                        }
                    }
                    acc = acc.add(&term);
                }
                acc
            })
            .collect();
        Endomorphism::new(comps).unwrap()
    }

    #[test]
    fn composition_matches_naive_oracle() {
        let f = endo("(x2 - x1^2, x3 + x1*x2, x1 + x3^2)");
        let g = endo("(x3 + x1*x2, x2 + x1^3, x1)");
        let fast = Endomorphism::compose(&f, &g, &unlimited()).unwrap();
        let slow = naive_compose(&f, &g);
        assert_eq!(fast, slow);
    }
}
