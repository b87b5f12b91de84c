//! Weighted degree functions, weighted-homogeneous parts and leading parts.
//!
//! A weight vector assigns a non-negative value (rational or algebraic, all
//! sharing one field) to each variable. The degree of a monomial is the
//! weighted exponent sum; ties are grouped exactly, never by approximation.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::DdError;
use crate::numberfield::KElem;
use crate::poly::{Endomorphism, Monomial, Polynomial};

type Int = BigInt;
type Rat = BigRational;

/// Weights `μ = (μ_1, ..., μ_n)`, all `≥ 0`, not all zero.
#[derive(Debug, Clone)]
pub struct WeightVector {
    entries: Vec<KElem>,
}

impl WeightVector {
    pub fn new(entries: Vec<KElem>) -> Result<Self, DdError> {
        if entries.is_empty() {
            return Err(DdError::structural("weight vector cannot be empty"));
        }
        let mut all_zero = true;
        for e in &entries {
            match e.sign() {
                -1 => {
                    return Err(DdError::domain("weight entries must be non-negative"));
                }
                1 => all_zero = false,
                _ => {}
            }
        }
        if all_zero {
            return Err(DdError::domain("weight vector cannot be zero"));
        }
        Ok(WeightVector { entries })
    }

    pub fn from_rationals(rs: Vec<Rat>) -> Result<Self, DdError> {
        WeightVector::new(rs.into_iter().map(KElem::from_rat).collect())
    }

    pub fn from_ints(ns: &[i64]) -> Result<Self, DdError> {
        WeightVector::from_rationals(
            ns.iter().map(|&n| Rat::from_integer(Int::from(n))).collect(),
        )
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[KElem] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &KElem {
        &self.entries[i]
    }

    /// Indices with zero weight.
    pub fn zero_indices(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.sign() == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(|e| e.sign() > 0)
    }

    /// Weighted degree of a single monomial.
    pub fn degree_of_monomial(&self, m: &Monomial) -> KElem {
        debug_assert_eq!(m.arity(), self.arity());
        let mut acc = KElem::zero();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let scaled = self.entries[i].scale(&Rat::from_integer(Int::from(e)));
            acc = acc.add(&scaled);
        }
        acc
    }
}

/// A weighted degree value: `-∞` for the zero polynomial, finite, or `∞`
/// for endomorphisms whose zero-weight components leak into positive-weight
/// variables.
#[derive(Debug, Clone)]
pub enum MuDegree {
    NegInfinity,
    Finite(KElem),
    Infinity,
}

impl MuDegree {
    pub fn finite(&self) -> Option<&KElem> {
        match self {
            MuDegree::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MuDegree::Infinity)
    }

    pub fn eq_exact(&self, other: &MuDegree) -> bool {
        match (self, other) {
            (MuDegree::NegInfinity, MuDegree::NegInfinity) => true,
            (MuDegree::Infinity, MuDegree::Infinity) => true,
            (MuDegree::Finite(a), MuDegree::Finite(b)) => a.eq_exact(b),
            _ => false,
        }
    }
}

/// `deg_μ(p)`: max weighted exponent sum over the support of `p`.
pub fn mu_degree_poly(p: &Polynomial, mu: &WeightVector) -> MuDegree {
    assert_eq!(p.arity(), mu.arity(), "arity mismatch");
    let mut best: Option<KElem> = None;
    for (m, _) in p.terms() {
        let d = mu.degree_of_monomial(m);
        best = Some(match best {
            None => d,
            Some(b) => {
                if d.compare(&b) == std::cmp::Ordering::Greater {
                    d
                } else {
                    b
                }
            }
        });
    }
    match best {
        None => MuDegree::NegInfinity,
        Some(v) => MuDegree::Finite(v),
    }
}

/// `deg_μ(f)` for an endomorphism: the least `θ ≥ 0` with
/// `deg_μ(f_i) ≤ θ μ_i` for all `i`, or `∞` when no such `θ` exists.
pub fn mu_degree_endo(f: &Endomorphism, mu: &WeightVector) -> MuDegree {
    assert_eq!(f.arity(), mu.arity(), "arity mismatch");
    let zero_vars = mu.zero_indices();
    // a zero-weight component must be a polynomial in zero-weight variables
    for &i in &zero_vars {
        if !f.component(i).uses_only(&zero_vars) {
            return MuDegree::Infinity;
        }
    }
    let mut best: Option<KElem> = None;
    for i in 0..f.arity() {
        if mu.entry(i).sign() == 0 {
            continue;
        }
        match mu_degree_poly(f.component(i), mu) {
            MuDegree::NegInfinity => continue,
            MuDegree::Finite(d) => {
                let ratio = d.div(mu.entry(i));
                best = Some(match best {
                    None => ratio,
                    Some(b) => {
                        if ratio.compare(&b) == std::cmp::Ordering::Greater {
                            ratio
                        } else {
                            b
                        }
                    }
                });
            }
            MuDegree::Infinity => unreachable!(),
        }
    }
    MuDegree::Finite(best.unwrap_or_else(KElem::zero))
}

/// The μ-homogeneous part of `p` of the given degree.
pub fn mu_homogeneous_part(p: &Polynomial, mu: &WeightVector, value: &KElem) -> Polynomial {
    p.filter_terms(|m| mu.degree_of_monomial(m).eq_exact(value))
}

/// True when every monomial of `p` has weighted degree `value` (the zero
/// polynomial is homogeneous of every degree).
pub fn is_mu_homogeneous_poly(p: &Polynomial, mu: &WeightVector, value: &KElem) -> bool {
    p.terms()
        .all(|(m, _)| mu.degree_of_monomial(m).eq_exact(value))
}

/// True when every component `h_i` is μ-homogeneous of degree `θ μ_i`.
pub fn is_mu_homogeneous_endo(h: &Endomorphism, mu: &WeightVector, theta: &KElem) -> bool {
    (0..h.arity()).all(|i| {
        let target = theta.mul(mu.entry(i));
        is_mu_homogeneous_poly(h.component(i), mu, &target)
    })
}

/// The μ-leading part of `f`: component `j` keeps the μ-homogeneous part of
/// degree `θ μ_j`, where `θ = deg_μ(f)` must be finite.
pub fn mu_leading_endo(f: &Endomorphism, mu: &WeightVector) -> Result<(KElem, Endomorphism), DdError> {
    let theta = match mu_degree_endo(f, mu) {
        MuDegree::Finite(t) => t,
        MuDegree::Infinity => {
            return Err(DdError::domain(
                "μ-degree is infinite; no leading part exists",
            ))
        }
        MuDegree::NegInfinity => unreachable!("endomorphisms are nonzero"),
    };
    let comps = (0..f.arity())
        .map(|j| {
            let target = theta.mul(mu.entry(j));
            mu_homogeneous_part(f.component(j), mu, &target)
        })
        .collect();
    Ok((theta, Endomorphism::new(comps)?))
}

/// Graded decomposition `f = Σ_{0 ≤ ξ ≤ θ} g_ξ` into μ-homogeneous pieces.
/// Zero-weight components are placed in the `ξ = 0` piece (the decomposition
/// is not unique there; this is the documented convention).
pub fn decompose_endo(
    f: &Endomorphism,
    mu: &WeightVector,
    theta: &KElem,
) -> Result<Vec<(KElem, Endomorphism)>, DdError> {
    match mu_degree_endo(f, mu) {
        MuDegree::Infinity => {
            return Err(DdError::domain("μ-degree is infinite; cannot decompose"))
        }
        MuDegree::Finite(d) => {
            if d.compare(theta) == std::cmp::Ordering::Greater {
                return Err(DdError::domain("deg_μ(f) exceeds the requested bound"));
            }
        }
        MuDegree::NegInfinity => {}
    }
    let n = f.arity();
    // collect candidate grades ξ = deg_μ(monomial) / μ_i over positive-weight
    // components; ξ = 0 always present (zero-weight components live there)
    let mut grades: Vec<KElem> = vec![KElem::zero()];
    for i in 0..n {
        if mu.entry(i).sign() == 0 {
            continue;
        }
        for (m, _) in f.component(i).terms() {
            let xi = mu.degree_of_monomial(m).div(mu.entry(i));
            if !grades.iter().any(|g| g.eq_exact(&xi)) {
                grades.push(xi);
            }
        }
    }
    grades.sort_by(|a, b| a.compare(b));
    let mut out = Vec::with_capacity(grades.len());
    for xi in grades {
        let comps: Vec<Polynomial> = (0..n)
            .map(|i| {
                if mu.entry(i).sign() == 0 {
                    if xi.sign() == 0 {
                        f.component(i).clone()
                    } else {
                        Polynomial::zero(n)
                    }
                } else {
                    let target = xi.mul(mu.entry(i));
                    mu_homogeneous_part(f.component(i), mu, &target)
                }
            })
            .collect();
        let g = Endomorphism::new(comps)?;
        let nonzero = g.components().iter().any(|c| !c.is_zero());
        if nonzero {
            out.push((xi, g));
        }
    }
    Ok(out)
}
