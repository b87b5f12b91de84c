//! Dimension-3 machinery: the reduction loop for affine-triangular
//! automorphisms and the degree-spectrum enumerators.
//!
//! A permutation-triangular automorphism of affine 3-space either has
//! maximal eigenvalue 1, or is stable for every maximal eigenvector, or
//! matches one of two explicit shapes that admit an elementary conjugation
//! strictly decreasing the degree of the offending tail polynomial. The
//! loop applies those conjugations until the stable situation is reached;
//! the dynamical degree is then the maximal eigenvalue of the reduced form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebraic::{largest_real_root, RealAlgebraicNumber};
use crate::config::{Budget, JobConfig};
use crate::degree::{Certificate, Confidence, DegreeValue, DynamicalDegreeResult};
use crate::error::DdError;
use crate::matrices::eigen_candidates;
use crate::poly::{Endomorphism, Monomial, Polynomial};
use crate::shapes::{
    affine_triangular_factor, bruhat_conjugate, classify_shape, AffineMap,
};
use crate::stability::{stability_test, StabilityVerdict};
use crate::text::format_endomorphism;
use crate::unipoly::IntPoly;

type Int = BigInt;
type Rat = BigRational;

/// Outcome of one reduction step.
#[derive(Debug, Clone)]
pub enum ReduceOutcome {
    /// θ = 1, or the map is stable for every constructed eigenvector.
    AlreadyGood {
        theta: RealAlgebraicNumber,
        witness: crate::matrices::IntMatrix,
    },
    /// Conjugated to a strictly smaller form.
    Reduced {
        conjugated: Endomorphism,
        conjugator: Endomorphism,
    },
}

/// Match `p = ξ x_v + rest` with constant `ξ ≠ 0` and `rest` free of `x_v`
/// and of every variable in `forbidden`.
fn linear_in_var(
    p: &Polynomial,
    v: usize,
    forbidden: &[usize],
) -> Option<(Rat, Polynomial)> {
    let n = p.arity();
    if p.degree_in_var(v) != Some(1) {
        return None;
    }
    let xi = p.coefficient(&Monomial::var(n, v));
    if xi.is_zero() {
        return None;
    }
    let rest = p.sub(&Polynomial::term(Monomial::var(n, v), xi.clone()));
    if rest.degree_in_var(v).unwrap_or(0) > 0 {
        return None;
    }
    for &w in forbidden {
        if rest.degree_in_var(w).unwrap_or(0) > 0 {
            return None;
        }
    }
    Some((xi, rest))
}

/// Leading coefficient of a univariate-in-`x1` polynomial.
fn leading_in_x1(p: &Polynomial) -> Option<(Rat, u32)> {
    let d = p.degree_in_var(0)? as u32;
    let n = p.arity();
    let mut exps = vec![0u32; n];
    exps[0] = d;
    let c = p.coefficient(&Monomial::new(exps));
    if c.is_zero() {
        None
    } else {
        Some((c, d))
    }
}

/// One step of the dimension-3 reduction loop on a permutation-triangular
/// automorphism.
pub fn reduce_a3_step(f: &Endomorphism, cfg: &JobConfig) -> Result<ReduceOutcome, DdError> {
    if f.arity() != 3 {
        return Err(DdError::domain("reduction loop needs arity 3"));
    }
    let cands = eigen_candidates(f, cfg.budget_matrices)?;
    let theta = cands.theta.clone();
    let witness = cands.witnesses[0].clone();
    if theta == RealAlgebraicNumber::one() {
        return Ok(ReduceOutcome::AlreadyGood { theta, witness });
    }
    // try the two degenerate shapes; a successful conjugation must strictly
    // decrease the tail degree and not increase the total degree
    if let Some(out) = try_case_one(f, &theta)? {
        return Ok(out);
    }
    if let Some(out) = try_case_two(f, &theta)? {
        return Ok(out);
    }
    // neither shape applies: stable for every maximal eigenvector
    Ok(ReduceOutcome::AlreadyGood { theta, witness })
}

/// Shape (x3-slot first): `f = (ξ3 x3 + p3(x1,x2), p1(x1), ξ2 x2 + p2(x1))`
/// with `deg p1 = 1` and `deg p2 = θ² > 1`. The conjugation
/// `h = (x1, x2, x3 + q(x2)/ξ3)` cancels the leading monomial of `p2`.
fn try_case_one(
    f: &Endomorphism,
    theta: &RealAlgebraicNumber,
) -> Result<Option<ReduceOutcome>, DdError> {
    let n = 3;
    let Some((xi3, p3)) = linear_in_var(f.component(0), 2, &[]) else {
        return Ok(None);
    };
    let _ = p3;
    if !f.component(1).uses_only(&[0]) || f.component(1).total_degree() != Some(1) {
        return Ok(None);
    }
    let Some((_xi2, p2)) = linear_in_var(f.component(2), 1, &[2]) else {
        return Ok(None);
    };
    if !p2.uses_only(&[0]) {
        return Ok(None);
    }
    let Some((lam2, d2)) = leading_in_x1(&p2) else {
        return Ok(None);
    };
    if d2 < 2 {
        return Ok(None);
    }
    // θ² must equal deg p2
    if &theta.square() != &RealAlgebraicNumber::from_int(d2 as i64) {
        return Ok(None);
    }
    let Some((c1, _)) = leading_in_x1(&f.component(1)) else {
        return Ok(None);
    };
    // q = q_c x2^{d2} with q_c = -λ2 ξ3 / c1^{d2}
    let c1_pow = pow_rat(&c1, d2);
    let q_c = -(&lam2 * &xi3) / c1_pow;
    let mut exps = vec![0u32; n];
    exps[1] = d2;
    let s = Polynomial::term(Monomial::new(exps), &q_c / &xi3);
    let h = Endomorphism::new(vec![
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1),
        Polynomial::variable(n, 2).add(&s),
    ])?;
    let h_inv = Endomorphism::new(vec![
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1),
        Polynomial::variable(n, 2).sub(&s),
    ])?;
    finish_conjugation(f, &h, &h_inv, 2, d2 as u64)
}

/// Shape (x2-slot first): `f = (ξ2 x2 + p2(x1), ξ3 x3 + p3(x1,x2), p1(x1))`
/// with `deg p1 = 1` and `deg p2 = θ > 1`. The conjugation
/// `h = (x1, x2 + q(x1)/ξ2, x3)` removes the leading monomial of `p2`.
fn try_case_two(
    f: &Endomorphism,
    theta: &RealAlgebraicNumber,
) -> Result<Option<ReduceOutcome>, DdError> {
    let n = 3;
    let Some((xi2, p2)) = linear_in_var(f.component(0), 1, &[2]) else {
        return Ok(None);
    };
    if !p2.uses_only(&[0]) {
        return Ok(None);
    }
    let Some((_xi3, p3)) = linear_in_var(f.component(1), 2, &[]) else {
        return Ok(None);
    };
    let _ = p3;
    if !f.component(2).uses_only(&[0]) || f.component(2).total_degree() != Some(1) {
        return Ok(None);
    }
    let Some((lam2, d2)) = leading_in_x1(&p2) else {
        return Ok(None);
    };
    if d2 < 2 {
        return Ok(None);
    }
    if theta != &RealAlgebraicNumber::from_int(d2 as i64) {
        return Ok(None);
    }
    let mut exps = vec![0u32; n];
    exps[0] = d2;
    let s = Polynomial::term(Monomial::new(exps), &lam2 / &xi2);
    let h = Endomorphism::new(vec![
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1).add(&s),
        Polynomial::variable(n, 2),
    ])?;
    let h_inv = Endomorphism::new(vec![
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1).sub(&s),
        Polynomial::variable(n, 2),
    ])?;
    finish_conjugation(f, &h, &h_inv, 0, d2 as u64)
}

fn pow_rat(c: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

/// Apply `h ∘ f ∘ h^{-1}` and accept only if it strictly decreases the
/// tail-polynomial degree in the tracked component without increasing the
/// total degree.
fn finish_conjugation(
    f: &Endomorphism,
    h: &Endomorphism,
    h_inv: &Endomorphism,
    tracked_component: usize,
    old_tail_degree: u64,
) -> Result<Option<ReduceOutcome>, DdError> {
    let budget = Budget::unlimited();
    let conj = Endomorphism::compose(&Endomorphism::compose(h, f, &budget)?, h_inv, &budget)?;
    let new_tail = conj
        .component(tracked_component)
        .degree_in_var(0)
        .unwrap_or(0);
    let old_deg = f.degree().unwrap_or(0);
    let new_deg = conj.degree().unwrap_or(0);
    if new_tail < old_tail_degree && new_deg <= old_deg {
        Ok(Some(ReduceOutcome::Reduced {
            conjugated: conj,
            conjugator: h.clone(),
        }))
    } else {
        Ok(None)
    }
}

/// Dynamical degree of an affine-triangular automorphism of affine 3-space:
/// Bruhat conjugation to permutation-triangular form, then the reduction
/// loop; the final λ is the maximal eigenvalue of the reduced form.
pub fn affine_triangular_a3_dynamical_degree(
    f: &Endomorphism,
    cfg: &JobConfig,
) -> Result<DynamicalDegreeResult, DdError> {
    if f.arity() != 3 {
        return Err(DdError::domain("expected an endomorphism of affine 3-space"));
    }
    let shape = classify_shape(f);
    let mut current = if shape.permutation_triangular.is_some() {
        f.clone()
    } else {
        let (alpha, tau) = match &shape.affine_triangular {
            Some((a, t)) => (a.clone(), t.clone()),
            None => match affine_triangular_factor(f) {
                Some((a, t)) => (a, t),
                None => {
                    return Err(DdError::domain(
                        "endomorphism does not factor as affine ∘ triangular",
                    ))
                }
            },
        };
        let (_beta, perm, tau_new) = bruhat_conjugate(&alpha, &tau)?;
        let sigma = AffineMap::from_permutation(&perm);
        Endomorphism::compose(&sigma.to_endomorphism(), &tau_new, &Budget::unlimited())?
    };
    // automorphism sanity on the triangular factor
    let mut steps = 0usize;
    let max_steps = 10 * f.degree().unwrap_or(1) as usize + 20;
    loop {
        match reduce_a3_step(&current, cfg)? {
            ReduceOutcome::AlreadyGood { theta, witness } => {
                // cross-check stability of the verified eigenvectors when
                // θ > 1 (the case analysis promises it)
                if theta != RealAlgebraicNumber::one() {
                    let cands = eigen_candidates(&current, cfg.budget_matrices)?;
                    let horizon = cfg.horizon_for(3);
                    for (mu, _) in cands.verified.iter().take(4) {
                        let rep = stability_test(&current, mu, horizon, &Budget::from(cfg))?;
                        if let StabilityVerdict::UnstableAt(r) = rep.verdict {
                            return Err(DdError::internal(format!(
                                "reduced form is unstable at iterate {r}; contradicts the \
                                 dimension-3 case analysis"
                            )));
                        }
                    }
                }
                return Ok(DynamicalDegreeResult {
                    value: DegreeValue::Exact(theta),
                    confidence: Confidence::Proven,
                    certificate: Certificate::AffineTriangular3 {
                        steps,
                        reduced: format_endomorphism(&current),
                        theta_witness: witness,
                    },
                    oracle: None,
                });
            }
            ReduceOutcome::Reduced { conjugated, .. } => {
                steps += 1;
                if steps > max_steps {
                    return Err(DdError::internal(
                        "dimension-3 reduction loop failed to terminate",
                    ));
                }
                current = conjugated;
            }
        }
    }
}

/// One value of the degree-`d` spectrum, with its witness automorphisms.
#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub triple: (u32, u32, u32),
    pub value: RealAlgebraicNumber,
    /// Smallest degree at which this value occurs in the family.
    pub new_at: u32,
    pub witness_triangular: Endomorphism,
    pub witness_monomial_style: Endomorphism,
}

fn quadratic_value(a: u32, b: u32, c: u32) -> Option<RealAlgebraicNumber> {
    if a == 0 && b.checked_mul(c) == Some(0) {
        return None;
    }
    let poly = IntPoly::new(vec![
        -Int::from(b as u64 * c as u64),
        -Int::from(a),
        Int::one(),
    ]);
    largest_real_root(&poly)
}

fn witness_triangular(a: u32, b: u32, c: u32) -> Endomorphism {
    // (x3 + x1^a x2^b, x2 + x1^c, x1)
    let n = 3;
    let mut e1 = vec![0u32; n];
    e1[0] = a;
    e1[1] = b;
    let f1 = Polynomial::variable(n, 2).add(&Polynomial::term(Monomial::new(e1), Rat::one()));
    let mut e2 = vec![0u32; n];
    e2[0] = c;
    let f2 = Polynomial::variable(n, 1).add(&Polynomial::term(Monomial::new(e2), Rat::one()));
    let f3 = Polynomial::variable(n, 0);
    Endomorphism::new(vec![f1, f2, f3]).unwrap()
}

fn witness_monomial_style(a: u32, bc: u32) -> Endomorphism {
    // (x3 + x1^a x2^{bc}, x1, x2)
    let n = 3;
    let mut e1 = vec![0u32; n];
    e1[0] = a;
    e1[1] = bc;
    let f1 = Polynomial::variable(n, 2).add(&Polynomial::term(Monomial::new(e1), Rat::one()));
    Endomorphism::new(vec![
        f1,
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1),
    ])
    .unwrap()
}

/// All dynamical degrees of affine-triangular automorphisms of affine
/// 3-space of degree ≤ d: `{(a+sqrt(a²+4bc))/2 : a+b ≤ d, c ≤ d} \ {0}`,
/// deduplicated (smallest triple kept) and sorted by value.
pub fn enumerate_theorem1_set(d: u32) -> Vec<SpectrumEntry> {
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for a in 0..=d {
        for b in 0..=d.saturating_sub(a) {
            for c in 0..=d {
                let Some(value) = quadratic_value(a, b, c) else {
                    continue;
                };
                match out.iter_mut().find(|e| e.value == value) {
                    Some(_) => {}
                    None => {
                        let new_at = minimal_theorem1_degree(a, b, c, &value, d);
                        out.push(SpectrumEntry {
                            triple: (a, b, c),
                            value,
                            new_at,
                            witness_triangular: witness_triangular(a, b, c),
                            witness_monomial_style: witness_monomial_style(a, b * c),
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.value.compare(&y.value).then(x.triple.cmp(&y.triple)));
    out
}

/// Smallest `d'` at which `value` belongs to the theorem-1 set.
fn minimal_theorem1_degree(_a: u32, _b: u32, _c: u32, value: &RealAlgebraicNumber, d: u32) -> u32 {
    for dp in 1..=d {
        for a in 0..=dp {
            for b in 0..=dp.saturating_sub(a) {
                for c in 0..=dp {
                    if let Some(v) = quadratic_value(a, b, c) {
                        if &v == value {
                            return dp;
                        }
                    }
                }
            }
        }
    }
    d
}

/// Values new at exactly degree `d` (the per-row sets of the spectrum
/// table).
pub fn theorem1_new_at(d: u32) -> Vec<SpectrumEntry> {
    enumerate_theorem1_set(d)
        .into_iter()
        .filter(|e| e.new_at == d)
        .collect()
}

/// Dynamical degrees of shift-like automorphisms of affine 3-space of
/// degree exactly `d`: `{(a + sqrt(a² + 4d - 4a))/2 : 0 ≤ a ≤ d}`.
pub fn enumerate_shiftlike_set_a3(d: u32) -> Vec<SpectrumEntry> {
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for a in 0..=d {
        let b = d - a; // witness monomial x1^a x2^{d-a}
        let Some(value) = quadratic_value(a, 1, b).or_else(|| {
            // a = d: x^2 - a x: value a
            quadratic_value(a, 0, 0)
        }) else {
            continue;
        };
        if out.iter().any(|e| e.value == value) {
            continue;
        }
        let new_at = minimal_shiftlike_degree(&value, d);
        out.push(SpectrumEntry {
            triple: (a, 1, b),
            value,
            new_at,
            witness_triangular: witness_monomial_style(a, b),
            witness_monomial_style: witness_monomial_style(a, b),
        });
    }
    out.sort_by(|x, y| x.value.compare(&y.value).then(x.triple.cmp(&y.triple)));
    out
}

fn minimal_shiftlike_degree(value: &RealAlgebraicNumber, d: u32) -> u32 {
    for dp in 1..=d {
        for a in 0..=dp {
            let b = dp - a;
            if let Some(v) = quadratic_value(a, 1, b).or_else(|| quadratic_value(a, 0, 0)) {
                if &v == value {
                    return dp;
                }
            }
        }
    }
    d
}

/// Shift-like values new at exactly degree `d`.
pub fn shiftlike_new_at(d: u32) -> Vec<SpectrumEntry> {
    enumerate_shiftlike_set_a3(d)
        .into_iter()
        .filter(|e| e.new_at == d)
        .collect()
}
