//! Classification of algebraic numbers (Perron, weak Perron, Handelman)
//! and realization of weak Perron numbers as dynamical degrees of
//! affine-triangular automorphisms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebraic::{isolate_real_roots, largest_real_root, RealAlgebraicNumber};
use crate::config::JobConfig;
use crate::conjugates::{conjugates_within_modulus, ModulusVerdict};
use crate::degree::{dynamical_degree, Confidence};
use crate::error::DdError;
use crate::matrices::{is_irreducible, IntMatrix};
use crate::numberfield::{KElem, RealField};
use crate::poly::{Endomorphism, Monomial, Polynomial};
use crate::unipoly::IntPoly;

type Int = BigInt;
type Rat = BigRational;

/// A monic integer polynomial together with a selected real root `λ ≥ 1`.
#[derive(Debug, Clone)]
pub struct AlgebraicCandidate {
    pub defining: IntPoly,
    pub lambda: RealAlgebraicNumber,
}

impl AlgebraicCandidate {
    /// Candidate from the largest real root, which must be ≥ 1.
    pub fn largest_root(defining: &IntPoly) -> Result<Self, DdError> {
        if !defining.is_monic() {
            return Err(DdError::domain("defining polynomial must be monic"));
        }
        let lambda = largest_real_root(defining)
            .ok_or_else(|| DdError::domain("polynomial has no real root"))?;
        if lambda < RealAlgebraicNumber::one() {
            return Err(DdError::domain("selected root is smaller than 1"));
        }
        Ok(AlgebraicCandidate {
            defining: defining.clone(),
            lambda,
        })
    }
}

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ternary {
    Yes,
    No,
    Inconclusive,
}

impl From<ModulusVerdict> for Ternary {
    fn from(v: ModulusVerdict) -> Self {
        match v {
            ModulusVerdict::Yes => Ternary::Yes,
            ModulusVerdict::No => Ternary::No,
            ModulusVerdict::Inconclusive(_) => Ternary::Inconclusive,
        }
    }
}

/// Handelman classification outcome.
#[derive(Debug, Clone)]
pub enum HandelmanVerdict {
    /// Certificate: a monic multiple of the defining polynomial whose
    /// non-leading coefficients are all ≤ 0.
    Yes(IntPoly),
    No,
    /// Search exhausted up to the degree cap.
    Unknown(u32),
}

/// `|μ| ≤ λ` for all other roots (weak Perron test).
pub fn is_weak_perron(c: &AlgebraicCandidate, cfg: &JobConfig) -> Result<Ternary, DdError> {
    Ok(conjugates_within_modulus(&c.defining, &c.lambda, false, cfg.precision_bits)?.into())
}

/// `|μ| < λ` for all other roots (Perron test).
pub fn is_perron(c: &AlgebraicCandidate, cfg: &JobConfig) -> Result<Ternary, DdError> {
    Ok(conjugates_within_modulus(&c.defining, &c.lambda, true, cfg.precision_bits)?.into())
}

/// Certificate shape: monic with all non-leading coefficients ≤ 0, not all
/// zero.
fn is_certificate_shape(p: &IntPoly) -> bool {
    if !p.is_monic() || p.degree().unwrap_or(0) == 0 {
        return false;
    }
    let body = &p.coeffs[..p.coeffs.len() - 1];
    body.iter().all(|c| !c.is_positive()) && body.iter().any(|c| c.is_negative())
}

/// Minimal quadratic relation `λ² = aλ + b` over the integers, when `λ` is
/// a quadratic integer (and `None` when rational or of higher degree).
pub fn quadratic_relation(c: &AlgebraicCandidate) -> Option<(Int, Int)> {
    if c.lambda.is_rational() {
        return None;
    }
    let field = RealField::of(&c.lambda)?;
    let gen = KElem::generator(&field);
    let lf = c.lambda.to_f64();
    // a = λ + conjugate ∈ [0, 2λ] for weak Perron candidates; scan a window
    let amax = (2.0 * lf).ceil() as i64 + 2;
    for a in -2..=amax {
        let b_guess = (lf * lf - a as f64 * lf).round() as i64;
        for b in [b_guess - 1, b_guess, b_guess + 1] {
            let expr = gen
                .mul(&gen)
                .sub(&gen.scale(&Rat::from_integer(Int::from(a))))
                .sub(&KElem::from_rat(Rat::from_integer(Int::from(b))));
            if expr.is_zero() {
                return Some((Int::from(a), Int::from(b)));
            }
        }
    }
    None
}

/// Decide whether `λ` is a Handelman number: a positive root of a monic
/// integer polynomial with non-positive lower coefficients. The candidate
/// polynomial is treated as the minimal-ish defining polynomial of `λ`;
/// the search looks for certificate-shaped multiples of it up to the
/// degree cap.
pub fn is_handelman(c: &AlgebraicCandidate, degree_cap: u32) -> HandelmanVerdict {
    let p = c.defining.squarefree_part();
    // integer λ: x - λ
    if let Some(k) = c.lambda.to_integer() {
        if k >= Int::one() {
            return HandelmanVerdict::Yes(IntPoly::new(vec![-k, Int::one()]));
        }
    }
    if is_certificate_shape(&c.defining) && c.lambda.is_root_of(&c.defining) {
        return HandelmanVerdict::Yes(c.defining.clone());
    }
    if is_certificate_shape(&p) {
        return HandelmanVerdict::Yes(p);
    }
    // quick rejection: another positive real root of the defining polynomial
    let others = isolate_real_roots(&p);
    for r in &others {
        if r != &c.lambda && r.sign() > 0 {
            return HandelmanVerdict::No;
        }
    }
    // quadratic case is decided exactly by the sign of b
    if let Some((a, b)) = quadratic_relation(c) {
        if a.is_negative() || b.is_negative() {
            return HandelmanVerdict::No;
        }
        let cert = IntPoly::new(vec![-b, -a, Int::one()]);
        return HandelmanVerdict::Yes(cert);
    }
    // bounded search for a certificate-shaped monic multiple
    let deg = p.degree().unwrap_or(0) as u32;
    let cap = degree_cap.max(deg);
    for target in deg + 1..=cap {
        let k = (target - deg) as usize;
        if k > 3 {
            break; // box search beyond three extra coefficients is hopeless
        }
        const BOX: i64 = 8;
        let mut stack = vec![Vec::<i64>::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == k {
                let mut coeffs: Vec<Int> = prefix.iter().map(|&x| Int::from(x)).collect();
                coeffs.push(Int::one());
                let m = IntPoly::new(coeffs);
                let q = p.mul(&m);
                if is_certificate_shape(&q) {
                    return HandelmanVerdict::Yes(q);
                }
                continue;
            }
            for v in -BOX..=BOX {
                let mut next = prefix.clone();
                next.push(v);
                stack.push(next);
            }
        }
    }
    HandelmanVerdict::Unknown(cap)
}

/// Construction family used by a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationTag {
    A2Integer,
    A1Identity,
    A3ShiftLike,
    A4Quadratic,
    A2nDoubling,
    ExampleRst,
}

/// A weak Perron number realized as a dynamical degree.
#[derive(Debug, Clone)]
pub struct RealizationPlan {
    pub dimension: usize,
    pub automorphism: Endomorphism,
    pub predicted: RealAlgebraicNumber,
    pub tag: RealizationTag,
    pub notes: Vec<String>,
    /// Whether the driver re-derived the predicted value exactly.
    pub verified_proven: bool,
}

fn monomial_poly(exps: Vec<u32>) -> Polynomial {
    Polynomial::term(Monomial::new(exps), Rat::one())
}

/// `(x_1^k + x_2, x_1)`.
fn integer_plan_map(k: u32) -> Endomorphism {
    let n = 2;
    let mut e = vec![0u32; n];
    e[0] = k;
    Endomorphism::new(vec![
        monomial_poly(e).add(&Polynomial::variable(n, 1)),
        Polynomial::variable(n, 0),
    ])
    .unwrap()
}

/// `(x_3 + x_1^a x_2^b, x_1, x_2)`.
fn shift_like_plan_map(a: u32, b: u32) -> Endomorphism {
    let n = 3;
    let mut e = vec![0u32; n];
    e[0] = a;
    e[1] = b;
    Endomorphism::new(vec![
        Polynomial::variable(n, 2).add(&monomial_poly(e)),
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1),
    ])
    .unwrap()
}

/// `(x_3 + x_1^α x_2, x_4 + x_1^{α(a-α)+b} x_2^{a-α}, x_1, x_2)`.
fn quadratic_positive_conjugate_map(a: i64, b: i64) -> Endomorphism {
    let alpha = a.div_euclid(2);
    let beta = alpha * (a - alpha) + b;
    assert!(alpha >= 0 && beta >= 0 && a - alpha >= 0);
    let n = 4;
    let mut e1 = vec![0u32; n];
    e1[0] = alpha as u32;
    e1[1] = 1;
    let mut e2 = vec![0u32; n];
    e2[0] = beta as u32;
    e2[1] = (a - alpha) as u32;
    Endomorphism::new(vec![
        Polynomial::variable(n, 2).add(&monomial_poly(e1)),
        Polynomial::variable(n, 3).add(&monomial_poly(e2)),
        Polynomial::variable(n, 0),
        Polynomial::variable(n, 1),
    ])
    .unwrap()
}

/// Doubling construction: `x_{n+i} + prod_j x_j^{A[i][j]}` followed by the
/// shifted coordinates.
fn doubling_map(a: &IntMatrix) -> Endomorphism {
    let n = a.n();
    let big = 2 * n;
    let mut comps = Vec::with_capacity(big);
    for i in 0..n {
        let mut e = vec![0u32; big];
        for j in 0..n {
            e[j] = u32::try_from(&a.rows[i][j]).expect("doubling exponent fits u32");
        }
        comps.push(Polynomial::variable(big, n + i).add(&monomial_poly(e)));
    }
    for i in 0..n {
        comps.push(Polynomial::variable(big, i));
    }
    Endomorphism::new(comps).unwrap()
}

/// Realize a weak Perron number as the dynamical degree of an
/// affine-triangular automorphism, dispatching on its arithmetic type.
pub fn realize_weak_perron(
    c: &AlgebraicCandidate,
    matrix_witness: Option<&IntMatrix>,
    cfg: &JobConfig,
) -> Result<RealizationPlan, DdError> {
    if is_weak_perron(c, cfg)? != Ternary::Yes {
        return Err(DdError::domain(
            "candidate is not verified to be a weak Perron number",
        ));
    }
    let mut notes = Vec::new();
    // integer λ
    if let Some(k) = c.lambda.to_integer() {
        if k == Int::one() {
            let plan = RealizationPlan {
                dimension: 1,
                automorphism: Endomorphism::identity(1),
                predicted: RealAlgebraicNumber::one(),
                tag: RealizationTag::A1Identity,
                notes,
                verified_proven: true,
            };
            return verify_plan(plan, cfg);
        }
        let k32 = u32::try_from(&k).map_err(|_| DdError::resource("integer too large"))?;
        let plan = RealizationPlan {
            dimension: 2,
            automorphism: integer_plan_map(k32),
            predicted: c.lambda.clone(),
            tag: RealizationTag::A2Integer,
            notes,
            verified_proven: false,
        };
        return verify_plan(plan, cfg);
    }
    // quadratic integer
    if let Some((a, b)) = quadratic_relation(c) {
        if b.sign() == num_bigint::Sign::Plus {
            let a32 = u32::try_from(&a).map_err(|_| DdError::resource("exponent too large"))?;
            let b32 = u32::try_from(&b).map_err(|_| DdError::resource("exponent too large"))?;
            let plan = RealizationPlan {
                dimension: 3,
                automorphism: shift_like_plan_map(a32, b32),
                predicted: c.lambda.clone(),
                tag: RealizationTag::A3ShiftLike,
                notes,
                verified_proven: false,
            };
            return verify_plan(plan, cfg);
        }
        if b.is_negative() {
            // positive conjugate: least possible dimension is 4
            let ai = i64::try_from(&a).map_err(|_| DdError::resource("coefficient too large"))?;
            let bi = i64::try_from(&b).map_err(|_| DdError::resource("coefficient too large"))?;
            match example_rst_parameters(ai, -bi) {
                Some((r, s, t)) => notes.push(format!(
                    "also the dynamical degree of a (non affine-triangular) automorphism of \
                     affine 3-space from the two-step family with (r,s,t) = ({r},{s},{t})"
                )),
                None => notes.push(
                    "dimension-3 realization unknown (open question for quadratic weak \
                     Perron numbers with positive conjugate)"
                        .into(),
                ),
            }
            let plan = RealizationPlan {
                dimension: 4,
                automorphism: quadratic_positive_conjugate_map(ai, bi),
                predicted: c.lambda.clone(),
                tag: RealizationTag::A4Quadratic,
                notes,
                verified_proven: false,
            };
            return verify_plan(plan, cfg);
        }
        return Err(DdError::internal("quadratic with b = 0 should be integer"));
    }
    // general case: need an irreducible non-negative matrix with ρ(A) = λ
    let a = match matrix_witness {
        Some(m) => m.clone(),
        None => match is_handelman(c, 2 * c.defining.degree().unwrap_or(1) as u32 + 4) {
            HandelmanVerdict::Yes(cert) => {
                let comp = companion_matrix(&cert)?;
                if !is_irreducible(&comp) {
                    return Err(DdError::domain(
                        "companion matrix of the certificate is reducible (zero constant \
                         term); supply an irreducible matrix witness",
                    ));
                }
                comp
            }
            _ => {
                return Err(DdError::domain(
                    "general realization needs an irreducible non-negative integer matrix \
                     with spectral radius λ (none supplied, and no Handelman certificate \
                     found to build a companion matrix)",
                ))
            }
        },
    };
    if a.spectral_radius() != c.lambda {
        return Err(DdError::domain(
            "matrix witness spectral radius differs from λ",
        ));
    }
    if !is_irreducible(&a) {
        return Err(DdError::domain("matrix witness must be irreducible"));
    }
    if c.lambda == RealAlgebraicNumber::one() {
        return Err(DdError::domain("doubling construction needs ρ(A) > 1"));
    }
    let plan = RealizationPlan {
        dimension: 2 * a.n(),
        automorphism: doubling_map(&a),
        predicted: c.lambda.clone(),
        tag: RealizationTag::A2nDoubling,
        notes,
        verified_proven: false,
    };
    verify_plan(plan, cfg)
}

/// Re-derive the predicted value through the driver; realization plans are
/// only emitted verified.
fn verify_plan(mut plan: RealizationPlan, cfg: &JobConfig) -> Result<RealizationPlan, DdError> {
    let result = dynamical_degree(&plan.automorphism, cfg)?;
    match result.exact_value() {
        Some(v) if v == &plan.predicted => {
            plan.verified_proven = result.confidence == Confidence::Proven;
            Ok(plan)
        }
        Some(v) => Err(DdError::internal(format!(
            "realization verification failed: driver got {} instead of {}",
            v.decimal(12),
            plan.predicted.decimal(12)
        ))),
        None => Err(DdError::internal(
            "realization verification failed: driver returned a bracket",
        )),
    }
}

/// Companion matrix of a monic polynomial `x^n - sum a_i x^i` with
/// non-negative `a_i`.
fn companion_matrix(cert: &IntPoly) -> Result<IntMatrix, DdError> {
    let n = cert
        .degree()
        .ok_or_else(|| DdError::domain("zero certificate"))?;
    if n == 0 {
        return Err(DdError::domain("constant certificate"));
    }
    let mut rows = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        // row 0: a_{n-1}, ..., a_0 (negated lower coefficients)
        rows[0][i] = -cert.coeffs[n - 1 - i].clone();
        if rows[0][i].is_negative() {
            return Err(DdError::domain("certificate has a positive lower coefficient"));
        }
    }
    for i in 1..n {
        rows[i][i - 1] = Int::one();
    }
    Ok(IntMatrix::new(rows))
}

/// Least dimension of an affine-triangular realization of a quadratic
/// irrational weak Perron number: 3 when the conjugate is negative,
/// 4 when positive.
pub fn minimal_dimension_quadratic(c: &AlgebraicCandidate) -> Result<usize, DdError> {
    let (_, b) = quadratic_relation(c)
        .ok_or_else(|| DdError::domain("candidate is not a quadratic irrational"))?;
    if b.is_positive() {
        Ok(3)
    } else if b.is_negative() {
        Ok(4)
    } else {
        Err(DdError::domain("zero constant term means λ is rational"))
    }
}

/// Parameters `(r, s, t)` with `rs = b`, `r + s + t = a`, `t ≥ 1`, when the
/// two-step family covers `x² - a x + b`.
pub fn example_rst_parameters(a: i64, b: i64) -> Option<(u32, u32, u32)> {
    if a <= 0 || b <= 0 {
        return None;
    }
    for r in 1..=b {
        if b % r != 0 {
            continue;
        }
        let s = b / r;
        let t = a - r - s;
        if t >= 1 {
            return Some((r as u32, s as u32, t as u32));
        }
    }
    None
}

/// The two-step family `(y + x^r z^t, z, x + z^s (y + x^r z^t))` in
/// coordinates `(x, y, z) = (x1, x2, x3)`, with predicted degree the
/// largest root of `x² - (r+s+t) x + rs`.
pub fn examplerst_family(r: u32, s: u32, t: u32, cfg: &JobConfig) -> Result<RealizationPlan, DdError> {
    if r == 0 || s == 0 || t == 0 {
        return Err(DdError::domain("parameters must be positive"));
    }
    let n = 3;
    let mut e_inner = vec![0u32; n];
    e_inner[0] = r;
    e_inner[2] = t;
    let inner = Polynomial::variable(n, 1).add(&monomial_poly(e_inner));
    let mut e_s = vec![0u32; n];
    e_s[2] = s;
    let f3 = Polynomial::variable(n, 0).add(&monomial_poly(e_s).mul(&inner));
    let f = Endomorphism::new(vec![inner, Polynomial::variable(n, 2), f3])?;
    let a = (r + s + t) as i64;
    let b = (r * s) as i64;
    let poly = IntPoly::new(vec![Int::from(b), Int::from(-a), Int::one()]);
    let predicted = largest_real_root(&poly)
        .ok_or_else(|| DdError::internal("family polynomial lost its real roots"))?;
    let mut notes = Vec::new();
    if predicted.to_integer().is_none() {
        notes.push(
            "value has a positive conjugate, hence is not the dynamical degree of any \
             affine-triangular automorphism of affine 3-space"
                .into(),
        );
    }
    let plan = RealizationPlan {
        dimension: 3,
        automorphism: f,
        predicted,
        tag: RealizationTag::ExampleRst,
        notes,
        verified_proven: false,
    };
    verify_plan(plan, cfg)
}

/// Smallest `m ≤ cap` with `λ^m` a Perron number (Lind's criterion promises
/// one exists for weak Perron λ).
pub fn power_becomes_perron(c: &AlgebraicCandidate, cap: u32, cfg: &JobConfig) -> Option<u32> {
    let p = c.defining.squarefree_part();
    let deg = p.degree()?;
    for m in 1..=cap {
        // multiplication-by-(y^m) matrix in Z[y]/(p): integer because p is monic
        let mut cur = IntPoly::one();
        for _ in 0..m {
            cur = poly_mod_monic(&cur.mul(&IntPoly::x()), &p);
        }
        // multiplication matrix columns: y^i * y^m mod p
        let mut cols = Vec::with_capacity(deg);
        let mut power = cur.clone();
        cols.push(coeff_vec(&power, deg));
        for _ in 1..deg {
            power = poly_mod_monic(&power.mul(&IntPoly::x()), &p);
            cols.push(coeff_vec(&power, deg));
        }
        let rows: Vec<Vec<Int>> = (0..deg)
            .map(|i| (0..deg).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mult = IntMatrix::new(rows);
        let char_poly = mult.char_poly();
        if let Some(top) = largest_real_root(&char_poly) {
            let candidate = AlgebraicCandidate {
                defining: char_poly.clone(),
                lambda: top,
            };
            if matches!(is_perron(&candidate, cfg), Ok(Ternary::Yes)) {
                return Some(m);
            }
        }
    }
    None
}

fn poly_mod_monic(p: &IntPoly, m: &IntPoly) -> IntPoly {
    // monic integer division remainder
    let md = m.degree().unwrap();
    let mut rem = p.coeffs.clone();
    while rem.len() > md {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - md;
        if !lead.is_zero() {
            for (k, c) in m.coeffs.iter().enumerate() {
                let sub = c * &lead;
                rem[shift + k] -= sub;
            }
        }
        rem.pop();
    }
    IntPoly::new(rem)
}

fn coeff_vec(p: &IntPoly, len: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); len];
    for (i, c) in p.coeffs.iter().enumerate() {
        v[i] = c.clone();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> JobConfig {
        JobConfig::default()
    }

    fn cand(coeffs: &[i64]) -> AlgebraicCandidate {
        AlgebraicCandidate::largest_root(&IntPoly::from_i64(coeffs)).unwrap()
    }

    #[test]
    fn golden_ratio_classification() {
        let c = cand(&[-1, -1, 1]);
        assert_eq!(is_weak_perron(&c, &cfg()).unwrap(), Ternary::Yes);
        assert_eq!(is_perron(&c, &cfg()).unwrap(), Ternary::Yes);
        assert!(matches!(is_handelman(&c, 8), HandelmanVerdict::Yes(_)));
        assert_eq!(minimal_dimension_quadratic(&c).unwrap(), 3);
    }

    #[test]
    fn positive_conjugate_case() {
        // (3+sqrt5)/2: x^2 - 3x + 1
        let c = cand(&[1, -3, 1]);
        assert_eq!(is_weak_perron(&c, &cfg()).unwrap(), Ternary::Yes);
        assert!(matches!(is_handelman(&c, 8), HandelmanVerdict::No));
        assert_eq!(minimal_dimension_quadratic(&c).unwrap(), 4);
        let (a, b) = quadratic_relation(&c).unwrap();
        assert_eq!((a, b), (Int::from(3), Int::from(-1)));
    }

    #[test]
    fn sqrt2_is_weak_not_strict() {
        let c = cand(&[-2, 0, 1]);
        assert_eq!(is_weak_perron(&c, &cfg()).unwrap(), Ternary::Yes);
        assert_eq!(is_perron(&c, &cfg()).unwrap(), Ternary::No);
        assert!(matches!(is_handelman(&c, 8), HandelmanVerdict::Yes(_)));
        assert_eq!(minimal_dimension_quadratic(&c).unwrap(), 3);
    }

    #[test]
    fn handelman_quadratic_rule() {
        // x^2 - x - 3: a,b >= 0 -> yes
        let c = cand(&[-3, -1, 1]);
        match is_handelman(&c, 8) {
            HandelmanVerdict::Yes(cert) => assert_eq!(cert, IntPoly::from_i64(&[-3, -1, 1])),
            other => panic!("expected yes, got {other:?}"),
        }
    }

    #[test]
    fn realize_integer() {
        let c = cand(&[-5, 1]); // x - 5
        let plan = realize_weak_perron(&c, None, &cfg()).unwrap();
        assert_eq!(plan.dimension, 2);
        assert_eq!(plan.tag, RealizationTag::A2Integer);
        assert!(plan.verified_proven);
    }

    #[test]
    fn realize_shift_like_quadratic() {
        // x^2 - x - 3 -> (x3 + x1 x2^3, x1, x2)
        let c = cand(&[-3, -1, 1]);
        let plan = realize_weak_perron(&c, None, &cfg()).unwrap();
        assert_eq!(plan.dimension, 3);
        assert_eq!(plan.tag, RealizationTag::A3ShiftLike);
        assert!(plan.verified_proven);
        assert_eq!(
            crate::text::format_endomorphism(&plan.automorphism),
            "(x1*x2^3 + x3, x1, x2)"
        );
    }

    #[test]
    fn realize_positive_conjugate_in_dimension_four() {
        // (3+sqrt5)/2 -> (x3 + x1 x2, x4 + x1 x2^2, x1, x2)
        let c = cand(&[1, -3, 1]);
        let plan = realize_weak_perron(&c, None, &cfg()).unwrap();
        assert_eq!(plan.dimension, 4);
        assert_eq!(plan.tag, RealizationTag::A4Quadratic);
        assert!(plan.verified_proven);
        assert_eq!(
            crate::text::format_endomorphism(&plan.automorphism),
            "(x1*x2 + x3, x1*x2^2 + x4, x1, x2)"
        );
    }

    #[test]
    fn realize_plastic_number_by_doubling() {
        // x^3 - x - 1: certificate-shaped; companion matrix is irreducible
        let c = cand(&[-1, -1, 0, 1]);
        let plan = realize_weak_perron(&c, None, &cfg()).unwrap();
        assert_eq!(plan.dimension, 6);
        assert_eq!(plan.tag, RealizationTag::A2nDoubling);
        assert!(plan.verified_proven);
    }

    #[test]
    fn examplerst_table_row_one() {
        let plan = examplerst_family(1, 1, 1, &cfg()).unwrap();
        // (3+sqrt5)/2
        assert_eq!(&plan.predicted.decimal(4), "2.6180");
        assert!(plan.verified_proven);
        assert!(!plan.notes.is_empty());
    }

    #[test]
    fn lind_power_spotcheck() {
        // sqrt2: λ² = 2 is Perron at m = 2
        let c = cand(&[-2, 0, 1]);
        assert_eq!(power_becomes_perron(&c, 12, &cfg()), Some(2));
        // golden ratio is already Perron
        let g = cand(&[-1, -1, 1]);
        assert_eq!(power_becomes_perron(&g, 12, &cfg()), Some(1));
    }
}
