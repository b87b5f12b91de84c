//! The dynamical degree driver.
//!
//! Pipeline: closed forms first (monomial maps, degree-1 maps,
//! permutation-elementary normal forms, dimension-3 affine-triangular
//! reduction), then the spectral route: maximal eigenvalue θ with verified
//! eigenvectors, stability certificates, and the split recursion on
//! zero-weight coordinates. Every exact answer carries a certificate trail
//! and is cross-checked against the degree-growth oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::algebraic::RealAlgebraicNumber;
use crate::config::{Budget, JobConfig};
use crate::error::DdError;
use crate::matrices::{
    eigen_candidates, theta_elem, verify_maximal_eigenvector, IntMatrix,
};
use crate::numberfield::KElem;
use crate::poly::Endomorphism;
use crate::shapes::{classify_shape, perm_elem_normal_form};
use crate::stability::{
    oracle_degree_sequence, stability_test, OracleTable, StabilityVerdict,
};
use crate::text::format_endomorphism;
use crate::unipoly::IntPoly;
use crate::weights::WeightVector;

type Int = BigInt;
type Rat = BigRational;

/// Exact value or a certified bracket.
#[derive(Debug, Clone)]
pub enum DegreeValue {
    Exact(RealAlgebraicNumber),
    Bracket {
        lower: RealAlgebraicNumber,
        upper: RealAlgebraicNumber,
        /// Upper bound known strict (instability theorem applied).
        upper_strict: bool,
    },
}

impl DegreeValue {
    pub fn exact(&self) -> Option<&RealAlgebraicNumber> {
        match self {
            DegreeValue::Exact(v) => Some(v),
            _ => None,
        }
    }
}

/// How solid the exact value is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    /// Backed by a theorem end to end.
    Proven,
    /// Backed by stability up to a finite horizon plus oracle agreement.
    EvidenceBased,
}

/// Certificate trail for a dynamical degree computation.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Arity 1: the degree itself is the dynamical degree.
    Dimension1,
    /// Degree ≤ 1: iterates have bounded degree.
    DegreeOne,
    /// Monomial map: spectral radius of the exponent matrix.
    Monomial { matrix: IntMatrix },
    /// Permutation-elementary closed form.
    PermutationElementary {
        m: usize,
        achieving: Option<Vec<u32>>,
        mu: WeightVector,
    },
    /// Dimension-3 affine-triangular reduction loop.
    AffineTriangular3 {
        steps: usize,
        reduced: String,
        theta_witness: IntMatrix,
    },
    /// Squeeze 1 ≤ λ ≤ θ = 1.
    ThetaOne { witness: IntMatrix },
    /// Stability of the weighted leading part at a maximal eigenvector.
    Stability {
        witness: IntMatrix,
        mu: WeightVector,
        verdict: StabilityVerdict,
    },
    /// Split along zero-weight coordinates; the inner result resolves it.
    Split {
        mu: WeightVector,
        zero_coordinates: Vec<usize>,
        inner: Box<DynamicalDegreeResult>,
        /// True when λ(f̂) = θ closed the case; false when stability did.
        inner_attained_theta: bool,
        stability: Option<StabilityVerdict>,
        witness: IntMatrix,
    },
    /// No exact branch closed; bracket from the squeeze and any splits.
    BracketOnly { reason: String },
}

/// Result record of the driver.
#[derive(Debug, Clone)]
pub struct DynamicalDegreeResult {
    pub value: DegreeValue,
    pub confidence: Confidence,
    pub certificate: Certificate,
    pub oracle: Option<OracleTable>,
}

impl DynamicalDegreeResult {
    pub fn exact_value(&self) -> Option<&RealAlgebraicNumber> {
        self.value.exact()
    }
}

/// Oracle agreement tolerance for evidence-based exactness.
const EVIDENCE_TOL: f64 = 1e-3;
/// Hard tolerance for the upper-bound consistency check.
const UPPER_TOL: f64 = 1e-6;

/// Compute the dynamical degree of a dominant endomorphism.
pub fn dynamical_degree(f: &Endomorphism, cfg: &JobConfig) -> Result<DynamicalDegreeResult, DdError> {
    if !f.is_dominant() {
        return Err(DdError::NotDominant {
            jacobian: "0".into(),
        });
    }
    let mut result = dynamical_degree_dominant(f, cfg)?;
    // attach and cross-check the oracle at the top level; the cross-check
    // only needs degree bounds, so it runs under a tight term cap and
    // degrades to flagged max-plus upper bounds on heavy maps
    let budget = Budget::terms(cfg.budget_terms.min(5_000));
    let depth = oracle_depth_for(f, cfg);
    let oracle = oracle_degree_sequence(f, depth, &budget)?;
    if let DegreeValue::Exact(v) = &result.value {
        let target = v.to_f64();
        if !oracle.upper_bounds_respected(target, UPPER_TOL) {
            return Err(DdError::internal(format!(
                "exact value {target} exceeds a certified oracle upper bound"
            )));
        }
        if result.confidence == Confidence::EvidenceBased
            && oracle.agreement_error(target) > EVIDENCE_TOL
            && target > 1.0 + EVIDENCE_TOL
        {
            // evidence does not line up: degrade honestly to a bracket
            let upper = theta_upper_of(&result).unwrap_or_else(|| v.clone());
            result = DynamicalDegreeResult {
                value: DegreeValue::Bracket {
                    lower: RealAlgebraicNumber::one(),
                    upper,
                    upper_strict: false,
                },
                confidence: Confidence::EvidenceBased,
                certificate: Certificate::BracketOnly {
                    reason: "stability horizon evidence disagrees with the degree oracle".into(),
                },
                oracle: None,
            };
        }
    }
    result.oracle = Some(oracle);
    Ok(result)
}

/// Deeper oracle for maps whose degree growth is cheap to follow exactly
/// (no cancellation): ratio estimators need the extra depth when secondary
/// eigenvalues sit close to θ.
fn oracle_depth_for(f: &Endomorphism, cfg: &JobConfig) -> u32 {
    if f.components().iter().all(|c| c.is_monomial()) {
        cfg.oracle_depth.max(48)
    } else {
        cfg.oracle_depth
    }
}

fn theta_upper_of(result: &DynamicalDegreeResult) -> Option<RealAlgebraicNumber> {
    match &result.certificate {
        Certificate::Stability { .. } | Certificate::Split { .. } => {
            result.value.exact().cloned()
        }
        _ => None,
    }
}

fn dynamical_degree_dominant(
    f: &Endomorphism,
    cfg: &JobConfig,
) -> Result<DynamicalDegreeResult, DdError> {
    let n = f.arity();
    // arity 1: λ = deg f
    if n == 1 {
        let d = f.degree().unwrap_or(0);
        return Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(RealAlgebraicNumber::from_int(d as i64)),
            confidence: Confidence::Proven,
            certificate: Certificate::Dimension1,
            oracle: None,
        });
    }
    // degree <= 1: submultiplicativity pins λ = 1
    if f.degree().unwrap_or(0) <= 1 {
        return Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(RealAlgebraicNumber::one()),
            confidence: Confidence::Proven,
            certificate: Certificate::DegreeOne,
            oracle: None,
        });
    }
    let shape = classify_shape(f);
    // monomial maps: λ = ρ(M)
    if let Some(matrix) = &shape.monomial {
        if matrix.det() != Int::from(0) {
            let rho = matrix.spectral_radius();
            return Ok(DynamicalDegreeResult {
                value: DegreeValue::Exact(rho),
                confidence: Confidence::Proven,
                certificate: Certificate::Monomial {
                    matrix: matrix.clone(),
                },
                oracle: None,
            });
        }
    }
    // permutation-elementary closed form
    if shape.permutation_elementary.is_some() {
        if let Ok(nf) = perm_elem_normal_form(f) {
            let d = crate::shapes::perm_elem_dynamical_degree(&nf)?;
            return Ok(DynamicalDegreeResult {
                value: DegreeValue::Exact(d.theta),
                confidence: Confidence::Proven,
                certificate: Certificate::PermutationElementary {
                    m: nf.m,
                    achieving: d.achieving,
                    mu: d.mu,
                },
                oracle: None,
            });
        }
    }
    // dimension-3 affine-triangular reduction
    if n == 3 && (shape.permutation_triangular.is_some() || shape.affine_triangular.is_some()) {
        if let Ok(res) = crate::dim3::affine_triangular_a3_dynamical_degree(f, cfg) {
            return Ok(res);
        }
    }
    spectral_route(f, cfg)
}

fn spectral_route(f: &Endomorphism, cfg: &JobConfig) -> Result<DynamicalDegreeResult, DdError> {
    let budget = Budget::from(cfg);
    let cands = eigen_candidates(f, cfg.budget_matrices)?;
    let theta = cands.theta.clone();
    let _te = cands.theta_elem.clone();
    let witness = cands
        .witnesses
        .first()
        .cloned()
        .ok_or_else(|| DdError::internal("no supported matrices"))?;
    // θ = 1 squeezes λ = 1 (Perron bounds 1 ≤ λ ≤ θ)
    if theta == RealAlgebraicNumber::one() {
        return Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(RealAlgebraicNumber::one()),
            confidence: Confidence::Proven,
            certificate: Certificate::ThetaOne { witness },
            oracle: None,
        });
    }
    let horizon = cfg.horizon_for(f.arity());
    let mut evidence: Option<DynamicalDegreeResult> = None;
    let mut bracket_lower = RealAlgebraicNumber::one();
    let mut upper_strict = false;
    let mut saw_candidate = false;

    for (mu, wit) in &cands.verified {
        saw_candidate = true;
        let zeros = mu.zero_indices();
        if zeros.is_empty() {
            let report = stability_test(f, mu, horizon, &budget)?;
            match &report.verdict {
                StabilityVerdict::StableProven(_) => {
                    return Ok(DynamicalDegreeResult {
                        value: DegreeValue::Exact(theta),
                        confidence: Confidence::Proven,
                        certificate: Certificate::Stability {
                            witness: wit.clone(),
                            mu: mu.clone(),
                            verdict: report.verdict,
                        },
                        oracle: None,
                    });
                }
                StabilityVerdict::StableUpTo(_) => {
                    if evidence.is_none() {
                        evidence = Some(DynamicalDegreeResult {
                            value: DegreeValue::Exact(theta.clone()),
                            confidence: Confidence::EvidenceBased,
                            certificate: Certificate::Stability {
                                witness: wit.clone(),
                                mu: mu.clone(),
                                verdict: report.verdict,
                            },
                            oracle: None,
                        });
                    }
                }
                StabilityVerdict::UnstableAt(_) => {
                    // positive μ and θ > 1: instability proves λ < θ
                    upper_strict = true;
                }
            }
        } else {
            // split recursion on the zero-weight coordinates
            let inner_f = crate::stability::project(f, &zeros)?;
            if !inner_f.is_dominant() {
                continue;
            }
            let inner = dynamical_degree_dominant(&inner_f, cfg)?;
            let Some(inner_val) = inner.value.exact().cloned() else {
                continue;
            };
            if inner_val == theta {
                let proven = inner.confidence == Confidence::Proven;
                let result = DynamicalDegreeResult {
                    value: DegreeValue::Exact(theta.clone()),
                    confidence: if proven {
                        Confidence::Proven
                    } else {
                        Confidence::EvidenceBased
                    },
                    certificate: Certificate::Split {
                        mu: mu.clone(),
                        zero_coordinates: zeros.clone(),
                        inner: Box::new(inner),
                        inner_attained_theta: true,
                        stability: None,
                        witness: wit.clone(),
                    },
                    oracle: None,
                };
                if proven {
                    return Ok(result);
                }
                if evidence.is_none() {
                    evidence = Some(result);
                }
                continue;
            }
            // λ(f̂) < θ: stability decides
            if inner_val > bracket_lower {
                bracket_lower = inner_val.clone();
            }
            let report = stability_test(f, mu, horizon, &budget)?;
            match &report.verdict {
                StabilityVerdict::StableProven(_) => {
                    return Ok(DynamicalDegreeResult {
                        value: DegreeValue::Exact(theta),
                        confidence: Confidence::Proven,
                        certificate: Certificate::Split {
                            mu: mu.clone(),
                            zero_coordinates: zeros.clone(),
                            inner: Box::new(inner),
                            inner_attained_theta: false,
                            stability: Some(report.verdict),
                            witness: wit.clone(),
                        },
                        oracle: None,
                    });
                }
                StabilityVerdict::StableUpTo(_) => {
                    if evidence.is_none() {
                        evidence = Some(DynamicalDegreeResult {
                            value: DegreeValue::Exact(theta.clone()),
                            confidence: Confidence::EvidenceBased,
                            certificate: Certificate::Split {
                                mu: mu.clone(),
                                zero_coordinates: zeros.clone(),
                                inner: Box::new(inner),
                                inner_attained_theta: false,
                                stability: Some(report.verdict),
                                witness: wit.clone(),
                            },
                            oracle: None,
                        });
                    }
                }
                StabilityVerdict::UnstableAt(_) => {
                    upper_strict = true;
                }
            }
        }
    }
    if let Some(e) = evidence {
        return Ok(e);
    }
    // no exact branch: certified bracket [max(1, λ(f̂)...), θ]
    let reason = if !saw_candidate {
        "no verified maximal eigenvector candidate".to_string()
    } else if upper_strict {
        "instability certifies λ < θ; no branch pinned the exact value".to_string()
    } else {
        "stability undecided within the horizon".to_string()
    };
    Ok(DynamicalDegreeResult {
        value: DegreeValue::Bracket {
            lower: bracket_lower,
            upper: theta,
            upper_strict,
        },
        confidence: Confidence::EvidenceBased,
        certificate: Certificate::BracketOnly { reason },
        oracle: None,
    })
}

/// Resolve λ(f) along one *given* maximal eigenvector (exposes the split
/// recursion of the driver for a chosen μ; used by diagnostics and tests).
pub fn resolve_with_eigenvector(
    f: &Endomorphism,
    mu: &WeightVector,
    cfg: &JobConfig,
) -> Result<DynamicalDegreeResult, DdError> {
    if !f.is_dominant() {
        return Err(DdError::NotDominant {
            jacobian: "0".into(),
        });
    }
    let cands = eigen_candidates(f, cfg.budget_matrices)?;
    let theta = cands.theta.clone();
    let te = theta_elem(&theta);
    if !verify_maximal_eigenvector(f, mu, &te) {
        return Err(DdError::domain(
            "the given weight vector is not a maximal eigenvector",
        ));
    }
    let witness = cands.witnesses[0].clone();
    if theta == RealAlgebraicNumber::one() {
        return Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(RealAlgebraicNumber::one()),
            confidence: Confidence::Proven,
            certificate: Certificate::ThetaOne { witness },
            oracle: None,
        });
    }
    let budget = Budget::from(cfg);
    let horizon = cfg.horizon_for(f.arity());
    let zeros = mu.zero_indices();
    if !zeros.is_empty() {
        let inner_f = crate::stability::project(f, &zeros)?;
        let inner = dynamical_degree_dominant(&inner_f, cfg)?;
        if let Some(inner_val) = inner.value.exact().cloned() {
            if inner_val == theta {
                let proven = inner.confidence == Confidence::Proven;
                return Ok(DynamicalDegreeResult {
                    value: DegreeValue::Exact(theta),
                    confidence: if proven {
                        Confidence::Proven
                    } else {
                        Confidence::EvidenceBased
                    },
                    certificate: Certificate::Split {
                        mu: mu.clone(),
                        zero_coordinates: zeros,
                        inner: Box::new(inner),
                        inner_attained_theta: true,
                        stability: None,
                        witness,
                    },
                    oracle: None,
                });
            }
        }
    }
    let report = stability_test(f, mu, horizon, &budget)?;
    match report.verdict {
        StabilityVerdict::StableProven(_) => Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(theta),
            confidence: Confidence::Proven,
            certificate: Certificate::Stability {
                witness,
                mu: mu.clone(),
                verdict: report.verdict,
            },
            oracle: None,
        }),
        StabilityVerdict::StableUpTo(_) => Ok(DynamicalDegreeResult {
            value: DegreeValue::Exact(theta),
            confidence: Confidence::EvidenceBased,
            certificate: Certificate::Stability {
                witness,
                mu: mu.clone(),
                verdict: report.verdict,
            },
            oracle: None,
        }),
        StabilityVerdict::UnstableAt(r) => Ok(DynamicalDegreeResult {
            value: DegreeValue::Bracket {
                lower: RealAlgebraicNumber::one(),
                upper: theta,
                upper_strict: mu.is_strictly_positive(),
            },
            confidence: Confidence::EvidenceBased,
            certificate: Certificate::BracketOnly {
                reason: format!("μ-leading part vanishes at iterate {r}"),
            },
            oracle: None,
        }),
    }
}

/// Serializable record of an algebraic number: defining polynomial
/// (low-to-high), isolating interval, and a truncated decimal.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AlgebraicRecord {
    pub defining: Vec<String>,
    pub interval: [String; 2],
    pub approx: String,
}

impl AlgebraicRecord {
    pub fn of(v: &RealAlgebraicNumber, digits: u32) -> Self {
        let (lo, hi) = v.interval();
        AlgebraicRecord {
            defining: v.defining().coeffs.iter().map(|c| c.to_string()).collect(),
            interval: [lo.to_string(), hi.to_string()],
            approx: v.decimal(digits),
        }
    }
}

/// Pretty one-line description of a certificate (human output).
pub fn describe_certificate(cert: &Certificate, digits: u32) -> String {
    match cert {
        Certificate::Dimension1 => "dimension 1: λ equals the degree".into(),
        Certificate::DegreeOne => "degree ≤ 1: iterate degrees are bounded".into(),
        Certificate::Monomial { matrix } => format!(
            "monomial map: λ = ρ(M) for the exponent matrix {}",
            matrix_inline(matrix)
        ),
        Certificate::PermutationElementary { m, achieving, .. } => match achieving {
            Some(t) => format!(
                "permutation-elementary normal form (m = {m}), achieved by exponent tuple {t:?}"
            ),
            None => format!("permutation-elementary normal form (m = {m}), inner permutation"),
        },
        Certificate::AffineTriangular3 { steps, reduced, .. } => format!(
            "dimension-3 reduction: {steps} conjugation step(s) to {reduced}"
        ),
        Certificate::ThetaOne { .. } => "maximal eigenvalue 1 squeezes λ = 1".into(),
        Certificate::Stability { mu, verdict, .. } => format!(
            "stability at μ = {} ({:?})",
            weights_inline(mu, digits),
            verdict
        ),
        Certificate::Split {
            mu,
            zero_coordinates,
            inner_attained_theta,
            ..
        } => format!(
            "split on zero coordinates {:?} of μ = {}; inner {} θ",
            zero_coordinates
                .iter()
                .map(|z| z + 1)
                .collect::<Vec<_>>(),
            weights_inline(mu, digits),
            if *inner_attained_theta {
                "attains"
            } else {
                "stays below"
            }
        ),
        Certificate::BracketOnly { reason } => format!("bracket only: {reason}"),
    }
}

pub fn matrix_inline(m: &IntMatrix) -> String {
    let rows: Vec<String> = m
        .rows
        .iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn weights_inline(mu: &WeightVector, digits: u32) -> String {
    let entries: Vec<String> = mu.entries().iter().map(|e| e.decimal(digits.min(6))).collect();
    format!("({})", entries.join(", "))
}

/// Helpers reused by the CLI and tests.
pub fn endo_text(f: &Endomorphism) -> String {
    format_endomorphism(f)
}

/// Exact algebraic value of `deg^(1/r)` (largest real root of `x^r - deg`).
pub fn root_upper_bound(deg: &Int, r: u32) -> Option<RealAlgebraicNumber> {
    let mut coeffs = vec![Int::from(0); r as usize + 1];
    coeffs[0] = -deg.clone();
    coeffs[r as usize] = Int::from(1);
    crate::algebraic::largest_real_root(&IntPoly::new(coeffs))
}

// silence unused-import lints for items used only in some cfgs
#[allow(unused)]
fn _unused(_: &Rat) {}
#[allow(unused)]
fn _unused2() {
    let _ = KElem::zero;
    let _: Option<fn(&Rat) -> Option<f64>> = Some(Rat::to_f64);
}
