//! Human tables and line-delimited structured records.
//!
//! Record mode emits one JSON object per line with a stable `schema`
//! version field; identical inputs and configuration produce byte-identical
//! output.

use serde::Serialize;

use ddeg_core::algebraic::RealAlgebraicNumber;
use ddeg_core::config::JobConfig;
use ddeg_core::degree::{
    describe_certificate, matrix_inline, weights_inline, AlgebraicRecord, Certificate,
    Confidence, DegreeValue, DynamicalDegreeResult,
};
use ddeg_core::dim3::SpectrumEntry;
use ddeg_core::perron::{
    AlgebraicCandidate, HandelmanVerdict, RealizationPlan, RealizationTag, Ternary,
};
use ddeg_core::poly::Endomorphism;
use ddeg_core::stability::OracleTable;
use ddeg_core::text::format_endomorphism;

const SCHEMA: &str = "ddeg.v1";

#[derive(Serialize)]
struct ConfigRecord {
    precision_bits: u32,
    digits: u32,
    oracle_depth: u32,
    horizon: Option<u32>,
    budget_terms: usize,
    budget_matrices: usize,
}

impl ConfigRecord {
    fn of(cfg: &JobConfig) -> Self {
        ConfigRecord {
            precision_bits: cfg.precision_bits,
            digits: cfg.digits,
            oracle_depth: cfg.oracle_depth,
            horizon: cfg.horizon,
            budget_terms: cfg.budget_terms,
            budget_matrices: cfg.budget_matrices,
        }
    }
}

#[derive(Serialize)]
struct ValueRecord {
    kind: &'static str,
    exact: Option<AlgebraicRecord>,
    lower: Option<AlgebraicRecord>,
    upper: Option<AlgebraicRecord>,
    upper_strict: Option<bool>,
}

impl ValueRecord {
    fn of(value: &DegreeValue, digits: u32) -> Self {
        match value {
            DegreeValue::Exact(v) => ValueRecord {
                kind: "exact",
                exact: Some(AlgebraicRecord::of(v, digits)),
                lower: None,
                upper: None,
                upper_strict: None,
            },
            DegreeValue::Bracket {
                lower,
                upper,
                upper_strict,
            } => ValueRecord {
                kind: "bracket",
                exact: None,
                lower: Some(AlgebraicRecord::of(lower, digits)),
                upper: Some(AlgebraicRecord::of(upper, digits)),
                upper_strict: Some(*upper_strict),
            },
        }
    }
}

#[derive(Serialize)]
struct OracleRowRecord {
    r: u32,
    degree: String,
    root: f64,
    ratio: Option<f64>,
    exact: bool,
}

fn oracle_rows(table: &OracleTable) -> Vec<OracleRowRecord> {
    table
        .rows
        .iter()
        .map(|r| OracleRowRecord {
            r: r.r,
            degree: r.degree.clone(),
            root: r.root,
            ratio: r.ratio,
            exact: r.exact,
        })
        .collect()
}

#[derive(Serialize)]
struct ComputeRecord {
    schema: &'static str,
    command: &'static str,
    input: String,
    arity: usize,
    degree: u64,
    value: ValueRecord,
    confidence: &'static str,
    certificate: String,
    oracle: Vec<OracleRowRecord>,
    config: ConfigRecord,
}

/// Print a compute result; returns true when the result is exact and
/// proven (exit code 0).
pub fn print_compute(
    input: &str,
    f: &Endomorphism,
    result: &DynamicalDegreeResult,
    cfg: &JobConfig,
    records: bool,
) -> bool {
    let confidence = match result.confidence {
        Confidence::Proven => "proven",
        Confidence::EvidenceBased => "evidence-based",
    };
    let cert_text = describe_certificate(&result.certificate, cfg.digits);
    if records {
        let rec = ComputeRecord {
            schema: SCHEMA,
            command: "compute",
            input: input.to_string(),
            arity: f.arity(),
            degree: f.degree().unwrap_or(0),
            value: ValueRecord::of(&result.value, cfg.digits),
            confidence,
            certificate: cert_text,
            oracle: result.oracle.as_ref().map(oracle_rows).unwrap_or_default(),
            config: ConfigRecord::of(cfg),
        };
        println!("{}", serde_json::to_string(&rec).unwrap());
    } else {
        println!("input:       {}", format_endomorphism(f));
        match &result.value {
            DegreeValue::Exact(v) => {
                println!("lambda:      {} (exact, {confidence})", v.decimal(cfg.digits));
                println!("defining:    {}", poly_text(v));
            }
            DegreeValue::Bracket {
                lower,
                upper,
                upper_strict,
            } => {
                println!(
                    "lambda in:   [{}, {}{}",
                    lower.decimal(cfg.digits),
                    upper.decimal(cfg.digits),
                    if *upper_strict { ")" } else { "]" },
                );
            }
        }
        println!("certificate: {cert_text}");
        print_certificate_details(&result.certificate, cfg);
        if let Some(oracle) = &result.oracle {
            println!("oracle (degree growth):");
            for row in &oracle.rows {
                println!(
                    "  r={:<3} deg={:<24} root={:<12.6} ratio={}{}",
                    row.r,
                    row.degree,
                    row.root,
                    row.ratio
                        .map(|x| format!("{x:.6}"))
                        .unwrap_or_else(|| "-".into()),
                    if row.exact { "" } else { "  (upper bound)" },
                );
            }
        }
    }
    matches!(result.value, DegreeValue::Exact(_)) && result.confidence == Confidence::Proven
}

fn print_certificate_details(cert: &Certificate, cfg: &JobConfig) {
    match cert {
        Certificate::Stability { witness, mu, .. } => {
            println!("  witness matrix: {}", matrix_inline(witness));
            println!("  eigenvector μ:  {}", weights_inline(mu, cfg.digits));
        }
        Certificate::Split {
            witness,
            mu,
            inner,
            ..
        } => {
            println!("  witness matrix: {}", matrix_inline(witness));
            println!("  eigenvector μ:  {}", weights_inline(mu, cfg.digits));
            println!(
                "  inner result:   {}",
                match &inner.value {
                    DegreeValue::Exact(v) => v.decimal(12),
                    _ => "bracket".into(),
                }
            );
        }
        Certificate::AffineTriangular3 { reduced, .. } => {
            println!("  reduced form:   {reduced}");
        }
        Certificate::PermutationElementary { mu, .. } => {
            println!("  eigenvector μ:  {}", weights_inline(mu, cfg.digits));
        }
        _ => {}
    }
}

fn poly_text(v: &RealAlgebraicNumber) -> String {
    let p = v.defining();
    let zero = num_bigint::BigInt::from(0);
    let mut parts = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        if c == &zero {
            continue;
        }
        let term = match i {
            0 => format!("{c}"),
            1 => format!("{c}*x"),
            _ => format!("{c}*x^{i}"),
        };
        parts.push(term);
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[derive(Serialize)]
struct SpectrumRecord {
    schema: &'static str,
    command: &'static str,
    family: &'static str,
    degree: u32,
    triple: (u32, u32, u32),
    value: AlgebraicRecord,
    new_at: u32,
    witness_triangular: String,
    witness_monomial_style: String,
}

pub fn print_enumeration(
    theorem1: bool,
    degree: u32,
    entries: &[SpectrumEntry],
    new_only: bool,
    cfg: &JobConfig,
    records: bool,
) {
    let family = if theorem1 { "theorem1" } else { "shiftlike" };
    let shown: Vec<&SpectrumEntry> = entries
        .iter()
        .filter(|e| !new_only || e.new_at == degree)
        .collect();
    if records {
        for e in shown {
            let rec = SpectrumRecord {
                schema: SCHEMA,
                command: "enumerate",
                family,
                degree,
                triple: e.triple,
                value: AlgebraicRecord::of(&e.value, cfg.digits),
                new_at: e.new_at,
                witness_triangular: format_endomorphism(&e.witness_triangular),
                witness_monomial_style: format_endomorphism(&e.witness_monomial_style),
            };
            println!("{}", serde_json::to_string(&rec).unwrap());
        }
    } else {
        println!(
            "{family} spectrum at degree {degree} ({} values{}):",
            shown.len(),
            if new_only { ", new only" } else { "" },
        );
        println!(
            "{:<12} {:<34} {:<8} {}",
            "triple", "value", "new at", "witness"
        );
        for e in shown {
            println!(
                "{:<12} {:<34} {:<8} {}",
                format!("{:?}", e.triple),
                e.value.decimal(cfg.digits.min(30)),
                e.new_at,
                format_endomorphism(&e.witness_triangular),
            );
        }
    }
}

#[derive(Serialize)]
struct HandelmanRecord {
    verdict: &'static str,
    certificate: Option<Vec<String>>,
    cap: Option<u32>,
}

#[derive(Serialize)]
struct RealizationRecord {
    dimension: usize,
    tag: &'static str,
    automorphism: String,
    predicted: AlgebraicRecord,
    verified_proven: bool,
    notes: Vec<String>,
}

fn realization_record(plan: &RealizationPlan, digits: u32) -> RealizationRecord {
    RealizationRecord {
        dimension: plan.dimension,
        tag: tag_name(plan.tag),
        automorphism: format_endomorphism(&plan.automorphism),
        predicted: AlgebraicRecord::of(&plan.predicted, digits),
        verified_proven: plan.verified_proven,
        notes: plan.notes.clone(),
    }
}

fn tag_name(tag: RealizationTag) -> &'static str {
    match tag {
        RealizationTag::A1Identity => "identity",
        RealizationTag::A2Integer => "A2-integer",
        RealizationTag::A3ShiftLike => "A3-shiftlike",
        RealizationTag::A4Quadratic => "A4-quadratic",
        RealizationTag::A2nDoubling => "A2n-doubling",
        RealizationTag::ExampleRst => "examplerst",
    }
}

#[derive(Serialize)]
struct ClassifyRecord {
    schema: &'static str,
    command: &'static str,
    input: String,
    lambda: AlgebraicRecord,
    weak_perron: &'static str,
    perron: &'static str,
    handelman: HandelmanRecord,
    minimal_dimension: Option<usize>,
    realization: Option<RealizationRecord>,
    config: ConfigRecord,
}

fn ternary_name(t: Ternary) -> &'static str {
    match t {
        Ternary::Yes => "yes",
        Ternary::No => "no",
        Ternary::Inconclusive => "inconclusive",
    }
}

#[allow(clippy::too_many_arguments)]
pub fn print_classification(
    input: &str,
    cand: &AlgebraicCandidate,
    weak: Ternary,
    strict: Ternary,
    handelman: &HandelmanVerdict,
    min_dim: Option<usize>,
    realization: Option<&RealizationPlan>,
    cfg: &JobConfig,
    records: bool,
) {
    let hrec = match handelman {
        HandelmanVerdict::Yes(cert) => HandelmanRecord {
            verdict: "yes",
            certificate: Some(cert.coeffs.iter().map(|c| c.to_string()).collect()),
            cap: None,
        },
        HandelmanVerdict::No => HandelmanRecord {
            verdict: "no",
            certificate: None,
            cap: None,
        },
        HandelmanVerdict::Unknown(cap) => HandelmanRecord {
            verdict: "unknown",
            certificate: None,
            cap: Some(*cap),
        },
    };
    if records {
        let rec = ClassifyRecord {
            schema: SCHEMA,
            command: "classify",
            input: input.to_string(),
            lambda: AlgebraicRecord::of(&cand.lambda, cfg.digits),
            weak_perron: ternary_name(weak),
            perron: ternary_name(strict),
            handelman: hrec,
            minimal_dimension: min_dim,
            realization: realization.map(|p| realization_record(p, cfg.digits)),
            config: ConfigRecord::of(cfg),
        };
        println!("{}", serde_json::to_string(&rec).unwrap());
    } else {
        println!("number:            {}", cand.lambda.decimal(cfg.digits));
        println!("polynomial:        {input}");
        println!("weak Perron:       {}", ternary_name(weak));
        println!("Perron:            {}", ternary_name(strict));
        match handelman {
            HandelmanVerdict::Yes(cert) => println!(
                "Handelman:         yes (certificate coefficients {:?})",
                cert.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            ),
            HandelmanVerdict::No => println!("Handelman:         no"),
            HandelmanVerdict::Unknown(cap) => {
                println!("Handelman:         unknown (searched up to degree {cap})")
            }
        }
        match min_dim {
            Some(d) => println!("minimal dimension: {d}"),
            None => println!("minimal dimension: n/a (not a quadratic irrational)"),
        }
        if let Some(plan) = realization {
            println!(
                "realization:       dimension {} via {}: {}",
                plan.dimension,
                tag_name(plan.tag),
                format_endomorphism(&plan.automorphism)
            );
            for note in &plan.notes {
                println!("note:              {note}");
            }
        }
    }
}

#[derive(Serialize)]
struct RealizeRecord {
    schema: &'static str,
    command: &'static str,
    input: String,
    lambda: AlgebraicRecord,
    realization: RealizationRecord,
    config: ConfigRecord,
}

pub fn print_realization(
    input: &str,
    cand: &AlgebraicCandidate,
    plan: &RealizationPlan,
    cfg: &JobConfig,
    records: bool,
) {
    if records {
        let rec = RealizeRecord {
            schema: SCHEMA,
            command: "realize",
            input: input.to_string(),
            lambda: AlgebraicRecord::of(&cand.lambda, cfg.digits),
            realization: realization_record(plan, cfg.digits),
            config: ConfigRecord::of(cfg),
        };
        println!("{}", serde_json::to_string(&rec).unwrap());
    } else {
        println!("number:       {}", cand.lambda.decimal(cfg.digits));
        println!("dimension:    {}", plan.dimension);
        println!("construction: {}", tag_name(plan.tag));
        println!("automorphism: {}", format_endomorphism(&plan.automorphism));
        println!(
            "verified:     {}",
            if plan.verified_proven {
                "exact (proven)"
            } else {
                "exact (evidence-based)"
            }
        );
        for note in &plan.notes {
            println!("note:         {note}");
        }
    }
}

#[derive(Serialize)]
struct OracleRecord {
    schema: &'static str,
    command: &'static str,
    input: String,
    rows: Vec<OracleRowRecord>,
    truncated: bool,
    config: ConfigRecord,
}

pub fn print_oracle(input: &str, table: &OracleTable, cfg: &JobConfig, records: bool) {
    if records {
        let rec = OracleRecord {
            schema: SCHEMA,
            command: "oracle",
            input: input.to_string(),
            rows: oracle_rows(table),
            truncated: table.truncated,
            config: ConfigRecord::of(cfg),
        };
        println!("{}", serde_json::to_string(&rec).unwrap());
    } else {
        println!("degree growth of {input}:");
        for row in &table.rows {
            println!(
                "  r={:<3} deg={:<24} root={:<12.6} ratio={}{}",
                row.r,
                row.degree,
                row.root,
                row.ratio
                    .map(|x| format!("{x:.6}"))
                    .unwrap_or_else(|| "-".into()),
                if row.exact { "" } else { "  (upper bound)" },
            );
        }
        if table.truncated {
            println!("  (term budget reached: later rows are max-plus upper bounds)");
        }
    }
}
