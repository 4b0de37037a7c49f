//! Report assembly for every subcommand. Nothing here prints or exits.

use serde::Serialize;

use schubert_core::gr2::{verify_gr2, Gr2Config, Gr2Report};
use schubert_core::perm::{classify, decompose, Classification, Component, Decomposition, Verdict};
use schubert_core::product::{verify_composite, CompositeReport};
use schubert_core::variety::{is_stationary_at, sample_regular_indexed, DEFAULT_ENTRY_BOUND};
use schubert_core::witness::{certify_nonminimal, WitnessCertificate, WitnessError};
use schubert_core::{Cell, PartialPermutation, Rational, RotheDiagram};

pub const TOOL_VERSION: &str = concat!("schubert ", env!("CARGO_PKG_VERSION"));

/// Why a subcommand did not produce a report.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input, or a bad flag value.
    Input(String),
    /// An invariant of the implementation was violated.
    Internal(String),
    /// The input is valid but outside the command's domain.
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) | Failure::Precondition(m) => m,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: PartialPermutation,
    pub classification: Classification,
    pub diagram: DiagramSummary,
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub seed: u64,
    pub tool_version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct DiagramSummary {
    pub cells: Vec<Cell>,
    pub components: Vec<Component>,
}

impl DiagramSummary {
    fn of(w: &PartialPermutation) -> Self {
        let d = RotheDiagram::new(w);
        DiagramSummary { cells: d.cells().to_vec(), components: d.components().to_vec() }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Witness { certificate: Box<WitnessCertificate> },
    Sampling(Box<SamplingSummary>),
    Decomposition(Box<DecompositionEvidence>),
}

/// Stationarity at seeded regular points, plus the covering result.
#[derive(Debug, Serialize)]
pub struct SamplingSummary {
    /// The class whose theorem backs a `minimal` verdict, if any.
    pub proof_path: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub stationary: usize,
    /// Indices of sampled points with nonzero obstruction.
    pub non_stationary: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gr2: Option<Gr2Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<WitnessCertificate>,
}

#[derive(Debug, Serialize)]
pub struct DecompositionEvidence {
    pub decomposition: Decomposition,
    pub factors: Vec<Classification>,
    pub composite: CompositeReport,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn base(command: &'static str, w: &PartialPermutation, evidence: Evidence, seed: u64) -> Report {
    let classification = classify(w);
    Report {
        command,
        input: w.clone(),
        verdict: classification.verdict,
        classification,
        diagram: DiagramSummary::of(w),
        evidence,
        seed,
        tool_version: TOOL_VERSION,
    }
}

fn proof_path(c: &Classification) -> Option<String> {
    if c.verdict != Verdict::Minimal {
        return None;
    }
    Some(
        if c.in_gr2 {
            "Gr2 (literal block form)"
        } else if c.in_gr2_tilde {
            "~Gr2 (same diagram as a Gr2 partial permutation)"
        } else {
            "product of ~Gr2 factors, zero block and Euclidean factor"
        }
        .to_string(),
    )
}

/// Seeded regular points and the per-point stationarity test.
fn sample_stationarity(w: &PartialPermutation, opts: Options) -> Result<(usize, Vec<u64>), Failure> {
    let mut stationary = 0;
    let mut non_stationary = Vec::new();
    for index in 0..opts.samples as u64 {
        let q = sample_regular_indexed(w, opts.seed, index, DEFAULT_ENTRY_BOUND).map_err(internal)?;
        if is_stationary_at(w, &q.point).map_err(internal)? {
            stationary += 1;
        } else {
            non_stationary.push(index);
        }
    }
    Ok((stationary, non_stationary))
}

fn decomposition_evidence(w: &PartialPermutation, opts: Options) -> Result<DecompositionEvidence, Failure> {
    let decomposition = decompose(w).map_err(|e| {
        Failure::Precondition(format!("decompose needs a vexillary input with (1,1) in its diagram: {e}"))
    })?;
    let factors = decomposition.factors.iter().map(|f| classify(&f.w)).collect();
    let composite = verify_composite(w, &decomposition, opts.seed, opts.samples, DEFAULT_ENTRY_BOUND)
        .map_err(internal)?;
    Ok(DecompositionEvidence { decomposition, factors, composite })
}

fn certificate(w: &PartialPermutation, y: &[Rational; 3]) -> Result<WitnessCertificate, Failure> {
    certify_nonminimal(w, y).map_err(|e| match e {
        WitnessError::VexillaryInput => Failure::Precondition(
            "the input is vexillary: every diagram cell restricts to an identity, so no witness exists"
                .into(),
        ),
        WitnessError::ZeroParameter => Failure::Input(e.to_string()),
        other => internal(other),
    })
}

/// Classification with the cheapest evidence consistent with the verdict.
pub fn analyze(w: &PartialPermutation, opts: Options, y: &[Rational; 3]) -> Result<Report, Failure> {
    let c = classify(w);
    if c.vexillary_pattern != c.vexillary_restriction {
        return Err(Failure::Internal(format!(
            "vexillarity tests disagree on {}: pattern={} restriction={}",
            w.to_inline(),
            c.vexillary_pattern,
            c.vexillary_restriction
        )));
    }
    let evidence = match c.verdict {
        Verdict::NonMinimal => Evidence::Witness { certificate: Box::new(certificate(w, y)?) },
        _ => {
            let (stationary, non_stationary) = sample_stationarity(w, opts)?;
            Evidence::Sampling(Box::new(SamplingSummary {
                proof_path: proof_path(&c),
                samples: opts.samples,
                seed: opts.seed,
                stationary,
                non_stationary,
                gr2: None,
                note: None,
                decomposition: None,
                certificate: None,
            }))
        }
    };
    Ok(base("analyze", w, evidence, opts.seed))
}

pub fn witness(w: &PartialPermutation, y: &[Rational; 3]) -> Result<Report, Failure> {
    let cert = certificate(w, y)?;
    cert.ensure().map_err(internal)?;
    Ok(base("witness", w, Evidence::Witness { certificate: Box::new(cert) }, 0))
}

/// Sampling at seeded regular points plus every suite that applies.
pub fn verify(w: &PartialPermutation, opts: Options, y: &[Rational; 3]) -> Result<Report, Failure> {
    let c = classify(w);
    let (stationary, non_stationary) = sample_stationarity(w, opts)?;
    let mut summary = SamplingSummary {
        proof_path: proof_path(&c),
        samples: opts.samples,
        seed: opts.seed,
        stationary,
        non_stationary,
        gr2: None,
        note: None,
        decomposition: None,
        certificate: None,
    };
    if c.verdict == Verdict::NonMinimal {
        summary.certificate = Some(certificate(w, y)?);
    } else if let Some(params) = c.gr2_twin {
        if !c.in_gr2 {
            summary.note = Some(format!(
                "X_w is congruent to X_mu x R^N for the Gr2 partial permutation mu = {}; the suites run on mu",
                params.build().to_inline()
            ));
        }
        let config = Gr2Config { samples: opts.samples, seed: opts.seed, ..Gr2Config::default() };
        summary.gr2 = Some(verify_gr2(params, &config).map_err(internal)?);
    } else if c.decomposable {
        summary.decomposition = Some(decomposition_evidence(w, opts)?);
    }

    let broken = (c.verdict == Verdict::Minimal && stationary != opts.samples)
        || summary.gr2.as_ref().is_some_and(|r| !r.passed())
        || summary.decomposition.as_ref().is_some_and(|d| !d.composite.passed())
        || summary.certificate.as_ref().is_some_and(|cert| !cert.checks.all());
    let report = base("verify", w, Evidence::Sampling(Box::new(summary)), opts.seed);
    if broken {
        return Err(Failure::Internal(format!(
            "verification failed:\n{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        )));
    }
    Ok(report)
}

pub fn decomposition(w: &PartialPermutation, opts: Options) -> Result<Report, Failure> {
    let ev = decomposition_evidence(w, opts)?;
    if !ev.composite.passed() && classify(w).verdict == Verdict::Minimal {
        return Err(Failure::Internal(format!("composite check failed at seed {}", opts.seed)));
    }
    Ok(base("decompose", w, Evidence::Decomposition(Box::new(ev)), opts.seed))
}
