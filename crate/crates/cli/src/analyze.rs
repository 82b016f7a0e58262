//! The `analyze` pipeline: solve, classify, and run every applicable check.

use num_complex::Complex64;
use sc_blaschke::bounds::{self, MIN_CONVEXITY_SAMPLES};
use sc_blaschke::scmap::{
    self, symmetry_hypothesis_check, univalence_bound, univalence_bound_symmetric, ScFormula,
};
use sc_blaschke::{
    solve_prevertices, MapKind, MapSpec, PrevertexError, PrevertexSet, VertexCounts,
};

use crate::document::{
    AnalysisReport, BoundsRecord, CountsRecord, Degrees, PrevertexRecord, UnivalenceRecord,
};
use crate::error::CliError;

/// Samples for the winding number; doubled on unwrap failure up to [`MAX_WINDING_SAMPLES`].
pub const WINDING_SAMPLES: usize = 4096;
pub const MAX_WINDING_SAMPLES: usize = 1 << 20;
/// Polar grid for the half-disk sign condition.
pub const SYMMETRY_RADII: usize = 12;
pub const SYMMETRY_ANGLES: usize = 24;

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    /// Present iff the spec is admissible.
    pub prevertices: Option<PrevertexSet>,
}

/// Winding number of `w`, refining the sampling until unwrapping succeeds.
pub fn winding(spec: &MapSpec) -> Option<i64> {
    let mut samples = WINDING_SAMPLES;
    while samples <= MAX_WINDING_SAMPLES {
        match scmap::winding_degree(spec, samples) {
            Ok(w) => return Some(w),
            Err(_) => samples *= 4,
        }
    }
    None
}

pub fn bounds_record(spec: &MapSpec) -> Result<BoundsRecord, CliError> {
    let r = spec.max_zero_modulus();
    let (d1, d2) = (spec.d1(), spec.d2());
    let (min_sep, max_sep) = if d2 == 0 && d1 >= 1 {
        (
            Some(bounds::min_separation(spec.kind(), d1, r)?),
            Some(bounds::max_separation(spec.kind(), d1, r)?),
        )
    } else {
        (None, None)
    };
    let radius_bound = if d2 >= 1 {
        Some(bounds::zero_radius_lower_bound(spec.kind(), d1, d2)?.r_min)
    } else {
        None
    };
    Ok(BoundsRecord {
        min_sep,
        max_sep,
        r_used: r,
        radius_bound,
    })
}

pub fn univalence_record(set: &PrevertexSet) -> Result<UnivalenceRecord, CliError> {
    let betas = set.betas();
    let interior = set.spec().kind() == MapKind::Interior;
    let bound_pass = if interior {
        Some(univalence_bound(&betas)?.passed())
    } else {
        None
    };
    let pairs: Vec<(f64, f64)> = set.points().iter().map(|p| (p.t, p.beta)).collect();
    let symmetric = if interior {
        univalence_bound_symmetric(&pairs).ok().filter(|_| {
            let f = ScFormula::from_prevertices(set, Complex64::new(1.0, 0.0));
            symmetry_hypothesis_check(&f, SYMMETRY_RADII, SYMMETRY_ANGLES)
        })
    } else {
        None
    };
    Ok(UnivalenceRecord {
        sum_abs_beta: scmap::sum_abs_beta(&betas),
        bound_pass,
        symmetric_applicable: symmetric.is_some(),
        symmetric_pass: symmetric.map(|s| s.verdict.passed()),
    })
}

pub fn prevertex_records(set: &PrevertexSet) -> Vec<PrevertexRecord> {
    set.points()
        .iter()
        .map(|p| {
            let z = p.z.value();
            PrevertexRecord {
                t: p.t,
                z: [z.re, z.im],
                beta: p.beta,
                label: p.label.into(),
            }
        })
        .collect()
}

/// Runs the full analysis. Inadmissible specs give a report with
/// `admissible = false`; only invalid options are errors.
pub fn analyze(spec: &MapSpec, tol: f64) -> Result<Analysis, CliError> {
    let mut report = AnalysisReport {
        kind: spec.kind().into(),
        admissible: false,
        diagnostic: None,
        degrees: Degrees {
            d1: spec.d1(),
            d2: spec.d2(),
        },
        prevertices: Vec::new(),
        counts: None,
        winding: winding(spec),
        univalence: None,
        bounds: bounds_record(spec)?,
        convexity_radius_pass: None,
    };
    let set = match solve_prevertices(spec, tol) {
        Ok(set) => set,
        Err(e @ (PrevertexError::Inadmissible(_) | PrevertexError::DegreeCollapse { .. })) => {
            report.diagnostic = Some(e.to_string());
            return Ok(Analysis {
                report,
                prevertices: None,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let labels: Vec<_> = set.points().iter().map(|p| p.label).collect();
    report.admissible = true;
    report.prevertices = prevertex_records(&set);
    report.counts = Some(CountsRecord::from(VertexCounts::from_labels(&labels)));
    report.univalence = Some(univalence_record(&set)?);
    if spec.kind() == MapKind::Interior {
        report.convexity_radius_pass =
            Some(bounds::convexity_radius_check(spec, MIN_CONVEXITY_SAMPLES)?.passed());
    }
    Ok(Analysis {
        report,
        prevertices: Some(set),
    })
}
