//! Property suites over seeded random specs plus the deterministic
//! separation grids.
//!
//! Trials run in parallel but results are merged by trial index, so the
//! rendered report depends only on the seed and the trial count.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use sc_blaschke::bounds::{
    self, convexity_radius, extremal_spec, mixed_separation_sides, small_radius_window,
    Consistency, Extremal, VertexPair, MIN_CONVEXITY_SAMPLES, WINDOW_SLACK_C,
};
use sc_blaschke::scmap::{
    arc_increments, expected_degree, expected_increment, sum_abs_beta, total_variation,
    trace_polygon, univalence_bound, Injectivity, ScFormula, DEFAULT_NODES,
};
use sc_blaschke::{
    oracle_prevertices, solve_prevertices, MapKind, PrevertexSet, VertexCounts, VertexLabel,
    DEFAULT_TOL,
};

use crate::analyze::winding;
use crate::document::SpecDocument;
use crate::error::CliError;
use crate::sampler::{run_trial, Source, Trial};

pub const ANGLE_SUM_TOL: f64 = 1e-9;
pub const INCREMENT_TOL: f64 = 1e-6;
pub const ORACLE_TOL: f64 = 1e-7;
pub const GAP_SLACK: f64 = 1e-9;
pub const RADIUS_SLACK: f64 = 1e-9;
pub const SHARPNESS_TOL: f64 = 1e-7;
pub const PATH_TOL: f64 = 1e-6;
pub const TRACE_ANGLE_TOL: f64 = 1e-4;
pub const ORACLE_SAMPLES: usize = 4096;
/// Radii of the sharpness grid.
pub const SHARPNESS_RADII: [f64; 3] = [0.1, 0.5, 0.9];
pub const SHARPNESS_MAX_N: usize = 6;
pub const WINDOW_EPS: [f64; 3] = [0.005, 0.01, 0.02];
pub const WINDOW_MAX_N: usize = 10;
/// Trials beyond `trials` times this factor are never drawn.
pub const MAX_TRIAL_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Counts,
    AngleSum,
    Winding,
    ArcIncrements,
    Oracle,
    UnivalenceBound,
    Separation,
    SeparationSharpness,
    SmallRadiusWindow,
    MixedSeparation,
    ZeroRadius,
    ConvexityRadius,
    Trace,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Counts,
        Suite::AngleSum,
        Suite::Winding,
        Suite::ArcIncrements,
        Suite::Oracle,
        Suite::UnivalenceBound,
        Suite::Separation,
        Suite::SeparationSharpness,
        Suite::SmallRadiusWindow,
        Suite::MixedSeparation,
        Suite::ZeroRadius,
        Suite::ConvexityRadius,
        Suite::Trace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::AngleSum => "angle-sum",
            Suite::Winding => "winding",
            Suite::ArcIncrements => "arc-increments",
            Suite::Oracle => "oracle",
            Suite::UnivalenceBound => "univalence-bound",
            Suite::Separation => "separation",
            Suite::SeparationSharpness => "separation-sharpness",
            Suite::SmallRadiusWindow => "small-radius-window",
            Suite::MixedSeparation => "mixed-separation",
            Suite::ZeroRadius => "zero-radius",
            Suite::ConvexityRadius => "convexity-radius",
            Suite::Trace => "trace",
        }
    }
}

/// One check: `Err` carries a human-readable reason.
pub type Outcome = Result<(), String>;

#[derive(Debug, Clone)]
pub struct Failure {
    pub suite: Suite,
    pub trial: Option<usize>,
    pub detail: String,
    pub spec: Option<SpecDocument>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub seed: u64,
    pub requested: usize,
    pub trials_run: usize,
    pub uniform: usize,
    pub fallback: usize,
    pub tallies: BTreeMap<Suite, Tally>,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn specs(&self) -> usize {
        self.uniform + self.fallback
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.specs() == self.requested
    }

    pub fn tally(&self, suite: Suite) -> Tally {
        self.tallies.get(&suite).copied().unwrap_or_default()
    }

    fn record(
        &mut self,
        suite: Suite,
        trial: Option<usize>,
        spec: Option<&PrevertexSet>,
        outcome: Outcome,
    ) {
        let t = self.tallies.entry(suite).or_default();
        match outcome {
            Ok(()) => t.passed += 1,
            Err(detail) => {
                t.failed += 1;
                self.failures.push(Failure {
                    suite,
                    trial,
                    detail,
                    spec: spec.map(|s| SpecDocument::from_spec(s.spec())),
                });
            }
        }
    }

    /// The printed report; identical for identical inputs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify seed={} trials={}", self.seed, self.requested);
        let _ = writeln!(
            out,
            "specs: {} ({} uniform zeros, {} angle configurations) from {} trials",
            self.specs(),
            self.uniform,
            self.fallback,
            self.trials_run
        );
        for suite in Suite::ALL {
            let t = self.tally(suite);
            let status = if t.failed == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "suite {:<22} {status} {} passed, {} failed",
                suite.name(),
                t.passed,
                t.failed
            );
        }
        let _ = writeln!(out, "warnings: {}", self.warnings.len());
        for w in &self.warnings {
            let _ = writeln!(out, "  {w}");
        }
        for f in &self.failures {
            let trial = f
                .trial
                .map_or_else(|| "grid".to_string(), |t| format!("trial {t}"));
            let _ = writeln!(out, "failure {} ({trial}): {}", f.suite.name(), f.detail);
            if let Some(spec) = &f.spec {
                let _ = writeln!(
                    out,
                    "  spec: {}",
                    serde_json::to_string(spec).expect("spec documents serialize")
                );
            }
        }
        if self.specs() < self.requested {
            let _ = writeln!(
                out,
                "only {} of {} specs could be sampled",
                self.specs(),
                self.requested
            );
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn check(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn check_counts(set: &PrevertexSet) -> Outcome {
    let labels: Vec<VertexLabel> = set.points().iter().map(|p| p.label).collect();
    let c = VertexCounts::from_labels(&labels);
    let spec = set.spec();
    check(
        c.concave == spec.d2() && c.convex == spec.d1() + spec.power(),
        || {
            format!(
                "convex={} concave={} for d1={} d2={}",
                c.convex,
                c.concave,
                spec.d1(),
                spec.d2()
            )
        },
    )?;
    check(
        c.a_runs + c.b_switches + c.c_runs == set.len()
            && 2 * c.convex == 2 * c.a_runs + c.b_switches
            && 2 * c.concave == 2 * c.c_runs + c.b_switches,
        || format!("run counts {c:?} are inconsistent"),
    )
}

pub fn check_angle_sum(set: &PrevertexSet) -> Outcome {
    let sum = set.beta_sum();
    check((sum - 1.0).abs() <= ANGLE_SUM_TOL, || {
        format!("sum beta = {sum}")
    })
}

pub fn check_winding(set: &PrevertexSet) -> Outcome {
    let spec = set.spec();
    let expected = expected_degree(spec);
    let w = winding(spec);
    check(w == Some(expected), || {
        format!("winding {w:?}, expected {expected}")
    })?;
    let total = total_variation(spec);
    check(
        (total - TAU * expected as f64).abs() <= INCREMENT_TOL,
        || {
            format!(
                "total variation {total}, expected {}",
                TAU * expected as f64
            )
        },
    )
}

pub fn check_arc_increments(set: &PrevertexSet) -> Outcome {
    let p = set.points();
    for (k, inc) in arc_increments(set).into_iter().enumerate() {
        let expected = expected_increment(p[k].label, p[(k + 1) % p.len()].label);
        check((inc - expected).abs() <= INCREMENT_TOL, || {
            format!("arc {k} increment {inc}, expected {expected}")
        })?;
    }
    Ok(())
}

pub fn check_oracle(set: &PrevertexSet) -> Outcome {
    let roots = oracle_prevertices(set.spec(), ORACLE_SAMPLES)
        .map_err(|e| format!("oracle failed: {e}"))?;
    let ts = set.ts();
    check(roots.len() == ts.len(), || {
        format!(
            "oracle found {} pre-vertices, solver {}",
            roots.len(),
            ts.len()
        )
    })?;
    for t in &ts {
        let d = roots
            .iter()
            .map(|r| circular_distance(*r, *t))
            .fold(f64::INFINITY, f64::min);
        check(d <= ORACLE_TOL, || {
            format!("solver t={t} is {d:e} from the nearest oracle root")
        })?;
    }
    Ok(())
}

/// Only meaningful for interior maps with `sum |beta| <= 2`; returns `None`
/// when the bound does not apply.
pub fn check_univalence_bound(set: &PrevertexSet, injectivity: Injectivity) -> Option<Outcome> {
    if set.spec().kind() != MapKind::Interior {
        return None;
    }
    let betas = set.betas();
    let s = sum_abs_beta(&betas);
    if !univalence_bound(&betas).is_ok_and(|v| v.passed()) {
        return None;
    }
    Some(check(injectivity == Injectivity::Injective, || {
        format!("sum |beta| = {s} but the image curve crosses itself")
    }))
}

/// Convex specs: every gap lies between the separation bounds.
pub fn check_separation(set: &PrevertexSet) -> Option<Outcome> {
    let spec = set.spec();
    if spec.d2() != 0 || spec.d1() == 0 {
        return None;
    }
    let r = spec.max_zero_modulus();
    let outcome = (|| {
        let lo = bounds::min_separation(spec.kind(), spec.d1(), r).map_err(|e| e.to_string())?;
        let hi = bounds::max_separation(spec.kind(), spec.d1(), r).map_err(|e| e.to_string())?;
        for g in set.gaps() {
            check(g >= lo - GAP_SLACK && g <= hi + GAP_SLACK, || {
                format!("gap {g} outside [{lo}, {hi}] at r={r}")
            })?;
        }
        Ok(())
    })();
    Some(outcome)
}

/// Specs with concave vertices: consecutive same-label pairs satisfy the
/// mixed inequality with `r` the largest zero modulus.
pub fn check_mixed_separation(set: &PrevertexSet) -> Option<Outcome> {
    let spec = set.spec();
    if spec.d2() == 0 {
        return None;
    }
    let r = spec.max_zero_modulus();
    let p = set.points();
    let gaps = set.gaps();
    let outcome = (|| {
        for (k, g) in gaps.iter().enumerate() {
            let pair = match (p[k].label, p[(k + 1) % p.len()].label) {
                (VertexLabel::Convex, VertexLabel::Convex) => VertexPair::ConvexConvex,
                (VertexLabel::Concave, VertexLabel::Concave) => VertexPair::ConcaveConcave,
                _ => continue,
            };
            let sides = mixed_separation_sides(spec.kind(), spec.d1(), spec.d2(), r, *g, pair)
                .map_err(|e| e.to_string())?;
            check(sides.consistency() == Consistency::Consistent, || {
                format!("{pair:?} gap {g}: {sides:?}")
            })?;
        }
        Ok(())
    })();
    Some(outcome)
}

pub fn check_zero_radius(set: &PrevertexSet) -> Option<Outcome> {
    let spec = set.spec();
    if spec.d2() == 0 {
        return None;
    }
    let outcome = bounds::zero_radius_lower_bound(spec.kind(), spec.d1(), spec.d2())
        .map_err(|e| e.to_string())
        .and_then(|b| {
            let r = spec.max_zero_modulus();
            check(r >= b.r_min - RADIUS_SLACK, || {
                format!("max |zero| = {r} below r_min = {}", b.r_min)
            })
        });
    Some(outcome)
}

/// Interior specs with concave vertices: `B2` zeros avoid the convexity disk.
pub fn check_convexity_radius(set: &PrevertexSet) -> Option<Outcome> {
    let spec = set.spec();
    if spec.kind() != MapKind::Interior || spec.d2() == 0 {
        return None;
    }
    let rc = convexity_radius();
    let outcome = (|| {
        for z in spec.b2().zeros() {
            check(z.modulus() > rc, || {
                format!("B2 zero of modulus {} inside 2 - sqrt 3", z.modulus())
            })?;
        }
        let v = bounds::convexity_radius_check(spec, MIN_CONVEXITY_SAMPLES)
            .map_err(|e| e.to_string())?;
        check(v.passed(), || {
            "|z B1| exceeds |B2| inside 2 - sqrt 3".to_string()
        })
    })();
    Some(outcome)
}

/// Polygons with every vertex finite: consistent vertex positions and angles.
pub fn check_trace(set: &PrevertexSet) -> Option<Outcome> {
    let f = ScFormula::from_prevertices(set, Complex64::new(1.0, 0.0));
    if !(0..f.len()).all(|k| f.is_finite(k)) {
        return None;
    }
    let outcome = trace_polygon(set, Complex64::new(1.0, 0.0), DEFAULT_NODES)
        .map_err(|e| e.to_string())
        .and_then(|t| {
            check(t.path_error <= PATH_TOL, || {
                format!("path error {:e}", t.path_error)
            })?;
            for (k, e) in t.angle_errors(&set.betas()).into_iter().enumerate() {
                let e = e.ok_or_else(|| format!("vertex {k} traced as infinite"))?;
                check(e <= TRACE_ANGLE_TOL, || {
                    format!("vertex {k} angle error {e:e}")
                })?;
            }
            Ok(())
        });
    Some(outcome)
}

/// All per-spec checks, in suite order.
pub fn check_spec(set: &PrevertexSet) -> Vec<(Suite, Outcome)> {
    let mut out = vec![
        (Suite::Counts, check_counts(set)),
        (Suite::AngleSum, check_angle_sum(set)),
        (Suite::Winding, check_winding(set)),
        (Suite::ArcIncrements, check_arc_increments(set)),
        (Suite::Oracle, check_oracle(set)),
    ];
    let optional = [
        (Suite::Separation, check_separation(set)),
        (Suite::MixedSeparation, check_mixed_separation(set)),
        (Suite::ZeroRadius, check_zero_radius(set)),
        (Suite::ConvexityRadius, check_convexity_radius(set)),
        (Suite::Trace, check_trace(set)),
    ];
    out.extend(optional.into_iter().filter_map(|(s, o)| o.map(|o| (s, o))));
    out
}

/// Extremal configurations attain the separation bounds; the remaining gaps
/// lie between them.
pub fn sharpness_grid() -> Vec<(String, Outcome)> {
    let mut out = Vec::new();
    for kind in [MapKind::Interior, MapKind::Exterior] {
        for n in 1..=SHARPNESS_MAX_N {
            for r in SHARPNESS_RADII {
                for which in [Extremal::MinSep, Extremal::MaxSep] {
                    let label = format!("{} n={n} r={r} {which:?}", kind.name());
                    out.push((label, sharpness_case(kind, n, r, which)));
                }
            }
        }
    }
    out
}

pub fn sharpness_case(kind: MapKind, n: usize, r: f64, which: Extremal) -> Outcome {
    let spec = extremal_spec(kind, n, r, which).map_err(|e| e.to_string())?;
    let set = solve_prevertices(&spec, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let lo = bounds::min_separation(kind, n, r).map_err(|e| e.to_string())?;
    let hi = bounds::max_separation(kind, n, r).map_err(|e| e.to_string())?;
    let gaps = set.gaps();
    let measured = match which {
        Extremal::MinSep => gaps.iter().copied().fold(f64::INFINITY, f64::min),
        Extremal::MaxSep => gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let bound = if which == Extremal::MinSep { lo } else { hi };
    check((measured - bound).abs() <= SHARPNESS_TOL, || {
        format!("extreme gap {measured}, bound {bound}")
    })?;
    for g in gaps {
        check(g >= lo - GAP_SLACK && g <= hi + GAP_SLACK, || {
            format!("gap {g} outside [{lo}, {hi}]")
        })?;
    }
    Ok(())
}

/// Exact half-gaps against the widened small-radius window.
pub fn window_grid() -> Vec<(String, Outcome)> {
    let mut out = Vec::new();
    for kind in [MapKind::Interior, MapKind::Exterior] {
        for n in 1..=WINDOW_MAX_N {
            for eps in WINDOW_EPS {
                out.push((
                    format!("{} n={n} eps={eps}", kind.name()),
                    window_case(kind, n, eps),
                ));
            }
        }
    }
    out
}

pub fn window_case(kind: MapKind, n: usize, eps: f64) -> Outcome {
    let (lo, hi) = small_radius_window(kind, n, eps).map_err(|e| e.to_string())?;
    let slack = WINDOW_SLACK_C * eps * eps;
    let theta = bounds::min_separation(kind, n, eps).map_err(|e| e.to_string())? / 2.0;
    let psi = bounds::max_separation(kind, n, eps).map_err(|e| e.to_string())? / 2.0;
    for (name, x) in [("theta", theta), ("psi", psi)] {
        check(x >= lo - slack && x <= hi + slack, || {
            format!("{name} = {x} outside [{lo}, {hi}] widened by {slack}")
        })?;
    }
    check(theta > 0.0 && psi < PI, || {
        "roots outside (0, pi)".to_string()
    })
}

#[derive(Debug)]
struct TrialResult {
    trial: Trial,
    checks: Vec<(Suite, Outcome)>,
    /// Aligned with `trial.admissible`.
    soundness: Vec<Option<Outcome>>,
}

fn process(seed: u64, index: usize) -> TrialResult {
    let trial = run_trial(seed, index);
    let checks = trial
        .accepted
        .as_ref()
        .map(|(d, _)| check_spec(&d.set))
        .unwrap_or_default();
    let soundness = trial
        .admissible
        .iter()
        .map(|d| check_univalence_bound(&d.set, d.injectivity))
        .collect();
    TrialResult {
        trial,
        checks,
        soundness,
    }
}

/// Runs trials in index order until `specs` specs have been accepted (at
/// most `MAX_TRIAL_FACTOR * specs` trials), then the deterministic grids.
pub fn run(seed: u64, specs: usize) -> Result<VerifyReport, CliError> {
    if specs == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let mut report = VerifyReport {
        seed,
        requested: specs,
        ..VerifyReport::default()
    };
    let limit = MAX_TRIAL_FACTOR * specs;
    let mut next = 0;
    while report.specs() < specs && next < limit {
        let batch = (specs - report.specs()).min(limit - next);
        let results: Vec<TrialResult> = (next..next + batch)
            .into_par_iter()
            .map(|i| process(seed, i))
            .collect();
        next += batch;
        for r in results {
            if report.specs() == specs {
                break;
            }
            absorb(&mut report, r);
        }
    }
    for (label, outcome) in sharpness_grid() {
        report.record(
            Suite::SeparationSharpness,
            None,
            None,
            outcome.map_err(|e| format!("{label}: {e}")),
        );
    }
    for (label, outcome) in window_grid() {
        report.record(
            Suite::SmallRadiusWindow,
            None,
            None,
            outcome.map_err(|e| format!("{label}: {e}")),
        );
    }
    Ok(report)
}

fn absorb(report: &mut VerifyReport, r: TrialResult) {
    let index = r.trial.index;
    report.trials_run = index + 1;
    report.warnings.extend(r.trial.warnings.iter().cloned());
    for (draw, outcome) in r.trial.admissible.iter().zip(r.soundness) {
        if let Some(outcome) = outcome {
            report.record(
                Suite::UnivalenceBound,
                Some(index),
                Some(&draw.set),
                outcome,
            );
        }
    }
    let Some((draw, source)) = &r.trial.accepted else {
        return;
    };
    match source {
        Source::UniformZeros => report.uniform += 1,
        Source::AngleConfiguration => report.fallback += 1,
    }
    for (suite, outcome) in r.checks {
        report.record(suite, Some(index), Some(&draw.set), outcome);
    }
}
