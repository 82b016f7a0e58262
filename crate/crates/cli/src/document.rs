//! JSON input and output documents.
//!
//! Rotations in a [`SpecDocument`] are in degrees; every angle in an
//! [`AnalysisReport`] is in radians.

use num_complex::Complex64;
use sc_blaschke::blaschke::DiskZero;
use sc_blaschke::{BlaschkeProduct, MapKind, MapSpec, UnitComplex, VertexLabel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Interior,
    Exterior,
}

impl From<MapKind> for KindName {
    fn from(kind: MapKind) -> Self {
        match kind {
            MapKind::Interior => KindName::Interior,
            MapKind::Exterior => KindName::Exterior,
        }
    }
}

impl From<KindName> for MapKind {
    fn from(kind: KindName) -> Self {
        match kind {
            KindName::Interior => MapKind::Interior,
            KindName::Exterior => MapKind::Exterior,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDocument {
    pub rotation_deg: f64,
    pub zeros: Vec<[f64; 2]>,
}

impl ProductDocument {
    pub fn to_product(&self) -> Result<BlaschkeProduct, CliError> {
        let zeros = self
            .zeros
            .iter()
            .map(|&[re, im]| DiskZero::new(Complex64::new(re, im)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BlaschkeProduct::new(
            UnitComplex::from_degrees(self.rotation_deg),
            zeros,
        ))
    }

    pub fn from_product(b: &BlaschkeProduct) -> Self {
        ProductDocument {
            rotation_deg: b.rotation().angle().to_degrees(),
            zeros: b.zero_values().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// A map spec as entered by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub kind: KindName,
    pub b1: ProductDocument,
    pub b2: ProductDocument,
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents always serialize")
    }

    pub fn to_spec(&self) -> Result<MapSpec, CliError> {
        Ok(MapSpec::new(
            self.kind.into(),
            self.b1.to_product()?,
            self.b2.to_product()?,
        )?)
    }

    pub fn from_spec(spec: &MapSpec) -> Self {
        SpecDocument {
            kind: spec.kind().into(),
            b1: ProductDocument::from_product(spec.b1()),
            b2: ProductDocument::from_product(spec.b2()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelName {
    Convex,
    Concave,
}

impl From<VertexLabel> for LabelName {
    fn from(label: VertexLabel) -> Self {
        match label {
            VertexLabel::Convex => LabelName::Convex,
            VertexLabel::Concave => LabelName::Concave,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Degrees {
    pub d1: usize,
    pub d2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrevertexRecord {
    pub t: f64,
    pub z: [f64; 2],
    pub beta: f64,
    pub label: LabelName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsRecord {
    pub convex: usize,
    pub concave: usize,
    pub a_runs: usize,
    pub b_switches: usize,
    pub c_runs: usize,
}

impl From<sc_blaschke::VertexCounts> for CountsRecord {
    fn from(c: sc_blaschke::VertexCounts) -> Self {
        CountsRecord {
            convex: c.convex,
            concave: c.concave,
            a_runs: c.a_runs,
            b_switches: c.b_switches,
            c_runs: c.c_runs,
        }
    }
}

/// Univalence verdicts. The general bound applies to interior maps only and
/// is `null` otherwise; the symmetric bound is `null` unless applicable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnivalenceRecord {
    pub sum_abs_beta: f64,
    #[serde(rename = "theorem4_pass")]
    pub bound_pass: Option<bool>,
    #[serde(rename = "theorem5_applicable")]
    pub symmetric_applicable: bool,
    #[serde(rename = "theorem5_pass")]
    pub symmetric_pass: Option<bool>,
}

/// Separation bounds (convex specs) and the zero-radius bound (specs with
/// concave vertices); the inapplicable entries are `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRecord {
    pub min_sep: Option<f64>,
    pub max_sep: Option<f64>,
    pub r_used: f64,
    pub radius_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub kind: KindName,
    pub admissible: bool,
    /// Why the spec is inadmissible, when it is.
    pub diagnostic: Option<String>,
    pub degrees: Degrees,
    pub prevertices: Vec<PrevertexRecord>,
    pub counts: Option<CountsRecord>,
    pub winding: Option<i64>,
    pub univalence: Option<UnivalenceRecord>,
    pub bounds: BoundsRecord,
    pub convexity_radius_pass: Option<bool>,
}

impl AnalysisReport {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Output of the `bounds` command; `window` is `null` when `r` exceeds the
/// small-radius range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDocument {
    pub min_sep: f64,
    pub max_sep: f64,
    #[serde(rename = "corollary7_window")]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusDocument {
    pub kind: KindName,
    pub d1: usize,
    pub d2: usize,
    pub r_min: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    const KOEBE: &str = r#"{
        "kind": "interior",
        "b1": {"rotation_deg": 0, "zeros": []},
        "b2": {"rotation_deg": 0, "zeros": [[-0.5, 0]]}
    }"#;

    #[test]
    fn parses_koebe() {
        let doc = SpecDocument::parse(KOEBE).unwrap();
        let spec = doc.to_spec().unwrap();
        assert_eq!((spec.d1(), spec.d2()), (0, 1));
        assert_eq!(SpecDocument::parse(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn rejects_unknown_fields_and_kinds() {
        let extra = KOEBE.replace("\"kind\"", "\"colour\": 1, \"kind\"");
        assert!(SpecDocument::parse(&extra).is_err());
        let nested = KOEBE.replace(
            "\"rotation_deg\": 0, \"zeros\": []",
            "\"rotation_deg\": 0, \"zeros\": [], \"c\": 2",
        );
        assert!(SpecDocument::parse(&nested).is_err());
        assert!(SpecDocument::parse(&KOEBE.replace("interior", "annulus")).is_err());
    }

    #[test]
    fn rejects_invalid_zeros() {
        let outside = KOEBE.replace("[[-0.5, 0]]", "[[1.5, 0]]");
        assert!(SpecDocument::parse(&outside).unwrap().to_spec().is_err());
        let common = KOEBE.replace("\"zeros\": []", "\"zeros\": [[-0.5, 0]]");
        let err = SpecDocument::parse(&common).unwrap().to_spec().unwrap_err();
        assert!(err.to_string().contains("common zero"));
    }

    #[test]
    fn degrees_round_trip() {
        let doc =
            SpecDocument::parse(&KOEBE.replacen("\"rotation_deg\": 0", "\"rotation_deg\": 30", 1))
                .unwrap();
        let spec = doc.to_spec().unwrap();
        let back = SpecDocument::from_spec(&spec);
        assert!((back.b1.rotation_deg - 30.0).abs() < 1e-12);
    }
}
