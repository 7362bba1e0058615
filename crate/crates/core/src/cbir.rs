//! Feature base and nearest-neighbor retrieval under the Minkowski
//! distance family (L1, L2, L∞).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Recognizable region classes, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WidgetClass {
    TextBox,
    CheckBoxSelected,
    CheckBoxUnselected,
    RadioSelected,
    RadioUnselected,
    RectButton,
    CircButton,
    Letters,
}

impl WidgetClass {
    pub const ALL: [WidgetClass; 8] = [
        WidgetClass::TextBox,
        WidgetClass::CheckBoxSelected,
        WidgetClass::CheckBoxUnselected,
        WidgetClass::RadioSelected,
        WidgetClass::RadioUnselected,
        WidgetClass::RectButton,
        WidgetClass::CircButton,
        WidgetClass::Letters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WidgetClass::TextBox => "TextBox",
            WidgetClass::CheckBoxSelected => "CheckBoxSelected",
            WidgetClass::CheckBoxUnselected => "CheckBoxUnselected",
            WidgetClass::RadioSelected => "RadioSelected",
            WidgetClass::RadioUnselected => "RadioUnselected",
            WidgetClass::RectButton => "RectButton",
            WidgetClass::CircButton => "CircButton",
            WidgetClass::Letters => "Letters",
        }
    }

    pub fn is_checkbox(self) -> bool {
        matches!(self, WidgetClass::CheckBoxSelected | WidgetClass::CheckBoxUnselected)
    }

    pub fn is_radio(self) -> bool {
        matches!(self, WidgetClass::RadioSelected | WidgetClass::RadioUnselected)
    }

    pub fn is_button(self) -> bool {
        matches!(self, WidgetClass::RectButton | WidgetClass::CircButton)
    }

    /// Selected state for checkable classes.
    pub fn checked(self) -> Option<bool> {
        match self {
            WidgetClass::CheckBoxSelected | WidgetClass::RadioSelected => Some(true),
            WidgetClass::CheckBoxUnselected | WidgetClass::RadioUnselected => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for WidgetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WidgetClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WidgetClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown widget class {s:?}")))
    }
}

/// Exponent of the Minkowski distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    L1,
    #[default]
    L2,
    LInf,
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "infinity" | "∞" => Ok(Norm::LInf),
            other => Err(Error::Config(format!("p must be 1, 2 or inf, got {other:?}"))),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::LInf => "inf",
        })
    }
}

fn check_scales(scales: &[f64; FeatureVector::DIMENSIONS]) -> Result<()> {
    match scales.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
        Some(i) => Err(Error::Config(format!(
            "scale for {} must be positive, got {}",
            FeatureVector::NAMES[i],
            scales[i]
        ))),
        None => Ok(()),
    }
}

fn distance_unchecked(a: &[f64; 9], b: &[f64; 9], p: Norm, scales: &[f64; 9]) -> f64 {
    let diffs = a.iter().zip(b).zip(scales).map(|((x, y), s)| ((x - y) / s).abs());
    match p {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        Norm::LInf => diffs.fold(0.0, f64::max),
    }
}

/// `(Σ |aᵢ/sᵢ − bᵢ/sᵢ|^p)^(1/p)`, with `p = ∞` taken as the max.
pub fn minkowski_distance(
    a: &FeatureVector,
    b: &FeatureVector,
    p: Norm,
    scales: &[f64; FeatureVector::DIMENSIONS],
) -> Result<f64> {
    check_scales(scales)?;
    Ok(distance_unchecked(&a.to_array(), &b.to_array(), p, scales))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseEntry {
    pub class: WidgetClass,
    pub vector: FeatureVector,
}

/// Reference vectors plus per-dimension normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBase {
    entries: Vec<BaseEntry>,
    scales: [f64; FeatureVector::DIMENSIONS],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: WidgetClass,
    pub distance: f64,
    /// Best distance among entries of any other class; infinite when the
    /// base holds a single class.
    pub runner_up_distance: f64,
}

#[derive(Serialize, Deserialize)]
struct BaseDocument {
    version: u32,
    dimensions: Vec<String>,
    scales: Vec<f64>,
    entries: Vec<BaseEntry>,
}

/// Bundled base built from the reference fixtures.
const BUILTIN_BASE: &str = include_str!("../data/feature_base.json");

impl FeatureBase {
    /// Scales are the per-dimension maximum over all entries; all-zero
    /// dimensions get scale 1.
    pub fn from_entries(entries: Vec<BaseEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("feature base is empty".into()));
        }
        let mut scales = [0.0f64; FeatureVector::DIMENSIONS];
        for e in &entries {
            for (s, v) in scales.iter_mut().zip(e.vector.to_array()) {
                *s = s.max(v.abs());
            }
        }
        for s in &mut scales {
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        Ok(Self { entries, scales })
    }

    pub fn with_scales(entries: Vec<BaseEntry>, scales: [f64; FeatureVector::DIMENSIONS]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("feature base is empty".into()));
        }
        check_scales(&scales)?;
        Ok(Self { entries, scales })
    }

    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_BASE).expect("bundled feature base is valid")
    }

    pub fn entries(&self) -> &[BaseEntry] {
        &self.entries
    }

    pub fn scales(&self) -> &[f64; FeatureVector::DIMENSIONS] {
        &self.scales
    }

    pub fn missing_classes(&self) -> Vec<WidgetClass> {
        WidgetClass::ALL
            .into_iter()
            .filter(|c| !self.entries.iter().any(|e| e.class == *c))
            .collect()
    }

    /// Errors unless every class has at least one entry.
    pub fn check_coverage(&self) -> Result<()> {
        let missing = self.missing_classes();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingClasses(missing.iter().map(|c| c.name().to_string()).collect()))
        }
    }

    /// Nearest entry wins; equal distances resolve to the class that comes
    /// first in [`WidgetClass::ALL`].
    pub fn classify(&self, query: &FeatureVector, p: Norm) -> Classification {
        let q = query.to_array();
        let mut best: [f64; 8] = [f64::INFINITY; 8];
        for e in &self.entries {
            let d = distance_unchecked(&q, &e.vector.to_array(), p, &self.scales);
            let slot = &mut best[e.class as usize];
            *slot = slot.min(d);
        }
        let mut winner = 0;
        for (i, &d) in best.iter().enumerate() {
            if d < best[winner] {
                winner = i;
            }
        }
        let runner_up = best
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != winner)
            .map(|(_, &d)| d)
            .fold(f64::INFINITY, f64::min);
        Classification { class: WidgetClass::ALL[winner], distance: best[winner], runner_up_distance: runner_up }
    }

    pub fn to_json(&self) -> String {
        let doc = BaseDocument {
            version: 1,
            dimensions: FeatureVector::NAMES.iter().map(|s| s.to_string()).collect(),
            scales: self.scales.to_vec(),
            entries: self.entries.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("base serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BaseDocument = serde_json::from_str(text)?;
        if doc.version != 1 {
            return Err(Error::Config(format!("unsupported feature base version {}", doc.version)));
        }
        if doc.dimensions != FeatureVector::NAMES {
            return Err(Error::Config("feature base dimensions do not match this build".into()));
        }
        let scales: [f64; FeatureVector::DIMENSIONS] = doc
            .scales
            .try_into()
            .map_err(|_| Error::Config("feature base needs 9 scale factors".into()))?;
        Self::with_scales(doc.entries, scales)
    }
}

/// Convenience wrapper that returns an error for an empty base.
pub fn classify(query: &FeatureVector, base: &FeatureBase, p: Norm) -> Result<Classification> {
    if base.entries.is_empty() {
        return Err(Error::Config("feature base is empty".into()));
    }
    Ok(base.classify(query, p))
}
