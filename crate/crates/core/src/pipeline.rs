//! Stage wiring: raster → edges → labeling → features → retrieval →
//! text mapping → document.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cbir::{BaseEntry, Classification, FeatureBase, Norm, WidgetClass};
use crate::edges::{detect_edges, EdgeMap, DEFAULT_THRESHOLD};
use crate::emit::{
    assign_tab_indices, classify_or_reject, finalize_nodes, map_bindings, AccessibleDocument, RejectedRegion,
    Verdict, WidgetNode, DEFAULT_REJECTION_CUTOFF,
};
use crate::error::{Error, Result};
use crate::features::{build_feature_vector, interior_labels, FeatureVector};
use crate::geometry::BBox;
use crate::labeling::{label_regions, Region};
use crate::raster::{decode_image, GrayBuffer, PixelBuffer};
use crate::textmap::{apply_text, cluster_letters, resolve_text, LetterCluster};
use crate::trace::CanvasTrace;

/// Luma below which a pixel counts as ink.
pub const DARK_THRESHOLD: f64 = 128.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub zero_crossing_threshold: f64,
    pub distance_p: Norm,
    pub rejection_cutoff: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            zero_crossing_threshold: DEFAULT_THRESHOLD,
            distance_p: Norm::L2,
            rejection_cutoff: DEFAULT_REJECTION_CUTOFF,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_crossing_threshold >= 0.0) {
            return Err(Error::Config(format!(
                "zero-crossing threshold must be nonnegative, got {}",
                self.zero_crossing_threshold
            )));
        }
        if !(self.rejection_cutoff > 0.0) {
            return Err(Error::Config(format!("rejection cutoff must be positive, got {}", self.rejection_cutoff)));
        }
        Ok(())
    }
}

/// Intermediate products of the image-processing stages.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub smoothed: GrayBuffer,
    pub edges: EdgeMap,
    /// Outline regions not enclosed by another outline's bbox; the widget
    /// candidates.
    pub outlines: Vec<Region>,
    /// Outline regions enclosed by another outline (inner stroke edges,
    /// glyph edges inside widgets).
    pub nested: Vec<Region>,
    /// Components of the dark-pixel binarization of the unsmoothed image.
    pub dark: Vec<Region>,
}

/// Runs the pixel stages and both labeling passes.
pub fn extract(buf: &PixelBuffer, config: &PipelineConfig) -> Extraction {
    let gray = buf.to_gray();
    let dark = label_regions(&gray.threshold(|v| v < DARK_THRESHOLD));
    let smoothed = gray.denoise();
    let edges = detect_edges(&smoothed, config.zero_crossing_threshold);
    let (outlines, nested) = split_nested(label_regions(&edges));
    Extraction { smoothed, edges, outlines, nested, dark }
}

/// A region is nested when another region's bbox contains its bbox. Of
/// two identical bboxes the lower label stays on top.
fn split_nested(regions: Vec<Region>) -> (Vec<Region>, Vec<Region>) {
    let boxes: Vec<(u32, BBox)> = regions.iter().map(|r| (r.label, r.bbox)).collect();
    regions.into_iter().partition(|r| {
        !boxes
            .iter()
            .any(|&(l, b)| l != r.label && b.contains(&r.bbox) && (b != r.bbox || l < r.label))
    })
}

/// Per-candidate record, useful for debugging and the demo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub bbox: BBox,
    pub pixel_count: usize,
    pub features: FeatureVector,
    pub classification: Classification,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub document: AccessibleDocument,
    pub regions: Vec<RegionReport>,
    /// Clusters of top-level regions classed as letters, i.e. text outside
    /// any widget.
    pub text_regions: Vec<LetterCluster>,
    pub extraction: Extraction,
}

/// Recognizes widgets in `buf` and builds the accessible document. An
/// absent trace means no text and no bindings. Recognition failures only
/// show up in the document's diagnostics.
pub fn analyze(
    buf: &PixelBuffer,
    trace: Option<&CanvasTrace>,
    base: &FeatureBase,
    config: &PipelineConfig,
) -> Result<Analysis> {
    config.validate()?;
    let (width, height) = (buf.width() as u32, buf.height() as u32);
    let empty_trace = CanvasTrace::empty(width, height);
    let trace = trace.unwrap_or(&empty_trace);

    let extraction = extract(buf, config);
    let mut doc = AccessibleDocument::empty(width, height);
    doc.diagnostics.warnings.extend(trace.warnings.iter().map(|w| format!("{}: {}", w.path, w.message)));
    if (trace.canvas_width, trace.canvas_height) != (width, height) {
        doc.diagnostics.warnings.push(format!(
            "trace canvas is {}x{} but the image is {width}x{height}",
            trace.canvas_width, trace.canvas_height
        ));
    }

    let mut reports = Vec::new();
    let mut widgets = Vec::new();
    let mut letter_regions = Vec::new();
    let mut widget_glyphs = Vec::new();
    for region in &extraction.outlines {
        let features = build_feature_vector(region, &extraction.dark);
        let classification = base.classify(&features, config.distance_p);
        let verdict = classify_or_reject(&classification, config.rejection_cutoff);
        reports.push(RegionReport {
            bbox: region.bbox,
            pixel_count: region.pixel_count,
            features,
            classification,
            accepted: verdict != Verdict::Rejected,
        });
        match verdict {
            Verdict::Accepted(WidgetClass::Letters) => letter_regions.push(region.clone()),
            Verdict::Accepted(class) => {
                if !(class.is_checkbox() || class.is_radio()) {
                    widget_glyphs.extend(interior_labels(region, &extraction.dark).into_iter().cloned());
                }
                widgets.push(WidgetNode::detected(class, region.bbox, widgets.len() as u32));
            }
            Verdict::Rejected => doc.diagnostics.rejected.push(RejectedRegion {
                bbox: region.bbox,
                nearest: classification.class,
                distance: classification.distance,
            }),
        }
    }

    let nodes = finalize_nodes(assign_tab_indices(widgets));
    let mut nodes = map_bindings(trace, nodes);
    let text_regions = cluster_letters(&letter_regions);
    let mut clusters = text_regions.clone();
    clusters.extend(cluster_letters(&widget_glyphs));
    let resolution = resolve_text(&clusters, trace, &nodes);
    let mut assignments = resolution.assignments;
    apply_text(&mut assignments, &mut nodes);

    doc.diagnostics.text_clusters = clusters.iter().map(|c| c.bbox).collect();
    doc.diagnostics.unresolved_letters = resolution.unresolved;
    doc.standalone_labels = assignments.into_iter().filter(|a| a.target.is_none()).collect();
    doc.nodes = nodes;
    Ok(Analysis { document: doc, regions: reports, text_regions, extraction })
}

/// Ground-truth widget in a reference scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub class: WidgetClass,
    pub bbox: BBox,
}

#[derive(Debug, Clone)]
pub struct ReferenceScene {
    pub name: String,
    pub image: PixelBuffer,
    pub annotations: Vec<Annotation>,
}

/// How far a candidate's center may sit outside an annotation box.
const ANNOTATION_SLACK: i64 = 3;

/// Feature vectors of the annotated widgets in one reference scene.
/// Widget annotations must match exactly one candidate region; `Letters`
/// annotations take every candidate inside them.
pub fn reference_vectors(scene: &ReferenceScene, config: &PipelineConfig) -> Result<Vec<BaseEntry>> {
    let ex = extract(&scene.image, config);
    let mut used = vec![false; ex.outlines.len()];
    let mut entries = Vec::new();
    for (k, ann) in scene.annotations.iter().enumerate() {
        let zone = ann.bbox.expand(ANNOTATION_SLACK);
        let hits: Vec<usize> = (0..ex.outlines.len())
            .filter(|&i| {
                let (cx, cy) = ex.outlines[i].bbox.center();
                zone.contains_point(cx, cy)
            })
            .collect();
        let ok = if ann.class == WidgetClass::Letters { !hits.is_empty() } else { hits.len() == 1 };
        if !ok {
            return Err(Error::Fixture(format!(
                "{}: annotation {k} ({}) matched {} regions",
                scene.name,
                ann.class,
                hits.len()
            )));
        }
        for i in hits {
            used[i] = true;
            entries.push(BaseEntry { class: ann.class, vector: build_feature_vector(&ex.outlines[i], &ex.dark) });
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::Fixture(format!(
            "{}: region at {:?} has no annotation",
            scene.name, ex.outlines[i].bbox
        )));
    }
    Ok(entries)
}

#[derive(Deserialize)]
struct AnnotationIndex {
    scenes: Vec<IndexedScene>,
}

#[derive(Deserialize)]
struct IndexedScene {
    image: String,
    widgets: Vec<IndexedWidget>,
}

#[derive(Deserialize)]
struct IndexedWidget {
    class: WidgetClass,
    bbox: [i64; 4],
}

/// Loads reference scenes listed in an annotation index. Image paths in the
/// index are relative to `dir`.
///
/// ```json
/// { "scenes": [ { "image": "ref.png",
///                 "widgets": [ { "class": "TextBox", "bbox": [10, 10, 99, 31] } ] } ] }
/// ```
pub fn load_reference_scenes(dir: &Path, annotations: &Path) -> Result<Vec<ReferenceScene>> {
    let text = fs::read_to_string(annotations)
        .map_err(|e| Error::Fixture(format!("{}: {e}", annotations.display())))?;
    let index: AnnotationIndex = serde_json::from_str(&text)?;
    index
        .scenes
        .into_iter()
        .map(|s| {
            let path = dir.join(&s.image);
            let bytes = fs::read(&path).map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
            Ok(ReferenceScene {
                name: s.image,
                image: decode_image(&bytes)?,
                annotations: s
                    .widgets
                    .into_iter()
                    .map(|w| Annotation { class: w.class, bbox: BBox::new(w.bbox[0], w.bbox[1], w.bbox[2], w.bbox[3]) })
                    .collect(),
            })
        })
        .collect()
}

/// Builds a normalized feature base from annotated reference scenes.
pub fn build_feature_base(scenes: &[ReferenceScene], config: &PipelineConfig) -> Result<FeatureBase> {
    let mut entries = Vec::new();
    for s in scenes {
        entries.extend(reference_vectors(s, config)?);
    }
    let missing: Vec<String> = WidgetClass::ALL
        .into_iter()
        .filter(|c| !entries.iter().any(|e| e.class == *c))
        .map(|c| c.name().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingClasses(missing));
    }
    FeatureBase::from_entries(entries)
}
