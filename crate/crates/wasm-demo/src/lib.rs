//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes the canvas' RGBA bytes (as returned by
//! `getImageData().data`) plus its size. The overlays come back as RGBA
//! bytes of the same size, ready for `putImageData`.

use canvas_a11y::cbir::WidgetClass;
use canvas_a11y::pipeline::{extract, PipelineConfig};
use canvas_a11y::{analyze, emit_html, parse_trace, FeatureBase, PixelBuffer};
use serde_json::json;
use wasm_bindgen::prelude::*;

const BACKGROUND: [u8; 4] = [255, 255, 255, 255];
const REJECTED: [u8; 4] = [220, 40, 40, 255];
const NESTED: [u8; 4] = [190, 190, 190, 255];

fn class_color(class: WidgetClass) -> [u8; 4] {
    match class {
        WidgetClass::TextBox => [30, 110, 200, 255],
        WidgetClass::CheckBoxSelected | WidgetClass::CheckBoxUnselected => [20, 150, 70, 255],
        WidgetClass::RadioSelected | WidgetClass::RadioUnselected => [130, 60, 180, 255],
        WidgetClass::RectButton => [230, 130, 0, 255],
        WidgetClass::CircButton => [200, 80, 140, 255],
        WidgetClass::Letters => [90, 90, 90, 255],
    }
}

fn pixels(rgba: &[u8], width: u32, height: u32) -> Result<PixelBuffer, String> {
    PixelBuffer::new(width as usize, height as usize, rgba.to_vec()).map_err(|e| e.to_string())
}

fn config(threshold: f64) -> Result<PipelineConfig, String> {
    let cfg = PipelineConfig { zero_crossing_threshold: threshold, ..Default::default() };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn paint(width: u32, height: u32, spans: impl IntoIterator<Item = ((i64, i64), [u8; 4])>) -> Vec<u8> {
    let (w, h) = (width as i64, height as i64);
    let mut out = BACKGROUND.repeat((w * h) as usize);
    for ((x, y), color) in spans {
        if (0..w).contains(&x) && (0..h).contains(&y) {
            let i = ((y * w + x) * 4) as usize;
            out[i..i + 4].copy_from_slice(&color);
        }
    }
    out
}

pub fn edge_overlay_impl(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<Vec<u8>, String> {
    let ex = extract(&pixels(rgba, width, height)?, &config(threshold)?);
    let edges = &ex.edges;
    let ink = (0..edges.height())
        .flat_map(|y| (0..edges.width()).map(move |x| (x, y)))
        .filter(|&(x, y)| edges.get(x, y))
        .map(|(x, y)| ((x as i64, y as i64), [0, 0, 0, 255]));
    Ok(paint(width, height, ink))
}

/// Outline regions colored by their nearest class; rejected candidates in
/// red and enclosed outlines in gray.
pub fn region_overlay_impl(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<Vec<u8>, String> {
    let analysis = analyze(&pixels(rgba, width, height)?, None, &FeatureBase::builtin(), &config(threshold)?)
        .map_err(|e| e.to_string())?;
    let ex = &analysis.extraction;
    let nested = ex.nested.iter().flat_map(|r| r.pixels().map(|p| (p, NESTED)));
    let outlines = ex.outlines.iter().zip(&analysis.regions).flat_map(|(region, report)| {
        let color = if report.accepted { class_color(report.classification.class) } else { REJECTED };
        region.pixels().map(move |p| (p, color))
    });
    Ok(paint(width, height, nested.chain(outlines)))
}

/// One JSON object per outline candidate: bbox, class, distance, verdict.
pub fn region_report_impl(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<String, String> {
    let analysis = analyze(&pixels(rgba, width, height)?, None, &FeatureBase::builtin(), &config(threshold)?)
        .map_err(|e| e.to_string())?;
    let rows: Vec<_> = analysis
        .regions
        .iter()
        .map(|r| {
            json!({
                "bbox": [r.bbox.min_x, r.bbox.min_y, r.bbox.max_x, r.bbox.max_y],
                "class": r.classification.class.name(),
                "distance": r.classification.distance,
                "accepted": r.accepted,
            })
        })
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

pub fn recognize_impl(rgba: &[u8], width: u32, height: u32, trace_json: Option<String>) -> Result<String, String> {
    let buf = pixels(rgba, width, height)?;
    let trace = trace_json.as_deref().map(parse_trace).transpose().map_err(|e| e.to_string())?;
    let analysis = analyze(&buf, trace.as_ref(), &FeatureBase::builtin(), &PipelineConfig::default())
        .map_err(|e| e.to_string())?;
    Ok(emit_html(&analysis.document))
}

#[wasm_bindgen]
pub fn edge_overlay(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<Vec<u8>, JsError> {
    edge_overlay_impl(rgba, width, height, threshold).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn region_overlay(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<Vec<u8>, JsError> {
    region_overlay_impl(rgba, width, height, threshold).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn region_report(rgba: &[u8], width: u32, height: u32, threshold: f64) -> Result<String, JsError> {
    region_report_impl(rgba, width, height, threshold).map_err(|e| JsError::new(&e))
}

/// Accessible HTML for the canvas. `trace_json` is the recorded draw-call
/// trace; without it buttons get generic names and no values.
#[wasm_bindgen]
pub fn recognize(rgba: &[u8], width: u32, height: u32, trace_json: Option<String>) -> Result<String, JsError> {
    recognize_impl(rgba, width, height, trace_json).map_err(|e| JsError::new(&e))
}
