//! Recognition of GUI widgets drawn on an HTML canvas, and synthesis of an
//! equivalent accessible document.
//!
//! The pipeline reads the canvas pixels (plus, optionally, a recorded trace
//! of the canvas draw calls), finds widget outlines with a Laplacian
//! zero-crossing edge detector and flood-fill labeling, describes each
//! region with a nine-dimensional shape feature vector, and classifies it
//! by nearest neighbor against a feature base of reference widgets. The
//! result is emitted as positioned, natively focusable HTML inputs with
//! roles, labels, tab order and keyboard dispatch.

pub mod cbir;
pub mod edges;
pub mod emit;
pub mod error;
pub mod features;
pub mod geometry;
pub mod labeling;
pub mod pipeline;
pub mod raster;
pub mod synth;
pub mod textmap;
pub mod trace;

pub use cbir::{classify, minkowski_distance, Classification, FeatureBase, Norm, WidgetClass};
pub use emit::{emit_html, emit_json, AccessibleDocument, WidgetNode};
pub use error::{Error, Result};
pub use features::FeatureVector;
pub use geometry::BBox;
pub use pipeline::{analyze, build_feature_base, PipelineConfig};
pub use raster::{decode_image, GrayBuffer, PixelBuffer};
pub use trace::{parse_trace, CanvasTrace};
