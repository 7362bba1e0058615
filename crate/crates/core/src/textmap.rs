//! Matches trace text commands to detected letter clusters and decides
//! whether each text is a widget's value or a standalone label.
//!
//! Text content always comes from the draw call's string argument; pixels
//! only locate it.

use crate::emit::{TextAssignment, TextRole, WidgetNode};
use crate::geometry::BBox;
use crate::labeling::Region;
use crate::trace::{CanvasTrace, DrawOp, TextAlign, NEAR_TOLERANCE};

/// Glyph boxes closer than this (px) belong to the same cluster.
pub const LETTER_GAP: i64 = 3;
/// Approximate advance per character when no cluster matches.
pub const CHAR_WIDTH: f64 = 7.0;
/// Approximate text height above the baseline when no cluster matches.
pub const TEXT_HEIGHT: f64 = 12.0;
/// Largest horizontal gap between a standalone label and the widget it names.
pub const LABEL_REACH: i64 = 24;

/// Connected group of glyph regions; usually one word or label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterCluster {
    pub bbox: BBox,
    pub members: usize,
}

/// Merges glyph regions whose boxes come within [`LETTER_GAP`] of each
/// other. Clusters come back ordered top-to-bottom, left-to-right.
pub fn cluster_letters(regions: &[Region]) -> Vec<LetterCluster> {
    let mut clusters: Vec<LetterCluster> =
        regions.iter().map(|r| LetterCluster { bbox: r.bbox, members: 1 }).collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                if clusters[i].bbox.expand(LETTER_GAP).intersects(&clusters[j].bbox) {
                    let other = clusters.swap_remove(j);
                    clusters[i].bbox = clusters[i].bbox.union(&other.bbox);
                    clusters[i].members += other.members;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    clusters.sort_by_key(|c| (c.bbox.min_y, c.bbox.min_x));
    clusters
}

/// Box a text command would cover with the fixed metric approximation.
pub fn approximate_text_box(text: &str, x: f64, y: f64, align: TextAlign) -> BBox {
    let width = CHAR_WIDTH * text.chars().count().max(1) as f64;
    let left = match align {
        TextAlign::Start | TextAlign::Left => x,
        TextAlign::End | TextAlign::Right => x - width,
        TextAlign::Center => x - width / 2.0,
    };
    BBox::new(
        left.round() as i64,
        (y - TEXT_HEIGHT).round() as i64,
        (left + width).round() as i64 - 1,
        y.round() as i64,
    )
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TextResolution {
    /// One entry per text command, in trace order.
    pub assignments: Vec<TextAssignment>,
    /// Clusters no text command claimed.
    pub unresolved: Vec<BBox>,
}

/// Resolves every `fillText`/`strokeText` command. A command claims the
/// nearest cluster whose box, grown by the near tolerance, contains its
/// origin. If the resulting text box is centered inside a widget that has
/// no value yet, the text becomes that widget's value; otherwise it is a
/// standalone label.
pub fn resolve_text(clusters: &[LetterCluster], trace: &CanvasTrace, widgets: &[WidgetNode]) -> TextResolution {
    let tol = NEAR_TOLERANCE as i64;
    let mut claimed = vec![false; clusters.len()];
    let mut has_value = vec![false; widgets.len()];
    let mut align = TextAlign::default();
    let mut assignments = Vec::new();

    for cmd in &trace.commands {
        if let DrawOp::SetTextAlign { align: a } = cmd.op {
            align = a;
            continue;
        }
        let Some((text, x, y)) = cmd.op.text() else { continue };

        let nearest = clusters
            .iter()
            .enumerate()
            .filter(|(i, c)| !claimed[*i] && c.bbox.expand(tol).contains_point(x, y))
            .min_by(|(_, a), (_, b)| {
                let da = dist2(a.bbox.center(), (x, y));
                let db = dist2(b.bbox.center(), (x, y));
                da.total_cmp(&db)
            })
            .map(|(i, _)| i);
        let bbox = match nearest {
            Some(i) => {
                claimed[i] = true;
                clusters[i].bbox
            }
            None => approximate_text_box(text, x, y, align),
        };

        let (cx, cy) = bbox.center();
        let host = widgets
            .iter()
            .enumerate()
            .filter(|(_, w)| w.bbox.contains_point(cx, cy))
            .min_by_key(|(_, w)| w.bbox.area())
            .map(|(i, _)| i);
        let (target, role) = match host {
            Some(i) if !has_value[i] => {
                has_value[i] = true;
                (Some(widgets[i].id.clone()), TextRole::Value)
            }
            _ => (None, TextRole::Label),
        };
        assignments.push(TextAssignment {
            text: text.to_string(),
            target,
            role,
            origin: (x, y),
            bbox,
            labels: None,
            seq: cmd.seq,
        });
    }

    let unresolved = clusters
        .iter()
        .zip(&claimed)
        .filter(|(_, &c)| !c)
        .map(|(c, _)| c.bbox)
        .collect();
    TextResolution { assignments, unresolved }
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Copies value assignments onto their widgets and links each standalone
/// label to the closest widget on the same row within [`LABEL_REACH`]
/// pixels, which then takes the label text as its accessible name.
pub fn apply_text(assignments: &mut [TextAssignment], widgets: &mut [WidgetNode]) {
    for a in assignments.iter().filter(|a| a.role == TextRole::Value) {
        if let Some(w) = widgets.iter_mut().find(|w| Some(&w.id) == a.target.as_ref()) {
            w.value = a.text.clone();
        }
    }
    let mut named = vec![false; widgets.len()];
    for a in assignments.iter_mut().filter(|a| a.role == TextRole::Label) {
        let (_, ly) = a.bbox.center();
        let best = widgets
            .iter()
            .enumerate()
            .filter(|(i, w)| {
                !named[*i]
                    && ly >= (w.bbox.min_y - 4) as f64
                    && ly <= (w.bbox.max_y + 4) as f64
            })
            .map(|(i, w)| {
                let gap = (a.bbox.min_x - w.bbox.max_x).max(w.bbox.min_x - a.bbox.max_x);
                (i, gap)
            })
            .filter(|&(_, gap)| gap <= LABEL_REACH)
            .min_by_key(|&(i, gap)| (gap, i))
            .map(|(i, _)| i);
        if let Some(i) = best {
            named[i] = true;
            widgets[i].label = a.text.clone();
            a.labels = Some(widgets[i].id.clone());
        }
    }
}
