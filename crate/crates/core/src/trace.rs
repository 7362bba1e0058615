//! Recorded canvas draw-command traces (schema version 1).
//!
//! ```json
//! { "version": 1,
//!   "canvas": { "width": 300, "height": 150 },
//!   "commands": [ { "seq": 0, "kind": "strokeRect", "x": 10, "y": 10, "w": 14, "h": 14 } ],
//!   "bindings": [ { "event": "click", "positionDependent": true, "handler": "toggle" } ] }
//! ```
//!
//! Command arguments by kind: `fillRect`/`strokeRect` take `x y w h`;
//! `arc` takes `x y radius startAngle endAngle` and an optional `fill`
//! flag; `fillText`/`strokeText` take `text x y`; `setFont` takes `font`;
//! `setTextAlign` takes `align`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::BBox;

/// How far (px) a command anchor may sit outside a bbox and still be "near" it.
pub const NEAR_TOLERANCE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TextAlign {
    #[default]
    Start,
    End,
    Left,
    Right,
    Center,
}

impl TextAlign {
    pub fn as_str(self) -> &'static str {
        match self {
            TextAlign::Start => "start",
            TextAlign::End => "end",
            TextAlign::Left => "left",
            TextAlign::Right => "right",
            TextAlign::Center => "center",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "start" => TextAlign::Start,
            "end" => TextAlign::End,
            "left" => TextAlign::Left,
            "right" => TextAlign::Right,
            "center" => TextAlign::Center,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DrawOp {
    FillRect { x: f64, y: f64, w: f64, h: f64 },
    StrokeRect { x: f64, y: f64, w: f64, h: f64 },
    Arc { x: f64, y: f64, radius: f64, start_angle: f64, end_angle: f64, fill: bool },
    FillText { text: String, x: f64, y: f64 },
    StrokeText { text: String, x: f64, y: f64 },
    SetFont { font: String },
    SetTextAlign { align: TextAlign },
}

impl DrawOp {
    pub fn kind(&self) -> &'static str {
        match self {
            DrawOp::FillRect { .. } => "fillRect",
            DrawOp::StrokeRect { .. } => "strokeRect",
            DrawOp::Arc { .. } => "arc",
            DrawOp::FillText { .. } => "fillText",
            DrawOp::StrokeText { .. } => "strokeText",
            DrawOp::SetFont { .. } => "setFont",
            DrawOp::SetTextAlign { .. } => "setTextAlign",
        }
    }

    /// Rect origin, arc center or text origin. State setters have none.
    pub fn anchor(&self) -> Option<(f64, f64)> {
        match *self {
            DrawOp::FillRect { x, y, .. }
            | DrawOp::StrokeRect { x, y, .. }
            | DrawOp::Arc { x, y, .. }
            | DrawOp::FillText { x, y, .. }
            | DrawOp::StrokeText { x, y, .. } => Some((x, y)),
            DrawOp::SetFont { .. } | DrawOp::SetTextAlign { .. } => None,
        }
    }

    /// Text and origin for `fillText` / `strokeText`.
    pub fn text(&self) -> Option<(&str, f64, f64)> {
        match self {
            DrawOp::FillText { text, x, y } | DrawOp::StrokeText { text, x, y } => Some((text, *x, *y)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrawCommand {
    pub seq: u64,
    pub op: DrawOp,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EventBinding {
    #[serde(rename = "event")]
    pub event_name: String,
    #[serde(rename = "positionDependent")]
    pub position_dependent: bool,
    #[serde(rename = "handler")]
    pub handler_ref: String,
}

/// Non-fatal parse finding, such as an unknown command kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceWarning {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanvasTrace {
    pub canvas_width: u32,
    pub canvas_height: u32,
    pub commands: Vec<DrawCommand>,
    pub bindings: Vec<EventBinding>,
    pub warnings: Vec<TraceWarning>,
}

impl CanvasTrace {
    pub fn empty(canvas_width: u32, canvas_height: u32) -> Self {
        Self { canvas_width, canvas_height, commands: vec![], bindings: vec![], warnings: vec![] }
    }

    /// Canonical v1 document. Warnings are not serialized.
    pub fn to_json(&self) -> String {
        let commands: Vec<Value> = self
            .commands
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("seq".into(), json!(c.seq));
                m.insert("kind".into(), json!(c.op.kind()));
                match &c.op {
                    DrawOp::FillRect { x, y, w, h } | DrawOp::StrokeRect { x, y, w, h } => {
                        m.insert("x".into(), json!(x));
                        m.insert("y".into(), json!(y));
                        m.insert("w".into(), json!(w));
                        m.insert("h".into(), json!(h));
                    }
                    DrawOp::Arc { x, y, radius, start_angle, end_angle, fill } => {
                        m.insert("x".into(), json!(x));
                        m.insert("y".into(), json!(y));
                        m.insert("radius".into(), json!(radius));
                        m.insert("startAngle".into(), json!(start_angle));
                        m.insert("endAngle".into(), json!(end_angle));
                        m.insert("fill".into(), json!(fill));
                    }
                    DrawOp::FillText { text, x, y } | DrawOp::StrokeText { text, x, y } => {
                        m.insert("text".into(), json!(text));
                        m.insert("x".into(), json!(x));
                        m.insert("y".into(), json!(y));
                    }
                    DrawOp::SetFont { font } => {
                        m.insert("font".into(), json!(font));
                    }
                    DrawOp::SetTextAlign { align } => {
                        m.insert("align".into(), json!(align.as_str()));
                    }
                }
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "version": 1,
            "canvas": { "width": self.canvas_width, "height": self.canvas_height },
            "commands": commands,
            "bindings": self.bindings,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("trace serializes");
        s.push('\n');
        s
    }
}

fn err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Trace { path: path.into(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(format!("{path}.{key}"), "missing required field"))
}

fn number(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64> {
    field(obj, path, key)?
        .as_f64()
        .ok_or_else(|| err(format!("{path}.{key}"), "expected a number"))
}

fn positive(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64> {
    let v = number(obj, path, key)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(err(format!("{path}.{key}"), format!("must be positive, got {v}")))
    }
}

fn string(obj: &Map<String, Value>, path: &str, key: &str) -> Result<String> {
    field(obj, path, key)?
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| err(format!("{path}.{key}"), "expected a string"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a [Value]> {
    match obj.get(key) {
        None => Ok(&[]),
        Some(v) => v
            .as_array()
            .map(Vec::as_slice)
            .ok_or_else(|| err(format!("{path}.{key}"), "expected an array")),
    }
}

fn dimension(obj: &Map<String, Value>, key: &str) -> Result<u32> {
    let path = format!("canvas.{key}");
    let v = field(obj, "canvas", key)?;
    match v.as_u64() {
        Some(n) if n >= 1 && n <= u32::MAX as u64 => Ok(n as u32),
        _ => Err(err(path, format!("expected a positive integer, got {v}"))),
    }
}

fn parse_op(obj: &Map<String, Value>, path: &str, kind: &str) -> Result<Option<DrawOp>> {
    let op = match kind {
        "fillRect" | "strokeRect" => {
            let (x, y) = (number(obj, path, "x")?, number(obj, path, "y")?);
            let (w, h) = (positive(obj, path, "w")?, positive(obj, path, "h")?);
            if kind == "fillRect" {
                DrawOp::FillRect { x, y, w, h }
            } else {
                DrawOp::StrokeRect { x, y, w, h }
            }
        }
        "arc" => DrawOp::Arc {
            x: number(obj, path, "x")?,
            y: number(obj, path, "y")?,
            radius: positive(obj, path, "radius")?,
            start_angle: number(obj, path, "startAngle")?,
            end_angle: number(obj, path, "endAngle")?,
            fill: match obj.get("fill") {
                None => false,
                Some(v) => v.as_bool().ok_or_else(|| err(format!("{path}.fill"), "expected a boolean"))?,
            },
        },
        "fillText" | "strokeText" => {
            let text = string(obj, path, "text")?;
            let (x, y) = (number(obj, path, "x")?, number(obj, path, "y")?);
            if kind == "fillText" {
                DrawOp::FillText { text, x, y }
            } else {
                DrawOp::StrokeText { text, x, y }
            }
        }
        "setFont" => DrawOp::SetFont { font: string(obj, path, "font")? },
        "setTextAlign" => {
            let s = string(obj, path, "align")?;
            let align = TextAlign::parse(&s)
                .ok_or_else(|| err(format!("{path}.align"), format!("unknown alignment {s:?}")))?;
            DrawOp::SetTextAlign { align }
        }
        _ => return Ok(None),
    };
    Ok(Some(op))
}

/// Parses and validates a v1 trace document.
pub fn parse_trace(text: &str) -> Result<CanvasTrace> {
    let root: Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
    let root = object(&root, "$")?;
    match root.get("version") {
        None => {}
        Some(v) if v.as_u64() == Some(1) => {}
        Some(v) => return Err(err("version", format!("unsupported version {v}"))),
    }
    let canvas = object(field(root, "$", "canvas")?, "canvas")?;
    let canvas_width = dimension(canvas, "width")?;
    let canvas_height = dimension(canvas, "height")?;

    let mut commands = Vec::new();
    let mut warnings = Vec::new();
    let mut last_seq: Option<u64> = None;
    for (i, raw) in array(root, "$", "commands")?.iter().enumerate() {
        let path = format!("commands[{i}]");
        let obj = object(raw, &path)?;
        let seq_value = field(obj, &path, "seq")?;
        let seq = seq_value
            .as_u64()
            .ok_or_else(|| err(format!("{path}.seq"), "expected a nonnegative integer"))?;
        if last_seq.is_some_and(|l| seq <= l) {
            return Err(err(format!("{path}.seq"), format!("seq {seq} is not increasing")));
        }
        last_seq = Some(seq);
        let kind = string(obj, &path, "kind")?;
        match parse_op(obj, &path, &kind)? {
            Some(op) => commands.push(DrawCommand { seq, op }),
            None => warnings.push(TraceWarning { path, message: format!("skipped unknown command kind {kind:?}") }),
        }
    }

    let mut bindings = Vec::new();
    for (i, raw) in array(root, "$", "bindings")?.iter().enumerate() {
        let path = format!("bindings[{i}]");
        let obj = object(raw, &path)?;
        let event_name = string(obj, &path, "event")?;
        if event_name.is_empty() {
            return Err(err(format!("{path}.event"), "event name must not be empty"));
        }
        let position_dependent = field(obj, &path, "positionDependent")?
            .as_bool()
            .ok_or_else(|| err(format!("{path}.positionDependent"), "expected a boolean"))?;
        let handler_ref = string(obj, &path, "handler")?;
        bindings.push(EventBinding { event_name, position_dependent, handler_ref });
    }

    Ok(CanvasTrace { canvas_width, canvas_height, commands, bindings, warnings })
}

/// Commands whose anchor lies within `bbox` grown by [`NEAR_TOLERANCE`],
/// boundary inclusive, in trace order.
pub fn commands_near<'a>(trace: &'a CanvasTrace, bbox: &BBox) -> Vec<&'a DrawCommand> {
    let (x0, y0) = (bbox.min_x as f64 - NEAR_TOLERANCE, bbox.min_y as f64 - NEAR_TOLERANCE);
    let (x1, y1) = (bbox.max_x as f64 + NEAR_TOLERANCE, bbox.max_y as f64 + NEAR_TOLERANCE);
    trace
        .commands
        .iter()
        .filter(|c| c.op.anchor().is_some_and(|(x, y)| x >= x0 && x <= x1 && y >= y0 && y <= y1))
        .collect()
}
