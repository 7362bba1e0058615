//! The accessible replacement document and its HTML / JSON serializations.
//!
//! Every recognized widget becomes a natively focusable `<input>` placed at
//! the widget's canvas coordinates inside a container sized like the canvas.
//! The container carries an `aria-live` region and a keyup listener that
//! walks the tab order and dispatches mapped handlers with the focused
//! element's coordinates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cbir::{Classification, WidgetClass};
use crate::error::Result;
use crate::geometry::BBox;
use crate::trace::CanvasTrace;

/// Default for [`classify_or_reject`] in normalized distance units.
pub const DEFAULT_REJECTION_CUTOFF: f64 = 0.35;
/// Radio buttons whose centers line up within this many pixels share a group.
pub const RADIO_BAND: f64 = 8.0;
/// JSON schema version written by [`emit_json`].
pub const JSON_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeBinding {
    pub event: String,
    pub position_dependent: bool,
    pub handler: String,
    /// Pointer coordinate handed to position-dependent handlers: the
    /// node's bbox center.
    pub coordinate: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidgetNode {
    pub id: String,
    pub class: WidgetClass,
    pub bbox: BBox,
    pub name: String,
    pub label: String,
    pub value: String,
    pub tab_index: u32,
    pub bindings: Vec<NodeBinding>,
    pub checked: bool,
    /// Position in detection order; breaks tab-order ties.
    pub detection_order: u32,
}

impl WidgetNode {
    /// Fresh node for a detected region. Ids, names and labels are filled
    /// in by [`finalize_nodes`].
    pub fn detected(class: WidgetClass, bbox: BBox, detection_order: u32) -> Self {
        WidgetNode {
            id: String::new(),
            class,
            bbox,
            name: String::new(),
            label: String::new(),
            value: String::new(),
            tab_index: 0,
            bindings: Vec::new(),
            checked: class.checked().unwrap_or(false),
            detection_order,
        }
    }

    pub fn input_type(&self) -> &'static str {
        match self.class {
            WidgetClass::CheckBoxSelected | WidgetClass::CheckBoxUnselected => "checkbox",
            WidgetClass::RadioSelected | WidgetClass::RadioUnselected => "radio",
            WidgetClass::RectButton | WidgetClass::CircButton => "button",
            WidgetClass::TextBox | WidgetClass::Letters => "text",
        }
    }

    pub fn role(&self) -> &'static str {
        match self.class {
            WidgetClass::CheckBoxSelected | WidgetClass::CheckBoxUnselected => "checkbox",
            WidgetClass::RadioSelected | WidgetClass::RadioUnselected => "radio",
            WidgetClass::RectButton | WidgetClass::CircButton => "button",
            WidgetClass::TextBox | WidgetClass::Letters => "textbox",
        }
    }

    fn title(&self) -> &'static str {
        match self.class {
            WidgetClass::CheckBoxSelected | WidgetClass::CheckBoxUnselected => "Checkbox",
            WidgetClass::RadioSelected | WidgetClass::RadioUnselected => "Radio button",
            WidgetClass::RectButton | WidgetClass::CircButton => "Button",
            WidgetClass::TextBox | WidgetClass::Letters => "Text box",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextRole {
    Value,
    Label,
}

/// Where a piece of trace text ended up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextAssignment {
    pub text: String,
    /// Widget id when the text is that widget's value.
    pub target: Option<String>,
    pub role: TextRole,
    pub origin: (f64, f64),
    pub bbox: BBox,
    /// Widget id a standalone label describes, if one sits next to it.
    pub labels: Option<String>,
    pub seq: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiveRegion {
    #[default]
    Polite,
    Assertive,
    Off,
}

impl LiveRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            LiveRegion::Polite => "polite",
            LiveRegion::Assertive => "assertive",
            LiveRegion::Off => "off",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRegion {
    pub bbox: BBox,
    pub nearest: WidgetClass,
    pub distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Regions too far from every feature base entry.
    pub rejected: Vec<RejectedRegion>,
    /// Letter clusters that no trace text command claimed.
    pub unresolved_letters: Vec<BBox>,
    /// Every letter cluster found in the image.
    pub text_clusters: Vec<BBox>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessibleDocument {
    pub width: u32,
    pub height: u32,
    pub nodes: Vec<WidgetNode>,
    pub standalone_labels: Vec<TextAssignment>,
    pub live_region: LiveRegion,
    pub diagnostics: Diagnostics,
}

impl AccessibleDocument {
    pub fn empty(width: u32, height: u32) -> Self {
        AccessibleDocument {
            width,
            height,
            nodes: vec![],
            standalone_labels: vec![],
            live_region: LiveRegion::Polite,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// Outcome of the unknown-region check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted(WidgetClass),
    Rejected,
}

/// Accepts the classification when its distance is within `cutoff`
/// (inclusive).
pub fn classify_or_reject(c: &Classification, cutoff: f64) -> Verdict {
    if c.distance <= cutoff {
        Verdict::Accepted(c.class)
    } else {
        Verdict::Rejected
    }
}

/// Orders nodes top-to-bottom, then left-to-right, then by detection
/// order, and numbers them 1..n in that order.
pub fn assign_tab_indices(mut nodes: Vec<WidgetNode>) -> Vec<WidgetNode> {
    nodes.sort_by_key(|n| (n.bbox.min_y, n.bbox.min_x, n.detection_order));
    for (i, n) in nodes.iter_mut().enumerate() {
        n.tab_index = i as u32 + 1;
    }
    nodes
}

/// Attaches every trace binding to every node. Position-dependent
/// bindings carry the node's center as their coordinate.
pub fn map_bindings(trace: &CanvasTrace, mut nodes: Vec<WidgetNode>) -> Vec<WidgetNode> {
    for n in &mut nodes {
        let center = n.bbox.center();
        n.bindings.extend(trace.bindings.iter().map(|b| NodeBinding {
            event: b.event_name.clone(),
            position_dependent: b.position_dependent,
            handler: b.handler_ref.clone(),
            coordinate: b.position_dependent.then_some(center),
        }));
    }
    nodes
}

/// Groups radio nodes that share a row or column band. Returns, per node
/// index, the group number (radios only). Two groups that each hold a
/// selected radio stay apart, since a form group can check only one.
fn radio_groups(nodes: &[WidgetNode]) -> Vec<Option<usize>> {
    let radios: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].class.is_radio()).collect();
    let mut parent: Vec<usize> = (0..radios.len()).collect();
    let mut has_checked: Vec<bool> = radios.iter().map(|&i| nodes[i].checked).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for a in 0..radios.len() {
        for b in a + 1..radios.len() {
            let (ax, ay) = nodes[radios[a]].bbox.center();
            let (bx, by) = nodes[radios[b]].bbox.center();
            if (ax - bx).abs() <= RADIO_BAND || (ay - by).abs() <= RADIO_BAND {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb || (has_checked[ra] && has_checked[rb]) {
                    continue;
                }
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
                has_checked[lo] |= has_checked[hi];
            }
        }
    }
    let mut numbering = BTreeMap::new();
    let mut out = vec![None; nodes.len()];
    for (k, &i) in radios.iter().enumerate() {
        let root = find(&mut parent, k);
        let next = numbering.len() + 1;
        out[i] = Some(*numbering.entry(root).or_insert(next));
    }
    out
}

/// Assigns ids, names, default labels and default values. Expects nodes in
/// tab order.
pub fn finalize_nodes(mut nodes: Vec<WidgetNode>) -> Vec<WidgetNode> {
    let groups = radio_groups(&nodes);
    let mut counters: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (i, n) in nodes.iter_mut().enumerate() {
        n.id = format!("elem{}", n.tab_index);
        let kind = n.input_type();
        let count = counters.entry(kind).or_insert(0);
        *count += 1;
        n.name = match groups[i] {
            Some(g) => format!("radio{g}"),
            None => format!("{kind}{count}"),
        };
        if n.label.is_empty() {
            n.label = format!("{} {}", n.title(), count);
        }
        if n.value.is_empty() && (n.class.is_checkbox() || n.class.is_radio()) {
            n.value = kind.to_string();
        }
    }
    nodes
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Id of the emitted container element.
pub const CONTAINER_ID: &str = "canvas-a11y";

const SCRIPT: &str = r#"(function () {
  var root = document.getElementById("canvas-a11y");
  var bindings = JSON.parse(document.getElementById("canvas-a11y-bindings").textContent);
  var order = Array.prototype.slice.call(root.querySelectorAll("input[tabindex]"));
  order.sort(function (a, b) { return a.tabIndex - b.tabIndex; });
  function dispatch(el, name) {
    (bindings[el.id] || []).forEach(function (b) {
      if (b.event !== name) { return; }
      var fn = window[b.handler];
      if (typeof fn !== "function") { return; }
      var ctx = { target: el, event: name };
      if (b.positionDependent) { ctx.x = b.x; ctx.y = b.y; }
      fn.call(el, ctx);
    });
  }
  order.forEach(function (el) {
    var seen = { keyup: true };
    (bindings[el.id] || []).forEach(function (b) {
      if (seen[b.event]) { return; }
      seen[b.event] = true;
      el.addEventListener(b.event, function () { dispatch(el, b.event); });
    });
  });
  root.addEventListener("keyup", function (ev) {
    var active = document.activeElement;
    if (ev.key === "Tab" || ev.keyCode === 9) {
      if (order.indexOf(active) < 0 && order.length > 0) {
        active = ev.shiftKey ? order[order.length - 1] : order[0];
        active.focus();
      }
    }
    if (order.indexOf(active) >= 0) { dispatch(active, "keyup"); }
  });
})();"#;

fn binding_table(doc: &AccessibleDocument) -> String {
    let mut table = serde_json::Map::new();
    for n in &doc.nodes {
        let list: Vec<serde_json::Value> = n
            .bindings
            .iter()
            .map(|b| {
                let mut m = serde_json::Map::new();
                m.insert("event".into(), b.event.clone().into());
                m.insert("handler".into(), b.handler.clone().into());
                m.insert("positionDependent".into(), b.position_dependent.into());
                if let Some((x, y)) = b.coordinate {
                    m.insert("x".into(), x.into());
                    m.insert("y".into(), y.into());
                }
                serde_json::Value::Object(m)
            })
            .collect();
        table.insert(n.id.clone(), list.into());
    }
    // `</` cannot appear inside the script element
    serde_json::Value::Object(table).to_string().replace("</", "<\\/")
}

/// Renders the document as an HTML fragment: the positioned container,
/// one `<input>` per node, `<label>`s for standalone text, and the
/// keyboard script.
pub fn emit_html(doc: &AccessibleDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<div id=\"{CONTAINER_ID}\" aria-live=\"{}\" style=\"position: relative; width: {}px; height: {}px\">",
        doc.live_region.as_str(),
        doc.width,
        doc.height
    );
    for n in &doc.nodes {
        let _ = write!(
            out,
            "  <input role=\"{}\" value=\"{}\" name=\"{}\" tabindex=\"{}\"",
            n.role(),
            escape(&n.value),
            escape(&n.name),
            n.tab_index
        );
        let mut events: Vec<&str> = n.bindings.iter().map(|b| b.event.as_str()).collect();
        events.dedup();
        if !events.is_empty() {
            let _ = write!(out, " data-events=\"{}\"", escape(&events.join(" ")));
        }
        let _ = write!(out, " id=\"{}\" type=\"{}\"", escape(&n.id), n.input_type());
        if (n.class.is_checkbox() || n.class.is_radio()) && n.checked {
            out.push_str(" checked");
        }
        let _ = writeln!(
            out,
            " aria-label=\"{}\" style=\"position: absolute; left:{}px; top:{}px; width:{}px; height:{}px\" />",
            escape(&n.label),
            n.bbox.min_x,
            n.bbox.min_y,
            n.bbox.width(),
            n.bbox.height()
        );
    }
    for l in &doc.standalone_labels {
        out.push_str("  <label");
        if let Some(id) = &l.labels {
            let _ = write!(out, " for=\"{}\"", escape(id));
        }
        let _ = writeln!(
            out,
            " style=\"position: absolute; left:{}px; top:{}px\">{}</label>",
            l.bbox.min_x,
            l.bbox.min_y,
            escape(&l.text)
        );
    }
    out.push_str("</div>\n");
    let _ = writeln!(
        out,
        "<script type=\"application/json\" id=\"canvas-a11y-bindings\">{}</script>",
        binding_table(doc)
    );
    let _ = writeln!(out, "<script>\n{SCRIPT}\n</script>");
    out
}

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    version: u32,
    #[serde(flatten)]
    doc: AccessibleDocument,
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
pub fn emit_json(doc: &AccessibleDocument) -> String {
    let value = serde_json::to_value(JsonDocument { version: JSON_VERSION, doc: doc.clone() })
        .expect("document serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<AccessibleDocument> {
    let parsed: JsonDocument = serde_json::from_str(text)?;
    Ok(parsed.doc)
}
