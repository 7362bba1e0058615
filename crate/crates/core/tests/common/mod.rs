#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use canvas_a11y::cbir::{minkowski_distance, WidgetClass};
use canvas_a11y::pipeline::{analyze, Analysis, PipelineConfig};
use canvas_a11y::raster::BinaryMap;
use canvas_a11y::{decode_image, parse_trace, BBox, CanvasTrace, FeatureBase, FeatureVector, Norm, PixelBuffer};
use serde_json::Value;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub struct Fixture {
    pub name: String,
    pub image: PixelBuffer,
    pub trace: CanvasTrace,
    pub expected: Vec<ExpectedWidget>,
}

pub struct ExpectedWidget {
    pub class: WidgetClass,
    pub bbox: BBox,
    pub text: Option<String>,
}

impl Fixture {
    pub fn load(group: &str, name: &str) -> Fixture {
        let stem = fixtures_dir().join(group).join(name);
        let with = |ext: &str| PathBuf::from(format!("{}{ext}", stem.display()));
        let image = decode_image(&fs::read(with(".png")).expect("fixture image")).expect("fixture decodes");
        let trace = parse_trace(&fs::read_to_string(with(".trace.json")).expect("fixture trace")).expect("trace parses");
        let expect: Value =
            serde_json::from_str(&fs::read_to_string(with(".expect.json")).expect("fixture expectation")).unwrap();
        let expected = expect["widgets"]
            .as_array()
            .unwrap()
            .iter()
            .map(|w| {
                let b: Vec<i64> = w["bbox"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
                ExpectedWidget {
                    class: w["class"].as_str().unwrap().parse().unwrap(),
                    bbox: BBox::new(b[0], b[1], b[2], b[3]),
                    text: w["text"].as_str().map(str::to_string),
                }
            })
            .collect();
        Fixture { name: format!("{group}/{name}"), image, trace, expected }
    }

    pub fn analyze(&self, base: &FeatureBase) -> Analysis {
        analyze(&self.image, Some(&self.trace), base, &PipelineConfig::default()).expect("analysis succeeds")
    }
}

fn manifest() -> Value {
    serde_json::from_str(&fs::read_to_string(fixtures_dir().join("manifest.json")).unwrap()).unwrap()
}

fn group(key: &str, dir: &str) -> Vec<Fixture> {
    manifest()[key].as_array().unwrap().iter().map(|n| Fixture::load(dir, n.as_str().unwrap())).collect()
}

pub fn corpus() -> Vec<Fixture> {
    group("corpus", "corpus")
}

pub fn usecases() -> Vec<Fixture> {
    group("usecases", "usecases")
}

pub fn degenerate() -> Vec<Fixture> {
    group("degenerate", "degenerate")
}

pub fn all_fixtures() -> Vec<Fixture> {
    let mut v = corpus();
    v.extend(usecases());
    v.extend(degenerate());
    v
}

/// How far (px) a detected center may fall outside the drawn widget box.
pub const MATCH_SLACK: i64 = 3;

fn centered_in(zone: &BBox, b: &BBox) -> bool {
    let (x, y) = b.center();
    zone.expand(MATCH_SLACK).contains_point(x, y)
}

/// `(correct, total)` widget classifications for one fixture. Letters are
/// correct when a standalone text cluster sits on them; everything else
/// needs a node of the right class.
pub fn score(fixture: &Fixture, analysis: &Analysis) -> (usize, usize) {
    let correct = fixture
        .expected
        .iter()
        .filter(|w| {
            if w.class == WidgetClass::Letters {
                analysis.text_regions.iter().any(|c| centered_in(&w.bbox, &c.bbox))
            } else {
                analysis.document.nodes.iter().any(|n| n.class == w.class && centered_in(&w.bbox, &n.bbox))
            }
        })
        .count();
    (correct, fixture.expected.len())
}

pub fn detected_count(analysis: &Analysis) -> usize {
    analysis.document.nodes.len() + analysis.text_regions.len()
}

/// Union-find labeling with 8-connectivity, relabeled in row-major order
/// of first appearance.
pub fn union_find_labels(map: &BinaryMap) -> Vec<u32> {
    let (w, h) = (map.width(), map.height());
    let mut parent: Vec<usize> = (0..w * h).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for y in 0..h {
        for x in 0..w {
            if !map.get(x, y) {
                continue;
            }
            for (dx, dy) in [(-1i64, -1i64), (0, -1), (1, -1), (-1, 0)] {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 {
                    continue;
                }
                let (nx, ny) = (nx as usize, ny as usize);
                if map.get(nx, ny) {
                    let a = find(&mut parent, y * w + x);
                    let b = find(&mut parent, ny * w + nx);
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut names = std::collections::HashMap::new();
    let mut out = vec![0u32; w * h];
    for i in 0..w * h {
        if map.data()[i] {
            let root = find(&mut parent, i);
            let next = names.len() as u32 + 1;
            out[i] = *names.entry(root).or_insert(next);
        }
    }
    out
}

/// Exhaustive nearest-entry scan; ties go to the class listed first.
pub fn oracle_classify(query: &FeatureVector, base: &FeatureBase, p: Norm) -> (WidgetClass, f64) {
    base.entries()
        .iter()
        .map(|e| (e.class, minkowski_distance(query, &e.vector, p, base.scales()).unwrap()))
        .min_by(|a, b| a.1.total_cmp(&b.1).then((a.0 as usize).cmp(&(b.0 as usize))))
        .unwrap()
}

/// Random but well-formed feature vector.
pub fn random_vector(rng: &mut impl rand::Rng) -> FeatureVector {
    FeatureVector {
        num_lines: rng.gen_range(0..12),
        num_equal_lines: rng.gen_range(0..30),
        num_adjacent_equal_lines: rng.gen_range(0..12),
        num_right_angles: rng.gen_range(0..8),
        label_count_code: [0, 10, 20][rng.gen_range(0..3)],
        square_compliance: rng.gen(),
        circle_compliance: rng.gen(),
        rect_compliance: rng.gen(),
        xy_extent_equality: rng.gen(),
    }
}

/// One opening tag: element name plus attributes in source order.
#[derive(Debug)]
pub struct Tag {
    pub name: String,
    pub attrs: Vec<(String, String)>,
}

impl Tag {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Minimal scanner for the markup the emitter produces: opening tags with
/// double-quoted attributes; script bodies are skipped.
pub fn scan_tags(html: &str) -> Vec<Tag> {
    let mut tags = Vec::new();
    let mut rest = html;
    while let Some(start) = rest.find('<') {
        rest = &rest[start + 1..];
        if rest.starts_with('/') || rest.starts_with('!') {
            continue;
        }
        let end = rest.find('>').expect("unterminated tag");
        let body = rest[..end].trim_end_matches('/').trim();
        let mut parts = body.splitn(2, char::is_whitespace);
        let name = parts.next().unwrap().to_ascii_lowercase();
        let mut attrs = Vec::new();
        let mut a = parts.next().unwrap_or("").trim();
        while !a.is_empty() {
            let key_end = a.find(|c: char| c == '=' || c.is_whitespace()).unwrap_or(a.len());
            let key = a[..key_end].to_string();
            let tail = a[key_end..].trim_start();
            if !tail.starts_with('=') {
                attrs.push((key, String::new()));
                a = tail;
                continue;
            }
            let after = tail[1..].trim_start();
            assert!(after.starts_with('"'), "unquoted attribute in <{name}>");
            let close = after[1..].find('"').expect("unterminated attribute");
            attrs.push((key, after[1..1 + close].to_string()));
            a = after[close + 2..].trim_start();
        }
        rest = &rest[end + 1..];
        if name == "script" {
            let close = rest.find("</script>").expect("unterminated script");
            rest = &rest[close..];
        }
        tags.push(Tag { name, attrs });
    }
    tags
}

/// Checks the emission rules on one HTML document; returns the problems.
pub fn audit_html(html: &str) -> Vec<String> {
    const INTERACTIVE: [&str; 6] = ["input", "button", "select", "textarea", "a", "area"];
    const NATIVE_FOCUSABLE: [&str; 4] = ["input", "button", "select", "textarea"];
    let mut problems = Vec::new();
    let mut indices = Vec::new();
    let mut checked_groups = std::collections::BTreeSet::new();
    for tag in scan_tags(html) {
        if tag.attr("type") == Some("radio") && tag.attr("checked").is_some() {
            let name = tag.attr("name").unwrap_or("").to_string();
            if !checked_groups.insert(name.clone()) {
                problems.push(format!("radio group {name:?} has two checked members"));
            }
        }
        let interactive = INTERACTIVE.contains(&tag.name.as_str()) || tag.attr("tabindex").is_some();
        if !interactive {
            continue;
        }
        if !NATIVE_FOCUSABLE.contains(&tag.name.as_str()) {
            problems.push(format!("<{}> is interactive but not natively focusable", tag.name));
            continue;
        }
        if tag.attr("role").is_none_or(str::is_empty) {
            problems.push(format!("<{}> lacks a role", tag.name));
        }
        match tag.attr("tabindex").and_then(|t| t.parse::<i64>().ok()) {
            Some(t) => indices.push(t),
            None => problems.push(format!("<{}> lacks a numeric tabindex", tag.name)),
        }
        let named = ["aria-label", "value"].iter().any(|k| tag.attr(k).is_some_and(|v| !v.is_empty()));
        if !named {
            problems.push(format!("<{}> has neither label nor value", tag.name));
        }
    }
    indices.sort();
    if indices != (1..=indices.len() as i64).collect::<Vec<_>>() {
        problems.push(format!("tab indices {indices:?} are not 1..n"));
    }
    problems
}
