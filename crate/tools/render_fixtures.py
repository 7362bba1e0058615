#!/usr/bin/env python3
"""Renders the vendored fixture corpus.

Every scene is drawn with Pillow using the same pixel conventions as a
Canvas 2D context with crisp 1px strokes, and is written as a triple:

    <name>.png          the rendered canvas
    <name>.trace.json   the draw calls, in the v1 trace format
    <name>.expect.json  ground-truth widgets

Output is deterministic for a given Pillow and font version. Run from the
repository root:

    python3 tools/render_fixtures.py
"""

import json
import math
import random
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
FONT_PATH = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono-Bold.ttf"
FONT_SIZE = 12
FONT_SPEC = "bold 12px monospace"
INK = (0, 0, 0)
PAPER = (255, 255, 255)

CLASSES = [
    "TextBox",
    "CheckBoxSelected",
    "CheckBoxUnselected",
    "RadioSelected",
    "RadioUnselected",
    "RectButton",
    "CircButton",
    "Letters",
]

WORDS = ["Name", "Email", "Yes", "No", "Agree", "Size", "Color", "Mode", "Auto", "City", "Zip", "Note"]
BUTTON_WORDS = ["OK", "Save", "Send", "Next", "Back", "Stop", "Run", "Undo"]
CIRC_WORDS = ["Go", "On", "Up", "B1", "B2", "B3", "Ok", "Hi"]


class Scene:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.image = Image.new("RGB", (width, height), PAPER)
        self.draw = ImageDraw.Draw(self.image)
        self.font = ImageFont.truetype(FONT_PATH, FONT_SIZE)
        self.commands = []
        self.bindings = []
        self.widgets = []
        self.align = "start"
        self.font_set = False

    def _cmd(self, kind, **fields):
        self.commands.append({"seq": len(self.commands), "kind": kind, **fields})

    def _ensure_font(self):
        if not self.font_set:
            self._cmd("setFont", font=FONT_SPEC)
            self.font_set = True

    def _set_align(self, align):
        if self.align != align:
            self._cmd("setTextAlign", align=align)
            self.align = align

    # Canvas-equivalent primitives.

    def stroke_rect(self, x, y, w, h):
        self.draw.rectangle([x, y, x + w - 1, y + h - 1], outline=INK, width=1)
        self._cmd("strokeRect", x=x, y=y, w=w, h=h)

    def fill_rect(self, x, y, w, h):
        self.draw.rectangle([x, y, x + w - 1, y + h - 1], fill=INK)
        self._cmd("fillRect", x=x, y=y, w=w, h=h)

    def arc(self, cx, cy, r, fill=False):
        box = [cx - r, cy - r, cx + r, cy + r]
        if fill:
            self.draw.ellipse(box, fill=INK)
        else:
            self.draw.ellipse(box, outline=INK, width=1)
        self._cmd("arc", x=cx, y=cy, radius=r, startAngle=0, endAngle=round(2 * math.pi, 6), fill=fill)

    def fill_text(self, text, x, y, align="start"):
        self._ensure_font()
        self._set_align(align)
        anchor = "ms" if align == "center" else "ls"
        self.draw.text((x, y), text, fill=INK, font=self.font, anchor=anchor)
        self._cmd("fillText", text=text, x=x, y=y)
        return self.draw.textbbox((x, y), text, font=self.font, anchor=anchor)

    # Widgets. Each returns the ground-truth record.

    def _record(self, cls, bbox, text=None, role=None):
        rec = {"class": cls, "bbox": [int(v) for v in bbox], "text": text, "role": role}
        self.widgets.append(rec)
        return rec

    def checkbox(self, x, y, size, selected):
        self.stroke_rect(x, y, size, size)
        if selected:
            self.fill_rect(x + 4, y + 4, size - 8, size - 8)
        cls = "CheckBoxSelected" if selected else "CheckBoxUnselected"
        return self._record(cls, [x, y, x + size - 1, y + size - 1])

    def radio(self, cx, cy, r, selected):
        self.arc(cx, cy, r)
        if selected:
            self.arc(cx, cy, max(2, r // 2), fill=True)
        cls = "RadioSelected" if selected else "RadioUnselected"
        return self._record(cls, [cx - r, cy - r, cx + r, cy + r])

    def rect_button(self, x, y, w, h, text):
        self.stroke_rect(x, y, w, h)
        self.fill_text(text, x + w // 2, y + h // 2 + 4, align="center")
        return self._record("RectButton", [x, y, x + w - 1, y + h - 1], text, "value")

    def circ_button(self, cx, cy, r, text):
        self.arc(cx, cy, r)
        self.fill_text(text, cx, cy + 4, align="center")
        return self._record("CircButton", [cx - r, cy - r, cx + r, cy + r], text, "value")

    def text_box(self, x, y, w, h):
        self.stroke_rect(x, y, w, h)
        return self._record("TextBox", [x, y, x + w - 1, y + h - 1])

    def letters(self, x, baseline, text):
        box = self.fill_text(text, x, baseline)
        return self._record("Letters", box[:2] + (box[2] - 1, box[3] - 1), text, "label")

    def write(self, directory, name, extra=None):
        directory.mkdir(parents=True, exist_ok=True)
        self.image.save(directory / f"{name}.png", optimize=False, compress_level=9)
        trace = {
            "version": 1,
            "canvas": {"width": self.width, "height": self.height},
            "commands": self.commands,
            "bindings": self.bindings,
        }
        expect = {
            "version": 1,
            "canvas": {"width": self.width, "height": self.height},
            "widgets": self.widgets,
        }
        if extra:
            expect.update(extra)
        dump(directory / f"{name}.trace.json", trace)
        dump(directory / f"{name}.expect.json", expect)


def dump(path, value):
    path.write_text(json.dumps(value, indent=2, sort_keys=True) + "\n")


# Widget factories sized for random layout. Each takes (scene, x, y, rng)
# for the top-left of its cell and returns the footprint (w, h).


def place_checkbox(scene, x, y, rng, cls):
    size = rng.randint(13, 18)
    scene.checkbox(x, y, size, cls == "CheckBoxSelected")
    return size, size


def place_radio(scene, x, y, rng, cls):
    r = rng.randint(7, 9)
    scene.radio(x + r, y + r, r, cls == "RadioSelected")
    return 2 * r + 1, 2 * r + 1


def place_rect_button(scene, x, y, rng, cls):
    w, h = rng.randint(56, 84), rng.randint(24, 30)
    scene.rect_button(x, y, w, h, rng.choice(BUTTON_WORDS))
    return w, h


def place_circ_button(scene, x, y, rng, cls):
    r = rng.randint(18, 24)
    scene.circ_button(x + r, y + r, r, rng.choice(CIRC_WORDS))
    return 2 * r + 1, 2 * r + 1


def place_text_box(scene, x, y, rng, cls):
    w, h = rng.randint(90, 130), rng.randint(20, 26)
    scene.text_box(x, y, w, h)
    return w, h


def place_letters(scene, x, y, rng, cls):
    rec = scene.letters(x, y + 12, rng.choice(WORDS))
    b = rec["bbox"]
    return b[2] - x + 1, b[3] - y + 1


PLACERS = {
    "TextBox": place_text_box,
    "CheckBoxSelected": place_checkbox,
    "CheckBoxUnselected": place_checkbox,
    "RadioSelected": place_radio,
    "RadioUnselected": place_radio,
    "RectButton": place_rect_button,
    "CircButton": place_circ_button,
    "Letters": place_letters,
}

CELL_W, CELL_H = 150, 60
GRID_COLS, GRID_ROWS = 2, 3
MARGIN = 12


def random_scene(rng, classes):
    scene = Scene(CELL_W * GRID_COLS + MARGIN, CELL_H * GRID_ROWS + MARGIN)
    cells = rng.sample(range(GRID_COLS * GRID_ROWS), len(classes))
    for cls, cell in zip(classes, cells):
        col, row = cell % GRID_COLS, cell // GRID_COLS
        x = MARGIN + col * CELL_W + rng.randint(0, 8)
        y = MARGIN + row * CELL_H + rng.randint(0, 4)
        PLACERS[cls](scene, x, y, rng, cls)
    return scene


def corpus(out):
    rng = random.Random(20240607)
    names = []
    for i in range(60):
        count = 1 + i % 6
        # The first eight scenes each feature one class so all are present
        # regardless of sampling.
        classes = [CLASSES[i % len(CLASSES)]] + [rng.choice(CLASSES) for _ in range(count - 1)]
        scene = random_scene(rng, classes)
        name = f"scene_{i:03}"
        scene.write(out, name)
        names.append(name)
    return names


def reference(out):
    """One scene per class with several sizes, plus an annotation index."""
    rng = random.Random(7)
    index = {"version": 1, "scenes": []}
    cells = GRID_COLS * GRID_ROWS
    jobs = [(cls, f"ref_{cls}", None) for cls in CLASSES if cls != "Letters"]
    # Every word the corpus can draw appears once in the letter references.
    jobs += [("Letters", f"ref_Letters_{k}", WORDS[k * cells : (k + 1) * cells]) for k in range(len(WORDS) // cells)]
    for cls, name, words in jobs:
        scene = Scene(CELL_W * GRID_COLS + MARGIN, CELL_H * GRID_ROWS + MARGIN)
        for cell in range(cells):
            col, row = cell % GRID_COLS, cell // GRID_COLS
            x, y = MARGIN + col * CELL_W, MARGIN + row * CELL_H
            if words:
                scene.letters(x, y + 12, words[cell])
            else:
                PLACERS[cls](scene, x, y, rng, cls)
        scene.write(out, name)
        index["scenes"].append(
            {
                "image": f"{name}.png",
                "widgets": [{"class": w["class"], "bbox": w["bbox"]} for w in scene.widgets],
            }
        )
    dump(out / "annotations.json", index)


def usecases(out):
    # Two designed checkboxes, each with a label to its right.
    scene = Scene(240, 100)
    scene.checkbox(20, 20, 16, False)
    scene.letters(44, 33, "Checkbox 1")
    scene.checkbox(20, 60, 16, False)
    scene.letters(44, 73, "Checkbox 2")
    scene.write(out, "two_checkboxes")

    # Three circular buttons sharing one position-dependent click handler
    # that changes the label of whichever button was hit.
    scene = Scene(320, 120)
    for i, cx in enumerate([60, 160, 260]):
        scene.circ_button(cx, 60, 30, f"B{i + 1}")
    scene.bindings.append({"event": "click", "positionDependent": True, "handler": "changeLabel"})
    scene.write(out, "three_circular_buttons")


def degenerate(out):
    """Freehand curves with no widget semantics."""
    rng = random.Random(99)
    for k in range(3):
        scene = Scene(240, 160)
        for _ in range(3 + k):
            pts = []
            x, y = rng.randint(20, 220), rng.randint(20, 140)
            phase, amp = rng.uniform(0, 6.28), rng.uniform(5, 25)
            for t in range(60):
                pts.append((x + t * 2 - 60 + amp * math.sin(phase + t / 7), y + amp * math.cos(phase + t / 5)))
            scene.draw.line(pts, fill=INK, width=1)
        scene.write(out, f"freehand_{k}")


def main():
    reference(ROOT / "reference")
    names = corpus(ROOT / "corpus")
    usecases(ROOT / "usecases")
    degenerate(ROOT / "degenerate")
    dump(
        ROOT / "manifest.json",
        {
            "version": 1,
            "generator": "tools/render_fixtures.py",
            "font": FONT_SPEC,
            "reference": "reference/annotations.json",
            "corpus": names,
            "usecases": ["two_checkboxes", "three_circular_buttons"],
            "degenerate": [f"freehand_{k}" for k in range(3)],
        },
    )


if __name__ == "__main__":
    main()
