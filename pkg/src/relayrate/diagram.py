"""Information-diagram rendering: a three-circle SVG for three users, a text table otherwise."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .imeasure import AtomTable, atom_table
from .source import SourceModel
from .subsets import format_subset

WIDTH, HEIGHT = 600, 520
RADIUS = 150
CENTRES = ((230, 200), (370, 200), (300, 330))

# label anchor for each of the seven regions, keyed by mask
_REGION_ANCHORS = {
    0b001: (160, 160),
    0b010: (440, 160),
    0b100: (300, 430),
    0b011: (300, 150),
    0b101: (215, 295),
    0b110: (385, 295),
    0b111: (300, 245),
}
_NAME_ANCHORS = ((120, 60), (480, 60), (300, 505))
_FILLS = ("#1f77b4", "#ff7f0e", "#2ca02c")


def render_table(atoms: AtomTable) -> str:
    lines = ["subset\tI_K"]
    lines += [f"{format_subset(m)}\t{v + 0.0:.4f}" for m, v in atoms.items()]
    return "\n".join(lines) + "\n"


def render_svg(atoms: AtomTable) -> str:
    if atoms.num_users != 3:
        raise ValueError("the Venn rendering exists for exactly three users")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for (cx, cy), fill in zip(CENTRES, _FILLS):
        out.append(
            f'<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="{fill}" fill-opacity="0.15" '
            f'stroke="{fill}" stroke-width="2"/>'
        )
    for i, (x, y) in enumerate(_NAME_ANCHORS, start=1):
        out.append(f'<text x="{x}" y="{y}" font-family="sans-serif" font-size="18" text-anchor="middle">W{i}</text>')
    for mask, (x, y) in _REGION_ANCHORS.items():
        label = escape(f"{atoms[mask] + 0.0:.4f}")
        out.append(
            f'<text x="{x}" y="{y}" font-family="monospace" font-size="14" text-anchor="middle" '
            f'data-subset="{format_subset(mask)}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def diagram(model: SourceModel, svg: bool = True) -> str:
    """SVG text when ``svg`` and the source has three users, otherwise the atom table."""
    atoms = atom_table(model)
    if svg and atoms.num_users == 3:
        return render_svg(atoms)
    return render_table(atoms)
