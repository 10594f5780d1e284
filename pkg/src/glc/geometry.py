"""Lossless 2-D polyline geometry.

Each n-D point becomes a chain of attribute segments. In the linear mode the
segment for attribute i is (sign_i * x_i * cos Q_i, mu * x_i * sin Q_i) with
mu = -1 for mirrored (class 2) polylines, so the endpoint's x-coordinate is
exactly the normalized discriminant value sum k_i x_i. Scaffold variants
chain per-attribute rotations (DSC1) or attribute pairs (DSC2). Every
construction here is invertible back to the n-D point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from glc.data import DataError, Dataset
from glc.linear import GlcModel

if TYPE_CHECKING:  # pragma: no cover
    from glc.hyperblocks import Hyperblock


@dataclass
class Polyline:
    """Vertex chain for one point; vertices[0] is the pen-down position."""

    vertices: np.ndarray  # (m, 2)
    endpoint_projection: float
    mirrored: bool
    source_index: int = -1
    class_label: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "class": self.class_label,
            "mirrored": bool(self.mirrored),
            "endpoint_projection": float(self.endpoint_projection),
        }


@dataclass
class Scene:
    """Renderable collection of polylines plus decision annotations."""

    polylines: list[Polyline]
    threshold: float | None
    bounds: tuple[float, float] | None
    axis_range: tuple[float, float]
    legend: dict[str, str]

    def to_json_dict(self) -> dict:
        return {
            "polylines": [p.to_json_dict() for p in self.polylines],
            "threshold": float(self.threshold) if self.threshold is not None else None,
            "bounds": [float(self.bounds[0]), float(self.bounds[1])]
            if self.bounds is not None else None,
            "axis_range": [float(self.axis_range[0]), float(self.axis_range[1])],
            "legend": dict(self.legend),
        }


@dataclass
class DscConfig:
    """Scaffold-chain configuration.

    mode "dsc1": each attribute is a scaffold x_i * (cos th_i, sin th_i),
    chained head to tail in attribute_order; the first scaffold's tail is
    dropped. Default angles: steepest (80 deg) for the leading attribute to
    emphasize the separation attribute, 45 deg for the rest.

    mode "dsc2": attributes are consumed in pairs; vertex j is the running
    sum of the pair points. An odd attribute count duplicates the final
    attribute to complete the last pair.
    """

    mode: str = "dsc1"
    attribute_order: list[int] | None = None
    dsc1_angles: list[float] | None = None
    dsc2_pairing: list[tuple[int, int]] | None = None

    def resolve(self, n: int) -> "DscConfig":
        if self.mode not in ("dsc1", "dsc2"):
            raise DataError(f"unknown scaffold mode {self.mode!r}")
        order = list(self.attribute_order) if self.attribute_order is not None \
            else list(range(n))
        if sorted(order) != list(range(n)):
            raise DataError("attribute_order must be a permutation of all attributes")
        angles = list(self.dsc1_angles) if self.dsc1_angles is not None else \
            [np.radians(80.0)] + [np.radians(45.0)] * (n - 1)
        if self.mode == "dsc1" and len(angles) != n:
            raise DataError(f"need {n} scaffold angles, got {len(angles)}")
        if self.dsc2_pairing is not None:
            pairing = [tuple(p) for p in self.dsc2_pairing]
        else:
            padded = order + ([order[-1]] if n % 2 else [])
            pairing = [(padded[i], padded[i + 1]) for i in range(0, len(padded), 2)]
        if self.mode == "dsc2":
            flat = [i for pair in pairing for i in pair]
            counts = {i: flat.count(i) for i in range(n)}
            dup_allowance = 1 if n % 2 else 0
            extras = sum(c - 1 for c in counts.values() if c > 1)
            if any(c == 0 for c in counts.values()) or extras > dup_allowance \
                    or any(c > 2 for c in counts.values()):
                raise DataError("dsc2 pairing must cover each attribute exactly once "
                                "(final attribute may repeat for odd n)")
        return DscConfig(self.mode, order, angles, pairing)


@dataclass
class SeparationTransform:
    """Vertical disproportional-scaling record for two n-D-disjoint blocks.

    The duplicated separating-attribute values h_i are drawn at 90 degrees
    (zero horizontal contribution) ahead of the regular chain for every
    point of the block that gets lifted.
    """

    separating_attribute: int
    separating_attributes: list[int]
    scaling_value: float
    hb1_id: str
    hb2_id: str
    duplicated_attribute_values: dict[int, list[float]]

    def to_json_dict(self) -> dict:
        return {
            "separating_attribute": int(self.separating_attribute),
            "separating_attributes": [int(i) for i in self.separating_attributes],
            "scaling_value": float(self.scaling_value),
            "hb1_id": self.hb1_id,
            "hb2_id": self.hb2_id,
            "duplicated_attribute_values": {
                str(k): [float(v) for v in vals]
                for k, vals in sorted(self.duplicated_attribute_values.items())
            },
        }


def build_polyline(x, m: GlcModel, mirrored: bool = False,
                   source_index: int = -1, class_label: str | None = None,
                   lead_in: list[float] | None = None) -> Polyline:
    """Chain the attribute segments of one normalized point.

    lead_in values, when given, are drawn first as vertical segments (the
    disproportional-scaling duplicates); they never change the projection.
    """
    xv = np.asarray(x, dtype=float)
    if xv.shape != (m.n_attributes,):
        raise DataError(f"point has shape {xv.shape}, model expects ({m.n_attributes},)")
    mu = -1.0 if mirrored else 1.0
    dx = m.signs * xv * np.cos(m.angles)
    dy = mu * xv * np.sin(m.angles)
    k = len(lead_in) if lead_in else 0
    verts = np.zeros((m.n_attributes + 1 + k, 2))
    for j, h in enumerate(lead_in or []):
        verts[j + 1] = verts[j] + (0.0, mu * h)
    base = k
    for i in range(m.n_attributes):
        verts[base + i + 1, 0] = verts[base + i, 0] + dx[i]
        verts[base + i + 1, 1] = verts[base + i, 1] + dy[i]
    return Polyline(vertices=verts, endpoint_projection=float(verts[-1, 0]),
                    mirrored=mirrored, source_index=source_index,
                    class_label=class_label)


def reconstruct_point(p: Polyline, m: GlcModel) -> np.ndarray:
    """Invert build_polyline: recover the n-D point from the vertex chain.

    Each x_i comes from whichever segment component has the larger
    trigonometric factor, so angles of exactly 0 or 90 degrees stay exact.
    """
    if p.vertices.shape != (m.n_attributes + 1, 2):
        raise DataError(
            f"polyline has {p.vertices.shape[0]} vertices, model expects "
            f"{m.n_attributes + 1}")
    mu = -1.0 if p.mirrored else 1.0
    deltas = np.diff(p.vertices, axis=0)
    cos_q = np.cos(m.angles)
    sin_q = np.sin(m.angles)
    x = np.empty(m.n_attributes)
    for i in range(m.n_attributes):
        if cos_q[i] >= sin_q[i]:
            x[i] = deltas[i, 0] / (m.signs[i] * cos_q[i])
        else:
            x[i] = deltas[i, 1] / (mu * sin_q[i])
    return x


def build_scene(d: Dataset, m: GlcModel,
                bounds: tuple[float, float] | None = None) -> Scene:
    """One polyline per point: class-1 role upright, class-2 role mirrored."""
    c1, c2 = m.class_roles
    for lab in d.labels:
        if lab not in (c1, c2):
            raise DataError(f"label {lab!r} not covered by model roles")
    polylines = []
    for i in range(d.n_points):
        lab = d.labels[i]
        polylines.append(build_polyline(d.points[i], m, mirrored=(lab == c2),
                                        source_index=i, class_label=lab))
    endpoints = [p.endpoint_projection for p in polylines]
    return Scene(polylines=polylines, threshold=m.threshold, bounds=bounds,
                 axis_range=(min(endpoints), max(endpoints)),
                 legend={c1: "class-1", c2: "class-2"})


def dsc_polyline(x, cfg: DscConfig, source_index: int = -1,
                 class_label: str | None = None) -> Polyline:
    """Scaffold-chain polyline for one point under a resolved DscConfig."""
    xv = np.asarray(x, dtype=float)
    n = len(xv)
    rc = cfg.resolve(n)
    if rc.mode == "dsc1":
        ordered = xv[rc.attribute_order]
        steps = np.stack([ordered * np.cos(rc.dsc1_angles),
                          ordered * np.sin(rc.dsc1_angles)], axis=1)
        verts = np.cumsum(steps, axis=0)  # first scaffold tail removed
    else:
        steps = np.array([[xv[a], xv[b]] for a, b in rc.dsc2_pairing])
        verts = np.cumsum(steps, axis=0)
    return Polyline(vertices=verts, endpoint_projection=float(verts[-1, 0]),
                    mirrored=False, source_index=source_index,
                    class_label=class_label)


def invert_dsc2(p: Polyline, cfg: DscConfig, n: int) -> np.ndarray:
    """Recover the point from a DSC2 chain by successive vertex differences."""
    rc = cfg.resolve(n)
    if rc.mode != "dsc2":
        raise DataError("invert_dsc2 needs a dsc2 config")
    steps = np.vstack([p.vertices[:1], np.diff(p.vertices, axis=0)])
    x = np.empty(n)
    for (a, b), (sa, sb) in zip(rc.dsc2_pairing, steps):
        x[a] = sa
        x[b] = sb
    return x


def build_scene_dsc(d: Dataset, cfg: DscConfig,
                    threshold: float | None = None) -> Scene:
    polylines = [dsc_polyline(d.points[i], cfg, source_index=i,
                              class_label=d.labels[i])
                 for i in range(d.n_points)]
    endpoints = [p.endpoint_projection for p in polylines]
    classes = []
    for lab in d.labels:
        if lab not in classes:
            classes.append(lab)
    legend = {lab: f"class-{j + 1}" for j, lab in enumerate(classes)}
    return Scene(polylines=polylines, threshold=threshold, bounds=None,
                 axis_range=(min(endpoints), max(endpoints)), legend=legend)


def _chain_y_extent(polys: list[Polyline], skip: int) -> tuple[float, float]:
    """y-range over attribute-chain vertices, dropping the origin and any
    vertical lead-in vertices (the first skip+1 rows)."""
    ys = np.concatenate([p.vertices[skip + 1:, 1] for p in polys])
    return float(ys.min()), float(ys.max())


def separate_hyperblocks(hb1: "Hyperblock", hb2: "Hyperblock", m: GlcModel,
                         d: Dataset) -> tuple[SeparationTransform, Scene]:
    """Make two n-D-disjoint blocks vertically disjoint in the 2-D scene.

    Finds the attributes where the blocks' intervals do not overlap, lifts
    every point of the block with the greater separating upper-bound sum by
    duplicated separating values scaled so the two vertex bands clear each
    other by a small margin, and returns the transform plus the transformed
    scene. Horizontal projections are unchanged because the duplicates are
    drawn at 90 degrees.
    """
    n = m.n_attributes
    sep = [i for i in range(n)
           if hb1.upper[i] < hb2.lower[i] or hb2.upper[i] < hb1.lower[i]]
    if not sep:
        raise DataError("HBs overlap in n-D: no separating attribute")

    s_up1 = float(np.sum(hb1.upper[sep]))
    s_up2 = float(np.sum(hb2.upper[sep]))
    if s_up1 >= s_up2:
        top, bottom, top_id, bottom_id = hb1, hb2, "a", "b"
    else:
        top, bottom, top_id, bottom_id = hb2, hb1, "b", "a"

    s_lo_top = float(np.sum(top.lower[sep]))
    if s_lo_top <= 0:
        raise DataError("degenerate separation: HB1 lower bound has zero "
                        "separating-attribute sum")

    top_polys = [build_polyline(d.points[i], m, source_index=i,
                                class_label=top.class_label)
                 for i in top.member_indices]
    bottom_polys = [build_polyline(d.points[i], m, source_index=i,
                                   class_label=bottom.class_label)
                    for i in bottom.member_indices]
    t_lo, t_hi = _chain_y_extent(top_polys, 0)
    b_lo, b_hi = _chain_y_extent(bottom_polys, 0)
    scene_height = max(t_hi, b_hi) - min(t_lo, b_lo)
    margin = 0.01 * scene_height if scene_height > 0 else 0.01
    required = (b_hi - t_lo) + margin
    scaling = max(required, 0.0) / s_lo_top

    dup: dict[int, list[float]] = {}
    lifted = []
    for i in top.member_indices:
        h = [float(d.points[i, a] * scaling) for a in sep]
        dup[int(i)] = h
        lifted.append(build_polyline(d.points[i], m, source_index=i,
                                     class_label=top.class_label, lead_in=h))
    polylines = sorted(lifted + bottom_polys, key=lambda p: p.source_index)
    endpoints = [p.endpoint_projection for p in polylines]
    legend = {}
    if top.class_label is not None:
        legend[top.class_label] = "class-1"
    if bottom.class_label is not None and bottom.class_label not in legend:
        legend[bottom.class_label] = "class-2"
    scene = Scene(polylines=polylines, threshold=m.threshold, bounds=None,
                  axis_range=(min(endpoints), max(endpoints)), legend=legend)
    transform = SeparationTransform(
        separating_attribute=sep[0], separating_attributes=sep,
        scaling_value=scaling, hb1_id=top_id, hb2_id=bottom_id,
        duplicated_attribute_values=dup)
    return transform, scene


DEFAULT_ROLE_COLORS = ("#7d3cb5", "#2e8b57", "#cc5500", "#1f6fb5",
                       "#b5a32e", "#666666")


def render_svg(scene: Scene, width: int, height: int,
               colors: dict[str, str] | None = None) -> str:
    """Deterministic standalone SVG: one path per polyline, dashed verticals
    for the discrimination line and the worst-case bounds."""
    if width <= 0 or height <= 0:
        raise DataError("SVG size must be positive")

    xs, ys = [0.0], [0.0]
    for p in scene.polylines:
        xs.extend(p.vertices[:, 0])
        ys.extend(p.vertices[:, 1])
    if scene.threshold is not None:
        xs.append(scene.threshold)
    if scene.bounds is not None:
        xs.extend(scene.bounds)
    xs.extend(scene.axis_range)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad_x = 0.05 * (x1 - x0) if x1 > x0 else 0.5
    pad_y = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    x0, x1, y0, y1 = x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y

    def px(x):
        return (x - x0) / (x1 - x0) * width

    def py(y):
        return height - (y - y0) / (y1 - y0) * height

    role_classes = list(scene.legend)
    palette = {}
    for j, lab in enumerate(role_classes):
        palette[lab] = (colors or {}).get(
            lab, DEFAULT_ROLE_COLORS[j % len(DEFAULT_ROLE_COLORS)])

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="0" y1="{py(0.0):.2f}" x2="{width}" y2="{py(0.0):.2f}" '
        'stroke="#999999" stroke-width="1"/>',
    ]
    for p in scene.polylines:
        color = palette.get(p.class_label, "#333333")
        d_attr = " ".join(
            ("M" if i == 0 else "L") + f"{px(x):.4f},{py(y):.4f}"
            for i, (x, y) in enumerate(p.vertices))
        out.append(f'<path d="{d_attr}" fill="none" stroke="{color}" '
                   'stroke-width="1" stroke-opacity="0.55"/>')
    if scene.threshold is not None:
        tx = px(scene.threshold)
        out.append(f'<line x1="{tx:.4f}" y1="0" x2="{tx:.4f}" y2="{height}" '
                   'stroke="#1c9c31" stroke-width="1.5" '
                   'stroke-dasharray="6,4"/>')
    if scene.bounds is not None:
        for b in scene.bounds:
            bx = px(b)
            out.append(f'<line x1="{bx:.4f}" y1="0" x2="{bx:.4f}" '
                       f'y2="{height}" stroke="#d4b106" stroke-width="1.5" '
                       'stroke-dasharray="3,3"/>')
    ty = 14
    for lab in role_classes:
        out.append(f'<text x="6" y="{ty}" font-size="11" font-family="sans-serif" '
                   f'fill="{palette[lab]}">{lab}</text>')
        ty += 14
    out.append("</svg>")
    return "\n".join(out) + "\n"
