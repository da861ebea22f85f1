"""File formats: matrix and SIC JSON, boundary CSV, SVG overlays, atomic writes."""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import DimensionError, QGeomError


def fmt(x: float) -> str:
    """Shortest lossless decimal (17 significant digits), without negative zero."""
    x = float(x)
    if x == 0:
        x = 0.0
    return format(x, ".17g")


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qgeom-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise QGeomError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise QGeomError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})") from None


def matrix_from_json(obj) -> np.ndarray:
    """``{"n": n, "re": [[...]], "im": [[...]]}``; ``im`` may be omitted."""
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise QGeomError('matrix JSON needs keys "n" and "re" (and optionally "im")')
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise QGeomError('"n" must be a positive integer')
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros((n, n))), dtype=float)
    except (TypeError, ValueError):
        raise QGeomError("matrix entries must be numbers") from None
    if re.shape != (n, n) or im.shape != (n, n):
        raise DimensionError(f"matrix JSON entries must be {n}x{n}")
    return re + 1j * im


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }


def load_matrix(path: str) -> np.ndarray:
    return matrix_from_json(_read_json(path))


def load_vectors(path: str) -> tuple[int, np.ndarray]:
    """``{"n": n, "vectors": [[[re, im], ...], ...]}``."""
    obj = _read_json(path)
    if not isinstance(obj, dict) or "n" not in obj or "vectors" not in obj:
        raise QGeomError('vector JSON needs keys "n" and "vectors"')
    n = obj["n"]
    try:
        arr = np.array(obj["vectors"], dtype=float)
    except (TypeError, ValueError):
        raise QGeomError("vectors must be lists of [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[1:] != (n, 2):
        raise DimensionError(f"each vector must be a list of {n} [re, im] pairs")
    return n, arr[..., 0] + 1j * arr[..., 1]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def boundary_csv(b) -> str:
    """``phi,s,x,y`` for ray-sampled boundaries, ``theta,h,x,y`` for support-sampled ones."""
    pts = np.asarray(b.points)
    if b.kind == "radial":
        s = np.linalg.norm(pts, axis=1)
        return csv_text(["phi", "s", "x", "y"], zip(b.phi, s, pts[:, 0], pts[:, 1]))
    return csv_text(["theta", "h", "x", "y"], zip(b.theta, b.h, pts[:, 0], pts[:, 1]))


def svg_polylines(layers, size: int = 600, margin: int = 20) -> str:
    """Closed polylines on a fixed canvas, autoscaled to the union of all layers.

    ``layers`` is a list of ``(points, fill, stroke)``; later layers draw on top.
    """
    allpts = np.concatenate([np.asarray(p) for p, _, _ in layers])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    scale = (size - 2 * margin) / span
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    for pts, fill, stroke in layers:
        p = np.asarray(pts)
        xs = margin + (p[:, 0] - lo[0]) * scale
        ys = size - margin - (p[:, 1] - lo[1]) * scale
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(xs, ys))
        out.append(f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
