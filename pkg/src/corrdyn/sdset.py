"""Membership semi-decision for the bounded-critical-path locus and the
raster renderer for unicritical parameter slices y^e = x^d + c.

"Escaped" verdicts are certificates (an emptied bounded frontier proves
every path escapes); "survived" is only evidence at finite depth, exactly
as for the classical connectedness-locus pictures.  The renderer's dark
region is the survived set: escape depth k maps to intensity
255*(1 - k/N), survived to 0, per-pixel failures to the sentinel 255.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .correspondence import NormalForm, branch_step
from .errors import RootFindingError
from .localheights import ArchStepBounds, local_params
from .padic import Place

DEFAULT_FRONTIER_CAP = 4096
SENTINEL_SHADE = 255
_GRID_CHUNK = 1 << 18  # flat-pixel kernel keys need npix * 2^42 < 2^63


@dataclass(frozen=True)
class PixelVerdict:
    """Outcome of one bounded-path search."""

    status: str  # "survived" | "escaped"
    k: int       # first depth with empty frontier (escaped) or the depth run
    saturated: bool = False

    def record(self) -> str:
        rec = f"status={self.status},k={self.k}"
        if self.saturated:
            rec += ",saturated=true"
        return rec


@dataclass(frozen=True)
class RenderSpec:
    """A parameter-slice raster job for the family y^e = x^d + c."""

    d: int
    e: int
    center: complex = 0j
    half_width_re: float = 4.5
    half_width_im: float = 4.5
    width: int = 256
    height: int = 256
    depth: int = 24
    frontier_cap: int = DEFAULT_FRONTIER_CAP

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("resolution must be positive")
        if self.half_width_re <= 0 or self.half_width_im <= 0:
            raise ValueError("window half-widths must be positive")
        if not (self.d > self.e >= 1):
            raise ValueError("need d > e >= 1")

    def axes(self):
        """Pixel-center coordinates."""
        res = self.center.real - self.half_width_re + (
            (np.arange(self.width) + 0.5) * (2 * self.half_width_re / self.width))
        ims = self.center.imag - self.half_width_im + (
            (np.arange(self.height) + 0.5) * (2 * self.half_width_im / self.height))
        return res, ims


def witness_unicritical(d: int, e: int, c: complex, depth: int,
                        frontier_cap: int = DEFAULT_FRONTIER_CAP) -> PixelVerdict:
    """Bounded-path witness for the critical point 0 of y^e = x^d + c.

    Uses the family's certified escape radius R = (2 max(1,|c|))^(1/d):
    beyond R every branch strictly grows, so points there are dropped and
    an emptied frontier certifies escape.
    """
    c = complex(c)
    k, sat = kernels.escape_point(c.real, c.imag, d, e, depth, frontier_cap)
    if k > 0:
        return PixelVerdict("escaped", int(k), False)
    return PixelVerdict("survived", depth, bool(sat))


def bounded_path_witness(obj, a, depth: int, radius: float | None = None,
                         frontier_cap: int = DEFAULT_FRONTIER_CAP,
                         root_tol: float = 1e-12) -> PixelVerdict:
    """Bounded-path witness for a general correspondence start point.

    Breadth-first frontier of reachable points with all vertices of modulus
    <= radius (default exp(lambda)*1.01), deduplicated on a grid of cell
    radius*1e-6.  A point beyond the radius is dropped only once its
    certified tail bound is positive (every continuation escapes), so an
    emptied frontier is an escape certificate; survival is evidence only.
    """
    corr = obj.to_correspondence() if isinstance(obj, NormalForm) else obj
    if radius is None:
        radius = local_params(corr, Place.archimedean()).escape_radius
    sb = ArchStepBounds(corr)
    cell = radius * 1e-6
    frontier = [complex(a)]
    saturated = False
    for k in range(1, depth + 1):
        children = []
        for x in frontier:
            try:
                roots = branch_step(corr, x, root_tol)
            except RootFindingError:
                # unresolved branch: keep the parent (conservative)
                children.append(x)
                continue
            children.extend(complex(r) for r in roots)
        kept = []
        seen = set()
        for y in children:
            if abs(y) > radius:
                glo, _ = sb.point_enclosure(y)
                if glo > 0:
                    continue  # certified escaping branch
            key = (round(y.real / cell), round(y.imag / cell))
            if key in seen:
                continue
            seen.add(key)
            kept.append(y)
        if not kept:
            return PixelVerdict("escaped", k, False)
        if len(kept) > frontier_cap:
            return PixelVerdict("survived", depth, True)
        frontier = kept
    return PixelVerdict("survived", depth, saturated)


def render(spec: RenderSpec):
    """Raster of per-pixel witnesses on the critical point 0.

    Returns ``(image, summary)``: image a uint8 array (row-major, row 0 at
    the lowest imaginary coordinate), summary a dict with the survived
    count, bounding box of survived pixel centers, saturation and failure
    counts.
    """
    res, ims = spec.axes()
    karr = np.zeros((spec.height, spec.width), dtype=np.int32)
    satarr = np.zeros((spec.height, spec.width), dtype=np.bool_)
    rows_per_chunk = max(1, _GRID_CHUNK // spec.width)
    for y0 in range(0, spec.height, rows_per_chunk):
        y1 = min(spec.height, y0 + rows_per_chunk)
        k, s = kernels.escape_grid(res, ims[y0:y1], spec.d, spec.e,
                                   spec.depth, spec.frontier_cap)
        karr[y0:y1] = k
        satarr[y0:y1] = s
    survived = karr == 0
    image = np.zeros((spec.height, spec.width), dtype=np.uint8)
    esc = ~survived
    image[esc] = np.rint(255.0 * (1.0 - karr[esc] / spec.depth)).astype(np.uint8)
    summary = {
        "survived_pixels": int(survived.sum()),
        "saturated_pixels": int(satarr.sum()),
        "failed_pixels": 0,
        "depth": spec.depth,
    }
    if survived.any():
        ys, xs = np.nonzero(survived)
        summary["bbox"] = (float(res[xs.min()]), float(res[xs.max()]),
                           float(ims[ys.min()]), float(ims[ys.max()]))
    else:
        summary["bbox"] = (0.0, 0.0, 0.0, 0.0)
    return image, summary


def summary_record(summary: dict) -> str:
    re0, re1, im0, im1 = summary["bbox"]
    return (f"survived_pixels={summary['survived_pixels']},"
            f"bbox={re0:.12g},{re1:.12g},{im0:.12g},{im1:.12g}")


def write_pgm(path: str, image: np.ndarray):
    """Binary PGM (P5), maxval 255, row-major."""
    if image.dtype != np.uint8 or image.ndim != 2:
        raise ValueError("image must be a 2-D uint8 array")
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(image.tobytes())
