"""Parameter sweeps over channel ratio and power budget, with CSV and SVG output."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .baseline import non_eh_msr, relative_gain
from .model import ChannelState, SystemConfig, db_to_linear
from .oracle import GridSpec, grid_search
from .solver import OptimizationResult, alternating_optimize, profile_optimize

__all__ = [
    "SweepSpec",
    "SweepRow",
    "CSV_HEADER",
    "METHODS",
    "CHARTS",
    "cnr_from_beta",
    "solve",
    "run_sweep",
    "emit_csv",
    "format_csv",
    "read_csv",
    "render_svg",
]

CSV_HEADER = "beta_db,ptot_dbw,eta,theta_star,omega_star,r_sum_ts,r_sum_non_eh,gain_ts_vs_non_eh"
METHODS = ("alt", "grid", "exact")
CHARTS = ("surface-as-heatmap", "msr-vs-beta", "msr-vs-ptot", "gain-surface")


@dataclass(frozen=True)
class SweepSpec:
    h1: float = 1.0
    beta_db_min: float = -10.0
    beta_db_max: float = 10.0
    beta_db_steps: int = 21
    ptot_dbw_min: float = -10.0
    ptot_dbw_max: float = 10.0
    ptot_dbw_steps: int = 21
    eta: float = 1.0
    epsilon: float = 1e-9

    def __post_init__(self):
        if not self.h1 > 0:
            raise ValueError(f"h1 must be positive, got {self.h1}")
        if self.beta_db_steps < 1 or self.ptot_dbw_steps < 1:
            raise ValueError("step counts must be at least 1")
        if self.beta_db_min > self.beta_db_max:
            raise ValueError("beta_db_min exceeds beta_db_max")
        if self.ptot_dbw_min > self.ptot_dbw_max:
            raise ValueError("ptot_dbw_min exceeds ptot_dbw_max")
        if not (0 < self.eta <= 1):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")

    def betas_db(self) -> np.ndarray:
        return np.linspace(self.beta_db_min, self.beta_db_max, self.beta_db_steps)

    def ptots_dbw(self) -> np.ndarray:
        return np.linspace(self.ptot_dbw_min, self.ptot_dbw_max, self.ptot_dbw_steps)


@dataclass(frozen=True)
class SweepRow:
    beta_db: float
    ptot_dbw: float
    eta: float
    theta_star: float
    omega_star: float
    r_sum_ts: float
    r_sum_non_eh: float
    gain_ts_vs_non_eh: float
    # not written to CSV; False marks a cell whose solver hit its iteration cap
    converged: bool = True


_CSV_FIELDS = tuple(f.name for f in fields(SweepRow) if f.name != "converged")


def cnr_from_beta(h1: float, beta_db: float) -> ChannelState:
    """Channel pair with ``H2 = h1 * 10^(beta_db/10)``."""
    return ChannelState(h1, h1 * db_to_linear(beta_db))


def solve(cfg: SystemConfig, ch: ChannelState, method: str = "alt", grid: GridSpec | None = None) -> OptimizationResult:
    """Dispatch to one of the optimizers by CLI tag (``alt``, ``grid`` or ``exact``)."""
    if method == "alt":
        return alternating_optimize(cfg, ch)
    if method == "exact":
        return profile_optimize(cfg, ch)
    if method == "grid":
        return grid_search(cfg, ch, grid or GridSpec())
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _cell(spec: SweepSpec, method: str, grid: GridSpec | None, beta_db: float, ptot_dbw: float) -> SweepRow:
    ch = cnr_from_beta(spec.h1, beta_db)
    cfg = SystemConfig(p_tot=db_to_linear(ptot_dbw), eta=spec.eta, epsilon=spec.epsilon)
    res = solve(cfg, ch, method, grid)
    r_ref = non_eh_msr(cfg, ch)
    return SweepRow(
        beta_db=float(beta_db),
        ptot_dbw=float(ptot_dbw),
        eta=spec.eta,
        theta_star=res.policy.theta,
        omega_star=res.policy.omega,
        r_sum_ts=res.r_sum,
        r_sum_non_eh=r_ref,
        gain_ts_vs_non_eh=relative_gain(res.r_sum, r_ref),
        converged=res.converged,
    )


def run_sweep(spec: SweepSpec, method: str = "alt", *, grid: GridSpec | None = None, workers: int = 1) -> list[SweepRow]:
    """Solve every (beta, P_tot) cell; rows come back beta-major regardless of ``workers``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    cells = [(b, p) for b in spec.betas_db() for p in spec.ptots_dbw()]
    if workers <= 1:
        return [_cell(spec, method, grid, b, p) for b, p in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda bp: _cell(spec, method, grid, *bp), cells))


def format_csv(rows: Sequence[SweepRow]) -> str:
    if not rows:
        raise ValueError("cannot emit an empty sweep")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow([format(getattr(row, name), ".9g") for name in _CSV_FIELDS])
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], destination) -> Path:
    """Write rows as CSV (9 significant digits, LF line endings)."""
    text = format_csv(rows)
    path = Path(destination)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(source) -> list[SweepRow]:
    with open(source, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {source}: {header}")
        return [SweepRow(*(float(v) for v in rec)) for rec in reader]


# --- SVG rendering -----------------------------------------------------------

# Sequential colour scale used by the heatmaps, low -> high.
_PALETTE = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))
_TS_COLOR = "#d62728"
_REF_COLOR = "#1f77b4"
_DASHES = ("", "6,3", "2,3", "8,3,2,3")


def _color(frac: float) -> str:
    frac = min(max(frac, 0.0), 1.0) * (len(_PALETTE) - 1)
    k = min(int(frac), len(_PALETTE) - 2)
    t = frac - k
    rgb = [round(a + (b - a) * t) for a, b in zip(_PALETTE[k], _PALETTE[k + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _fmt(v: float) -> str:
    return f"{v:.4g}"


class _Svg:
    def __init__(self, width: int, height: int, title: str):
        self.width, self.height = width, height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="15">{escape(title)}</text>',
        ]

    def add(self, s: str):
        self.parts.append(s)

    def text(self, x, y, s, anchor="middle", rotate=None, size=None):
        extra = f' transform="rotate({rotate} {x:.1f} {y:.1f})"' if rotate is not None else ""
        fs = f' font-size="{size}"' if size else ""
        self.add(f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}"{fs}{extra}>{escape(s)}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _axes(svg: _Svg, box, xr, yr, xlabel, ylabel, nticks=5):
    x0, y0, w, h = box
    svg.add(f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="black"/>')
    for k in range(nticks + 1):
        fx = xr[0] + (xr[1] - xr[0]) * k / nticks
        px = x0 + w * k / nticks
        svg.add(f'<line x1="{px:.1f}" y1="{y0 + h}" x2="{px:.1f}" y2="{y0 + h + 5}" stroke="black"/>')
        svg.text(px, y0 + h + 18, _fmt(fx))
        fy = yr[0] + (yr[1] - yr[0]) * k / nticks
        py = y0 + h - h * k / nticks
        svg.add(f'<line x1="{x0 - 5}" y1="{py:.1f}" x2="{x0}" y2="{py:.1f}" stroke="black"/>')
        svg.text(x0 - 8, py + 4, _fmt(fy), anchor="end")
    svg.text(x0 + w / 2, y0 + h + 38, xlabel)
    svg.text(x0 - 48, y0 + h / 2, ylabel, rotate=-90)


def _unique(values: Iterable[float]) -> list[float]:
    return sorted(set(values))


def _pick_levels(levels: list[float], k: int = 3) -> list[float]:
    if len(levels) <= k:
        return levels
    idx = np.linspace(0, len(levels) - 1, k).round().astype(int)
    return [levels[i] for i in sorted(set(idx))]


def _line_chart(rows, x_name, group_name, xlabel, group_label, title) -> str:
    xs = _unique(getattr(r, x_name) for r in rows)
    if len(xs) < 2:
        raise ValueError(f"a line chart needs at least two distinct {x_name} values")
    groups = _pick_levels(_unique(getattr(r, group_name) for r in rows))
    series = []
    for gi, gv in enumerate(groups):
        sel = sorted((r for r in rows if getattr(r, group_name) == gv), key=lambda r: getattr(r, x_name))
        if len(sel) < 2:
            raise ValueError(f"group {group_name}={gv} has fewer than two points")
        series.append((gv, gi, sel))

    ymax = max(max(r.r_sum_ts, r.r_sum_non_eh) for r in rows)
    ymax = ymax * 1.05 if ymax > 0 else 1.0
    xr = (xs[0], xs[-1])
    box = (80, 40, 480, 320)
    svg = _Svg(760, 430, title)
    _axes(svg, box, xr, (0.0, ymax), xlabel, "MSR (bits per block)")
    x0, y0, w, h = box

    def pt(x, y):
        return f"{x0 + w * (x - xr[0]) / (xr[1] - xr[0]):.2f},{y0 + h - h * y / ymax:.2f}"

    legend_y = 50
    for gv, gi, sel in series:
        dash = _DASHES[gi % len(_DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        for attr, color, name in (("r_sum_ts", _TS_COLOR, "TS-TWR"), ("r_sum_non_eh", _REF_COLOR, "non-EH")):
            points = " ".join(pt(getattr(r, x_name), getattr(r, attr)) for r in sel)
            svg.add(f'<polyline class="{attr}" fill="none" stroke="{color}" stroke-width="1.8"{dash_attr} points="{points}"/>')
            svg.add(f'<line x1="575" y1="{legend_y - 4}" x2="605" y2="{legend_y - 4}" stroke="{color}" stroke-width="1.8"{dash_attr}/>')
            svg.text(610, legend_y, f"{name}, {group_label}={_fmt(gv)}", anchor="start", size=11)
            legend_y += 18
    return svg.render()


def _grid_values(rows, attr):
    betas = _unique(r.beta_db for r in rows)
    ptots = _unique(r.ptot_dbw for r in rows)
    if len(betas) < 2 or len(ptots) < 2:
        raise ValueError("a surface needs at least two beta and two P_tot values")
    lookup = {(r.beta_db, r.ptot_dbw): getattr(r, attr) for r in rows}
    if len(lookup) != len(betas) * len(ptots):
        raise ValueError("rows do not cover a full beta x P_tot grid")
    z = np.array([[lookup[(b, p)] for b in betas] for p in ptots])
    return betas, ptots, z


def _heatmap(svg, box, betas, ptots, z, zr, label):
    x0, y0, w, h = box
    cw = w / len(betas)
    ch = h / len(ptots)
    span = zr[1] - zr[0] or 1.0
    for i in range(len(ptots)):
        for j in range(len(betas)):
            v = z[i, j]
            svg.add(
                f'<rect x="{x0 + j * cw:.2f}" y="{y0 + h - (i + 1) * ch:.2f}" width="{cw + 0.3:.2f}" '
                f'height="{ch + 0.3:.2f}" fill="{_color((v - zr[0]) / span)}" data-value="{v:.9g}"/>'
            )
    _axes(svg, box, (betas[0], betas[-1]), (ptots[0], ptots[-1]), "beta (dB)", "P_tot (dBW)")
    svg.text(x0 + w / 2, y0 - 6, label)


def _colorbar(svg, x, y, h, zr, label):
    n = 50
    for k in range(n):
        svg.add(f'<rect x="{x}" y="{y + h - (k + 1) * h / n:.2f}" width="16" height="{h / n + 0.3:.2f}" fill="{_color(k / (n - 1))}"/>')
    svg.add(f'<rect x="{x}" y="{y}" width="16" height="{h}" fill="none" stroke="black"/>')
    for k in range(5):
        v = zr[0] + (zr[1] - zr[0]) * k / 4
        svg.text(x + 22, y + h - h * k / 4 + 4, _fmt(v), anchor="start", size=11)
    svg.text(x + 8, y - 8, label, size=11)


def _surface_chart(rows) -> str:
    betas, ptots, zt = _grid_values(rows, "r_sum_ts")
    _, _, zn = _grid_values(rows, "r_sum_non_eh")
    zr = (0.0, float(max(zt.max(), zn.max())))
    svg = _Svg(900, 420, "MSR of TS-TWR and non-EH relaying")
    _heatmap(svg, (80, 60, 320, 290), betas, ptots, zt, zr, "TS-TWR")
    _heatmap(svg, (480, 60, 320, 290), betas, ptots, zn, zr, "non-EH")
    _colorbar(svg, 840, 60, 290, zr, "bits")
    return svg.render()


def _gain_chart(rows) -> str:
    betas, ptots, z = _grid_values(rows, "gain_ts_vs_non_eh")
    zr = (float(z.min()), float(z.max()))
    svg = _Svg(560, 420, "Relative gain of TS-TWR over non-EH")
    _heatmap(svg, (80, 60, 360, 290), betas, ptots, z, zr, "G = (R_TS - R_nonEH) / R_nonEH")
    _colorbar(svg, 490, 60, 290, zr, "gain")
    return svg.render()


def render_svg(rows: Sequence[SweepRow], chart: str, destination) -> Path:
    """Render a sweep as a standalone SVG.

    ``msr-vs-beta`` and ``msr-vs-ptot`` overlay the TS-TWR and non-EH series
    for up to three levels of the other axis.  ``surface-as-heatmap`` shows
    both rate surfaces on a shared scale and ``gain-surface`` the relative
    gain; heatmaps use a linear five-stop purple-blue-green-yellow scale from
    the minimum (purple) to the maximum (yellow).
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to render")
    if chart == "msr-vs-beta":
        text = _line_chart(rows, "beta_db", "ptot_dbw", "beta (dB)", "P_tot dBW", "MSR versus beta")
    elif chart == "msr-vs-ptot":
        text = _line_chart(rows, "ptot_dbw", "beta_db", "P_tot (dBW)", "beta dB", "MSR versus P_tot")
    elif chart == "surface-as-heatmap":
        text = _surface_chart(rows)
    elif chart == "gain-surface":
        text = _gain_chart(rows)
    else:
        raise ValueError(f"unknown chart {chart!r}; expected one of {CHARTS}")
    path = Path(destination)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror or exc}") from exc
    return path
