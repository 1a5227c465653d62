"""Minimal self-contained SVG scatter plots (axes, points, legend).

No plotting dependency; output bytes are deterministic for fixed input.
"""

from __future__ import annotations

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
)

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 64, 150, 40, 56  # margins: right one holds the legend


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    return [lo + span * i / (count - 1) for i in range(count)]


def _fmt(v):
    return f"{v:.4g}"


def scatter_svg(series, xlabel, ylabel, title):
    """Render labeled point sets to an SVG string.

    ``series`` maps label -> (xs, ys) sequences; all series share the axes.
    """
    xs_all = [float(v) for _, (xs, _ys) in series.items() for v in xs]
    ys_all = [float(v) for _, (_xs, ys) in series.items() for v in ys]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    x_pad = 0.05 * (x_hi - x_lo or 1.0)
    y_pad = 0.05 * (y_hi - y_lo or 1.0)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def sx(v):
        return _ML + (v - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(v):
        return _H - _MB - (v - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="24" font-family="sans-serif" font-size="15" '
        f'font-weight="bold">{title}</text>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>',
    ]
    for v in _ticks(x_lo, x_hi):
        px = sx(v)
        out.append(
            f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" y2="{_H - _MB + 5}" '
            'stroke="black"/>'
        )
        out.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 20}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{_fmt(v)}</text>'
        )
    for v in _ticks(y_lo, y_hi):
        py = sy(v)
        out.append(
            f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" y2="{py:.1f}" '
            'stroke="black"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{py + 4:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{_fmt(v)}</text>'
        )
    out.append(
        f'<text x="{(_ML + _W - _MR) / 2:.1f}" y="{_H - 12}" '
        f'font-family="sans-serif" font-size="13" text-anchor="middle">{xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{(_MT + _H - _MB) / 2:.1f}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {(_MT + _H - _MB) / 2:.1f})">{ylabel}</text>'
    )
    for idx, (label, (xs, ys)) in enumerate(series.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        for xv, yv in zip(xs, ys):
            out.append(
                f'<circle cx="{sx(float(xv)):.2f}" cy="{sy(float(yv)):.2f}" r="3" '
                f'fill="{color}" fill-opacity="0.7"/>'
            )
        ly = _MT + 18 * idx
        out.append(
            f'<circle cx="{_W - _MR + 16}" cy="{ly}" r="4" fill="{color}"/>'
        )
        out.append(
            f'<text x="{_W - _MR + 26}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
