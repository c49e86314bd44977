"""Serializers for reports, confusion matrices and method comparisons.

Everything here is a pure function of its inputs, so repeated runs produce
byte-identical files. Human-readable tables show 4 decimals; the JSON report
keeps full precision with keys in a fixed order::

    accuracy, total, classes[label, precision, recall, f1, support],
    macro_avg[precision, recall, f1], weighted_avg[precision, recall, f1]
"""

import csv
import io
import json
from xml.sax.saxutils import escape

import numpy as np


def report_text(report):
    width = max(len("weighted avg"), *(len(m.label) for m in report.per_class))
    head = f"{'':>{width}}  {'precision':>9}  {'recall':>9}  {'f1-score':>9}  {'support':>9}"
    lines = [head, ""]
    for m in report.per_class:
        lines.append(f"{m.label:>{width}}  {m.precision:9.4f}  {m.recall:9.4f}  {m.f1:9.4f}  {m.support:9d}")
    lines.append("")
    lines.append(f"{'accuracy':>{width}}  {'':9}  {'':9}  {report.accuracy:9.4f}  {report.total:9d}")
    for name, avg in (("macro avg", report.macro_avg), ("weighted avg", report.weighted_avg)):
        lines.append(
            f"{name:>{width}}  {avg.precision:9.4f}  {avg.recall:9.4f}  {avg.f1:9.4f}  {report.total:9d}"
        )
    return "\n".join(lines) + "\n"


def report_dict(report):
    return {
        "accuracy": report.accuracy,
        "total": report.total,
        "classes": [
            {"label": m.label, "precision": m.precision, "recall": m.recall, "f1": m.f1, "support": m.support}
            for m in report.per_class
        ],
        "macro_avg": {
            "precision": report.macro_avg.precision,
            "recall": report.macro_avg.recall,
            "f1": report.macro_avg.f1,
        },
        "weighted_avg": {
            "precision": report.weighted_avg.precision,
            "recall": report.weighted_avg.recall,
            "f1": report.weighted_avg.f1,
        },
    }


def report_json(report):
    return json.dumps(report_dict(report), indent=2) + "\n"


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def confusion_csv(cm):
    rows = [["true\\predicted", *cm.classes]]
    rows += [[name, *(int(v) for v in row)] for name, row in zip(cm.classes, cm.counts)]
    return _csv_text(rows)


def _svg(width, height, body):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n'
        + "".join(line + "\n" for line in body)
        + "</svg>\n"
    )


def _blue(frac):
    """White-to-blue ramp."""
    r = round(255 - frac * (255 - 8))
    g = round(255 - frac * (255 - 48))
    b = round(255 - frac * (255 - 107))
    return f"#{r:02x}{g:02x}{b:02x}"


def confusion_svg(cm, title="Confusion Matrix"):
    cell, left, top = 90, 150, 70
    K = cm.K
    width, height = left + K * cell + 30, top + K * cell + 70
    peak = max(int(cm.counts.max()), 1)
    body = [
        f'<text x="{width // 2}" y="28" font-size="18" text-anchor="middle">{escape(title)}</text>',
        f'<text x="{left + K * cell // 2}" y="{height - 15}" font-size="14" text-anchor="middle">Predicted</text>',
        f'<text x="20" y="{top + K * cell // 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + K * cell // 2})">True</text>',
    ]
    for i in range(K):
        name = escape(cm.classes[i])
        body.append(
            f'<text x="{left - 8}" y="{top + i * cell + cell // 2 + 5}" font-size="12" text-anchor="end">{name}</text>'
        )
        body.append(
            f'<text x="{left + i * cell + cell // 2}" y="{top + K * cell + 20}" font-size="12" '
            f'text-anchor="middle">{name}</text>'
        )
        for j in range(K):
            v = int(cm.counts[i, j])
            frac = v / peak
            x, y = left + j * cell, top + i * cell
            ink = "#ffffff" if frac > 0.5 else "#000000"
            body.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{_blue(frac)}" stroke="#808080"/>'
            )
            body.append(
                f'<text x="{x + cell // 2}" y="{y + cell // 2 + 6}" font-size="16" '
                f'text-anchor="middle" fill="{ink}">{v}</text>'
            )
    return _svg(width, height, body)


COMPARISON_HEADER = ("method", "test_accuracy", "macro_f1", "wall_time_s")


def comparison_text(rows):
    """rows: (method, accuracy, macro_f1, seconds). Wall time is the last column."""
    lines = [f"{'method':<10}  {'accuracy':>9}  {'macro F1':>9}  {'wall time (s)':>13}"]
    for method, acc, f1, secs in rows:
        lines.append(f"{method:<10}  {acc:9.4f}  {f1:9.4f}  {secs:13.3f}")
    return "\n".join(lines) + "\n"


def comparison_csv(rows):
    out = [list(COMPARISON_HEADER)]
    out += [[method, repr(float(acc)), repr(float(f1)), f"{secs:.3f}"] for method, acc, f1, secs in rows]
    return _csv_text(out)


def comparison_svg(rows, title="Test accuracy by ensemble method"):
    bar, gap, left, top, plot_h = 80, 50, 70, 60, 260
    width = left + len(rows) * (bar + gap) + gap
    height = top + plot_h + 60
    base = top + plot_h
    body = [
        f'<text x="{width // 2}" y="30" font-size="18" text-anchor="middle">{escape(title)}</text>',
        f'<line x1="{left}" y1="{base}" x2="{width - 10}" y2="{base}" stroke="#000000"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="#000000"/>',
    ]
    for tick in np.linspace(0.0, 1.0, 6):
        y = base - tick * plot_h
        body.append(
            f'<text x="{left - 8}" y="{y + 4:.1f}" font-size="11" text-anchor="end">{tick:.1f}</text>'
        )
        body.append(f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="#000000"/>')
    palette = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")
    for i, (method, acc, _, _) in enumerate(rows):
        x = left + gap + i * (bar + gap)
        h = acc * plot_h
        body.append(
            f'<rect x="{x}" y="{base - h:.3f}" width="{bar}" height="{h:.3f}" fill="{palette[i % len(palette)]}"/>'
        )
        body.append(
            f'<text x="{x + bar // 2}" y="{base - h - 6:.3f}" font-size="13" text-anchor="middle">{acc:.2f}</text>'
        )
        body.append(
            f'<text x="{x + bar // 2}" y="{base + 20}" font-size="13" text-anchor="middle">{escape(method)}</text>'
        )
    return _svg(width, height, body)
