"""JSON and CSV persistence for partition, spectrum, chain and verify reports.

Reports are plain JSON-native dicts so that ``json.loads(dumps(r)) == r``.
Complex numbers are stored as ``[re, im]`` pairs.  CSV floats use 17
significant digits, which round-trips every double.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

CSV_FLOAT = ".17g"


def cpair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def from_cpair(p: Sequence[float]) -> complex:
    return complex(float(p[0]), float(p[1]))


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def metadata() -> dict:
    return {"tool": "cayley-spectra", "version": __version__}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def write_json(report: dict, path: Path) -> None:
    path.write_text(dumps(report), encoding="utf-8")


def read_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, CSV_FLOAT)
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


# per-report tables --------------------------------------------------------------

def partition_csv(report: dict) -> str:
    r = report["r"]
    header = ["coset", "representative"] + [f"q_{j}" for j in range(r)]
    rows = [[c["index"], c["representative"]] + report["Q"][c["index"]] for c in report["cosets"]]
    return csv_text(header, rows)


def spectrum_csv(report: dict) -> str:
    r = report["r"]
    header = ["index", "E", "multiplicity"] + [f"phi_{j}" for j in range(1, r + 1)] + ["residual"]
    rows = [
        [s["index"], s["E"], s["multiplicity"], *s["phi"], s["residual"]]
        for s in report["solutions"]
    ]
    return csv_text(header, rows)


def chain_csv(report: dict) -> str:
    rows = [[n, re, im] for n, re, im in report["sequence"]]
    return csv_text(["n", "re_phi", "im_phi"], rows)


def parse_spectrum_csv(path: str | Path) -> list[dict]:
    header, rows = read_csv(path)
    out = []
    for row in rows:
        rec = dict(zip(header, row))
        phis = [float(rec[h]) for h in header if h.startswith("phi_")]
        out.append({
            "index": int(rec["index"]),
            "E": float(rec["E"]),
            "multiplicity": int(rec["multiplicity"]),
            "phi": phis,
            "residual": float(rec["residual"]),
        })
    return out


def parse_chain_csv(path: str | Path) -> list[list]:
    _, rows = read_csv(path)
    return [[int(n), float(re), float(im)] for n, re, im in rows]


def parse_partition_csv(path: str | Path) -> list[list[int]]:
    _, rows = read_csv(path)
    return [[int(v) for v in row[2:]] for row in rows]


CSV_WRITERS = {"partition": partition_csv, "spectrum": spectrum_csv, "chain": chain_csv}


def save(report: dict, out_dir: Path) -> list[Path]:
    """Write ``<kind>.json`` (and ``<kind>.csv`` where defined) into out_dir."""
    out_dir.mkdir(parents=True, exist_ok=True)
    kind = report["kind"]
    paths = [out_dir / f"{kind}.json"]
    write_json(report, paths[0])
    if kind in CSV_WRITERS:
        p = out_dir / f"{kind}.csv"
        p.write_text(CSV_WRITERS[kind](report), encoding="utf-8")
        paths.append(p)
    return paths
