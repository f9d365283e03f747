"""Multi-chain data model, means, and file ingestion.

A :class:`ChainSet` holds m parallel chains of n iterations of a
p-dimensional quantity as an immutable (m, n, p) float64 array. Chains must
be equal-length and every entry finite. File formats:

* CSV with header ``chain,iter,y1,...,yp`` (chain ids and iteration indices
  are 1-based in files; the Python API is 0-based).
* JSON ``{"m": ..., "n": ..., "p": ..., "data": [[[...]]]}`` chain-major.

Values are written with 17 significant digits, so a save/load round trip
reproduces the array bit-for-bit.
"""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import BadValue, RaggedInput, SchemaError


class ChainSet:
    """Immutable container for m equal-length parallel chains."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, order="C")
        if arr.ndim != 3:
            raise ValueError(f"data must be (m, n, p), got ndim={arr.ndim}")
        m, n, p = arr.shape
        if m < 1 or n < 2 or p < 1:
            raise ValueError(f"need m >= 1, n >= 2, p >= 1, got ({m}, {n}, {p})")
        if not np.isfinite(arr).all():
            raise ValueError("chain data contains non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ChainSet is immutable")

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def n(self):
        return self.data.shape[1]

    @property
    def p(self):
        return self.data.shape[2]

    def chain(self, s):
        """Read-only (n, p) view of chain ``s`` (0-based)."""
        if not 0 <= s < self.m:
            raise IndexError(f"chain index {s} out of range [0, {self.m})")
        return self.data[s]

    @classmethod
    def from_chains(cls, chains):
        """Build from a sequence of (n,), (n, p) arrays, one per chain."""
        arrs = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in chains]
        arrs = [a[:, None] if a.ndim == 1 else a for a in arrs]
        return cls(np.stack(arrs, axis=0))

    def __repr__(self):
        return f"ChainSet(m={self.m}, n={self.n}, p={self.p})"


@dataclass(frozen=True)
class MeanSummary:
    """Per-chain means (m, p) and their average, the global mean (p,)."""

    chain_means: np.ndarray
    global_mean: np.ndarray


def chain_mean(chains, s):
    """Mean vector of chain ``s`` (0-based)."""
    return chains.chain(s).mean(axis=0)


def global_mean(chains):
    """Average of the per-chain mean vectors."""
    return chain_means(chains).mean(axis=0)


def chain_means(chains):
    """All per-chain means as an (m, p) array."""
    return chains.data.mean(axis=1)


def mean_summary(chains):
    cm = chain_means(chains)
    return MeanSummary(chain_means=cm, global_mean=cm.mean(axis=0))


def save_csv(chains, path_or_file):
    """Write the ``chain,iter,y1,...,yp`` CSV format (1-based ids)."""
    def write(f):
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["chain", "iter"] + [f"y{i + 1}" for i in range(chains.p)])
        for s in range(chains.m):
            for t in range(chains.n):
                row = [s + 1, t + 1] + ["%.17g" % v for v in chains.data[s, t]]
                writer.writerow(row)

    if hasattr(path_or_file, "write"):
        write(path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as f:
            write(f)


def load_csv(path_or_file):
    """Read the chain CSV format; see module docstring for error semantics."""
    if hasattr(path_or_file, "read"):
        return _parse_csv(path_or_file)
    with open(path_or_file, "r", encoding="utf-8", newline="") as f:
        return _parse_csv(f)


def _parse_csv(f):
    reader = csv.reader(f)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty input file") from None
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "chain" or header[1] != "iter":
        raise SchemaError(f"expected header 'chain,iter,y1,...', got {header!r}")
    p = len(header) - 2
    expected = ["chain", "iter"] + [f"y{i + 1}" for i in range(p)]
    if header != expected:
        raise SchemaError(f"expected value columns {expected[2:]!r}, got {header[2:]!r}")

    rows = {}
    rownum = 0
    for rec in reader:
        if not rec:
            continue
        rownum += 1
        if len(rec) != p + 2:
            raise BadValue(f"row {rownum}: expected {p + 2} fields, got {len(rec)}",
                           row=rownum)
        try:
            cid = int(rec[0])
            it = int(rec[1])
        except ValueError:
            raise BadValue(f"row {rownum}: bad chain/iter index", row=rownum) from None
        try:
            vals = [float(v) for v in rec[2:]]
        except ValueError:
            raise BadValue(f"row {rownum}: unparsable value", row=rownum) from None
        if not all(np.isfinite(v) for v in vals):
            raise BadValue(f"row {rownum}: non-finite value", row=rownum)
        rows.setdefault(cid, []).append((it, vals))

    if not rows:
        raise SchemaError("no data rows")
    counts = {cid: len(v) for cid, v in rows.items()}
    if len(set(counts.values())) != 1:
        raise RaggedInput(f"unequal chain lengths: {counts}")
    data = []
    for cid in sorted(rows):
        entries = sorted(rows[cid], key=lambda e: e[0])
        iters = [e[0] for e in entries]
        if len(set(iters)) != len(iters):
            raise BadValue(f"chain {cid}: duplicate iteration index")
        data.append([e[1] for e in entries])
    return ChainSet(np.array(data, dtype=np.float64))


def save_json(chains, path_or_file):
    """Write the chain-major JSON format."""
    doc = {
        "m": chains.m,
        "n": chains.n,
        "p": chains.p,
        "data": chains.data.tolist(),
    }
    if hasattr(path_or_file, "write"):
        json.dump(doc, path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8") as f:
            json.dump(doc, f)


def load_json(path_or_file):
    if hasattr(path_or_file, "read"):
        doc = json.load(path_or_file)
    else:
        with open(path_or_file, "r", encoding="utf-8") as f:
            doc = json.load(f)
    for key in ("m", "n", "p", "data"):
        if key not in doc:
            raise SchemaError(f"JSON input missing key {key!r}")
    try:
        arr = np.array(doc["data"], dtype=np.float64)
    except (TypeError, ValueError):
        d = doc["data"]
        if isinstance(d, list) and len({len(c) for c in d if isinstance(c, list)}) > 1:
            raise RaggedInput("JSON chains have unequal lengths") from None
        raise BadValue("JSON data is not a rectangular numeric array") from None
    if arr.ndim != 3 or arr.shape != (doc["m"], doc["n"], doc["p"]):
        raise RaggedInput(
            f"JSON data shape {arr.shape} does not match (m, n, p)="
            f"({doc['m']}, {doc['n']}, {doc['p']})")
    if not np.isfinite(arr).all():
        raise BadValue("JSON data contains non-finite values")
    return ChainSet(arr)


def load_chains(source, fmt=None):
    """Load a ChainSet from a path or file handle; format inferred from the
    extension (.csv/.json) unless ``fmt`` is given."""
    if fmt is None:
        name = source if isinstance(source, str) else getattr(source, "name", "")
        fmt = "json" if str(name).endswith(".json") else "csv"
    if fmt == "csv":
        return load_csv(source)
    if fmt == "json":
        return load_json(source)
    raise SchemaError(f"unknown chain file format {fmt!r}")


def dumps_csv(chains):
    """Chain CSV as a string (used for determinism checks)."""
    buf = io.StringIO()
    save_csv(chains, buf)
    return buf.getvalue()
