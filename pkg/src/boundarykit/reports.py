"""Batch sampling, configuration-space probes, and report serialization.

Every command produces a ReportEnvelope: a plain-data record holding the
command name, the seed, a config echo (with tolerances), a list of flat
result rows, summary statistics and the package version.  Serialization is
deterministic (sorted keys, stable row order, repr-based floats), so a
fixed seed reproduces reports byte for byte.

JSON reports are single objects with exactly the keys
command/seed/config/results/summary/version.  CSV reports contain the
result rows under a header equal to the row keys; `read_report_csv` reads
them back.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import flags as flags_mod
from .errors import SamplerExhausted, UnknownInvariant
from .flags import Flag3
from .hyperbolic import ComplexBoundaryPoint, RealBoundaryPoint
from .version import __version__

ESCAPE_HI_DEFAULT = 1e3
ESCAPE_LO_DEFAULT = 1e-3

_MODELS = ("S1", "Sn", "complex_hyperbolic", "flags3")


@dataclass(frozen=True)
class SamplerConfig:
    """What to sample: which boundary model, tuple size, count, seed, tol.

    `dim` is the hyperbolic dimension n: Sn samples the boundary sphere of
    H^n (unit directions in R^n) and complex_hyperbolic the boundary of
    H^n_C.  S1 is shorthand for the circle (n = 2).
    """

    model: str
    tuple_size: int = 3
    count: int = 1000
    seed: int = 0
    tolerance: float = 1e-9
    dim: int = 2

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {_MODELS}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.tuple_size < 1:
            raise ValueError("tuple_size must be at least 1")
        if self.model == "flags3" and self.tuple_size not in (2, 3):
            raise ValueError("flags3 genericity is defined for pairs and triples")
        if self.model in ("Sn", "complex_hyperbolic") and self.dim < 2:
            raise ValueError("dim must be at least 2")

    def echo(self) -> dict:
        d = asdict(self)
        if self.model == "S1":
            d["dim"] = 2
        return d


@dataclass
class ReportEnvelope:
    """Machine-readable result record; reproducible bit-for-bit per seed."""

    command: str
    seed: int
    config: dict
    results: list
    summary: dict
    version: str = __version__

    def to_dict(self) -> dict:
        return {"command": self.command, "seed": self.seed, "config": self.config,
                "results": self.results, "summary": self.summary,
                "version": self.version}


# ---------------------------------------------------------------------------
# vectorized candidate generation


def _batch_sphere(rng, m: int, size: int, dim: int):
    v = rng.standard_normal((m, size, dim))
    return v / np.linalg.norm(v, axis=2, keepdims=True)


def _mask_sphere_generic(batch, tol):
    m = np.ones(batch.shape[0], dtype=bool)
    size = batch.shape[1]
    for i in range(size):
        for j in range(i + 1, size):
            m &= np.linalg.norm(batch[:, i] - batch[:, j], axis=1) > tol
    return m


def _batch_complex(rng, m: int, size: int, dim: int):
    w = rng.standard_normal((m, size, dim)) + 1j * rng.standard_normal((m, size, dim))
    w = w / np.linalg.norm(w, axis=2, keepdims=True)
    lifts = np.concatenate([w, np.ones((m, size, 1))], axis=2) / math.sqrt(2.0)
    return lifts


def _mask_complex_generic(lifts, tol):
    m = np.ones(lifts.shape[0], dtype=bool)
    size = lifts.shape[1]
    for i in range(size):
        for j in range(i + 1, size):
            z, w = lifts[:, i], lifts[:, j]
            wedge = z[:, :, None] * w[:, None, :] - w[:, :, None] * z[:, None, :]
            dist = np.linalg.norm(wedge, axis=(1, 2)) / math.sqrt(2.0)
            m &= dist > tol
    return m


def _batch_flags(rng, m: int, size: int):
    lines = np.empty((m, size, 3))
    planes = np.empty((m, size, 3))
    for i in range(size):
        lines[:, i], planes[:, i] = flags_mod.batch_random_flags(rng, m)
    return lines, planes


def _mask_flags_generic(lines, planes, size, tol):
    if size == 3:
        return flags_mod.batch_is_generic(lines, planes, tol)
    ok = np.ones(lines.shape[0], dtype=bool)
    ok &= np.abs(np.einsum("ni,ni->n", planes[:, 0], lines[:, 1])) > tol
    ok &= np.abs(np.einsum("ni,ni->n", planes[:, 1], lines[:, 0])) > tol
    return ok


def _accepted_batches(config: SamplerConfig, budget_factor: int = 100):
    """Yield accepted candidate arrays until `count` tuples are collected.

    Returns (list_of_accepted_arrays, draws, accepted); raises
    SamplerExhausted past budget_factor * count draws.
    """
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    needed = config.count
    budget = budget_factor * config.count
    draws = 0
    accepted = 0
    chunks = []
    while accepted < needed:
        m = min(needed - accepted, budget - draws)
        if m <= 0:
            raise SamplerExhausted(
                f"{draws} draws produced only {accepted}/{needed} generic tuples")
        if config.model in ("S1", "Sn"):
            dim = 2 if config.model == "S1" else config.dim
            batch = _batch_sphere(rng, m, config.tuple_size, dim)
            mask = _mask_sphere_generic(batch, config.tolerance)
            chunks.append(batch[mask])
        elif config.model == "complex_hyperbolic":
            batch = _batch_complex(rng, m, config.tuple_size, config.dim)
            mask = _mask_complex_generic(batch, config.tolerance)
            chunks.append(batch[mask])
        else:
            lines, planes = _batch_flags(rng, m, config.tuple_size)
            mask = _mask_flags_generic(lines, planes, config.tuple_size,
                                       config.tolerance)
            chunks.append((lines[mask], planes[mask]))
        draws += m
        accepted += int(mask.sum())
    return chunks, draws, accepted


def _concat_chunks(config: SamplerConfig, chunks):
    if config.model == "flags3":
        lines = np.concatenate([c[0] for c in chunks])[:config.count]
        planes = np.concatenate([c[1] for c in chunks])[:config.count]
        return lines, planes
    return np.concatenate(chunks)[:config.count]


def sampling_stats(config: SamplerConfig) -> dict:
    """Acceptance statistics of the rejection sampler, without materializing."""
    _, draws, accepted = _accepted_batches(config)
    return {"draws": int(draws), "accepted": int(accepted),
            "acceptance_rate": float(accepted) / float(draws)}


def sample_tuples(config: SamplerConfig):
    """Exactly `count` generic tuples of point objects, deterministic per seed."""
    chunks, _, _ = _accepted_batches(config)
    data = _concat_chunks(config, chunks)
    out = []
    if config.model == "flags3":
        lines, planes = data
        for i in range(config.count):
            out.append(tuple(Flag3(lines[i, j], planes[i, j])
                             for j in range(config.tuple_size)))
    elif config.model == "complex_hyperbolic":
        for row in data:
            out.append(tuple(ComplexBoundaryPoint(lift) for lift in row))
    else:
        for row in data:
            out.append(tuple(RealBoundaryPoint(d) for d in row))
    return out


# ---------------------------------------------------------------------------
# invariants over samples


def _orientation_values(batch) -> np.ndarray:
    u, v, w = batch[:, 0], batch[:, 1], batch[:, 2]
    cross = ((v[:, 0] - u[:, 0]) * (w[:, 1] - u[:, 1])
             - (v[:, 1] - u[:, 1]) * (w[:, 0] - u[:, 0]))
    return np.sign(cross)


def invariant_values(config: SamplerConfig, invariant_name: str) -> np.ndarray:
    """Vectorized invariant evaluation over `count` generic sampled tuples."""
    from .hyperbolic import cartan_invariant_batch

    if invariant_name == "orientation_class":
        if config.model != "S1":
            raise UnknownInvariant("orientation_class is defined on S1 triples")
        if config.tuple_size != 3:
            raise ValueError("orientation_class needs triples")
        data = _concat_chunks(config, _accepted_batches(config)[0])
        return _orientation_values(data)
    if invariant_name == "cartan":
        if config.model != "complex_hyperbolic":
            raise UnknownInvariant("cartan is defined on complex_hyperbolic triples")
        if config.tuple_size != 3:
            raise ValueError("cartan needs triples")
        lifts = _concat_chunks(config, _accepted_batches(config)[0])
        return cartan_invariant_batch(lifts[:, 0], lifts[:, 1], lifts[:, 2])
    if invariant_name == "triple_ratio":
        if config.model != "flags3":
            raise UnknownInvariant("triple_ratio is defined on flags3 triples")
        if config.tuple_size != 3:
            raise ValueError("triple_ratio needs triples")
        lines, planes = _concat_chunks(config, _accepted_batches(config)[0])
        return flags_mod.batch_triple_ratio(lines, planes)
    raise UnknownInvariant(f"unknown invariant {invariant_name!r}")


def quantile_summary(values: np.ndarray) -> dict:
    qs = (0.01, 0.25, 0.5, 0.75, 0.99)
    levels = np.quantile(values, qs)
    return {f"q{int(100 * q):02d}": float(v) for q, v in zip(qs, levels)}


def histogram_summary(values: np.ndarray, bins: int = 40) -> dict:
    counts, edges = np.histogram(values, bins=bins)
    return {"counts": [int(c) for c in counts],
            "edges": [float(e) for e in edges]}


def compactness_probe(model: str, invariant_name: str, config: SamplerConfig,
                      escape_hi: float = ESCAPE_HI_DEFAULT,
                      escape_lo: float = ESCAPE_LO_DEFAULT) -> ReportEnvelope:
    """Histogram an invariant over generic tuples and classify its range.

    Verdict `bounded-range` means every observed value fell in the model's
    compact reference set; `escape-detected` means values crossed the
    escape thresholds or approached the excluded points {0, 1} (triple
    ratio), signalling a non-compact configuration space.
    """
    if config.model != model:
        config = SamplerConfig(model=model, tuple_size=config.tuple_size,
                               count=config.count, seed=config.seed,
                               tolerance=config.tolerance, dim=config.dim)
    values = invariant_values(config, invariant_name)

    results = [{"index": i, "value": float(v)} for i, v in enumerate(values)]
    summary = {
        "invariant": invariant_name,
        "count": int(values.shape[0]),
        "min": float(values.min()),
        "max": float(values.max()),
        "quantiles": quantile_summary(values),
        "histogram": histogram_summary(values),
    }

    if invariant_name == "orientation_class":
        classes = sorted(set(float(v) for v in values))
        summary["classes_observed"] = classes
        summary["reference_set"] = [-1.0, 1.0]
        in_reference = all(c in (-1.0, 1.0) for c in classes)
        summary["verdict"] = "bounded-range" if in_reference else "escape-detected"
    elif invariant_name == "cartan":
        bound = math.pi / 2 + 1e-10
        summary["reference_interval"] = [-math.pi / 2, math.pi / 2]
        inside = bool(np.all(np.abs(values) <= bound))
        summary["verdict"] = "bounded-range" if inside else "escape-detected"
    else:  # triple_ratio
        magnitudes = np.abs(values)
        summary["abs_min"] = float(magnitudes.min())
        summary["abs_max"] = float(magnitudes.max())
        summary["escape_hi"] = float(escape_hi)
        summary["escape_lo"] = float(escape_lo)
        summary["histogram"] = histogram_summary(np.log10(magnitudes))
        summary["histogram_scale"] = "log10(|T|)"
        escaped = bool(magnitudes.max() > escape_hi or magnitudes.min() < escape_lo)
        summary["verdict"] = "escape-detected" if escaped else "bounded-range"

    return ReportEnvelope(command="probe-config-space", seed=config.seed,
                          config={**config.echo(), "invariant": invariant_name},
                          results=results, summary=summary)


# ---------------------------------------------------------------------------
# serialization


def emit_report(envelope: ReportEnvelope, format: str, path) -> None:
    """Write the envelope as canonical JSON or flattened CSV."""
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(envelope.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    elif format == "csv":
        rows = envelope.results
        if not rows:
            raise ValueError("cannot emit CSV for an empty results list")
        header = list(rows[0].keys())
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _csv_cell(row[k]) for k in header})
    else:
        raise ValueError(f"unknown report format {format!r}")


def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def read_report_json(path) -> ReportEnvelope:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return ReportEnvelope(command=data["command"], seed=data["seed"],
                          config=data["config"], results=data["results"],
                          summary=data["summary"], version=data["version"])


def read_report_csv(path):
    """Return (header, rows) with all cell values as strings."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames), [dict(row) for row in reader]
