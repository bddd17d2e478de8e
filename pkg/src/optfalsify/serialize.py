"""JSON and CSV interchange.

Matrix literal: {"rows": r, "cols": c, "re": [...], "im": [...]} with
row-major entry lists.  Typed objects extend the literal with a "kind"
discriminator; channels carry a "kraus" list of plain literals instead.
Floats are always emitted with 17 significant digits so that emit/parse
round-trips are exact and identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from typing import Any

import numpy as np

from .classical import ClassicalState, MarkovMap
from .coins import (
    CampaignReport,
    CoinSetup,
    DeclaredGenerator,
    NaryGenerator,
    make_coin,
    make_nary,
)
from .errors import SchemaError
from .falsification import FalsificationTest
from .quantum import Effect, KrausChannel, Purification, QuantumState


def float_literal(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite float cannot be serialized")
    return format(x, ".17g")


def _emit(obj: Any) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return float_literal(float(obj))
    if isinstance(obj, dict):
        body = ", ".join(
            f"{json.dumps(str(k), ensure_ascii=True)}: {_emit(v)}"
            for k, v in obj.items()
        )
        return "{" + body + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_emit(v) for v in list(obj)) + "]"
    raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def json_dumps(obj: Any) -> str:
    """Deterministic JSON text (17-significant-digit floats)."""
    return _emit(obj)


def write_json(path: str, obj: Any) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(json_dumps(obj))
        fh.write("\n")


def require_key(doc: dict, key: str, kind: type, where: str) -> Any:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected a JSON object, got {type(doc).__name__}")
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"{where}: key {key!r} must be {kind.__name__}")
    if not isinstance(value, kind):
        raise SchemaError(
            f"{where}: key {key!r} must be {kind.__name__}, "
            f"got {type(value).__name__}"
        )
    return value


def number_list(doc: dict, key: str, length: int, where: str) -> np.ndarray:
    seq = require_key(doc, key, list, where)
    if len(seq) != length:
        raise SchemaError(f"{where}: {key!r} has length {len(seq)}, expected {length}")
    out = np.empty(length, dtype=float)
    for i, v in enumerate(seq):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{where}: {key}[{i}] is not a number")
        if not math.isfinite(float(v)):
            raise SchemaError(f"{where}: {key}[{i}] is not finite")
        out[i] = float(v)
    return out


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    rows, cols = m.shape
    flat = m.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def matrix_from_json(doc: dict, where: str = "matrix") -> np.ndarray:
    rows = require_key(doc, "rows", int, where)
    cols = require_key(doc, "cols", int, where)
    if rows < 1 or cols < 1:
        raise SchemaError(f"{where}: rows/cols must be positive")
    re = number_list(doc, "re", rows * cols, where)
    im = number_list(doc, "im", rows * cols, where)
    return (re + 1j * im).reshape(rows, cols)


def state_to_json(rho: QuantumState) -> dict:
    return {"kind": "state", **matrix_to_json(rho.matrix)}


def effect_to_json(e: Effect) -> dict:
    return {"kind": "effect", **matrix_to_json(e.matrix)}


def channel_to_json(ch: KrausChannel) -> dict:
    return {"kind": "channel", "kraus": [matrix_to_json(a) for a in ch.kraus]}


def cstate_to_json(x: ClassicalState) -> dict:
    return {"kind": "cstate", "probs": [float(v) for v in x.probs]}


def markov_to_json(m: MarkovMap) -> dict:
    return {
        "kind": "markov",
        "rows": int(m.dim_out),
        "cols": int(m.dim_in),
        "entries": [float(v) for v in m.matrix.reshape(-1)],
    }


def ftest_to_json(t: FalsificationTest) -> dict:
    return {
        "kind": "ftest",
        "hypothesis": t.hypothesis_label,
        "F": matrix_to_json(t.falsifier.matrix),
    }


def purification_to_json(p: Purification) -> dict:
    return {
        "kind": "purification",
        "dim_a": int(p.dim_a),
        "dim_b": int(p.dim_b),
        "state_vector": matrix_to_json(p.state_vector.reshape(-1, 1)),
    }


def object_from_json(doc: dict, where: str = "object"):
    """Dispatch a kind-discriminated document to its validated type."""
    kind = require_key(doc, "kind", str, where)
    if kind == "state":
        return QuantumState(matrix_from_json(doc, where))
    if kind == "effect":
        return Effect(matrix_from_json(doc, where))
    if kind == "channel":
        kraus_docs = require_key(doc, "kraus", list, where)
        if not kraus_docs:
            raise SchemaError(f"{where}: channel needs a nonempty kraus list")
        return KrausChannel(
            tuple(
                matrix_from_json(k, f"{where}.kraus[{i}]")
                for i, k in enumerate(kraus_docs)
            )
        )
    if kind == "cstate":
        probs = require_key(doc, "probs", list, where)
        return ClassicalState(number_list(doc, "probs", len(probs), where))
    if kind == "markov":
        rows = require_key(doc, "rows", int, where)
        cols = require_key(doc, "cols", int, where)
        if rows < 1 or cols < 1:
            raise SchemaError(f"{where}: rows/cols must be positive")
        entries = number_list(doc, "entries", rows * cols, where)
        return MarkovMap(entries.reshape(rows, cols))
    if kind == "ftest":
        label = require_key(doc, "hypothesis", str, where)
        f = matrix_from_json(require_key(doc, "F", dict, where), f"{where}.F")
        falsifier = Effect(f)
        # External data may carry the degenerate F = 0 inconclusive test.
        return FalsificationTest.from_falsifier(
            falsifier, hypothesis_label=label, allow_inconclusive=True
        )
    raise SchemaError(f"{where}: unknown kind {kind!r}")


def declared_from_json(doc: dict, where: str = "declared") -> DeclaredGenerator:
    """Coin document {p, phi} or N-ary document {probs, phases}."""
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected a JSON object")
    if "p" in doc:
        p = require_key(doc, "p", float, where)
        phi = require_key(doc, "phi", float, where) if "phi" in doc else 0.0
        return make_coin(p, phi)
    if "probs" in doc:
        probs = number_list(doc, "probs", len(require_key(doc, "probs", list, where)), where)
        phases = None
        if "phases" in doc:
            phases = number_list(doc, "phases", len(probs), where)
        return make_nary(probs, phases)
    raise SchemaError(f"{where}: need either p/phi or probs/phases")


def declared_to_json(declared: DeclaredGenerator) -> dict:
    if isinstance(declared, CoinSetup):
        return {"p": float(declared.p), "phi": float(declared.phi)}
    if isinstance(declared, NaryGenerator):
        return {
            "probs": [float(v) for v in declared.probs],
            "phases": [float(v) for v in declared.phases],
        }
    raise TypeError(f"not a declared generator: {type(declared).__name__}")


def campaign_config_from_json(doc: dict):
    """Returns (declared, true_state, n_trials, seed-or-None)."""
    declared = declared_from_json(require_key(doc, "declared", dict, "config"))
    true_doc = require_key(doc, "true_state", dict, "config")
    if require_key(true_doc, "kind", str, "config.true_state") != "state":
        raise SchemaError("config.true_state: kind must be 'state'")
    true_state = object_from_json(true_doc, "config.true_state")
    n_trials = require_key(doc, "n_trials", int, "config")
    if n_trials < 1:
        raise SchemaError(f"config: n_trials must be >= 1, got {n_trials}")
    seed = None
    if "seed" in doc:
        seed = require_key(doc, "seed", int, "config")
        if seed < 0:
            raise SchemaError("config: seed must be non-negative")
    return declared, true_state, n_trials, seed


def report_to_json(report: CampaignReport) -> dict:
    doc = asdict(report)
    return {
        "n_trials": int(doc["n_trials"]),
        "n_falsified": int(doc["n_falsified"]),
        "empirical_rate": float(doc["empirical_rate"]),
        "theoretical_rate": float(doc["theoretical_rate"]),
        "z_score": float(doc["z_score"]),
        "z_degenerate": bool(doc["z_degenerate"]),
        "seed": int(doc["seed"]),
        "verdict": str(doc["verdict"]),
    }


def write_trace_csv(path: str, outcomes, p_theoretical, seed: int) -> None:
    """Per-trial trace with columns trial,outcome,p_theoretical,seed.

    p_theoretical may be a single probability shared by every trial or a
    per-trial sequence aligned with outcomes.
    """
    scalar = isinstance(p_theoretical, (int, float, np.floating, np.integer))
    const_text = float_literal(float(p_theoretical)) if scalar else None
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["trial", "outcome", "p_theoretical", "seed"])
        for i, value in enumerate(outcomes):
            p_text = (
                const_text if scalar else float_literal(float(p_theoretical[i]))
            )
            writer.writerow([i, value, p_text, seed])


def json_loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json_loads(fh.read())
