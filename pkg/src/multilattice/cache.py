"""Append-only JSON-lines result cache for exponent computations.

Entries are keyed by (schema version, canonical arrangement hash,
multiplicity) and are fully re-derivable, so a last-write-wins policy is
safe: concurrent writers can only ever append identical values.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Dict, Optional, Tuple

from .dermod import ExponentResult
from .field import FieldSpec
from .poly import Arrangement, Derivation, HomogPoly

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "ML_CACHE_DIR"


def serialize_derivation(fs: FieldSpec, theta: Derivation) -> dict:
    return {
        "P": [fs.format_scalar(c) for c in theta.P.coeffs],
        "Q": [fs.format_scalar(c) for c in theta.Q.coeffs],
    }


def parse_derivation(fs: FieldSpec, obj: dict) -> Derivation:
    P = HomogPoly.make(tuple(fs.parse_scalar(c) for c in obj["P"]))
    Q = HomogPoly.make(tuple(fs.parse_scalar(c) for c in obj["Q"]))
    return Derivation(P, Q)


class ResultCache:
    """In-memory exponent cache with optional JSONL persistence.

    The directory comes from the ML_CACHE_DIR environment variable (or an
    explicit path); with neither, the cache is memory-only.
    """

    def __init__(self, directory: Optional[str] = None, use_env: bool = True):
        if directory is None and use_env:
            directory = os.environ.get(ENV_CACHE_DIR)
        self.directory = Path(directory) if directory else None
        self._mem: Dict[Tuple[str, Tuple[int, ...]], ExponentResult] = {}
        self._fields: Dict[str, FieldSpec] = {}
        self._loaded = False

    @property
    def path(self) -> Optional[Path]:
        if self.directory is None:
            return None
        return self.directory / "exponents.jsonl"

    def _ensure_loaded(self) -> None:
        if self._loaded:
            return
        self._loaded = True
        if self.path is None or not self.path.exists():
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn write; entry is re-derivable
                if obj.get("schema") != SCHEMA_VERSION:
                    continue
                fs = FieldSpec.from_json(obj["field"])
                key = (obj["arr"], tuple(obj["mu"]))
                self._mem[key] = ExponentResult(
                    obj["d1"], obj["d2"], obj["delta"],
                    parse_derivation(fs, obj["theta"]),
                    obj["non_unique"],
                )

    def get(self, A: Arrangement, mu: Tuple[int, ...]) -> Optional[ExponentResult]:
        self._ensure_loaded()
        return self._mem.get((A.canonical_hash(), tuple(mu)))

    def put(self, A: Arrangement, mu: Tuple[int, ...], result: ExponentResult) -> None:
        self._ensure_loaded()
        key = (A.canonical_hash(), tuple(mu))
        if key in self._mem:
            return
        self._mem[key] = result
        if self.path is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {
            "schema": SCHEMA_VERSION,
            "arr": key[0],
            "mu": list(mu),
            "field": A.field.to_json(),
            "d1": result.d1,
            "d2": result.d2,
            "delta": result.delta,
            "non_unique": result.non_unique,
            "theta": serialize_derivation(A.field, result.theta_min),
        }
        with open(self.path, "a") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")

    def clear(self) -> None:
        self._mem.clear()
        self._loaded = True
        if self.path is not None and self.path.exists():
            self.path.unlink()

    def __len__(self) -> int:
        self._ensure_loaded()
        return len(self._mem)
