"""On-disk cache for point counts and L-polynomials.

One JSON file per (curve label, normalized coefficients, prime,
tool version), content-addressed by a SHA-256 key.  Records hold the
count prefix N_1.. plus the finished L-polynomial when known, so a run
with a larger budget can extend a partial computation instead of
restarting it.

Concurrency contract: many readers, one writer.  Scans funnel all writes
through the process that owns the cache (the CLI entry point); worker
processes never touch the directory.  Writes are atomic (temp file +
rename), so readers can never observe a half-written record.  A record
that fails to parse or fails the Weil validation is treated as a miss,
reported with a warning, and overwritten by the next write.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__
from .curvecount import CurveModel, LPolynomial, validate_weil

log = logging.getLogger("twistscope.cache")

ENV_CACHE_DIR = "TWISTSCOPE_CACHE_DIR"
DEFAULT_CACHE_DIR = ".twistscope-cache"


def resolve_cache_dir(flag_value: str | None = None) -> Path:
    """Cache directory: flag beats environment beats the project-local default."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(ENV_CACHE_DIR)
    return Path(env) if env else Path(DEFAULT_CACHE_DIR)


class LPolyCache:
    """Single-writer, multi-reader store of per-prime curve data."""

    def __init__(self, directory: str | Path, enabled: bool = True):
        self.directory = Path(directory)
        self.enabled = enabled

    def _key(self, curve: CurveModel, p: int) -> str:
        raw = f"{__version__}|{curve.label}|{','.join(map(str, curve.f_coeffs))}|{p}"
        return hashlib.sha256(raw.encode()).hexdigest()

    def _path(self, curve: CurveModel, p: int) -> Path:
        return self.directory / f"{self._key(curve, p)}.json"

    def get(self, curve: CurveModel, p: int) -> dict | None:
        """The cached record, or None on miss/corruption."""
        if not self.enabled:
            return None
        path = self._path(curve, p)
        try:
            record = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, OSError) as exc:
            log.warning("cache record %s unreadable (%s); recomputing", path.name, exc)
            return None
        if not self._valid(record, curve, p):
            log.warning("cache record %s failed validation; recomputing", path.name)
            return None
        return record

    def _valid(self, record: dict, curve: CurveModel, p: int) -> bool:
        try:
            if record["tool_version"] != __version__ or record["p"] != p:
                return False
            if tuple(record["f_coeffs"]) != curve.f_coeffs:
                return False
            counts = record["counts"]
            if not all(isinstance(n, int) for n in counts):
                return False
            if record["lpoly"] is not None:
                L = LPolynomial(p, curve.genus, tuple(record["lpoly"]))
                if validate_weil(L):
                    return False
            return True
        except (KeyError, TypeError, ValueError):
            return False

    def put(
        self,
        curve: CurveModel,
        p: int,
        counts: list[int] | None = None,
        lpoly: LPolynomial | None = None,
    ) -> None:
        """Merge new data into the record for (curve, p) and write atomically."""
        if not self.enabled:
            return
        record = self.get(curve, p) or {
            "tool_version": __version__,
            "label": curve.label,
            "f_coeffs": list(curve.f_coeffs),
            "p": p,
            "counts": [],
            "lpoly": None,
        }
        if counts is not None and len(counts) > len(record["counts"]):
            record["counts"] = list(counts)
        if lpoly is not None:
            record["lpoly"] = list(lpoly.coeffs)
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh)
            os.replace(tmp, self._path(curve, p))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    # ------------------------------------------------------------------
    # cache-aware computation wrappers
    # ------------------------------------------------------------------

    def lpoly(self, curve: CurveModel, p: int, budget: int) -> LPolynomial:
        """curvecount.lpoly routed through the cache (prefix reuse + store)."""
        from .curvecount import lpoly as compute_lpoly
        from .errors import BudgetExceededError

        record = self.get(curve, p)
        if record and record["lpoly"] is not None:
            return LPolynomial(p, curve.genus, tuple(record["lpoly"]))
        known = tuple(record["counts"]) if record else ()
        partial = list(known)

        def sink(i: int, n: int) -> None:
            partial.append(n)

        try:
            L = compute_lpoly(curve, p, budget, known_counts=known, count_sink=sink)
        except BudgetExceededError:
            if len(partial) > len(known):
                self.put(curve, p, counts=partial)
            raise
        self.put(curve, p, counts=partial, lpoly=L)
        return L

    def counts(self, curve: CurveModel, p: int, upto: int, budget: int) -> list[int]:
        """N_1..N_upto via the cache, enumerating only what is missing."""
        from .curvecount import log_derivative_counts, point_count
        from .errors import BudgetExceededError

        record = self.get(curve, p)
        known = list(record["counts"]) if record else []
        if len(known) >= upto:
            return known[:upto]
        if record and record["lpoly"] is not None and upto <= 2 * curve.genus:
            L = LPolynomial(p, curve.genus, tuple(record["lpoly"]))
            return log_derivative_counts(L, upto)
        prior = len(known)
        spent = 0
        for i in range(prior + 1, upto + 1):
            cost = p**i
            if spent + cost > budget:
                if len(known) > prior:
                    self.put(curve, p, counts=known)
                required = sum(p**j for j in range(i, upto + 1))
                raise BudgetExceededError(required, budget, f"{curve.label} at p={p}")
            known.append(point_count(curve, p, i))
            spent += cost
        self.put(curve, p, counts=known)
        return known

    def trace(self, curve: CurveModel, p: int) -> int:
        """Frobenius trace via the cached N_1 when available."""
        from .curvecount import point_count

        record = self.get(curve, p)
        if record and record["counts"]:
            return p + 1 - record["counts"][0]
        if record and record["lpoly"] is not None:
            return -record["lpoly"][1]
        n1 = point_count(curve, p, 1)
        self.put(curve, p, counts=[n1])
        return p + 1 - n1
