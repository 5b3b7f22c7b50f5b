"""
Uniform norm interface over space expressions.

Children are evaluated through NormHandles that route back into the same
evaluator, so nested SB and diagonal nodes share one value cache keyed by
(canonical space text, vector digest).
"""
import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from cachetools import LRUCache

from ..config import config
from ..core import FVec, FlatVec, NormHandle, Vector, as_fvec, lp_norm, rearrange_dec, restrict
from ..davis import davis_norm
from ..errors import EvaluationError, SizeLimitError, SolverError
from ..schreier import sb_norm
from .expr import DavisSpace, LpSpace, SBSpace, SpaceExpr, meta_of
from .grammar import as_space, format_space


@lru_cache(maxsize=1024)
def _text(expr: SpaceExpr) -> str:
    return format_space(expr)


@lru_cache(maxsize=1024)
def _symmetric(expr: SpaceExpr) -> bool:
    return meta_of(expr).symmetric


@dataclass
class NormValue:
    value: float
    certificate: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "certificate": self.certificate}


class SpaceEvaluator:
    """
    Evaluates norms of space expressions.

    The in-memory cache is an LRU guarded by a lock; with a cache directory,
    top-level results are also persisted as JSON files.
    """

    def __init__(self, cache_size: Optional[int] = None, cache_dir: Optional[Union[str, Path]] = None,
                 sb_mode: Optional[str] = None, sb_cap: Optional[int] = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self._cache: LRUCache = LRUCache(maxsize=cache_size or int(config.get("cache.max_entries", 4096)))
        self._lock = threading.Lock()
        self.cache_dir = Path(cache_dir) if cache_dir is not None else config.cache_dir
        self.sb_mode = sb_mode
        self.sb_cap = sb_cap

    # Public interface

    def norm_of(self, space: Union[str, SpaceExpr], x: Vector) -> NormValue:
        expr = as_space(space)
        if isinstance(x, FlatVec) and isinstance(expr, LpSpace):
            value = lp_norm(x, expr.p)
            return NormValue(value, {"node": "lp", "path": "lp", "space": _text(expr), "value": value})

        x = as_fvec(x)
        disk_path = self._disk_path(expr, x)
        if disk_path is not None and disk_path.exists():
            with open(disk_path, "r") as f:
                stored = json.load(f)
            if stored.get("sb") == self._sb_settings():
                self.logger.debug(f"Disk cache hit {disk_path.name}")
                return NormValue(stored["value"], stored["certificate"])
            self.logger.debug(f"Disk cache entry {disk_path.name} was written under other SB settings")

        certificate = self._certificate(expr, x, expr.kind)
        result = NormValue(certificate["value"], certificate)
        if disk_path is not None:
            self._store(disk_path, expr, x, result)
        return result

    def value(self, expr: SpaceExpr, x: FVec, path: Optional[str] = None) -> float:
        """Norm value only; size and solver failures come back as EvaluationError"""
        path = path or expr.kind
        if x.is_zero():
            return 0.0
        if _symmetric(expr):
            x = rearrange_dec(x)

        key = (_text(expr), x.key())
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit

        value, _ = self._node(expr, x, path)
        self._remember(key, value)
        return value

    def _remember(self, key: Tuple[str, str], value: float) -> None:
        with self._lock:
            self._cache[key] = value

    def handle(self, space: Union[str, SpaceExpr], path: Optional[str] = None) -> NormHandle:
        expr = as_space(space)
        path = path or expr.kind
        return NormHandle(lambda v: self.value(expr, v, path), p_convex=meta_of(expr).p_convex,
                          basis_bound=self.basis_norm_bound(expr, path), name=_text(expr))

    def basis_norm_bound(self, space: Union[str, SpaceExpr], path: Optional[str] = None) -> float:
        """
        Upper bound on sup_k ||e_k|| for the norm this evaluator computes.

        Exact for lp and diagonal nodes (every e_k rearranges to e_1); for SB
        nodes ||e_k|| equals the base norm of e_k.
        """
        expr = as_space(space)
        path = path or expr.kind
        if isinstance(expr, LpSpace):
            return 1.0
        if isinstance(expr, SBSpace):
            return self.basis_norm_bound(expr.child, f"{path}/{expr.child.kind}")
        if expr.params.normalize:
            return 1.0
        return self.value(expr, FVec.unit(1), path)

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()

    # Node evaluation

    def _child(self, expr: SpaceExpr, path: str) -> Tuple[SpaceExpr, str, NormHandle]:
        child = expr.children[0]
        child_path = f"{path}/{child.kind}"
        return child, child_path, self.handle(child, child_path)

    def _node(self, expr: SpaceExpr, x: FVec, path: str) -> Tuple[float, Dict[str, Any]]:
        try:
            if isinstance(expr, LpSpace):
                return lp_norm(x, expr.p), {}

            if isinstance(expr, SBSpace):
                _, _, X = self._child(expr, path)
                result = sb_norm(x, X, expr.r, mode=self.sb_mode, cap=self.sb_cap)
                return result.value, result.to_dict()

            if isinstance(expr, DavisSpace):
                _, _, X = self._child(expr, path)
                result = davis_norm(x, X, expr.params)
                return result.value, result.to_dict()
        except (SizeLimitError, SolverError) as e:
            self.logger.warning(f"Evaluation failed under {path}: {e}")
            raise EvaluationError(str(e), path, e) from e

        raise TypeError(f"Unknown space node {type(expr).__name__}")

    def _certificate(self, expr: SpaceExpr, x: FVec, path: str) -> Dict[str, Any]:
        """Node detail plus the certificates of the child evaluations it relied on"""
        x_eval = rearrange_dec(x) if _symmetric(expr) and not x.is_zero() else x
        if x.is_zero():
            value, detail = 0.0, {}
        else:
            value, detail = self._node(expr, x_eval, path)
            self._remember((_text(expr), x_eval.key()), value)
        cert: Dict[str, Any] = {"node": expr.kind, "path": path, "space": _text(expr), "value": value}
        cert.update({k: v for k, v in detail.items() if k != "value"})
        if not expr.children or x.is_zero():
            return cert

        child = expr.children[0]
        child_path = f"{path}/{child.kind}"
        inputs: List[FVec]
        if isinstance(expr, SBSpace):
            inputs = [restrict(x, F) for F in detail["partition"]["sets"]]
        else:
            inputs = [FVec.from_dense(detail["components"])] if detail.get("components") else []
        cert["children"] = [self._certificate(child, v, child_path) for v in inputs]
        return cert

    # Disk cache

    def _sb_settings(self) -> Dict[str, Any]:
        """Resolved SB mode and cap; entries written under other settings are not reused"""
        return {"mode": self.sb_mode or config.schreier_mode,
                "cap": config.exhaustive_cap if self.sb_cap is None else int(self.sb_cap)}

    def _disk_path(self, expr: SpaceExpr, x: FVec) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        sb = self._sb_settings()
        digest = hashlib.sha1(f"{_text(expr)}|{x.key()}|{sb['mode']}|{sb['cap']}".encode()).hexdigest()
        return Path(self.cache_dir) / f"{digest}.json"

    def _store(self, disk_path: Path, expr: SpaceExpr, x: FVec, result: NormValue) -> None:
        disk_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = disk_path.parent / f"{disk_path.stem}.{threading.get_ident()}.tmp"
        with open(tmp, "w") as f:
            json.dump({"space": _text(expr), "vector": x.to_dict(), "sb": self._sb_settings(),
                       **result.to_dict()}, f)
        tmp.replace(disk_path)


_default_evaluator: Optional[SpaceEvaluator] = None
_default_lock = threading.Lock()


def get_evaluator() -> SpaceEvaluator:
    global _default_evaluator
    with _default_lock:
        if _default_evaluator is None:
            _default_evaluator = SpaceEvaluator()
        return _default_evaluator


def norm_of(space: Union[str, SpaceExpr], x: Vector) -> NormValue:
    """Norm of x in the space with its certificate, on the shared evaluator"""
    return get_evaluator().norm_of(space, x)
