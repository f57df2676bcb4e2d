"""Grid suites for the identity checks shared by the CLI and the test-suite.

Each suite yields rows ``{"y1", "y2", "m", "residual", "tol", "kind", "params"}``;
``y1``/``y2``/``m`` are ``None`` where they do not apply.  Grid points are
evaluated through an ordered ``map`` so results do not depend on the thread
count.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from . import h_family, spectral, special_fn

IDENTITIES = ("contiguous", "transforms", "reduction", "recursion-m", "gauss-bonnet",
              "cm-relation", "route-agreement")


def load_defaults(path: str | None = None) -> dict:
    if path:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(resources.files("modheat").joinpath("defaults.json").read_text("utf-8"))


def thread_count(explicit: int | None = None) -> int:
    """Worker count: explicit request or cpu count, capped by MODHEAT_THREADS."""
    n = max(1, int(explicit)) if explicit else (os.cpu_count() or 1)
    env = os.environ.get("MODHEAT_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return n


def ordered_map(fn: Callable, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass
class SuiteResult:
    identity: str
    tolerance: float
    rows: list[dict]
    grid: dict
    seed: int | None = None
    elapsed_s: float = 0.0

    @property
    def max_residual(self) -> float:
        return max((r["residual"] for r in self.rows), default=0.0)

    @property
    def passed(self) -> bool:
        return all(r["residual"] < r["tol"] for r in self.rows)

    @property
    def worst(self) -> dict | None:
        if not self.rows:
            return None
        return max(self.rows, key=lambda r: r["residual"] / r["tol"])


def _row(residual, tol, kind, y1=None, y2=None, m=None, **params):
    return {"y1": y1, "y2": y2, "m": m, "residual": float(residual), "tol": tol,
            "kind": kind, "params": {k: float(v) for k, v in params.items()}}


def _random_gauss(rng, n):
    p = rng.uniform(0.5, 6.0, size=(n, 3))
    z = rng.uniform(-0.8, 0.8, size=n)
    return [(float(a), float(b), float(c), float(x)) for (a, b, c), x in zip(p, z)]


def suite_contiguous(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    pts = _random_gauss(np.random.default_rng(seed), cfg["samples"])

    def one(p):
        return _row(max(abs(r) for r in special_fn.contiguous_residuals(*p)), tol,
                    "contiguous", a=p[0], b=p[1], c=p[2], z=p[3])

    return SuiteResult("contiguous", tol, ordered_map(one, pts, threads),
                       {"samples": len(pts), "params": "(0.5, 6)", "z": "(-0.8, 0.8)"}, seed)


def suite_transforms(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    pts = _random_gauss(np.random.default_rng(seed), cfg["samples"])

    def one(p):
        return _row(max(abs(r) for r in special_fn.transform_check(*p)), tol,
                    "pfaff+euler", a=p[0], b=p[1], c=p[2], z=p[3])

    return SuiteResult("transforms", tol, ordered_map(one, pts, threads),
                       {"samples": len(pts), "params": "(0.5, 6)", "z": "(-0.8, 0.8)"}, seed)


H_ROUTE_ALPHAS = ((2, 1), (3, 1), (4, 1), (2, 1, 1), (3, 1, 1), (2, 2, 1))


def h_route_values(alpha, zs, m) -> dict[str, float]:
    vals = {r: h_family.h_alpha(alpha, zs, m, 2, r) for r in ("quadrature", "fd", "reduced")}
    if float(m).is_integer() and m >= 4 and int(m) % 2 == 0 and len(alpha) <= 3:
        vals["even"] = h_family.h_even_m(alpha, zs, int(m))
    return vals


def route_spread(vals: Iterable[float]) -> float:
    vals = list(vals)
    scale = max(1.0, *(abs(v) for v in vals))
    return max((abs(u - v) for u, v in combinations(vals, 2)), default=0.0) / scale


def suite_reduction(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    rng = np.random.default_rng(seed)
    pts = []
    for m in cfg["m"]:
        for alpha in H_ROUTE_ALPHAS:
            for _ in range(cfg["samples"]):
                zs = [float(v) for v in rng.uniform(-0.5, 0.9, size=len(alpha) - 1)]
                pts.append((alpha, zs, m))

    def one(p):
        alpha, zs, m = p
        spread = route_spread(h_route_values(alpha, zs, m).values())
        params = {f"alpha{i}": a for i, a in enumerate(alpha)}
        params.update({f"z{i + 1}": z for i, z in enumerate(zs)})
        return _row(spread, tol, "H_alpha routes", m=m, **params)

    return SuiteResult("reduction", tol, ordered_map(one, pts, threads),
                       {"alphas": [list(a) for a in H_ROUTE_ALPHAS], "m": cfg["m"],
                        "samples_per_alpha": cfg["samples"], "z": "(-0.5, 0.9)^n"}, seed)


def suite_recursion(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    rng = np.random.default_rng(seed)
    pts = []
    for m in cfg["m"]:
        for _ in range(cfg["samples"]):
            a, b = (int(v) for v in rng.integers(1, 4, size=2))
            pts.append((a, b, None, [float(rng.uniform(-0.5, 0.8))], m))
            c = int(rng.integers(1, 3))
            pts.append((a, b, c, [float(v) for v in rng.uniform(-0.5, 0.8, size=2)], m))

    def one(p):
        a, b, c, zs, m = p
        raising, differential = h_family.recursion_residuals_m(a, b, c, zs, m)
        params = {"a": a, "b": b, **({"c": c} if c else {})}
        params.update({f"z{i + 1}": z for i, z in enumerate(zs)})
        kind = "two-index" if c is None else "three-index"
        # the differential form rests on central differences, hence its own tolerance
        return [_row(raising, tol, kind, m=m, **params),
                _row(differential, cfg["fd_tol"], kind + " differential", m=m, **params)]

    rows = [r for pair in ordered_map(one, pts, threads) for r in pair]
    return SuiteResult("recursion-m", tol, rows,
                       {"m": cfg["m"], "samples": cfg["samples"], "z": "(-0.5, 0.8)"}, seed)


def suite_gauss_bonnet(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    ys = [float(y) for y in np.logspace(math.log10(cfg["y_min"]), math.log10(cfg["y_max"]),
                                        cfg["points"])]

    def one(y):
        return _row(spectral.gauss_bonnet_residual([y]), tol, "T(y)+y^-2T(1/y)", y1=y, m=2.0)

    rows = ordered_map(one, ys, threads)
    k1 = abs(spectral.k_delta(1.0, 2.0) - 1.0 / 6.0)
    rows.append(_row(k1, cfg["k1_tol"], "K(1;2)-1/6", y1=1.0, m=2.0))
    return SuiteResult("gauss-bonnet", tol, rows,
                       {"y": [cfg["y_min"], cfg["y_max"]], "points": cfg["points"],
                        "spacing": "log"}, None)


def suite_cm(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    axis = [float(v) for v in np.linspace(cfg["y_min"], cfg["y_max"], cfg["points"])]
    pts = [(y1, y2, m, "grid") for m in cfg["m"] for y1 in axis for y2 in axis]
    pts += [(y1, 1.0, m, "confluent y2=1") for m in cfg["m"] for y1 in axis]
    tols = {"grid": tol, "confluent y2=1": cfg["confluent_tol"]}

    def one(p):
        y1, y2, m, kind = p
        return _row(spectral.cm_residual(y1, y2, m), tols[kind], kind, y1=y1, y2=y2, m=m)

    rows = ordered_map(one, pts, threads)

    def limit(p):
        out = spectral.cm_limit_m2(*p)
        return _row(max(out["residual"], out["vs_direct"]), cfg["limit_tol"], "m->2+ limit",
                    y1=p[0], y2=p[1], m=2.0)

    rows += ordered_map(limit, [tuple(p) for p in cfg["limit_points"]], threads)
    return SuiteResult("cm-relation", tol, rows,
                       {"y": [cfg["y_min"], cfg["y_max"]], "points": cfg["points"],
                        "m": cfg["m"], "limit_points": cfg["limit_points"]}, None)


def suite_route_agreement(cfg: dict, seed: int, threads: int) -> SuiteResult:
    tol = cfg["tol"]
    axis = [float(v) for v in np.geomspace(cfg["y_min"], cfg["y_max"], cfg["points"])]
    pts = [(y, None, m) for m in cfg["m"] for y in axis]
    pts += [(y1, y2, m) for m in cfg["m"] for y1 in axis[::2] for y2 in axis[::2]]

    def one(p):
        y1, y2, m = p
        if y2 is None:
            vals = [spectral.k_delta(y1, m, r) for r in ("HAlpha", "Hyper", "Closed")]
            return _row(route_spread(vals), tol, "K routes", y1=y1, m=m)
        vals = [spectral.h_delta(y1, y2, m, r) for r in ("HAlpha", "Hyper", "Closed")]
        return _row(route_spread(vals), tol, "H routes", y1=y1, y2=y2, m=m)

    return SuiteResult("route-agreement", tol, ordered_map(one, pts, threads),
                       {"y": [cfg["y_min"], cfg["y_max"]], "points": cfg["points"],
                        "m": cfg["m"], "spacing": "geometric"}, None)


SUITES = {
    "contiguous": suite_contiguous,
    "transforms": suite_transforms,
    "reduction": suite_reduction,
    "recursion-m": suite_recursion,
    "gauss-bonnet": suite_gauss_bonnet,
    "cm-relation": suite_cm,
    "route-agreement": suite_route_agreement,
}


def run_suite(identity: str, overrides: dict | None = None, seed: int | None = None,
              threads: int | None = None, config: dict | None = None) -> SuiteResult:
    config = config or load_defaults()
    if identity not in SUITES:
        raise KeyError(identity)
    cfg = dict(config["identities"][identity])
    cfg.update({k: v for k, v in (overrides or {}).items() if v is not None})
    seed = config.get("seed", 0) if seed is None else seed
    start = time.perf_counter()
    result = SUITES[identity](cfg, seed, thread_count(threads))
    result.elapsed_s = time.perf_counter() - start
    return result
