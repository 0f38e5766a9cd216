"""Seeded experiment runner.

Every trial gets its own seed derived from ``(master_seed, trial index)``,
so results do not depend on how trials are scheduled over threads.  Reports
are JSON lines (one record per trial, keys sorted) plus a small CSV summary.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .bippivot import (
    OrderedBipartiteGraph,
    bipartite_delta_via_m,
    find_pivot_pairs,
    rank_tail_bound,
)
from .f2core import F2Matrix, rank
from .gfourier import (
    claim34_bound,
    claim34_tensor_check,
    delta_distribution_exact,
    delta_distribution_mc,
    fourier_transform,
    fourier_tv_bound,
    lemma31_bound,
    tv_estimate,
    tv_to_uniform,
)
from .graph import Graph, edge_pairs
from .lcdelta import LCInstance, delta_via_m, sequential_delta
from .quadpoly import QuadPoly, lemma21_bound, sign_expectation_exact
from .rankcensus import EXHAUSTIVE_MAX_S, census_bound, census_exhaustive, census_formula
from .vminor import is_k_vm_universal, lc_orbit

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "Report",
    "Theorem13Parameters",
    "EXPERIMENTS",
    "derive_seed",
    "sample_gnp",
    "sample_bipartite",
    "theorem13_parameters",
    "run_experiment",
]

P_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


@dataclass
class ExperimentConfig:
    experiment: str
    master_seed: int = 0
    trials: int = 1
    n: int | None = None
    p: float = 0.5
    k: int | None = None
    s: int | None = None
    r: int | None = None
    samples: int = 10_000
    member_cap: int = 1 << 20
    threads: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {sorted(EXPERIMENTS)}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        self.master_seed = int(self.master_seed) & ((1 << 64) - 1)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = {k: v for k, v in d.items() if k not in known}
        base = {k: v for k, v in d.items() if k in known}
        base.setdefault("params", {}).update(extra)
        return cls(**base)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("threads")  # scheduling only; must not change the report
        return out


@dataclass
class TrialRecord:
    index: int
    seed: int
    verdicts: dict
    measures: dict
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())

    def to_json(self, timing: bool = False) -> str:
        d = {"index": self.index, "seed": self.seed, "passed": self.passed,
             "verdicts": self.verdicts, "measures": self.measures}
        if timing:
            d["wall_time"] = self.wall_time
        return json.dumps(d, sort_keys=True, default=_json_default)


@dataclass
class Report:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: dict

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records) and self.summary.get("aggregate_ok", True)

    def jsonl(self, timing: bool = False) -> str:
        head = json.dumps({"config": self.config.to_dict()}, sort_keys=True, default=_json_default)
        lines = [head] + [r.to_json(timing) for r in self.records]
        lines.append(json.dumps({"summary": self.summary}, sort_keys=True, default=_json_default))
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in sorted(self.summary):
            w.writerow([k, _fmt(self.summary[k])])
        return buf.getvalue()


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    return str(o)


def _fmt(v):
    return json.dumps(v, sort_keys=True, default=_json_default) if isinstance(v, (dict, list)) else v


# ----------------------------------------------------------------------
# seeds and sampling
# ----------------------------------------------------------------------

def derive_seed(master_seed: int, index: int) -> int:
    """64-bit trial seed from the master seed and the trial index (SeedSequence mixing)."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def sample_gnp(n: int, p: float, seed=None) -> Graph:
    """``G(n, p)`` on labels ``0..n-1``; pairs are drawn in lexicographic order."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    draws = rng.random(comb(n, 2)) < p
    rows = [0] * n
    for present, (i, j) in zip(draws, edge_pairs(n)):
        if present:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph._from_rows(rows, range(n))


def sample_bipartite(a: int, b: int, p: float, seed=None) -> OrderedBipartiteGraph:
    """``G(a, b, p)`` with left labels ``0..a-1`` and right labels ``a..a+b-1``."""
    if a < 0 or b < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need a, b >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    biadj = F2Matrix.from_array(rng.random((a, b)) < p) if a and b else F2Matrix.zeros(a, b)
    return OrderedBipartiteGraph(range(a), range(a, a + b), biadj)


# ----------------------------------------------------------------------
# the parameter choice for the main universality theorem
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Theorem13Parameters:
    n: int
    p: float
    q: float
    k: int
    s: int
    r: int
    C: float | None
    failure_bound: float
    log2_failure_bound: float
    threshold_ln: float
    threshold_log2: float
    hypothesis_ln: bool
    hypothesis_log2: bool

    @property
    def violation(self) -> bool:
        """True when ``q`` is below the threshold under either reading of ``log``."""
        return not (self.hypothesis_ln and self.hypothesis_log2)


def theorem13_parameters(n: int, p: float) -> Theorem13Parameters:
    """``k = floor(q sqrt(n)/100)``, ``s = floor(q^2 n/12)``, ``r = n - s`` and friends.

    ``C = 2 log2(4/3) s / k^2 - 1`` is ``None`` when ``k = 0``.  The threshold
    ``100 log n / sqrt(n)`` is evaluated with both natural and base-2 logs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    q = min(p, 1.0 - p)
    k = math.floor(q * math.sqrt(n) / 100)
    s = math.floor(q * q * n / 12)
    c = 2 * math.log2(4 / 3) * s / k**2 - 1 if k else None
    expo = -q * q * n / 100
    t_ln = 100 * math.log(n) / math.sqrt(n)
    t_2 = 100 * math.log2(n) / math.sqrt(n)
    return Theorem13Parameters(n, p, q, k, s, n - s, c, 2.0**expo, expo, t_ln, t_2, q >= t_ln, q >= t_2)


# ----------------------------------------------------------------------
# experiments: each maps (config, trial index, rng) -> (verdicts, measures)
# ----------------------------------------------------------------------

def _exp_claim_m(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    n = cfg.n or 20
    g = sample_gnp(n, cfg.p, rng)
    r = cfg.r if cfg.r is not None else int(rng.integers(1, n))
    order = [int(v) for v in rng.permutation(n)]
    inst = LCInstance(g, sorted(order[r:]), order[:r])
    cert = delta_via_m(inst)
    checks = cert.check()
    verdicts = {"delta_matches": cert.delta == sequential_delta(inst), **checks}
    return verdicts, {"n": n, "r": r, "delta_edges": cert.delta.num_edges()}


def _exp_lemma21(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    m = int(cfg.params.get("m", 4))
    pairs = [pr for pr in combinations(range(m), 2) if rng.random() < 0.5]
    lin = [i for i in range(m) if rng.random() < 0.5]
    f = QuadPoly.from_terms(m, pairs, lin, int(rng.integers(2)))
    exact = sign_expectation_exact(f, np.array(P_GRID))
    bounds = np.array([lemma21_bound(f, pv) for pv in P_GRID])
    slack = bounds + 1e-12 - np.abs(exact)
    return ({"bound_holds": bool((slack >= 0).all())},
            {"m": m, "rank": f.rank(), "min_slack": float(slack.min())})


def _exp_rank_census(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    s = cfg.s if cfg.s is not None else idx + 1
    formula = {a: census_formula(s, a) for a in range(s + 1)}
    verdicts = {"row_sum": sum(formula.values()) == 2 ** comb(s, 2),
                "bound": all(formula[a] <= census_bound(s, a) for a in range(1, s + 1))}
    if s <= EXHAUSTIVE_MAX_S:
        ex = census_exhaustive(s)
        verdicts["exhaustive_matches"] = all(ex[a] == formula[a] for a in range(s + 1))
    return verdicts, {"s": s, "counts": {str(a): c for a, c in formula.items() if c}}


def _exp_tv_estimate(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    s, r = cfg.s or 3, cfg.r if cfg.r is not None else 72
    d = delta_distribution_mc((s, r), cfg.p, cfg.samples, seed=rng)
    est = tv_estimate(d)
    q = min(cfg.p, 1 - cfg.p)
    bound = lemma31_bound(s, r, q)
    meas = {"s": s, "r": r, "tv": est.tv, "stderr": est.stderr, "bias_bound": est.bias_bound,
            "samples": est.samples}
    if not bound:
        meas["hypothesis"] = bound.reason
        return {}, meas
    meas["bound"] = bound
    return {"tv_within_bound": est.tv <= bound + est.bias_bound + 3 * est.stderr}, meas


def _exp_fourier_audit(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    s, r = cfg.s or 2, cfg.r if cfg.r is not None else 6
    gw = sample_gnp(r, cfg.p, rng)
    labels = [f"w{i}" for i in range(r)] + [f"u{i}" for i in range(s)]
    g = Graph.from_edges([(f"w{i}", f"w{j}") for i, j in gw.edges()], labels)
    inst = LCInstance(g, labels[r:], labels[:r])
    d = delta_distribution_exact(inst, cfg.p)
    spec = fourier_transform(d)
    q = min(cfg.p, 1 - cfg.p)
    worst = 0.0
    ok_coeff = True
    for code in range(1, d.probs.size):
        fg = Graph.from_edge_bitmask(code, inst.u_set)
        bound = claim34_bound(fg, r, q)
        if abs(spec[code]) > bound + 1e-12:
            ok_coeff = False
        worst = max(worst, abs(spec[code]) - bound)
    probe = int(rng.integers(1, d.probs.size)) if d.probs.size > 1 else 0
    tc = claim34_tensor_check(inst, cfg.p, None, probe)
    tv, fb = tv_to_uniform(d), fourier_tv_bound(d)
    return ({"tv_le_fourier": tv <= fb + 1e-12, "coefficients_bounded": ok_coeff, "tensor_check": tc.passed},
            {"s": s, "r": r, "tv": tv, "fourier_bound": fb, "worst_excess": worst, "probe": probe})


def _exp_orbit(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    g = sample_gnp(cfg.n or 6, cfg.p, rng)
    orb = lc_orbit(g, cfg.member_cap)
    return ({"exact": not orb.truncated},
            {"n": g.n, "edges": g.num_edges(), "members": len(orb), "layers": orb.layers})


def _exp_universal(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    g = sample_gnp(cfg.n or 6, cfg.p, rng)
    k = cfg.k or 2
    res = is_k_vm_universal(g, k, cfg.member_cap, record_subsets=True)
    need = 2 ** comb(k, 2)
    per = {",".join(map(str, key)): cnt == need for key, cnt in (res.per_subset or {}).items()}
    meas = {"n": g.n, "k": k, "universal": res.verdict, "subsets_checked": res.subsets_checked,
            "per_subset": per}
    if res.counterexample:
        subset, missing = res.counterexample
        meas["counterexample"] = {"subset": list(subset), "missing_edges": missing.edges()}
    # universality is a measured outcome, not a correctness check
    return {"decided": res.verdict is not None}, meas


def _exp_pivot_pairs(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    rows = int(cfg.params.get("rows", cfg.r or 20))
    cols = int(cfg.params.get("cols", rows))
    g = sample_bipartite(rows, cols, cfg.p, rng)
    pp = find_pivot_pairs(g)
    return ({"pairs_equal_rank": len(pp) == pp.rank,
             "steps_certified": all(st.was_edge and st.block_matches for st in pp.steps),
             "schur_invertible": all(st.schur_invertible for st in pp.steps)},
            {"rows": rows, "cols": cols, "rank": pp.rank, "pairs": [list(pr) for pr in pp.pairs]})


def _exp_rank_tail(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    r = cfg.r or 40
    a = F2Matrix.from_array(rng.random((r, r)) < cfg.p)
    rk = rank(a)
    return {}, {"r": r, "rank": rk, "hit": rk <= r // 2}


def _agg_rank_tail(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    r = cfg.r or 40
    q = min(cfg.p, 1 - cfg.p)
    bound = rank_tail_bound(r, q, r // 2)
    t = len(records)
    if not t:
        return {"bound": bound}
    freq = sum(rec.measures["hit"] for rec in records) / t
    sigma = math.sqrt(freq * (1 - freq) / t)
    return {"bound": bound, "frequency": freq, "stderr": sigma,
            "aggregate_ok": freq <= bound + 3 * sigma}


def _exp_bip_delta(cfg: ExperimentConfig, idx: int, rng: np.random.Generator):
    top = int(cfg.params.get("sizes", cfg.n or 12))
    a, b = (int(x) for x in rng.integers(2, top + 1, size=2))
    g = sample_bipartite(a, b, cfg.p, rng)
    sl, sr = int(rng.integers(1, a)), int(rng.integers(1, b))
    res = bipartite_delta_via_m(g, g.left[:sl], g.right[:sr])
    # only the sum identity is asserted; the M factorisation is recorded
    return ({"delta_is_sum": res.sum_holds},
            {"a": a, "b": b, "pairs": len(res.pairs), "q_left_found": res.q_left is not None,
             "q_right_found": res.q_right is not None, "m_holds": res.m_holds,
             "m_invertible": res.m_invertible, "refutations": res.refutations})


EXPERIMENTS: dict[str, Callable] = {
    "claim-m-verify": _exp_claim_m,
    "lemma21-scan": _exp_lemma21,
    "rank-census": _exp_rank_census,
    "tv-estimate": _exp_tv_estimate,
    "fourier-audit": _exp_fourier_audit,
    "orbit": _exp_orbit,
    "universal": _exp_universal,
    "pivot-pairs": _exp_pivot_pairs,
    "rank-tail": _exp_rank_tail,
    "bip-delta-verify": _exp_bip_delta,
}

_AGGREGATORS: dict[str, Callable] = {"rank-tail": _agg_rank_tail}


def _run_trial(cfg: ExperimentConfig, idx: int) -> TrialRecord:
    seed = derive_seed(cfg.master_seed, idx)
    t0 = time.perf_counter()
    verdicts, measures = EXPERIMENTS[cfg.experiment](cfg, idx, np.random.default_rng(seed))
    return TrialRecord(idx, seed, verdicts, measures, time.perf_counter() - t0)


def run_experiment(cfg: ExperimentConfig, out: str | Path | None = None, timing: bool = False,
                   on_record: Callable[[TrialRecord], Any] | None = None) -> Report:
    """Run ``cfg.trials`` trials and optionally write ``<out>/<experiment>.jsonl`` and ``.csv``.

    Records are collected in trial-index order whatever ``cfg.threads`` is.
    Wall times are left out of the JSON lines unless ``timing`` is set, so
    reruns are byte-identical.
    """
    indices = range(cfg.trials)
    if cfg.threads > 1 and cfg.trials > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            records = list(pool.map(lambda i: _run_trial(cfg, i), indices))
    else:
        records = [_run_trial(cfg, i) for i in indices]
    if on_record:
        for rec in records:
            on_record(rec)
    passed = sum(r.passed for r in records)
    summary = {"experiment": cfg.experiment, "trials": len(records), "passed": passed,
               "failed": len(records) - passed}
    agg = _AGGREGATORS.get(cfg.experiment)
    if agg:
        summary.update(agg(cfg, records))
    report = Report(cfg, records, summary)
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{cfg.experiment}.jsonl").write_text(report.jsonl(timing))
        (out / f"{cfg.experiment}.csv").write_text(report.csv())
    return report
