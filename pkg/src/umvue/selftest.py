"""Randomized cross-checks between the independent characterizations.

Each suite runs over a pool of small random rational models and returns a
list of :class:`Failure` records; an empty list means every check agreed.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import linalg
from .characterize import (
    NotUMVUEError,
    atoms,
    certificate,
    check_sufficiency_definition,
    decompose,
    is_complete,
    is_sufficient,
    is_umvue,
    is_umvue_oracle,
    level_masses,
    sigma0,
    sigma0_bruteforce,
    verify_certificate,
)
from .io import model_to_json
from .losses import LossSpec, check_ubue
from .model import StatModel, clean, null_samples

WEIGHTS = (0, 0, 1, 1, 2, 3, 4, 6)


@dataclass
class Failure:
    suite: str
    model: StatModel
    statistic: tuple | None
    message: str

    def to_json(self) -> dict:
        doc = {"suite": self.suite, "message": self.message, "model": model_to_json(self.model)}
        if self.statistic is not None:
            doc["statistic"] = {"values": [linalg.format_scalar(v) for v in self.statistic]}
        return doc


def random_model(rng: random.Random, max_samples: int = 6, max_theta: int = 4) -> StatModel:
    """Random rational model with planted structure.

    Entries are drawn from a small weight pool; some columns are copies or
    multiples of earlier ones, some are zero, and some rows repeat, so that
    dependent likelihoods, null samples and redundant parameters all occur.
    """
    nx = rng.randint(1, max_samples)
    nt = rng.randint(1, max_theta)
    cols = []
    for j in range(nx):
        r = rng.random()
        if j and r < 0.2:
            src = cols[rng.randrange(j)]
            f = rng.choice((1, 2, 3))
            cols.append([v * f for v in src])
        elif r < 0.3:
            cols.append([0] * nt)
        else:
            cols.append([rng.choice(WEIGHTS) for _ in range(nt)])
    rows = [[cols[j][i] for j in range(nx)] for i in range(nt)]
    for i in range(nt):
        if i and rng.random() < 0.15:
            rows[i] = list(rows[rng.randrange(i)])
        if not any(rows[i]):
            rows[i][rng.randrange(nx)] = 1
    P = [[Fraction(v, sum(r)) for v in r] for r in rows]
    return StatModel.from_rows(P, [f"t{i}" for i in range(nt)], [f"x{j}" for j in range(nx)])


def random_statistics(rng: random.Random, m: StatModel, count: int = 5) -> list[tuple]:
    """Mix of unstructured statistics and ones constant on the finest UMVUE blocks."""
    n = m.n_samples
    out = [tuple(Fraction(rng.randint(0, 2)) for _ in range(n))]
    out.append(tuple(Fraction(rng.randint(-n, n)) for _ in range(n)))
    blocks = sigma0(m).blocks
    while len(out) < count:
        vals = [Fraction(rng.randint(-2, 3)) for _ in blocks]
        T = [None] * n
        for v, b in zip(vals, blocks):
            for x in b:
                T[x] = v
        out.append(tuple(T))
    return out


def random_map(rng: random.Random, T) -> tuple:
    """``u(T)`` for a random map ``u`` on the values of ``T``."""
    u = {t: Fraction(rng.randint(-2, 2)) for t in set(T)}
    return tuple(u[t] for t in T)


def model_pool(seed: int = 0, count: int = 1000, max_samples: int = 6, max_theta: int = 4):
    rng = random.Random(seed)
    return [random_model(rng, max_samples, max_theta) for _ in range(count)]


def complete_bruteforce(m, T) -> bool:
    """Completeness by solving ``Σ_t u(t) m_t = 0`` over all levels directly.

    ``T`` is complete iff every solution ``u`` vanishes on the levels of
    positive mass.
    """
    base = m.base
    groups, masses = level_masses(base, T)
    nulls = null_samples(base)
    live = [i for i, g in enumerate(groups) if not set(g) <= nulls]
    M = linalg.Matrix.from_columns(masses, base.arithmetic, nrows=base.n_theta)
    for u in linalg.null_space_basis(M):
        if any(u[i] != 0 for i in live):
            return False
    return True


def suite_equivalence(pool, rng, stats_per_model=5):
    fails = []
    for m in pool:
        for T in random_statistics(rng, m, stats_per_model):
            a, b = bool(is_umvue(m, T)), bool(is_umvue_oracle(m, T))
            if a != b:
                fails.append(Failure("equivalence", m, T, f"is_umvue={a} oracle={b}"))
    return fails


def suite_sigma0(pool, cap=16):
    fails = []
    for m in pool:
        got = sorted(sigma0(m).blocks)
        want = atoms(sigma0_bruteforce(m, cap), m.n_samples)
        if got != want:
            fails.append(Failure("sigma0", m, None, f"sigma0={got} bruteforce={want}"))
    return fails


def suite_corollaries(pool, rng, stats_per_model=5, maps=10):
    fails = []
    for m in pool:
        cm = clean(m)
        for T in random_statistics(rng, m, stats_per_model):
            umvue = bool(is_umvue(cm, T))
            complete = bool(is_complete(m, T))
            if umvue:
                for _ in range(maps):
                    U = random_map(rng, T)
                    if not is_umvue(cm, U):
                        fails.append(Failure("corollary2", m, T, f"u(T)={list(map(str, U))} fails"))
                        break
                if not complete:
                    fails.append(Failure("corollary3", m, T, "UMVUE but not complete"))
            if all(len(b) <= 1 for b in decompose(cm, T).bases) and umvue != complete:
                fails.append(Failure("corollary4", m, T, f"umvue={umvue} complete={complete}"))
    return fails


def suite_sufficiency(pool, rng, stats_per_model=5):
    fails = []
    for m in pool:
        for T in random_statistics(rng, m, stats_per_model):
            a, b = bool(is_sufficient(m, T)), bool(check_sufficiency_definition(m, T))
            if a != b:
                fails.append(Failure("sufficiency", m, T, f"criterion={a} definition={b}"))
    return fails


def suite_completeness(pool, rng, stats_per_model=5):
    fails = []
    for m in pool:
        for T in random_statistics(rng, m, stats_per_model):
            a, b = bool(is_complete(m, T)), complete_bruteforce(m, T)
            if a != b:
                fails.append(Failure("completeness", m, T, f"is_complete={a} bruteforce={b}"))
    return fails


def suite_certificates(pool, rng, stats_per_model=5):
    fails = []
    for m in pool:
        cm = clean(m)
        for T in random_statistics(rng, m, stats_per_model):
            if is_umvue(cm, T):
                if not verify_certificate(cm, certificate(cm, T)):
                    fails.append(Failure("certificate", m, T, "certificate fails verification"))
            else:
                try:
                    certificate(cm, T)
                except NotUMVUEError:
                    pass
                else:
                    fails.append(Failure("certificate", m, T, "certificate issued for a non-UMVUE"))
    return fails


def suite_ubue(pool, rng, stats_per_model=2, directions=20):
    fails = []
    for m in pool:
        for T in random_statistics(rng, m, stats_per_model):
            a = bool(is_umvue(m, T))
            b = bool(check_ubue(m, T, LossSpec("square"), directions=directions))
            if a != b:
                fails.append(Failure("ubue", m, T, f"is_umvue={a} square-loss ubue={b}"))
    return fails


@dataclass
class SelftestResult:
    suites: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def run_selftest(models=200, max_samples=6, max_theta=4, stats=5, seed=42,
                 counterexample_dir=None, log=print) -> SelftestResult:
    """Run every suite on one shared pool; persist a model file per failure."""
    start = time.perf_counter()
    pool = model_pool(seed, models, max_samples, max_theta)
    result = SelftestResult()
    runs = [
        ("equivalence", lambda r: suite_equivalence(pool, r, stats)),
        ("sigma0", lambda r: suite_sigma0(pool)),
        ("corollaries", lambda r: suite_corollaries(pool, r, stats)),
        ("sufficiency", lambda r: suite_sufficiency(pool, r, stats)),
        ("completeness", lambda r: suite_completeness(pool, r, stats)),
        ("certificates", lambda r: suite_certificates(pool, r, stats)),
        ("ubue", lambda r: suite_ubue(pool, r)),
    ]
    for name, fn in runs:
        t0 = time.perf_counter()
        fails = fn(random.Random(f"{seed}-{name}"))
        result.suites[name] = len(fails)
        result.failures.extend(fails)
        if log:
            status = "PASS" if not fails else f"FAIL ({len(fails)} disagreements)"
            log(f"{name:<14} {status}  [{time.perf_counter() - t0:.2f}s]")
    if result.failures and counterexample_dir is not None:
        out = Path(counterexample_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, f in enumerate(result.failures):
            path = out / f"counterexample-{f.suite}-{i}.json"
            path.write_text(json.dumps(model_to_json(f.model), indent=2))
            if log:
                log(f"counterexample written to {path}: {f.message}")
                log(json.dumps(f.to_json()))
    result.seconds = time.perf_counter() - start
    return result


__all__ = [
    "Failure",
    "SelftestResult",
    "complete_bruteforce",
    "model_pool",
    "random_map",
    "random_model",
    "random_statistics",
    "run_selftest",
]
