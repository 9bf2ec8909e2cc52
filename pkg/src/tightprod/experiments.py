"""The random product model and its empirical spectral harness.

Fix a 2d-regular base presented by d permutations, draw d uniform
permutations of [n], and act coordinatewise: the result covers both the
base and the random factor.  The harness measures mu(H), the largest
absolute eigenvalue not inherited from the base, against the
32^(1/4) d^(3/4) ceiling, with a random-lift baseline and a random-bit
account.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import (
    InternalCheckError,
    MultiGraph,
    Permutation,
    PermutationGraph,
    adjacency_matrix,
    from_permutations,
)
from .products import (
    CoveringMap,
    TightProduct,
    _presentation_of_permutation_graph,
    _presentation_product,
    verify_covering,
)

MU_BOUND_BASE = 32.0 ** 0.25


def rng_from(seed: int, *path: int) -> np.random.Generator:
    """PCG64 stream addressed by (master seed, derivation path)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


def derived_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=tuple(path)).generate_state(1)[0])


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation by an unbiased Fisher-Yates shuffle."""
    if n < 1:
        raise ValueError("n must be positive")
    images = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        images[i], images[j] = images[j], images[i]
    return Permutation(images)


def random_permutation_graph(
    v: int, d: int, rng: np.random.Generator, pairing: bool = False
) -> PermutationGraph:
    """d random generators on v vertices; optionally a uniform random
    pairing (v must be even)."""
    gens = tuple(random_permutation(v, rng) for _ in range(d))
    pair = None
    if pairing:
        if v % 2:
            raise ValueError("a pairing needs evenly many vertices")
        shuffled = random_permutation(v, rng).images
        images = [0] * v
        for i in range(0, v, 2):
            a, b = shuffled[i], shuffled[i + 1]
            images[a], images[b] = b, a
        pair = Permutation(images)
    return PermutationGraph(v, gens, pair)


@dataclass(frozen=True)
class RandomProductConfig:
    base: PermutationGraph  # pairing-free presentation of the base
    n: int
    seed: int
    trials: int = 1

    def __post_init__(self):
        if self.base.pairing is not None:
            raise ValueError("the random product model takes a pairing-free base")
        if self.n < 1:
            raise ValueError("fiber size must be positive")


def random_tight_product(
    cfg: RandomProductConfig, trial: int = 0
) -> tuple[TightProduct, MultiGraph, dict]:
    """One draw of the model: the product, the random factor, and the
    provenance of every permutation used."""
    d = cfg.base.d
    perms = []
    for i in range(d):
        rng = rng_from(cfg.seed, trial, i)
        perms.append(random_permutation(cfg.n, rng))
    random_pg = PermutationGraph(cfg.n, tuple(perms))
    g_r = from_permutations(random_pg)
    tp = _presentation_product(
        _presentation_of_permutation_graph(cfg.base),
        _presentation_of_permutation_graph(random_pg),
    )
    provenance = {
        "seed": cfg.seed,
        "trial": trial,
        "permutation_seeds": [derived_seed(cfg.seed, trial, i) for i in range(d)],
    }
    return tp, g_r, provenance


def random_lift(base: MultiGraph, n: int, seed: int) -> tuple[MultiGraph, CoveringMap]:
    """Uniform n-lift: one independent permutation per edge of the base."""
    if n < 1:
        raise ValueError("fiber size must be positive")
    edges = []
    dart_map = []
    for e in range(base.num_edges):
        rng = rng_from(seed, e)
        sig = random_permutation(n, rng)
        u, v = base.edges[e]
        for i in range(n):
            edges.append((u * n + i, v * n + sig(i)))
            dart_map.extend((2 * e, 2 * e + 1))
    lift = MultiGraph(base.n * n, edges)
    cover = CoveringMap(lift, base, tuple(x // n for x in range(base.n * n)), tuple(dart_map))
    report = verify_covering(cover)
    if not report.ok:
        raise InternalCheckError(f"random lift failed covering verification: {report.violations}")
    return lift, cover


def symmetric_eigenvalues(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    if a.size and np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError("matrix is not symmetric within 1e-12")
    return np.linalg.eigvalsh(a)


def split_new_eigenvalues(
    spec_h: Sequence[float], spec_base: Sequence[float], tol: float = 1e-6
) -> tuple[list[float], list[float]]:
    """Greedily match every base eigenvalue to its nearest unmatched
    eigenvalue of the cover; the rest are new.

    An exact tie goes to the smaller unmatched value.  An unmatched base
    eigenvalue is a hard failure: the covering property would be violated.
    """
    arr = np.sort(np.asarray(spec_h, dtype=float))
    used = np.zeros(len(arr), dtype=bool)
    old = []
    for lam in sorted(float(x) for x in spec_base):
        pos = int(np.searchsorted(arr, lam))
        left = pos - 1
        while left >= 0 and used[left]:
            left -= 1
        right = pos
        while right < len(arr) and used[right]:
            right += 1
        best = None
        if left >= 0 and right < len(arr):
            best = left if abs(arr[left] - lam) <= abs(arr[right] - lam) else right
        elif left >= 0:
            best = left
        elif right < len(arr):
            best = right
        if best is None or abs(arr[best] - lam) > tol:
            raise InternalCheckError(f"base eigenvalue {lam} unmatched within {tol}")
        used[best] = True
        old.append(float(arr[best]))
    new = [float(x) for i, x in enumerate(arr) if not used[i]]
    return old, new


def multiset_within(
    sub: Sequence[float], sup: Sequence[float], tol: float
) -> bool:
    """Multiset containment of floats up to tol (greedy nearest match)."""
    try:
        split_new_eigenvalues(sup, sub, tol)
        return True
    except InternalCheckError:
        return False


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues_h: tuple[float, ...]
    eigenvalues_base: tuple[float, ...]
    eigenvalues_random_factor: tuple[float, ...]
    new_eigenvalues: tuple[float, ...]
    mu: Optional[float]  # absent (not zero) when no new eigenvalues exist
    lambda2_gr: Optional[float]
    bound: float


def spectrum_report(
    h: MultiGraph, base: MultiGraph, g_r: MultiGraph, d: int, tol: float = 1e-6
) -> SpectrumReport:
    spec_h = symmetric_eigenvalues(adjacency_matrix(h))
    spec_b = symmetric_eigenvalues(adjacency_matrix(base))
    spec_r = symmetric_eigenvalues(adjacency_matrix(g_r))
    _, new = split_new_eigenvalues(spec_h, spec_b, tol)
    if len(new) != base.n * (g_r.n - 1):
        raise InternalCheckError("new-eigenvalue count disagrees with the fiber size")
    mu = max((abs(x) for x in new), default=None)
    lambda2 = float(spec_r[-2]) if g_r.n >= 2 else None
    return SpectrumReport(
        tuple(float(x) for x in spec_h),
        tuple(float(x) for x in spec_b),
        tuple(float(x) for x in spec_r),
        tuple(float(x) for x in new),
        mu,
        lambda2,
        MU_BOUND_BASE * d ** 0.75,
    )


# -- the experiment driver -----------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    base: PermutationGraph
    n: int
    d: int
    seed: int
    trials: int
    kmax: int = 0  # closed-path trace cross-check depth for small products

    @classmethod
    def from_text(cls, text: str, base_loader=None) -> "ExperimentConfig":
        """Parse `key = value` lines: seed, d, n, trials, kmax, and
        base = random:v,d or a tpp1 file path (resolved by base_loader)."""
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
        missing = {"seed", "n", "trials", "base"} - set(values)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        seed = int(values["seed"])
        n = int(values["n"])
        trials = int(values["trials"])
        kmax = int(values.get("kmax", "0"))
        base_spec = values["base"]
        if base_spec.startswith("random:"):
            parts = base_spec[len("random:") :].split(",")
            if len(parts) != 2:
                raise ValueError("base = random:<vertices>,<d>")
            v, d = int(parts[0]), int(parts[1])
            base = random_permutation_graph(v, d, rng_from(seed, 10**6))
        else:
            if base_loader is None:
                raise ValueError("file bases need a loader")
            base = base_loader(base_spec)
            d = base.d
        if "d" in values and int(values["d"]) != d:
            raise ValueError(f"config d = {values['d']} disagrees with the base (d = {d})")
        return cls(base, n, d, seed, trials, kmax)


@dataclass(frozen=True)
class TrialRow:
    trial: int
    seed: int
    n: int
    d: int
    mu: Optional[float]
    lambda2_gr: Optional[float]
    bound: float
    alon_boppana: float
    millis: float


CSV_HEADER = "trial,seed,n,d,mu,lambda2_gr,bound,alon_boppana,millis"


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[TrialRow, ...]
    summary: dict


def run_trial(cfg: ExperimentConfig, trial: int) -> tuple[TrialRow, TightProduct, MultiGraph]:
    start = time.perf_counter()
    rp_cfg = RandomProductConfig(cfg.base, cfg.n, cfg.seed, cfg.trials)
    tp, g_r, _ = random_tight_product(rp_cfg, trial)
    base_graph = tp.g1
    report = spectrum_report(tp.h, base_graph, g_r, cfg.d)
    top = max(abs(x) for x in report.eigenvalues_h)
    if abs(top - 2 * cfg.d) > 1e-8:
        raise InternalCheckError("top eigenvalue is not the regularity")
    if not multiset_within(report.eigenvalues_random_factor, report.eigenvalues_h, 1e-6):
        raise InternalCheckError("random factor spectrum not contained in the product spectrum")
    millis = (time.perf_counter() - start) * 1000.0
    row = TrialRow(
        trial=trial,
        seed=derived_seed(cfg.seed, trial),
        n=cfg.n,
        d=cfg.d,
        mu=report.mu,
        lambda2_gr=report.lambda2_gr,
        bound=report.bound,
        alon_boppana=2.0 * math.sqrt(2 * cfg.d - 1),
        millis=millis,
    )
    return row, tp, g_r


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """All trials, in trial order; spectra checks run on every draw."""
    rows: list[Optional[TrialRow]] = [None] * cfg.trials
    trace_checks = []

    def work(t: int) -> TrialRow:
        row, tp, g_r = run_trial(cfg, t)
        if cfg.kmax > 0 and tp.h.n <= 60:
            trace_checks.append(_trace_cross_check(cfg, t, tp))
        return row

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for t, row in enumerate(pool.map(work, range(cfg.trials))):
                rows[t] = row
    else:
        for t in range(cfg.trials):
            rows[t] = work(t)

    done = [r for r in rows if r is not None]
    mus = [r.mu for r in done if r.mu is not None]
    bound = MU_BOUND_BASE * cfg.d ** 0.75
    summary = {
        "trials": cfg.trials,
        "n": cfg.n,
        "d": cfg.d,
        "seed": cfg.seed,
        "mean_mu": (sum(mus) / len(mus)) if mus else None,
        "max_mu": max(mus) if mus else None,
        "bound": bound,
        "fraction_under_bound_plus_slack": (
            sum(1 for m in mus if m <= bound + 2.0) / len(mus) if mus else None
        ),
        "trace_checks_passed": all(trace_checks) if trace_checks else None,
    }
    return ExperimentResult(tuple(done), summary)


def _trace_cross_check(cfg: ExperimentConfig, trial: int, tp: TightProduct) -> bool:
    """Closed-path count equals the adjacency-power trace on the product's
    own permutation presentation."""
    from .words import closed_path_count, trace_of_power

    d = cfg.base.d
    perms = []
    for i in range(d):
        rng = rng_from(cfg.seed, trial, i)
        perms.append(random_permutation(cfg.n, rng))
    n1 = cfg.base.n
    combined = tuple(
        Permutation(
            tuple(
                cfg.base.generators[i](v) * cfg.n + perms[i](u)
                for v in range(n1)
                for u in range(cfg.n)
            )
        )
        for i in range(d)
    )
    pg = PermutationGraph(n1 * cfg.n, combined)
    for two_k in range(2, 2 * cfg.kmax + 1, 2):
        if closed_path_count(pg, two_k) != trace_of_power(pg, two_k):
            return False
    return True


def format_float(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def to_csv(result: ExperimentResult, include_millis: bool = True) -> str:
    lines = [CSV_HEADER]
    for r in result.rows:
        cells = [
            str(r.trial),
            str(r.seed),
            str(r.n),
            str(r.d),
            format_float(r.mu),
            format_float(r.lambda2_gr),
            format_float(r.bound),
            format_float(r.alon_boppana),
            format_float(r.millis) if include_millis else "",
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def summary_text(result: ExperimentResult) -> str:
    lines = []
    for key, val in result.summary.items():
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"


def lift_mu(base: MultiGraph, n: int, seed: int) -> Optional[float]:
    """mu of a random n-lift of the base: largest absolute eigenvalue not
    matched by the base spectrum.  The baseline the product model is
    measured against."""
    lift, _ = random_lift(base, n, seed)
    spec_l = symmetric_eigenvalues(adjacency_matrix(lift))
    spec_b = symmetric_eigenvalues(adjacency_matrix(base))
    _, new = split_new_eigenvalues(spec_l, spec_b, 1e-6)
    return max((abs(x) for x in new), default=None)


def entropy_report(base: PermutationGraph, n: int) -> dict:
    """Random bits consumed by the product model versus a random lift of
    the same base at the same fiber size."""
    log2_nfact = math.lgamma(n + 1) / math.log(2.0)
    d = base.d
    base_graph = from_permutations(base)
    bits_product = d * log2_nfact
    bits_lift = base_graph.num_edges * log2_nfact
    return {
        "n": n,
        "d": d,
        "base_vertices": base.n,
        "base_edges": base_graph.num_edges,
        "bits_product": bits_product,
        "bits_lift": bits_lift,
        "ratio": bits_product / bits_lift if bits_lift else None,
    }
