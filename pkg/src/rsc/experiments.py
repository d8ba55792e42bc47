"""Configuration-driven ensemble experiments with reproducible outputs.

Each experiment kind samples an ensemble, evaluates one structural claim,
and writes a rows CSV plus a summary JSON that embeds the configuration, a
content hash, and the phase report of the exponent vector.  Identical
configurations produce byte-identical outputs: trial seeds derive
injectively from the master seed, rows are sorted before writing, and
workers only change scheduling, never values.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import json
import math
import statistics
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import _kernels as kernels
from . import cycles as cycles_mod
from . import degrees as degrees_mod
from . import model, phase, sampler, spectra
from .homology import betti, connected_components

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "run",
    "seed_stream",
    "chi2_sf",
    "EXPERIMENT_KINDS",
]

EXPERIMENT_KINDS = (
    "measure-oracle",
    "face-numbers",
    "betti-domination",
    "degrees",
    "garland",
    "connectivity",
    "cycle-hunt",
    "phase-diagram",
)

_DESCRIPTIONS = {
    "measure-oracle": "exact masses sum to 1 and sampling frequencies match them",
    "face-numbers": "f_d vanishes, stays subpolynomial, or concentrates in the (1 +/- t) n^tau_d/(d+1)! band according to the sign of tau_d",
    "betti-domination": "the Betti number at the critical dimension tracks n^tau_k/(k+1)! and dominates every other Betti number",
    "degrees": "degrees concentrate around mu below the critical dimension, faces are mostly isolated at or above it, and the critical skeleton is pure",
    "garland": "link spectral gaps above 1 - 1/(l+2) certify vanishing homology, cross-checked against computed Betti numbers",
    "connectivity": "complexes with critical dimension >= 1 are connected",
    "cycle-hunt": "minimal cycle supports above the critical dimension stay within the vertex-count bound",
    "phase-diagram": "domain classification over a 2-plane of exponent space",
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def seed_stream(master: int, index: int) -> int:
    """Deterministic, injective per-trial seed derivation."""
    return kernels.derive_seed(master, index)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n_grid: tuple[int, ...]
    r: int
    alpha: tuple | None
    p: tuple | None
    trials: int
    seed: int
    out_dir: str
    prefix: str
    workers: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.p is not None:
            # strings and floats read as exact decimals/ratios
            object.__setattr__(
                self, "p", tuple(Fraction(str(x)) for x in self.p)
            )
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.n_grid and self.kind != "phase-diagram":
            raise ConfigError("model n is required")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("n grid must be strictly increasing")
        if self.alpha is None and self.p is None and self.kind != "phase-diagram":
            raise ConfigError("one of alpha and p is required")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        exp = dict(data.get("experiment", {}))
        mdl = dict(data.get("model", {}))
        out = dict(data.get("output", {}))
        kind = exp.pop("kind", None)
        if kind is None:
            raise ConfigError("experiment.kind is required")
        trials = int(exp.pop("trials", 1))
        seed = int(exp.pop("seed", 0))
        workers = int(exp.pop("workers", 1))
        n_raw = mdl.get("n", ())
        n_grid = tuple(int(x) for x in (n_raw if isinstance(n_raw, (list, tuple)) else (n_raw,)))
        r = int(mdl.get("r", 0))
        alpha = mdl.get("alpha")
        p = mdl.get("p")
        if alpha is not None:
            alpha = tuple(float(x) for x in alpha)
        if p is not None:
            p = tuple(p)
        params = {k: v for k, v in exp.items()}
        for key in ("strategy", "skip_threshold"):
            if key in mdl:
                params[key] = mdl[key]
        return cls(
            kind=str(kind),
            n_grid=n_grid,
            r=r,
            alpha=alpha,
            p=p,
            trials=trials,
            seed=seed,
            out_dir=str(out.get("dir", ".")),
            prefix=str(out.get("prefix", kind)),
            workers=workers,
            params=params,
        )

    def spec(self, n: int, seed: int) -> sampler.SampleSpec:
        return sampler.SampleSpec(
            n=n,
            r=self.r,
            p=self.p,
            alpha=self.alpha,
            seed=seed,
            strategy=self.params.get("strategy", "auto"),
            skip_threshold=int(
                self.params.get("skip_threshold", sampler.DEFAULT_SKIP_THRESHOLD)
            ),
        )

    def content_hash(self) -> str:
        blob = json.dumps(
            {
                "kind": self.kind,
                "n": list(self.n_grid),
                "r": self.r,
                "alpha": self.alpha if self.alpha is None else list(self.alpha),
                "p": self.p if self.p is None else [str(x) for x in self.p],
                "trials": self.trials,
                "seed": self.seed,
                "params": {k: str(v) for k, v in sorted(self.params.items())},
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class ExperimentResult:
    kind: str
    passed: bool
    summary: dict
    rows_path: str | None
    summary_path: str | None


def run(config: ExperimentConfig) -> ExperimentResult:
    """Execute one experiment and write its rows CSV and summary JSON."""
    runner = _RUNNERS[config.kind]
    header, rows, summary, passed = runner(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows_path = out_dir / f"{config.prefix}-rows.csv"
    with open(rows_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    summary_full = {
        "kind": config.kind,
        "checks": _DESCRIPTIONS[config.kind],
        "passed": passed,
        "backend": kernels.backend(),
        "input_hash": config.content_hash(),
        "config": {
            "n": list(config.n_grid),
            "r": config.r,
            "alpha": None if config.alpha is None else list(config.alpha),
            "p": None if config.p is None else [str(x) for x in config.p],
            "trials": config.trials,
            "seed": config.seed,
            "params": {k: str(v) for k, v in sorted(config.params.items())},
        },
        "summary": summary,
    }
    if config.alpha is not None:
        summary_full["phase"] = phase.phase_report(config.alpha, config.r).to_dict()
    summary_path = out_dir / f"{config.prefix}-summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary_full, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExperimentResult(config.kind, passed, summary_full, str(rows_path), str(summary_path))


# -- trial scheduling -----------------------------------------------------------


def _guarded(worker, task):
    # a failed trial is logged and skipped; the run continues
    try:
        return worker(task)
    except Exception:
        _, n, trial, _ = task
        print(f"trial failed (n={n}, trial={trial}):", file=sys.stderr)
        traceback.print_exc()
        return None


def _map_trials(worker, tasks: list, workers: int) -> list:
    call = functools.partial(_guarded, worker)
    if workers <= 1 or len(tasks) <= 1:
        results = [call(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(call, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
            )
    return [r for r in results if r is not None]


def _tasks(config: ExperimentConfig) -> list[tuple]:
    tasks = []
    for n in config.n_grid:
        for trial in range(config.trials):
            tasks.append((config, n, trial, seed_stream(config.seed, trial * 1_000_003 + n)))
    return tasks


# -- chi-square ------------------------------------------------------------------


def _rate(flags) -> float:
    return sum(flags) / len(flags) if flags else 0.0


def _median(values) -> float:
    return statistics.median(values) if values else math.nan


def chi2_sf(x: float, dof: int) -> float:
    """Chi-square survival function via the exact half-integer recurrence."""
    if dof < 1:
        raise ValueError("dof must be positive")
    if x <= 0:
        return 1.0
    s = x / 2.0
    if dof % 2 == 0:
        term = math.exp(-s)
        total = term
        for t in range(1, dof // 2):
            term *= s / t
            total += term
    else:
        total = math.erfc(math.sqrt(s))
        m = dof // 2
        if m > 0:
            term = math.exp(-s) * math.sqrt(s) / math.gamma(1.5)
            total += term
            for t in range(2, m + 1):
                term *= s / (t - 0.5)
                total += term
    return min(1.0, max(0.0, total))


# -- experiment kinds -------------------------------------------------------------


def _sample_worker(task):
    config, n, trial, seed = task
    return n, trial, sampler.sample(config.spec(n, seed))


def _run_measure_oracle(config: ExperimentConfig):
    if len(config.n_grid) != 1:
        raise ConfigError("measure-oracle runs at a single n")
    n = config.n_grid[0]
    if config.p is None:
        raise ConfigError("measure-oracle requires explicit rational p")
    p_exact = [Fraction(x) for x in config.p]
    complexes = list(model.enumerate_complexes(n, config.r))
    masses = [model.probability_mass(Y, p_exact) for Y in complexes]
    exact_sum_one = sum(masses) == 1
    index = {Y.canonical_key(): i for i, Y in enumerate(complexes)}
    counts = [0] * len(complexes)
    for trial in range(config.trials):
        Y = sampler.sample(config.spec(n, seed_stream(config.seed, trial)))
        counts[index[Y.canonical_key()]] += 1
    # pool cells with tiny expectation, then Pearson statistic
    expected = [float(m) * config.trials for m in masses]
    cells: list[tuple[float, int]] = []
    pool_e, pool_o = 0.0, 0
    for e, o in zip(expected, counts):
        if e < 5.0:
            pool_e += e
            pool_o += o
        else:
            cells.append((e, o))
    if pool_e > 0:
        cells.append((pool_e, pool_o))
    stat = sum((o - e) ** 2 / e for e, o in cells if e > 0)
    dof = max(len(cells) - 1, 1)
    p_value = chi2_sf(stat, dof)
    floor = float(config.params.get("p_value_floor", 0.001))
    rows = []
    for i, (Y, m, o) in enumerate(zip(complexes, masses, counts)):
        rows.append(
            (
                i,
                " ".join(map(str, Y.f_vector())),
                " ".join(map(str, model.external_faces(Y))),
                str(m),
                float(m) * config.trials,
                o,
            )
        )
    summary = {
        "complex_count": len(complexes),
        "exact_sum_one": bool(exact_sum_one),
        "chi_square": stat,
        "dof": dof,
        "p_value": p_value,
    }
    passed = bool(exact_sum_one and p_value > floor)
    header = ("complex_id", "f_vector", "e_vector", "mass", "expected", "observed")
    return header, rows, summary, passed


def _face_numbers_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    d = int(config.params["d"])
    return n, trial, Y.f_vector()[d]


def _run_face_numbers(config: ExperimentConfig):
    if config.alpha is None:
        raise ConfigError("face-numbers requires alpha")
    d = int(config.params.get("d", 0))
    band_t = float(config.params.get("band_t", 0.2))
    slack = float(config.params.get("slack_exponent", 0.25))
    zero_tol = float(config.params.get("tau_zero_tol", 1e-9))
    a_star = phase.alpha_star(config.alpha)
    tau_d = phase.tau(d, a_star)
    if tau_d < -zero_tol:
        regime = "vanishing"
        required = float(config.params.get("fraction_required", 0.99))
    elif tau_d <= zero_tol:
        regime = "subpolynomial"
        required = float(config.params.get("fraction_required", 0.95))
    else:
        regime = "band"
        required = float(config.params.get("fraction_required", 0.95))
    results = _map_trials(_face_numbers_worker, _tasks(config), config.workers)
    rows = []
    ok_by_n: dict[int, list[bool]] = {n: [] for n in config.n_grid}
    for n, trial, fd in sorted(results):
        a_n = phase.alpha_at(config.alpha, n)
        center = math.exp(phase.tau(d, a_n) * math.log(n)) / math.factorial(d + 1)
        if regime == "vanishing":
            lo, hi, ok = 0.0, 0.0, fd == 0
        elif regime == "subpolynomial":
            lo, hi, ok = 0.0, n**slack, fd < n**slack
        else:
            lo, hi = (1 - band_t) * center, (1 + band_t) * center
            ok = lo <= fd <= hi
        ok_by_n[n].append(ok)
        rows.append((n, trial, fd, regime, lo, hi, int(ok)))
    fractions = {n: _rate(v) for n, v in ok_by_n.items()}
    summary = {
        "d": d,
        "tau_d": tau_d,
        "regime": regime,
        "fraction_ok": {str(n): f for n, f in sorted(fractions.items())},
        "required": required,
    }
    passed = all(f >= required for f in fractions.values())
    header = ("n", "trial", "f_d", "regime", "band_lo", "band_hi", "ok")
    return header, rows, summary, passed


def _betti_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    return n, trial, tuple(betti(Y).b)


def _run_betti_domination(config: ExperimentConfig):
    if config.alpha is None:
        raise ConfigError("betti-domination requires alpha")
    a_star = phase.alpha_star(config.alpha)
    k = phase.classify(a_star, config.r)
    if isinstance(k, phase.OnBoundary) or k < 0:
        raise ConfigError("exponent must lie inside a domain with k >= 0")
    ratio_lo = float(config.params.get("ratio_lo", 0.5))
    ratio_hi = float(config.params.get("ratio_hi", 2.0))
    results = _map_trials(_betti_worker, _tasks(config), config.workers)
    rows = []
    by_n: dict[int, list[tuple]] = {n: [] for n in config.n_grid}
    for n, trial, b in sorted(results):
        rows.append((n, trial) + b)
        by_n[n].append(b)
    summary_by_n = {}
    ratios_ok = True
    max_other_medians = []
    for n in config.n_grid:
        a_n = phase.alpha_at(config.alpha, n)
        predicted = math.exp(phase.tau(k, a_n) * math.log(n)) / math.factorial(k + 1)
        med_bk = _median([b[k] for b in by_n[n]])
        others = [
            max(b[j] / b[k] if b[k] else math.inf for j in range(config.r + 1) if j != k)
            for b in by_n[n]
        ]
        med_other = _median(others)
        ratio = med_bk / predicted if predicted else math.inf
        summary_by_n[str(n)] = {
            "median_b_k": med_bk,
            "predicted": predicted,
            "ratio": ratio,
            "median_max_other_ratio": med_other,
        }
        if not ratio_lo <= ratio <= ratio_hi:
            ratios_ok = False
        max_other_medians.append(med_other)
    decreasing = all(
        a > b for a, b in zip(max_other_medians, max_other_medians[1:])
    )
    summary = {
        "critical_dimension": k,
        "by_n": summary_by_n,
        "domination_strictly_decreasing": decreasing,
    }
    passed = ratios_ok and (decreasing or len(config.n_grid) < 2)
    header = ("n", "trial") + tuple(f"b_{j}" for j in range(config.r + 1))
    return header, rows, summary, passed


def _degrees_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    d = int(config.params.get("d", 0))
    d_above = int(config.params.get("d_above", d + 1))
    delta = float(config.params.get("delta", 0.3))
    k = int(config.params["k"])
    rep = degrees_mod.concentration_report(Y, d, delta, config.alpha)
    iso = degrees_mod.isolated_fraction(Y, d_above)
    pure = degrees_mod.purity_check(Y, k)
    return n, trial, rep.out_of_band, rep.fraction_out, iso, pure


def _run_degrees(config: ExperimentConfig):
    if config.alpha is None:
        raise ConfigError("degrees requires alpha")
    if "k" not in config.params:
        a_star = phase.alpha_star(config.alpha)
        k = phase.classify(a_star, config.r)
        if isinstance(k, phase.OnBoundary) or k < 0:
            raise ConfigError("exponent must lie inside a domain with k >= 0")
        config.params["k"] = k
    results = _map_trials(_degrees_worker, _tasks(config), config.workers)
    rows = []
    band_ok: dict[int, list[bool]] = {n: [] for n in config.n_grid}
    iso_by_n: dict[int, list[float]] = {n: [] for n in config.n_grid}
    pure_by_n: dict[int, list[bool]] = {n: [] for n in config.n_grid}
    for n, trial, out_band, frac_out, iso, pure in sorted(results):
        rows.append(
            (n, trial, out_band, frac_out, -1.0 if iso is None else iso, int(pure))
        )
        band_ok[n].append(out_band == 0)
        if iso is not None:
            iso_by_n[n].append(iso)
        pure_by_n[n].append(pure)
    largest = config.n_grid[-1]
    band_rate = _rate(band_ok[largest])
    purity_rate = _rate(pure_by_n[largest])
    iso_medians = [
        _median(iso_by_n[n]) if iso_by_n[n] else -1.0 for n in config.n_grid
    ]
    band_required = float(config.params.get("band_rate_required", 0.9))
    iso_required = float(config.params.get("isolated_required", 0.9))
    purity_required = float(config.params.get("purity_required", 0.9))
    iso_increasing = all(a < b for a, b in zip(iso_medians, iso_medians[1:]))
    summary = {
        "band_rate_at_largest_n": band_rate,
        "purity_rate_at_largest_n": purity_rate,
        "isolated_medians": iso_medians,
        "isolated_increasing": iso_increasing,
    }
    passed = (
        band_rate >= band_required
        and purity_rate >= purity_required
        and iso_medians[-1] >= iso_required
        and (iso_increasing or len(config.n_grid) < 2)
    )
    header = ("n", "trial", "out_of_band", "fraction_out", "isolated_fraction", "pure")
    return header, rows, summary, passed


def _garland_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    k = int(config.params["k"])
    cert = spectra.garland_certificate(Y, k)
    level_rows = []
    for level in cert.levels:
        level_rows.append(
            (
                level.ell,
                len(level.rows),
                sum(1 for row in level.rows if row.passed),
                level.all_pass,
                cert.reduced_betti[level.ell + 1],
            )
        )
    return n, trial, level_rows, cert.consistent


def _run_garland(config: ExperimentConfig):
    if "k" not in config.params:
        raise ConfigError("garland requires params.k >= 2")
    results = _map_trials(_garland_worker, _tasks(config), config.workers)
    rows = []
    inconsistencies = 0
    passing_levels = 0
    for n, trial, level_rows, consistent in sorted(results):
        if not consistent:
            inconsistencies += 1
        for ell, links, passes, all_pass, b_next in level_rows:
            if all_pass:
                passing_levels += 1
            rows.append((n, trial, ell, links, passes, int(all_pass), b_next, int(consistent)))
    summary = {
        "inconsistencies": inconsistencies,
        "levels_passing": passing_levels,
        "levels_total": len(rows),
    }
    passed = inconsistencies == 0
    header = ("n", "trial", "ell", "links", "links_passing", "level_pass", "b_next", "consistent")
    return header, rows, summary, passed


def _connectivity_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    count, _ = connected_components(Y)
    return n, trial, Y.f_vector()[0], count


def _run_connectivity(config: ExperimentConfig):
    required = float(config.params.get("rate_required", 0.95))
    results = _map_trials(_connectivity_worker, _tasks(config), config.workers)
    rows = []
    ok_by_n: dict[int, list[bool]] = {n: [] for n in config.n_grid}
    for n, trial, f0, count in sorted(results):
        connected = count == 1
        ok_by_n[n].append(connected)
        rows.append((n, trial, f0, count, int(connected)))
    rates = {str(n): _rate(v) for n, v in sorted(ok_by_n.items())}
    summary = {"connected_rate": rates, "required": required}
    passed = all(rate >= required for rate in rates.values())
    header = ("n", "trial", "f_0", "components", "connected")
    return header, rows, summary, passed


def _cycle_hunt_worker(task):
    config, n, trial, seed = task
    Y = sampler.sample(config.spec(n, seed))
    k = int(config.params["k"])
    supports = cycles_mod.minimal_cycle_support(Y, k)
    return n, trial, [(len(faces), nverts) for faces, nverts in supports]


def _run_cycle_hunt(config: ExperimentConfig):
    if config.alpha is None:
        raise ConfigError("cycle-hunt requires alpha")
    k = int(config.params.get("k", config.r))
    config.params["k"] = k
    bound = cycles_mod.cycle_size_bound(k, phase.alpha_star(config.alpha))
    results = _map_trials(_cycle_hunt_worker, _tasks(config), config.workers)
    rows = []
    found = 0
    violations = 0
    for n, trial, supports in sorted(results):
        for idx, (size, nverts) in enumerate(supports):
            found += 1
            within = nverts <= bound
            if not within:
                violations += 1
            rows.append((n, trial, idx, size, nverts, bound, int(within)))
    summary = {
        "cycle_dimension": k,
        "bound": bound,
        "cycles_found": found,
        "violations": violations,
    }
    passed = violations == 0
    header = ("n", "trial", "cycle", "support_faces", "support_vertices", "bound", "within")
    return header, rows, summary, passed


def _run_phase_diagram(config: ExperimentConfig):
    params = config.params
    free = tuple(int(x) for x in params.get("free", (1, 2)))
    steps = int(params.get("steps", 41))
    lo = float(params.get("min", 0.0))
    hi = float(params.get("max", 1.5))
    ranges = ((lo, hi), (lo, hi))
    fixed = {
        int(key): float(val) for key, val in dict(params.get("fixed", {})).items()
    }
    tol = float(params.get("tolerance", phase.DEFAULT_TOLERANCE))
    rows = phase.phase_slice(free, fixed, config.r, ranges, steps, tol)
    labels = sorted({label for _, _, label in rows})
    summary = {"grid_points": len(rows), "labels_seen": labels}
    header = (f"alpha_{free[0]}", f"alpha_{free[1]}", "domain")
    return header, rows, summary, True


_RUNNERS = {
    "measure-oracle": _run_measure_oracle,
    "face-numbers": _run_face_numbers,
    "betti-domination": _run_betti_domination,
    "degrees": _run_degrees,
    "garland": _run_garland,
    "connectivity": _run_connectivity,
    "cycle-hunt": _run_cycle_hunt,
    "phase-diagram": _run_phase_diagram,
}
