"""Population-level Monte Carlo of the demon cycle.

The gas is tracked as particle counts per (internal label, memory record)
cell. Equilibration is instantaneous, so a population of n particles that can
reach a volume v exerts pressure n k_B T / v, and every quasistatic move is an
isothermal integral over that volume. The works are integrated numerically
from the populations actually present, with no closed forms involved, so they
can be compared against ``cycle.ledger``.

Two modes:

* sampled: demon outcomes and eigenbasis collapses are binomial draws;
* exact (``sample_measurements=False``): expected, possibly fractional,
  counts are used and the run is a deterministic quadrature check.

Geometry: positions are fractions of the cylinder length measured from the
left end. The red wall (passes record 1, blocks record 2) and the blue wall
(passes record 2, blocks record 1) both start at the centre.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .cycle import CycleParams, WorkLedger, equilibrium_fraction, ledger
from .qstate import mixture_spectrum

STEP_NAMES = ("w1", "w2", "w_meas_reset", "w3", "w4", "w5")
EXACT_RTOL = 1e-3
# allowance (in units of N k_B T) for quadrature error in sampled-mode checks;
# steps 1, 3 and 5 carry no sampling noise at all
QUADRATURE_ATOL = 1e-6
SIGMA_LEVEL = 3.0
MIN_SUBSTEPS = 16

PSI1, PSI2, PHI1, PHI2 = "psi1", "psi2", "phi1", "phi2"


class SimulationError(RuntimeError):
    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class DegeneratePopulationError(SimulationError):
    """A demon wall has no particles pushing on either side."""


@dataclass(frozen=True)
class SimConfig:
    params: CycleParams
    wall_substeps: int = 4096
    seeds: tuple = (0,)
    sample_measurements: bool = True

    def __post_init__(self):
        if int(self.wall_substeps) != self.wall_substeps or self.wall_substeps < MIN_SUBSTEPS:
            raise ValueError(f"wall_substeps must be an integer >= {MIN_SUBSTEPS}")
        if len(self.seeds) < 1:
            raise ValueError("at least one seed is required")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.sample_measurements and self.params.n_particles != int(self.params.n_particles):
            raise ValueError("sampled mode needs an integer particle count")


@dataclass
class PopulationState:
    """Particle counts keyed by (label, record) plus the two demon wall positions."""

    counts: dict
    red: float = 0.5
    blue: float = 0.5
    exact: bool = False

    def n(self, label, record=None) -> float:
        return self.counts.get((label, record), 0)

    def total(self) -> float:
        return sum(self.counts.values())


def _streams(seed) -> dict:
    """Independent generators for each random step, in a fixed order."""
    names = ("measure", "placement", "collapse")
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(ss) for name, ss in zip(names, children)}


def _split(n_particles):
    first = n_particles // 2
    return first, n_particles - first


def sample_measurements(params: CycleParams, seed=0, exact: bool = False) -> PopulationState:
    """Demon records for every particle after the walls have looked at them.

    Each psi1 particle is recorded as 1 with probability (1 + delta)/2 and as
    2 otherwise; psi2 particles are treated symmetrically. ``seed`` is an int
    (the measurement substream of that seed is used) or a ``Generator``.
    """
    hit = 0.5 * (1.0 + params.delta)
    if exact:
        half = 0.5 * params.n_particles
        n1 = hit * half
        n2 = half - n1
        counts = {(PSI1, 1): n1, (PSI1, 2): n2, (PSI2, 2): n1, (PSI2, 1): n2}
        return PopulationState(counts, exact=True)
    rng = seed if isinstance(seed, np.random.Generator) else _streams(seed)["measure"]
    n_psi1, n_psi2 = _split(int(params.n_particles))
    ok1 = int(rng.binomial(n_psi1, hit))
    ok2 = int(rng.binomial(n_psi2, hit))
    counts = {(PSI1, 1): ok1, (PSI1, 2): n_psi1 - ok1,
              (PSI2, 2): ok2, (PSI2, 1): n_psi2 - ok2}
    return PopulationState(counts)


def find_wall_equilibrium(pop: PopulationState) -> tuple[float, float]:
    """Pressure-balance positions (x, y) of the red and blue walls.

    x is the fraction left of the red wall: psi1 particles recorded as 2 are
    trapped there, against correctly recorded psi2 particles filling the rest.
    y is the mirror image for the blue wall.
    """
    trapped_l, free_r = pop.n(PSI1, 2), pop.n(PSI2, 2)
    trapped_r, free_l = pop.n(PSI2, 1), pop.n(PSI1, 1)
    if trapped_l + free_r == 0:
        raise DegeneratePopulationError("red wall has no particles on either side", step=2)
    if trapped_r + free_l == 0:
        raise DegeneratePopulationError("blue wall has no particles on either side", step=2)
    return trapped_l / (trapped_l + free_r), trapped_r / (trapped_r + free_l)


def isothermal_work(n, v_from, v_to, substeps: int = 4096, kt: float = 1.0) -> float:
    """Work -n kT * integral dv/v from ``v_from`` to ``v_to`` by the midpoint rule.

    Panels are graded geometrically between the end volumes, so a small
    population squeezed into a small volume is resolved as well as a large
    one. The rule is second order in 1/substeps.
    """
    if n == 0:
        return 0.0
    if not (v_from > 0 and v_to > 0):
        raise ValueError(f"volumes must be positive for n={n}: {v_from!r} -> {v_to!r}")
    if v_from == v_to:
        return 0.0
    edges = np.geomspace(v_from, v_to, int(substeps) + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return -n * kt * float(np.sum(np.diff(edges) / mids))


def homogeneity_check(pop: PopulationState, rng=None) -> list[dict]:
    """Share of record-1 particles in each of the three regions after step 2.

    Free particles are spread over the volume they can reach: those recorded
    as 1 over [0, blue], those recorded as 2 over [red, 1]. In exact mode the
    expected split is used; otherwise a binomial placement is drawn from
    ``rng``. Each region should hold the two records half and half. Empty
    regions are reported with ``fraction=None``.
    """
    a, b = pop.red, pop.blue
    n_a, n_b = pop.n(PSI1, 2), pop.n(PSI2, 2)
    n_c, n_d = pop.n(PSI1, 1), pop.n(PSI2, 1)
    share_c_left = a / b
    share_b_right = (1.0 - b) / (1.0 - a)
    if pop.exact or rng is None:
        c_left, b_right = n_c * share_c_left, n_b * share_b_right
    else:
        c_left = int(rng.binomial(n_c, share_c_left))
        b_right = int(rng.binomial(n_b, share_b_right))
    regions = {
        "left": (c_left, n_a),
        "middle": (n_c - c_left, n_b - b_right),
        "right": (n_d, b_right),
    }
    out = []
    for name, (rec1, rec2) in regions.items():
        n = rec1 + rec2
        if n == 0:
            out.append({"region": name, "n": 0, "fraction": None,
                        "deviation": None, "stderr": None})
            continue
        f = rec1 / n
        out.append({"region": name, "n": n, "fraction": f, "deviation": f - 0.5,
                    "stderr": math.sqrt(0.25 / n)})
    return out


@dataclass
class SeedRun:
    works: dict
    x: float
    y: float
    homogeneity: list
    populations: dict = field(default_factory=dict)


def run_once(config: SimConfig, seed: int) -> SeedRun:
    """One pass of the cycle with one seed."""
    p = config.params
    exact = not config.sample_measurements
    kt = p.boltzmann * p.temperature
    v = p.volume
    big_n = p.n_particles
    m = config.wall_substeps
    streams = None if exact else _streams(seed)
    works = {}
    pops = {}

    def iso(step, n, v0, v1):
        try:
            return isothermal_work(n, v0, v1, m, kt)
        except ValueError as exc:
            raise SimulationError(str(exc), step=step) from exc

    # step 1: each half-gas expands from V/4 to V/2
    n_psi1, n_psi2 = (0.5 * big_n, 0.5 * big_n) if exact else _split(int(big_n))
    pops[1] = PopulationState({(PSI1, None): n_psi1, (PSI2, None): n_psi2}, exact=exact)
    works["w1"] = iso(1, n_psi1, v / 4, v / 2) + iso(1, n_psi2, v / 4, v / 2)

    # step 2: demons record every particle, walls slide to pressure balance
    pop = sample_measurements(p, streams["measure"] if streams else None, exact=exact)
    x, y = find_wall_equilibrium(pop)
    pop.red, pop.blue = x, 1.0 - y
    pops[2] = pop
    works["w2"] = (iso(2, pop.n(PSI1, 2), v / 2, x * v)
                   + iso(2, pop.n(PSI2, 2), v / 2, (1.0 - x) * v)
                   + iso(2, pop.n(PSI1, 1), v / 2, (1.0 - y) * v)
                   + iso(2, pop.n(PSI2, 1), v / 2, y * v))
    homogeneity = homogeneity_check(pop, None if exact else streams["placement"])

    # measurement + reset are reversible as a pair
    works["w_meas_reset"] = 0.0

    # step 3: each particle lands in phi1 with probability c; membranes halve both portions
    c = mixture_spectrum(p.theta).c
    n_phi1 = c * big_n if exact else int(streams["collapse"].binomial(int(big_n), c))
    n_phi2 = big_n - n_phi1
    pops[3] = PopulationState({(PHI1, None): n_phi1, (PHI2, None): n_phi2}, exact=exact)
    works["w3"] = iso(3, n_phi1, v, v / 2) + iso(3, n_phi2, v, v / 2)

    # step 4: back to the initial pressure 2NkT/V, i.e. volume n V / (2N) per portion
    works["w4"] = (iso(4, n_phi1, v / 2, n_phi1 * v / (2.0 * big_n))
                   + iso(4, n_phi2, v / 2, n_phi2 * v / (2.0 * big_n)))

    # step 5: unitaries on the internal state only
    works["w5"] = 0.0
    pops[5] = PopulationState({(PSI1, None): 0.5 * big_n if exact else n_psi1,
                               (PSI2, None): 0.5 * big_n if exact else n_psi2}, exact=exact)
    return SeedRun(works, x, y, homogeneity, pops)


def _mean_stderr(values):
    arr = np.asarray(values, dtype=float)
    mean = float(np.mean(arr))
    if arr.size < 2:
        return mean, None
    return mean, float(np.std(arr, ddof=1) / math.sqrt(arr.size))


@dataclass
class StepComparison:
    step: str
    sim_mean: float
    sim_stderr: float | None
    analytic: float
    abs_dev: float
    rel_dev: float
    passed: bool


@dataclass
class SimReport:
    config: dict
    steps: list
    equilibrium: dict
    totals: StepComparison
    homogeneity: list
    ledger: WorkLedger
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in ("config", "steps", "equilibrium", "totals",
                                  "homogeneity", "ledger", "passed")}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def step(self, name: str) -> StepComparison:
        for s in self.steps:
            if s.step == name:
                return s
        raise KeyError(name)


def _compare(name, values, analytic, nkt, exact) -> StepComparison:
    mean, se = _mean_stderr(values)
    abs_dev = abs(mean - analytic)
    scale = abs(analytic) if abs(analytic) >= 1e-9 * nkt else nkt
    rel_dev = abs_dev / scale
    if exact:
        ok = rel_dev <= EXACT_RTOL
    else:
        ok = abs_dev <= SIGMA_LEVEL * (se or 0.0) + QUADRATURE_ATOL * nkt
    return StepComparison(name, mean, se, analytic, abs_dev, rel_dev, bool(ok))


def simulate_cycle(config: SimConfig, workers: int = 1) -> SimReport:
    """Run every seed, average, and compare each step with the analytic ledger.

    Per-step checks: in exact mode the relative deviation must be at most
    1e-3; in sampled mode the deviation must be within three standard errors
    of the seed mean, plus a 1e-6 N k_B T quadrature allowance. Wall
    positions are checked the same way against (1 - delta)/2.
    """
    p = config.params
    exact = not config.sample_measurements
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda s: run_once(config, s), config.seeds))
    else:
        runs = [run_once(config, s) for s in config.seeds]

    book = ledger(p)
    analytic = book.steps()
    nkt = p.nkt
    steps = [_compare(name, [r.works[name] for r in runs], analytic[name], nkt, exact)
             for name in STEP_NAMES]
    totals = _compare("total", [sum(r.works.values()) for r in runs], book.total, nkt, exact)

    expected = equilibrium_fraction(p.delta)
    x_mean, x_se = _mean_stderr([r.x for r in runs])
    y_mean, y_se = _mean_stderr([r.y for r in runs])
    eq_ok = all(abs(m - expected) <= (0.0 if exact else SIGMA_LEVEL * (se or 0.0)) + 1e-12
                for m, se in ((x_mean, x_se), (y_mean, y_se)))
    equilibrium = {"x_mean": x_mean, "x_stderr": x_se, "y_mean": y_mean,
                   "y_stderr": y_se, "expected": expected, "passed": eq_ok}

    homogeneity = []
    for i, region in enumerate(runs[0].homogeneity):
        fracs = [r.homogeneity[i]["fraction"] for r in runs
                 if r.homogeneity[i]["fraction"] is not None]
        if not fracs:
            homogeneity.append({"region": region["region"], "fraction_mean": None,
                                "fraction_stderr": None, "deviation": None})
            continue
        f_mean, f_se = _mean_stderr(fracs)
        homogeneity.append({"region": region["region"], "fraction_mean": f_mean,
                            "fraction_stderr": f_se, "deviation": f_mean - 0.5})

    cfg = {
        "theta": p.theta, "cos_theta": math.cos(p.theta), "delta": p.delta,
        "n_particles": p.n_particles, "volume": p.volume, "temperature": p.temperature,
        "boltzmann": p.boltzmann, "wall_substeps": config.wall_substeps,
        "seeds": list(config.seeds), "sample_measurements": config.sample_measurements,
    }
    passed = all(s.passed for s in steps) and totals.passed and eq_ok
    return SimReport(cfg, steps, equilibrium, totals, homogeneity, book, passed)
