"""Derivative-free optimization of the spin-photon interface.

The decision vector is (delta_0, delta_c, kappa): photon center detuning,
cavity detuning and cavity loss rate, all in rad/ns.  The objective is the
infidelity of the heralded spin-spin state for ideal photon pairs; efficiency
is reported alongside.  The global stage is a seeded Sobol multi-start with
local simplex descent, deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .interface import CavityConfig, EmitterParams, interface_metrics
from .photonics import FilterStage, PhotonMode

DEFAULT_XTOL = 1e-6
DEFAULT_FTOL = 1e-9


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    n_evaluations: int
    truncated: bool


def nelder_mead(
    objective,
    start,
    xtol: float = DEFAULT_XTOL,
    ftol: float = DEFAULT_FTOL,
    max_evaluations: int = 20000,
    bounds=None,
) -> NelderMeadResult:
    """Local simplex minimization; never returns a point worse than the start.

    Converged when the simplex diameter falls below xtol and the objective
    spread below ftol; if the evaluation budget runs out first, the best point
    so far is returned with the truncated flag set.
    """
    start = np.asarray(start, dtype=float)
    f0 = float(objective(start))
    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=bounds,
        options=dict(xatol=xtol, fatol=ftol, maxfev=max_evaluations, adaptive=False),
    )
    n_evals = int(res.nfev) + 1
    truncated = not res.success and res.nfev >= max_evaluations
    if res.fun <= f0:
        return NelderMeadResult(np.asarray(res.x), float(res.fun), n_evals, truncated)
    return NelderMeadResult(start, f0, n_evals, truncated)


@dataclass(frozen=True)
class SearchSpace:
    """Box bounds for (delta_0, delta_c, kappa), plus an optional C cap.

    When cooperativity_cap is set, the couplings are derived from the cap at
    each trial kappa (g = sqrt(2 gamma kappa C)), modeling a device engineered
    to the best allowed cooperativity.
    """

    delta_0: tuple[float, float]
    delta_c: tuple[float, float]
    kappa: tuple[float, float]
    cooperativity_cap: float | None = None

    def __post_init__(self):
        for name in ("delta_0", "delta_c", "kappa"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"empty interval for {name}")
        if self.kappa[0] <= 0:
            raise ValueError("kappa lower bound must be positive")

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.delta_0[0], self.delta_c[0], self.kappa[0]])

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.delta_0[1], self.delta_c[1], self.kappa[1]])


def default_search_space(cooperativity_cap: float | None = None) -> SearchSpace:
    """Bounds wide enough for every known optimum: detunings to +-60*2pi rad/ns."""
    two_pi = 2.0 * np.pi
    return SearchSpace(
        delta_0=(-60.0 * two_pi, 60.0 * two_pi),
        delta_c=(-60.0 * two_pi, 60.0 * two_pi),
        kappa=(0.5 * two_pi, 100.0 * two_pi),
        cooperativity_cap=cooperativity_cap,
    )


@dataclass
class OptimizationResult:
    delta_0: float
    delta_c: float
    kappa: float
    infidelity: float
    efficiency: float
    n_evaluations: int
    restarts: list = field(default_factory=list)

    def cavity(self) -> CavityConfig:
        return CavityConfig(kappa=self.kappa, delta_c=self.delta_c)


def _emitter_at(emitter: EmitterParams, space: SearchSpace, kappa: float):
    if space.cooperativity_cap is None:
        return emitter
    # saturate the cap in the full-width convention: C = g^2/(4 gamma_half kappa)
    cap = space.cooperativity_cap
    return replace(
        emitter,
        g_1a=float(np.sqrt(4.0 * emitter.gamma_1a * kappa * cap)),
        g_2b=float(np.sqrt(4.0 * emitter.gamma_2b * kappa * cap)),
    )


def _objective_factory(
    emitter, mode_x, mode_xx, space, filter_x, filter_xx, f_ph, f_mw
):
    counter = {"n": 0}

    def evaluate(x):
        d0, dc, kappa = x
        counter["n"] += 1
        em = _emitter_at(emitter, space, kappa)
        cav = CavityConfig(kappa=kappa, delta_c=dc)
        mx = replace(mode_x, omega0=emitter.omega_1a - d0)
        mxx = replace(mode_xx, omega0=emitter.omega_1a - d0)
        try:
            eta, infid = interface_metrics(
                em, cav, mx, mxx,
                filter_x=filter_x, filter_xx=filter_xx,
                photon_pair_fidelity=f_ph, rotation_fidelity=f_mw,
                method="residue",
            )
        except Exception:
            return 1.0, 0.0
        return infid, eta

    def objective(x):
        return evaluate(x)[0]

    return objective, evaluate, counter


def optimize_interface(
    emitter: EmitterParams,
    mode_x: PhotonMode,
    mode_xx: PhotonMode,
    space: SearchSpace | None = None,
    restarts: int = 64,
    seed: int = 0,
    filter_x: FilterStage | None = None,
    filter_xx: FilterStage | None = None,
    photon_pair_fidelity: float = 1.0,
    rotation_fidelity: float = 1.0,
    xtol: float = 1e-5,
    ftol: float = 1e-10,
    max_evaluations_per_start: int = 2000,
) -> OptimizationResult:
    """Multi-start interface optimization over (delta_0, delta_c, kappa).

    Sobol-stratified seeds across the search box, local simplex descent from
    each, best of all returned; ties within 1e-9 infidelity break toward the
    smallest kappa (easier fabrication).  Deterministic for a given seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if space is None:
        space = default_search_space()
    objective, evaluate, counter = _objective_factory(
        emitter, mode_x, mode_xx, space, filter_x, filter_xx,
        photon_pair_fidelity, rotation_fidelity,
    )
    lo, hi = space.lower, space.upper
    span = hi - lo
    degenerate = bool(np.all(span <= 0))
    if degenerate:
        starts = np.array([lo])
    else:
        # global stage: Sobol-screen a larger cloud, descend from the best
        sob = qmc.Sobol(d=3, scramble=True, seed=seed)
        n_screen = 1 << max(6, int(np.ceil(np.log2(8 * restarts))))
        cloud = lo + sob.random(n_screen) * span
        scores = np.array([objective(x) for x in cloud])
        starts = cloud[np.argsort(scores, kind="stable")[:restarts]]

    bounds = list(zip(lo, hi))
    log = []
    for x0 in starts:
        if degenerate:
            f0 = objective(x0)
            log.append((np.asarray(x0, dtype=float), float(f0)))
            continue
        res = nelder_mead(
            objective, x0, xtol=xtol, ftol=ftol,
            max_evaluations=max_evaluations_per_start, bounds=bounds,
        )
        log.append((res.x, res.fun))

    if not np.isfinite(min(f for _, f in log)):
        raise RuntimeError("every restart failed to evaluate the objective")
    best_f = min(f for _, f in log)
    candidates = [(x, f) for x, f in log if f <= best_f + 1e-9]
    x_best, _ = min(candidates, key=lambda xf: xf[0][2])
    infid, eta = evaluate(x_best)
    return OptimizationResult(
        delta_0=float(x_best[0]),
        delta_c=float(x_best[1]),
        kappa=float(x_best[2]),
        infidelity=float(infid),
        efficiency=float(eta),
        n_evaluations=counter["n"],
        restarts=[(x.tolist(), f) for x, f in log],
    )


def filter_sweep(
    emitter: EmitterParams,
    cavity: CavityConfig,
    delta_0: float,
    gamma_x: float,
    gamma_xx_source: float,
    gamma_xx_grid,
    photon_pair_fidelity: float = 1.0,
    rotation_fidelity: float = 1.0,
) -> list[dict]:
    """Infidelity/efficiency at a fixed cavity while the broad line is filtered.

    The narrower photon stays unfiltered at gamma_x; the broad line is narrowed
    to each grid value in turn.  Unreachable targets are marked infeasible.
    """
    mode_x = PhotonMode(omega0=emitter.omega_1a - delta_0, gamma=gamma_x)
    mode_xx = PhotonMode(omega0=emitter.omega_1a - delta_0, gamma=gamma_xx_source)
    rows = []
    for gt in gamma_xx_grid:
        row = {"gamma_xx_tilde": float(gt)}
        try:
            filt = FilterStage.for_target(gamma_xx_source, float(gt))
        except ValueError:
            row.update(infidelity=np.nan, efficiency=np.nan, feasible=False)
            rows.append(row)
            continue
        eta, infid = interface_metrics(
            emitter, cavity, mode_x, mode_xx,
            filter_xx=filt,
            photon_pair_fidelity=photon_pair_fidelity,
            rotation_fidelity=rotation_fidelity,
            method="residue",
        )
        row.update(infidelity=float(infid), efficiency=float(eta), feasible=True)
        rows.append(row)
    return rows


def sensitivity_grid(
    emitter: EmitterParams,
    center: CavityConfig,
    delta_0: float,
    mode_x: PhotonMode,
    mode_xx: PhotonMode,
    delta_c_span: float,
    kappa_span: float,
    resolution: int = 11,
) -> dict:
    """Infidelity/efficiency maps on a (delta_c, kappa) grid around an optimum."""
    if delta_c_span < 0 or kappa_span < 0:
        raise ValueError("spans must be non-negative")
    n = 1 if (delta_c_span == 0 and kappa_span == 0) else resolution
    dcs = center.delta_c + np.linspace(-delta_c_span, delta_c_span, n)
    kps = center.kappa + np.linspace(-kappa_span, kappa_span, n)
    infid = np.empty((n, n))
    eff = np.empty((n, n))
    mx = replace(mode_x, omega0=emitter.omega_1a - delta_0)
    mxx = replace(mode_xx, omega0=emitter.omega_1a - delta_0)
    for i, dc in enumerate(dcs):
        for j, kp in enumerate(kps):
            cav = CavityConfig(kappa=kp, delta_c=dc, waveguide_fraction=center.waveguide_fraction)
            eta, inf = interface_metrics(emitter, cav, mx, mxx, method="residue")
            infid[i, j] = inf
            eff[i, j] = eta
    return {"delta_c": dcs, "kappa": kps, "infidelity": infid, "efficiency": eff}


def bandwidth_requirement(
    emitter: EmitterParams,
    infidelity_target: float,
    space: SearchSpace | None = None,
    cavity: CavityConfig | None = None,
    delta_0: float | None = None,
    gamma_bounds: tuple[float, float] = (0.05, 10.0),
    tolerance: float = 0.05,
    restarts: int = 48,
    seed: int = 0,
) -> dict:
    """Largest symmetric photon bandwidth meeting an infidelity target.

    Bisection on gamma with gamma_x = gamma_xx = gamma.  With a fixed cavity
    (and delta_0) each probe is a single evaluation; otherwise the cavity is
    re-optimized at every probe.  Assumes infidelity grows with bandwidth.
    """
    if not 0.0 < infidelity_target < 0.5:
        raise ValueError("infidelity target must be in (0, 0.5)")

    def probe(gamma):
        mode = PhotonMode(omega0=0.0, gamma=gamma)
        if cavity is not None:
            d0 = 0.0 if delta_0 is None else delta_0
            mx = replace(mode, omega0=emitter.omega_1a - d0)
            _, infid = interface_metrics(emitter, cavity, mx, mx, method="residue")
            return infid
        res = optimize_interface(
            emitter, mode, mode, space=space, restarts=restarts, seed=seed
        )
        return res.infidelity

    lo, hi = gamma_bounds
    f_lo = probe(lo)
    if f_lo > infidelity_target:
        return {
            "feasible": False,
            "gamma": None,
            "infidelity_at_gamma": f_lo,
            "message": f"target {infidelity_target} unreachable even at gamma={lo}",
        }
    f_hi = probe(hi)
    if f_hi <= infidelity_target:
        return {"feasible": True, "gamma": hi, "infidelity_at_gamma": f_hi,
                "message": "upper search bound satisfies the target"}
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if probe(mid) <= infidelity_target:
            lo = mid
        else:
            hi = mid
    return {"feasible": True, "gamma": lo, "infidelity_at_gamma": probe(lo),
            "message": "bisection converged"}
