"""Repeater-chain performance model.

A chain of N segments loads heralded spin-spin Bell pairs into multiplexed
memory cells, optionally distills them, swaps adjacent links at the repeater
nodes, optionally distills end to end, and finally measures for BB84.  All
times are seconds, distances km, probabilities dimensionless.

Pair states are 4x4 density matrices in the |11>,|12>,|21>,|22> basis.  The
distillation primitive fuses two pairs with bilateral CNOTs and a parity
measurement; entanglement swapping contracts two pairs through a Bell-state
measurement with tracked Pauli corrections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .twoqubit import (
    BELL_RHO,
    U_HADAMARD_PAIR,
    binary_entropy,
    dephase_coherence,
)

DISTILL_COST = {0: 1, 1: 2, 2: 4, 3: 6}


@dataclass(frozen=True)
class ChainParams:
    """Hardware parameters of the chain (times in seconds)."""

    t_qd: float = 1e-9
    t_nu_coh: float = 0.1
    gamma_fib: float = 0.2
    c_signal: float = 2.0e5
    t_res: float = 1e-6
    t_nu: float = 1e-5
    eps_nu: float = 5e-5
    f_ph: float = 0.99
    f_sp: float = 0.95
    eta_sp: float = 0.7906
    eps_nn: float = 0.01
    n_ee_cap: int | None = None
    eta_cf: float = 0.864
    eta_em_qd: float = 0.974
    eta_em_g4v: float = 0.98
    eta_fc: float = 0.73
    eta_pd: float = 0.99
    eta_cir12: float = 0.83
    eta_cir23: float = 0.83
    eta_swi: float = 0.95
    filter_in_path: bool = True
    dephase_during_loading: bool = False
    dephase_end_to_end_com: bool = False

    def __post_init__(self):
        for name in ("eps_nu", "f_ph", "f_sp", "eta_sp", "eps_nn", "eta_cf",
                     "eta_em_qd", "eta_em_g4v", "eta_fc", "eta_pd",
                     "eta_cir12", "eta_cir23", "eta_swi"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        for name in ("t_qd", "t_nu_coh", "c_signal", "t_res", "t_nu"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class EngineeringChoice:
    """Free engineering parameters scanned for the best secret-key rate."""

    n_segments: int
    n_loa: int
    level_elementary: int = 0
    level_end: int = 0
    m: int = 1000
    m_loa: int | None = None

    def __post_init__(self):
        if self.n_segments < 1 or self.n_loa < 1 or self.m < 1:
            raise ValueError("n_segments, n_loa and m must be >= 1")
        for lv in (self.level_elementary, self.level_end):
            if lv not in DISTILL_COST:
                raise ValueError("distillation levels must be in {0, 1, 2, 3}")
        if self.m_loa is not None and not 1 <= self.m_loa <= self.m:
            raise ValueError("m_loa must be in [1, m]")

    @property
    def loading_cells(self) -> int:
        return self.m if self.m_loa is None else self.m_loa


@dataclass(frozen=True)
class Timing:
    t_str: float
    t_com: float
    tau_loa: float
    tau_dis: float
    tau_swp: float


def timing(params: ChainParams, choice: EngineeringChoice, distance_km: float,
           n_ee: int | None = None) -> Timing:
    """Phase durations of one operational cycle."""
    if distance_km <= 0:
        raise ValueError("distance must be positive")
    if n_ee is None:
        n_ee = attempt_cap(params)
    m_loa = choice.loading_cells
    t_str = (choice.n_loa - 1) * max(params.t_res, m_loa * params.t_qd) \
        + m_loa * params.t_qd
    t_com = distance_km / (params.c_signal * choice.n_segments)
    tau_loa = params.t_res + t_str + max(t_com, params.t_nu)
    tau_dis = 3.0 * params.t_nu + params.t_res * n_ee + t_com
    tau_swp = 2.0 * params.t_nu + params.t_res * n_ee
    return Timing(t_str=t_str, t_com=t_com, tau_loa=tau_loa,
                  tau_dis=tau_dis, tau_swp=tau_swp)


def gate_success_probability(params: ChainParams) -> float:
    """Per-attempt success of photon-mediated electron-electron entanglement."""
    return (params.eta_em_g4v * params.eta_cir12**2 * params.eta_cir23**2
            * params.eta_cf**4 * params.eta_swi**4 * params.eta_pd)


def attempt_objective(params: ChainParams, n) -> np.ndarray:
    """Figure of merit P_ee^2 P_nu^4 exp(-4 t_res n / T_nu) for the attempt cap."""
    n = np.asarray(n, dtype=float)
    p = gate_success_probability(params)
    p_ee = 1.0 - (1.0 - p) ** n
    p_nu = (1.0 - params.eps_nu) ** n
    return p_ee**2 * p_nu**4 * np.exp(-4.0 * params.t_res * n / params.t_nu_coh)


def optimal_attempt_cap(params: ChainParams, n_max: int = 10_000) -> int:
    """Integer argmax of the attempt-cap objective; ties go to fewer attempts."""
    n = np.arange(1, n_max + 1)
    f = attempt_objective(params, n)
    return int(n[np.argmax(f)])


def attempt_cap(params: ChainParams) -> int:
    return params.n_ee_cap if params.n_ee_cap is not None else optimal_attempt_cap(params)


@dataclass(frozen=True)
class LinkBudget:
    p_trn: float
    p_arm: float
    p_ee: float
    big_p_ee: float
    big_p_nu: float
    n_ee: int


def link_probabilities(params: ChainParams, choice: EngineeringChoice,
                       distance_km: float) -> LinkBudget:
    """Optical budgets for loading one arm and for the in-node gates."""
    exponent = 4 if params.filter_in_path else 2
    p_trn = (np.sqrt(params.eta_em_qd) * params.eta_fc * params.eta_cir12
             * params.eta_cir23 * params.eta_cf**exponent
             * np.sqrt(params.eta_sp) * params.eta_swi**2 * params.eta_pd)
    fiber = 10.0 ** (-(params.gamma_fib / 10.0)
                     * distance_km / (2.0 * choice.n_segments))
    p_arm = fiber * p_trn
    p_ee = gate_success_probability(params)
    n_ee = attempt_cap(params)
    return LinkBudget(
        p_trn=float(p_trn),
        p_arm=float(p_arm),
        p_ee=float(p_ee),
        big_p_ee=float(1.0 - (1.0 - p_ee) ** n_ee),
        big_p_nu=float((1.0 - params.eps_nu) ** n_ee),
        n_ee=n_ee,
    )


# ---------------------------------------------------------------------------
# loading yields


def _round_half_away(x: float) -> int:
    return int(np.floor(x + 0.5)) if x >= 0 else -int(np.floor(-x + 0.5))


@dataclass(frozen=True)
class LoadingYield:
    m_reg: float
    m_p: int
    m_s: int
    slots: int


def loading_yield(params: ChainParams, choice: EngineeringChoice,
                  distance_km: float, eta_dis_n: float = 1.0) -> LoadingYield:
    """Expected per-segment loading outcomes.

    m_reg: cells that registered a photon; m_p: raw matched pairs; m_s: pairs
    left after elementary distillation.  `slots` is the binomial trial count
    used by the end-to-end link statistics: prospective distilled slots formed
    from registered cells, each of which materializes with probability p_arm
    (the partner-side match).  Using registered cells rather than m_p keeps
    p_arm counted exactly once in the statistics.
    """
    lb = link_probabilities(params, choice, distance_km)
    m_loa = choice.loading_cells
    p_reg = 1.0 - (1.0 - lb.p_arm) ** choice.n_loa
    m_reg = m_loa * p_reg
    m_p = _round_half_away(m_reg * lb.p_arm)
    cost = DISTILL_COST[choice.level_elementary]
    m_s = int(np.floor(np.floor(m_p / cost) * eta_dis_n))
    slots = int(np.floor(np.floor(m_reg / cost) * eta_dis_n))
    return LoadingYield(m_reg=float(m_reg), m_p=m_p, m_s=m_s, slots=slots)


def expected_end_links(m_s: int, n_segments: int, p_arm: float,
                       big_p_ee: float) -> float:
    """E[n_end] = P_ee^(N-1) sum_l P(Bin(m_s, p_arm) >= l)^N.

    The minimum over segments of the materialized pair count, thinned by the
    swap successes; evaluated with stable binomial tail sums.
    """
    if m_s <= 0:
        return 0.0
    l = np.arange(1, m_s + 1)
    tails = binom.sf(l - 1, m_s, p_arm)
    return float(big_p_ee ** (n_segments - 1) * np.sum(tails**n_segments))


def monte_carlo_end_links(m_s: int, n_segments: int, p_arm: float,
                          big_p_ee: float, trials: int = 100_000,
                          seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo estimate (mean, stderr) of the end-to-end link count.

    Independent oracle for expected_end_links: per trial, draw each segment's
    pair count, take the minimum, then thin each link through N-1 independent
    swap-success events.
    """
    if trials < 1000:
        raise ValueError("need at least 1000 trials for a meaningful stderr")
    rng = np.random.default_rng(seed)
    if m_s <= 0:
        return 0.0, 0.0
    counts = rng.binomial(m_s, p_arm, size=(trials, n_segments)).min(axis=1)
    survive = big_p_ee ** (n_segments - 1)
    kept = rng.binomial(counts, survive)
    return float(kept.mean()), float(kept.std(ddof=1) / np.sqrt(trials))


# ---------------------------------------------------------------------------
# distillation and swapping superoperators


def _fuse_pair(rho_keep: np.ndarray, rho_meas: np.ndarray) -> np.ndarray:
    """Unnormalized kept-pair state after bilateral CNOT + parity postselection.

    out[ij, i'j'] = keep[ij, i'j'] * sum_m meas[(m^i)(m^j), (m^i')(m^j')],
    keeping measurement outcomes with equal results at the two nodes.
    """
    k = np.asarray(rho_keep, dtype=complex).reshape(2, 2, 2, 2)
    t = np.asarray(rho_meas, dtype=complex).reshape(2, 2, 2, 2)
    out = np.zeros((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for i2 in range(2):
                for j2 in range(2):
                    s = sum(t[m ^ i, m ^ j, m ^ i2, m ^ j2] for m in (0, 1))
                    out[i, j, i2, j2] = k[i, j, i2, j2] * s
    return out.reshape(4, 4)


def _partial_mix(rho: np.ndarray, side: int) -> np.ndarray:
    """Replace one qubit of a pair by the maximally mixed state."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if side == 0:
        red = np.einsum("ajal->jl", r)
        return (np.kron(np.eye(2), red) / 2.0).astype(complex)
    red = np.einsum("iaka->ik", r)
    return (np.kron(red, np.eye(2)) / 2.0).astype(complex)


def fuse(rho_keep: np.ndarray, rho_meas: np.ndarray, eps_nn: float = 0.0,
         rotate: bool = False, coherence: float = 1.0,
         ) -> tuple[np.ndarray, float]:
    """One distillation round: returns (normalized kept state, success prob).

    Inputs are first dephased (storage wait and gate-attempt back-action on all
    four nuclear spins), optionally rotated by a Hadamard pair to target the
    complementary error type, fused with node-local gate noise (a two-qubit
    depolarizing of weight eps_nn at each node, acting across the two pairs),
    and rotated back.  The parity-postselection success probability excludes
    the heralded gate-attempt budget, which the caller tracks separately.
    """
    a, b = rho_keep, rho_meas
    if coherence < 1.0:
        for q in (0, 1):
            a = dephase_coherence(a, coherence, q)
            b = dephase_coherence(b, coherence, q)
    if rotate:
        a = U_HADAMARD_PAIR @ a @ U_HADAMARD_PAIR
        b = U_HADAMARD_PAIR @ b @ U_HADAMARD_PAIR
    e = eps_nn
    mixed_a = _partial_mix(_partial_mix(a, 0), 1)
    mixed_b = _partial_mix(_partial_mix(b, 0), 1)
    terms = (
        ((1 - e) ** 2, a, b),
        (e * (1 - e), _partial_mix(a, 0), _partial_mix(b, 0)),
        (e * (1 - e), _partial_mix(a, 1), _partial_mix(b, 1)),
        (e * e, mixed_a, mixed_b),
    )
    out = np.zeros((4, 4), dtype=complex)
    for w, x, y in terms:
        if w > 0.0:
            out += w * _fuse_pair(x, y)
    p = float(np.real(np.trace(out)))
    if p <= 0.0:
        raise ValueError("fusion postselection has zero success probability")
    out = out / p
    if rotate:
        out = U_HADAMARD_PAIR @ out @ U_HADAMARD_PAIR
    return out, p


@dataclass(frozen=True)
class DistillationNoise:
    eps_nn: float = 0.0
    big_p_ee: float = 1.0
    big_p_nu: float = 1.0
    tau_round: float = 0.0
    t_coherence: float = np.inf


def distill(inputs: list[np.ndarray], level: int,
            noise: DistillationNoise = DistillationNoise(),
            ) -> tuple[np.ndarray, float, int]:
    """Distill raw pairs to the requested level (1, 2 or 3).

    Level 1 fuses two raws; level 2 fuses two level-1 outputs; level 3 fuses a
    level-2 output with a level-1 output (raw costs 2/4/6, depths 1/2/3).  A
    Hadamard-pair basis rotation precedes the level-2 and level-3 fusions.
    Returns (normalized output, success probability, rounds).  The success
    probability composes parity postselection and the per-gate heralded budget
    P_ee^2 over every fusion in the tree.
    """
    if level not in (1, 2, 3):
        raise ValueError("distillation level must be 1, 2 or 3")
    if len(inputs) != DISTILL_COST[level]:
        raise ValueError(
            f"level {level} consumes {DISTILL_COST[level]} pairs, "
            f"got {len(inputs)}")
    wait = np.exp(-noise.tau_round / noise.t_coherence)
    per_round = wait * noise.big_p_nu

    def idle(rho, rounds):
        for _ in range(rounds):
            for q in (0, 1):
                rho = dephase_coherence(rho, wait, q)
        return rho

    def tree(states, lv):
        if lv == 1:
            out, p = fuse(states[0], states[1], noise.eps_nn,
                          rotate=False, coherence=per_round)
            return out, p * noise.big_p_ee**2, 1
        if lv == 2:
            a, pa, _ = tree(states[:2], 1)
            b, pb, _ = tree(states[2:4], 1)
            out, p = fuse(a, b, noise.eps_nn, rotate=True, coherence=per_round)
            return out, pa * pb * p * noise.big_p_ee**2, 2
        a, pa, da = tree(states[:4], 2)
        b, pb, db = tree(states[4:6], 1)
        b = idle(b, da - db)  # the level-1 branch waits for the level-2 one
        out, p = fuse(a, b, noise.eps_nn, rotate=True, coherence=per_round)
        return out, pa * pb * p * noise.big_p_ee**2, 3

    return tree(list(inputs), level)


_BSM_PAULIS = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, -1], [1, 0]], dtype=complex),  # XZ
]


def _swap_contract(rho_ab: np.ndarray, rho_bc: np.ndarray) -> np.ndarray:
    """Bell-state measurement on the middle qubits with Pauli-frame correction.

    Sums the four outcome branches <B_mu| rho_ab (x) rho_bc |B_mu> with the
    matching correction on the surviving right qubit; trace preserving for
    normalized inputs.
    """
    a = np.asarray(rho_ab, dtype=complex).reshape(2, 2, 2, 2)
    out = np.zeros((4, 4), dtype=complex)
    for pauli in _BSM_PAULIS:
        u = np.kron(pauli.conj().T, np.eye(2))
        rbc = (u @ rho_bc @ u.conj().T).reshape(2, 2, 2, 2)
        t = 0.5 * np.einsum("abAB,bcBC->acAC", a, rbc).reshape(4, 4)
        corr = np.kron(np.eye(2), pauli)
        out += corr @ t @ corr.conj().T
    return out


def swap_pair(rho_ab: np.ndarray, rho_bc: np.ndarray, eps_nn: float = 0.0,
              coherence: float = 1.0) -> np.ndarray:
    """Swap two adjacent links into one; gate noise acts on the measured spins."""
    a, b = rho_ab, rho_bc
    if coherence < 1.0:
        a = dephase_coherence(a, coherence, 1)
        b = dephase_coherence(b, coherence, 0)
    clean = _swap_contract(a, b)
    if eps_nn == 0.0:
        return clean
    mixed = _swap_contract(_partial_mix(a, 1), _partial_mix(b, 0))
    return (1.0 - eps_nn) * clean + eps_nn * mixed


def swap_chain(elementary: np.ndarray, n_segments: int,
               eps_nn: float = 0.0, big_p_nu: float = 1.0,
               tau_swp: float = 0.0, t_coherence: float = np.inf) -> np.ndarray:
    """Fold one elementary-link state through N-1 entanglement swappings."""
    if n_segments < 1:
        raise ValueError("need at least one segment")
    coherence = float(np.exp(-tau_swp / t_coherence) * big_p_nu)
    rho = np.asarray(elementary, dtype=complex)
    for _ in range(n_segments - 1):
        rho = swap_pair(rho, elementary, eps_nn=eps_nn, coherence=coherence)
    return rho


def werner_state(fidelity: float) -> np.ndarray:
    """Bell-diagonal state with the given target-state fidelity (isotropic)."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError("fidelity must be in [0, 1]")
    rest = (np.eye(4, dtype=complex) - BELL_RHO) / 3.0
    return fidelity * BELL_RHO + (1.0 - fidelity) * rest


# ---------------------------------------------------------------------------
# end-to-end composition


@dataclass(frozen=True)
class EndToEndState:
    rho_f: np.ndarray
    eta_dis_n: float
    eta_dis_e: float


def end_to_end_state(params: ChainParams, choice: EngineeringChoice,
                     distance_km: float, rho_sp: np.ndarray) -> EndToEndState:
    """rho_f after elementary distillation, N-1 swaps and end distillation."""
    lb = link_probabilities(params, choice, distance_km)
    t = timing(params, choice, distance_km, n_ee=lb.n_ee)
    rho = np.asarray(rho_sp, dtype=complex)
    if params.dephase_during_loading:
        wait = np.exp(-(t.t_str / 2.0 + max(t.t_com, params.t_nu))
                      / params.t_nu_coh)
        for q in (0, 1):
            rho = dephase_coherence(rho, wait, q)

    eta_n = 1.0
    lv_n = choice.level_elementary
    if lv_n > 0:
        noise = DistillationNoise(
            eps_nn=params.eps_nn, big_p_ee=lb.big_p_ee, big_p_nu=lb.big_p_nu,
            tau_round=t.tau_dis, t_coherence=params.t_nu_coh)
        rho, eta_n, _ = distill([rho] * DISTILL_COST[lv_n], lv_n, noise)

    rho = swap_chain(rho, choice.n_segments, eps_nn=params.eps_nn,
                     big_p_nu=lb.big_p_nu, tau_swp=t.tau_swp,
                     t_coherence=params.t_nu_coh)

    eta_e = 1.0
    lv_e = choice.level_end
    if lv_e > 0:
        tau_round = t.tau_swp + (t.t_com if params.dephase_end_to_end_com else 0.0)
        noise = DistillationNoise(
            eps_nn=params.eps_nn, big_p_ee=lb.big_p_ee, big_p_nu=lb.big_p_nu,
            tau_round=tau_round, t_coherence=params.t_nu_coh)
        rho, eta_e, _ = distill([rho] * DISTILL_COST[lv_e], lv_e, noise)

    return EndToEndState(rho_f=rho, eta_dis_n=eta_n, eta_dis_e=eta_e)


def qber(rho_f: np.ndarray) -> tuple[float, float]:
    """(Q_Z, Q_X): error rates of correlated measurements in the two bases."""
    rho = np.asarray(rho_f)
    q_z = 1.0 - float(np.real(rho[0, 0] + rho[3, 3]))
    plus = np.kron([1, 1], [1, 1]) / 2.0
    minus = np.kron([1, -1], [1, -1]) / 2.0
    q_x = 1.0 - float(np.real(plus @ rho @ plus + minus @ rho @ minus))
    return q_z, q_x


@dataclass(frozen=True)
class RateReport:
    q_z: float
    q_x: float
    r_sk: float
    rate: float
    expected_links: float
    tau_loa: float
    yield_: LoadingYield
    eta_dis_n: float
    eta_dis_e: float


def secret_key_rate(params: ChainParams, choice: EngineeringChoice,
                    distance_km: float, rho_sp: np.ndarray | None = None,
                    ) -> RateReport:
    """BB84 secret-key rate of the full chain (bits per second).

    rate = r_sk * (eta_dis_e / cost_e) * E[n_end] / tau_loa, where the
    end-distillation factor both succeeds probabilistically and consumes
    cost_e end-to-end links per output pair.
    """
    if rho_sp is None:
        rho_sp = werner_state(params.f_sp)
    ee = end_to_end_state(params, choice, distance_km, rho_sp)
    q_z, q_x = qber(ee.rho_f)
    r_sk = max(0.0, 1.0 - binary_entropy(q_x) - binary_entropy(q_z))
    lb = link_probabilities(params, choice, distance_km)
    t = timing(params, choice, distance_km, n_ee=lb.n_ee)
    ly = loading_yield(params, choice, distance_km, eta_dis_n=ee.eta_dis_n)
    e_links = expected_end_links(ly.slots, choice.n_segments, lb.p_arm,
                                 lb.big_p_ee)
    throughput = ee.eta_dis_e / DISTILL_COST[choice.level_end]
    rate = r_sk * throughput * e_links / t.tau_loa
    return RateReport(q_z=q_z, q_x=q_x, r_sk=r_sk, rate=float(rate),
                      expected_links=e_links, tau_loa=t.tau_loa, yield_=ly,
                      eta_dis_n=ee.eta_dis_n, eta_dis_e=ee.eta_dis_e)


def n_loa_log_grid(low: int = 20, high: int = 20000, points: int = 100) -> list[int]:
    """Log-spaced loading-attempt grid round(exp(ln low + n tau)), n = 0..points-1."""
    tau = (np.log(high) - np.log(low)) / (points - 1)
    vals = [_round_half_away(float(np.exp(np.log(low) + n * tau)))
            for n in range(points)]
    out = []
    for v in vals:
        if not out or v != out[-1]:
            out.append(v)
    return out


@dataclass
class ScanRow:
    n_segments: int
    n_loa: int
    level_elementary: int
    level_end: int
    rate: float


def scan(params: ChainParams, distance_km: float,
         n_segments_range=range(2, 15), n_loa_grid=None,
         level_pairs=None, m: int = 1000,
         rho_sp: np.ndarray | None = None) -> tuple[ScanRow, list[ScanRow]]:
    """Exhaustive engineering scan; returns (best row, full table).

    The end-to-end state is independent of n_loa, so it is computed once per
    (N, levels) cell and reused across the loading grid.
    """
    if rho_sp is None:
        rho_sp = werner_state(params.f_sp)
    if n_loa_grid is None:
        n_loa_grid = n_loa_log_grid()
    if level_pairs is None:
        level_pairs = [(a, b) for a in range(4) for b in range(4)]

    table: list[ScanRow] = []
    for n_seg in n_segments_range:
        lb = link_probabilities(params,
                                EngineeringChoice(n_seg, 1, m=m), distance_km)
        for lv_n, lv_e in level_pairs:
            base = EngineeringChoice(n_seg, 1, lv_n, lv_e, m=m)
            ee = end_to_end_state(params, base, distance_km, rho_sp)
            q_z, q_x = qber(ee.rho_f)
            r_sk = max(0.0, 1.0 - binary_entropy(q_x) - binary_entropy(q_z))
            throughput = ee.eta_dis_e / DISTILL_COST[lv_e]
            if r_sk == 0.0:
                for n_loa in n_loa_grid:
                    table.append(ScanRow(n_seg, n_loa, lv_n, lv_e, 0.0))
                continue
            for n_loa in n_loa_grid:
                choice = EngineeringChoice(n_seg, n_loa, lv_n, lv_e, m=m)
                t = timing(params, choice, distance_km, n_ee=lb.n_ee)
                ly = loading_yield(params, choice, distance_km,
                                   eta_dis_n=ee.eta_dis_n)
                e_links = expected_end_links(ly.slots, n_seg, lb.p_arm,
                                             lb.big_p_ee)
                rate = r_sk * throughput * e_links / t.tau_loa
                table.append(ScanRow(n_seg, n_loa, lv_n, lv_e, float(rate)))
    best = max(table, key=lambda r: r.rate)
    return best, table
