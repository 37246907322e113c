"""Command-line interface: scenario in, CSV tables and a JSON manifest out.

Every subcommand reads one TOML scenario, writes CSV files with a fixed column
order and 12-significant-digit values (byte-reproducible for a given scenario
and seed), and a manifest capturing the resolved inputs.

Exit codes: 0 success, 2 invalid scenario, 3 numerical failure, 4 infeasible
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    expected_end_links,
    monte_carlo_end_links,
    n_loa_log_grid,
    scan,
    secret_key_rate,
    werner_state,
)
from .interface import (
    NumericalError,
    entanglement_metrics,
    overlap_integrals,
    spin_spin_state,
)
from .optimize import (
    bandwidth_requirement,
    default_search_space,
    filter_sweep,
    optimize_interface,
    sensitivity_grid,
)
from .photonics import FilterError, PhotonMode
from .scenario import Scenario, ScenarioError, load_scenario

TWO_PI = 2.0 * np.pi

SUBCOMMANDS = (
    "optimize-cavity", "spin-state", "filter-sweep", "sensitivity",
    "bandwidth-req", "chain-rate", "scan", "mc-validate",
)


class InfeasibleError(RuntimeError):
    """Configuration cannot be realized (exit code 4)."""


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _write_table(path: Path, header: list[str], rows: list[tuple],
                 fmt: str) -> Path:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
        return path
    records = [dict(zip(header, row)) for row in rows]
    path = path.with_suffix(".json")
    path.write_text(json.dumps(records, indent=2, default=_fmt) + "\n")
    return path


def _modes(scn: Scenario) -> tuple[PhotonMode, PhotonMode]:
    if scn.delta_0 is None:
        raise ScenarioError("photon center frequency (delta_0_ghz) is required")
    omega0 = scn.emitter.omega_1a - scn.delta_0
    return (PhotonMode(omega0=omega0, gamma=scn.gamma_x),
            PhotonMode(omega0=omega0, gamma=scn.gamma_xx))


def _cmd_optimize_cavity(scn: Scenario, seed: int, threads: int):
    scn.require("emitter", "photon")
    mx = PhotonMode(omega0=0.0, gamma=scn.gamma_x)
    mxx = PhotonMode(omega0=0.0, gamma=scn.gamma_xx)
    res = optimize_interface(
        scn.emitter, mx, mxx, space=default_search_space(), restarts=64,
        seed=seed, filter_x=scn.filter_x, filter_xx=scn.filter_xx,
        photon_pair_fidelity=scn.pair_fidelity,
        rotation_fidelity=scn.rotation_fidelity,
    )
    header = ["delta_0_ghz", "delta_c_ghz", "kappa_ghz", "infidelity",
              "efficiency", "n_evaluations"]
    row = (res.delta_0 / TWO_PI, res.delta_c / TWO_PI, res.kappa / TWO_PI,
           res.infidelity, res.efficiency, res.n_evaluations)
    return [("optimize_cavity.csv", header, [row])]


def _cmd_spin_state(scn: Scenario, seed: int, threads: int):
    scn.require("emitter", "cavity", "photon")
    mx, mxx = _modes(scn)
    ix = overlap_integrals(mx, scn.filter_x, scn.emitter, scn.cavity)
    ixx = overlap_integrals(mxx, scn.filter_xx, scn.emitter, scn.cavity)
    rho = spin_spin_state(scn.pair_fidelity, scn.rotation_fidelity, ix, ixx)
    eta, fid = entanglement_metrics(rho)
    rows = [("eta_sp", "", "", eta), ("fidelity", "", "", fid)]
    rows += [("rho_re", i, j, float(np.real(rho[i, j])))
             for i in range(4) for j in range(4)]
    rows += [("rho_im", i, j, float(np.imag(rho[i, j])))
             for i in range(4) for j in range(4)]
    return [("spin_state.csv", ["quantity", "i", "j", "value"], rows)]


def _cmd_filter_sweep(scn: Scenario, seed: int, threads: int):
    scn.require("emitter", "cavity", "photon")
    grid = None
    if scn.scan_spec is not None:
        grid = scn.scan_spec.get("gamma_xx_tilde_grid")
    if grid is None:
        grid = np.linspace(0.05 * scn.gamma_xx, 0.98 * scn.gamma_xx, 40)
    rows = []
    for r in filter_sweep(
            scn.emitter, scn.cavity, scn.delta_0, scn.gamma_x, scn.gamma_xx,
            grid, photon_pair_fidelity=scn.pair_fidelity,
            rotation_fidelity=scn.rotation_fidelity):
        rows.append((r["gamma_xx_tilde"], r["infidelity"], r["efficiency"],
                     r["feasible"]))
    header = ["gamma_xx_tilde", "infidelity", "efficiency", "feasible"]
    return [("filter_sweep.csv", header, rows)]


def _cmd_sensitivity(scn: Scenario, seed: int, threads: int):
    scn.require("emitter", "cavity", "photon")
    mx, mxx = _modes(scn)
    grid = sensitivity_grid(
        scn.emitter, scn.cavity, scn.delta_0, mx, mxx,
        delta_c_span=TWO_PI * 1.0, kappa_span=TWO_PI * 1.0, resolution=11)
    rows = []
    for i, dc in enumerate(grid["delta_c"]):
        for j, kp in enumerate(grid["kappa"]):
            rows.append((dc / TWO_PI, kp / TWO_PI,
                         grid["infidelity"][i, j], grid["efficiency"][i, j]))
    header = ["delta_c_ghz", "kappa_ghz", "infidelity", "efficiency"]
    return [("sensitivity.csv", header, rows)]


def _cmd_bandwidth_req(scn: Scenario, seed: int, threads: int):
    scn.require("emitter", "scan")
    spec = scn.scan_spec
    target = spec.get("infidelity_target")
    if target is None:
        raise ScenarioError("bandwidth-req needs [scan].infidelity_target")
    kwargs = {}
    if spec.get("hold_cavity"):
        scn.require("cavity")
        kwargs["cavity"] = scn.cavity
        kwargs["delta_0"] = scn.delta_0
    else:
        kwargs["space"] = default_search_space(
            cooperativity_cap=spec.get("cooperativity_cap"))
    res = bandwidth_requirement(
        scn.emitter, target,
        gamma_bounds=(spec["gamma_min_per_ns"], spec["gamma_max_per_ns"]),
        seed=seed, **kwargs)
    if not res["feasible"]:
        raise InfeasibleError(res["message"])
    header = ["gamma_per_ns", "infidelity_at_gamma", "feasible"]
    rows = [(res["gamma"], res["infidelity_at_gamma"], res["feasible"])]
    return [("bandwidth_req.csv", header, rows)]


def _resolve_rho(scn: Scenario):
    if scn.rho_sp is not None:
        rho = np.asarray(scn.rho_sp, dtype=complex)
        tr = float(np.real(np.trace(rho)))
        if tr <= 0:
            raise ScenarioError("literal rho_sp must have positive trace")
        return rho / tr
    return werner_state(scn.chain_params.f_sp)


def _cmd_chain_rate(scn: Scenario, seed: int, threads: int):
    scn.require("chain")
    if scn.choice is None:
        raise ScenarioError("[chain] must fix n_segments and n_loa for chain-rate")
    if scn.distance_km is None:
        raise ScenarioError("[chain].distance_km is required for chain-rate")
    rep = secret_key_rate(scn.chain_params, scn.choice, scn.distance_km,
                          rho_sp=_resolve_rho(scn))
    header = ["L", "N", "n_loa", "n_dis_n", "n_dis_e", "q_z", "q_x", "r_sk",
              "R_sk", "expected_links", "tau_loa_s", "m_reg", "m_p", "m_s"]
    c = scn.choice
    rows = [(scn.distance_km, c.n_segments, c.n_loa, c.level_elementary,
             c.level_end, rep.q_z, rep.q_x, rep.r_sk, rep.rate,
             rep.expected_links, rep.tau_loa, rep.yield_.m_reg,
             rep.yield_.m_p, rep.yield_.m_s)]
    return [("chain_rate.csv", header, rows)]


def _scan_one(args):
    params, distance, spec, rho = args
    best, _ = scan(
        params, distance,
        n_segments_range=range(spec["n_segments_min"],
                               spec["n_segments_max"] + 1),
        n_loa_grid=n_loa_log_grid(spec["n_loa_min"], spec["n_loa_max"],
                                  spec["n_loa_points"]),
        level_pairs=spec["levels"],
        m=spec["m"],
        rho_sp=rho,
    )
    return (distance, best.n_segments, best.n_loa, best.level_elementary,
            best.level_end, best.rate)


def _cmd_scan(scn: Scenario, seed: int, threads: int):
    scn.require("chain", "scan")
    spec = dict(scn.scan_spec)
    distances = spec.pop("distances_km") or (
        [scn.distance_km] if scn.distance_km else None)
    if not distances:
        raise ScenarioError("[scan].distances_km (or [chain].distance_km) required")
    spec["m"] = scn.raw["chain"].get("m", 1000)
    rho = _resolve_rho(scn)
    jobs = [(scn.chain_params, d, spec, rho) for d in distances]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    header = ["L", "N", "n_loa", "n_dis_n", "n_dis_e", "R_sk"]
    return [("scan.csv", header, rows)]


def _cmd_mc_validate(scn: Scenario, seed: int, threads: int):
    scn.require("chain")
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(20):
        m_s = int(rng.integers(1, 60))
        n = int(rng.integers(1, 9))
        p_arm = float(rng.uniform(0.01, 0.6))
        p_ee = float(rng.uniform(0.7, 1.0))
        closed = expected_end_links(m_s, n, p_arm, p_ee)
        mean, err = monte_carlo_end_links(m_s, n, p_arm, p_ee,
                                          trials=100_000, seed=seed + k)
        z = 0.0 if err == 0 else (mean - closed) / err
        rows.append((m_s, n, p_arm, p_ee, closed, mean, err, z))
    header = ["m_s", "N", "p_arm", "P_ee", "closed_form", "mc_mean",
              "mc_stderr", "z_score"]
    return [("mc_validate.csv", header, rows)]


_DISPATCH = {
    "optimize-cavity": _cmd_optimize_cavity,
    "spin-state": _cmd_spin_state,
    "filter-sweep": _cmd_filter_sweep,
    "sensitivity": _cmd_sensitivity,
    "bandwidth-req": _cmd_bandwidth_req,
    "chain-rate": _cmd_chain_rate,
    "scan": _cmd_scan,
    "mc-validate": _cmd_mc_validate,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="repeatersim",
        description="Hybrid repeater-chain simulation and optimization")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--scenario", required=True)
    parser.add_argument("--out", default=".")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    args = parser.parse_args(argv)

    t_start = time.time()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        scn = load_scenario(args.scenario)
        tables = _DISPATCH[args.subcommand](scn, args.seed, args.threads)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except (FilterError, InfeasibleError) as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return 4
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    written = []
    for name, header, rows in tables:
        path = _write_table(outdir / name, header, rows, args.format)
        written.append(str(path))

    manifest = {
        "tool": "repeatersim",
        "version": __version__,
        "subcommand": args.subcommand,
        "scenario": scn.raw,
        "defaulted_chain_keys": scn.defaulted_chain_keys,
        "seed": args.seed,
        "threads": args.threads,
        "format": args.format,
        "outputs": written,
        "wall_time_s": time.time() - t_start,
    }
    (outdir / "run_manifest.json").write_text(
        json.dumps(manifest, indent=2, default=str) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
