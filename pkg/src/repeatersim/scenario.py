"""Scenario-file ingestion.

Scenarios are TOML documents with sections [emitter], [cavity], [photon],
[filter], [chain] and [scan].  Keys carry explicit unit suffixes: `_ghz`
values are ordinary GHz (converted to angular rad/ns internally), `_per_ns`
values are decay rates used as-is, times carry `_ns`/`_us`/`_s`, distances
`_km`.  Unknown keys are hard errors; absent [chain] keys fall back to the
default hardware table and are recorded as defaulted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import tomli

from . import presets
from .chain import ChainParams, EngineeringChoice
from .interface import CavityConfig, EmitterParams
from .photonics import FilterStage

TWO_PI = 2.0 * np.pi


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


_EMITTER_KEYS = {
    "preset", "label", "omega_1a_ghz", "omega_2b_ghz", "gamma_1a_ghz",
    "gamma_2b_ghz", "g_1a_ghz", "g_2b_ghz", "omega_s_ghz",
}
_CAVITY_KEYS = {"preset", "kappa_ghz", "delta_c_ghz", "waveguide_fraction"}
_PHOTON_KEYS = {
    "delta_0_ghz", "gamma_x_per_ns", "gamma_xx_per_ns", "pair_fidelity",
    "rotation_fidelity",
}
_FILTER_KEYS = {"target_x_per_ns", "target_xx_per_ns", "shared_cavity"}
_CHAIN_KEYS = {
    "t_qd_ns", "t_nu_coh_s", "gamma_fib_db_per_km", "c_signal_km_per_s",
    "t_res_us", "t_nu_us", "eps_nu", "f_ph", "f_sp", "eta_sp", "eps_nn",
    "n_ee", "eta_cf", "eta_em_qd", "eta_em_g4v", "eta_fc", "eta_pd",
    "eta_cir12", "eta_cir23", "eta_swi", "filter_in_path",
    "dephase_during_loading", "dephase_end_to_end_com",
    "distance_km", "m", "m_loa", "n_segments", "n_loa",
    "level_elementary", "level_end", "rho_sp_real", "rho_sp_imag",
}
_SCAN_KEYS = {
    "n_segments_min", "n_segments_max", "n_loa_min", "n_loa_max",
    "n_loa_points", "levels", "distances_km",
    # bandwidth-requirement searches
    "infidelity_target", "cooperativity_cap", "gamma_min_per_ns",
    "gamma_max_per_ns", "hold_cavity",
    # filter sweeps
    "gamma_xx_tilde_grid",
}
_SECTION_KEYS = {
    "emitter": _EMITTER_KEYS,
    "cavity": _CAVITY_KEYS,
    "photon": _PHOTON_KEYS,
    "filter": _FILTER_KEYS,
    "chain": _CHAIN_KEYS,
    "scan": _SCAN_KEYS,
}

# [chain] keys that map straight onto ChainParams, with unit conversions.
_CHAIN_PARAM_MAP = {
    "t_qd_ns": ("t_qd", 1e-9),
    "t_nu_coh_s": ("t_nu_coh", 1.0),
    "gamma_fib_db_per_km": ("gamma_fib", 1.0),
    "c_signal_km_per_s": ("c_signal", 1.0),
    "t_res_us": ("t_res", 1e-6),
    "t_nu_us": ("t_nu", 1e-6),
    "eps_nu": ("eps_nu", 1.0),
    "f_ph": ("f_ph", 1.0),
    "f_sp": ("f_sp", 1.0),
    "eta_sp": ("eta_sp", 1.0),
    "eps_nn": ("eps_nn", 1.0),
    "n_ee": ("n_ee_cap", 1),
    "eta_cf": ("eta_cf", 1.0),
    "eta_em_qd": ("eta_em_qd", 1.0),
    "eta_em_g4v": ("eta_em_g4v", 1.0),
    "eta_fc": ("eta_fc", 1.0),
    "eta_pd": ("eta_pd", 1.0),
    "eta_cir12": ("eta_cir12", 1.0),
    "eta_cir23": ("eta_cir23", 1.0),
    "eta_swi": ("eta_swi", 1.0),
    "filter_in_path": ("filter_in_path", None),
    "dephase_during_loading": ("dephase_during_loading", None),
    "dephase_end_to_end_com": ("dephase_end_to_end_com", None),
}

_EMITTER_PRESETS = {
    "siv": presets.siv,
    "snv": presets.snv,
    "siv_low_field": presets.siv_low_field,
}


@dataclass
class Scenario:
    """Validated scenario with every derived object it can provide."""

    raw: dict
    sections: set
    defaulted_chain_keys: list = field(default_factory=list)

    emitter: EmitterParams | None = None
    cavity: CavityConfig | None = None
    delta_0: float | None = None
    gamma_x: float = presets.GAMMA_X
    gamma_xx: float = presets.GAMMA_XX
    pair_fidelity: float = 1.0
    rotation_fidelity: float = 1.0
    filter_x: FilterStage | None = None
    filter_xx: FilterStage | None = None
    chain_params: ChainParams | None = None
    choice: EngineeringChoice | None = None
    distance_km: float | None = None
    rho_sp: np.ndarray | None = None
    scan_spec: dict | None = None

    def require(self, *sections: str) -> None:
        for s in sections:
            if s not in self.sections:
                raise ScenarioError(f"missing required section [{s}]")


def _check_unknown(raw: dict) -> None:
    for section, body in raw.items():
        if section not in _SECTION_KEYS:
            raise ScenarioError(f"unknown section [{section}]")
        if not isinstance(body, dict):
            raise ScenarioError(f"section [{section}] must be a table")
        for key in body:
            if key not in _SECTION_KEYS[section]:
                raise ScenarioError(f"unknown key '{key}' in section [{section}]")


def _build_emitter(body: dict) -> EmitterParams:
    if "preset" in body:
        name = body["preset"]
        if name not in _EMITTER_PRESETS:
            raise ScenarioError(f"unknown emitter preset '{name}'")
        base = _EMITTER_PRESETS[name]()
        extra = set(body) - {"preset"}
        if extra:
            raise ScenarioError(
                f"emitter preset cannot be combined with keys {sorted(extra)}")
        return base
    needed = {"omega_2b_ghz", "gamma_1a_ghz", "gamma_2b_ghz",
              "g_1a_ghz", "g_2b_ghz"}
    missing = needed - set(body)
    if missing:
        raise ScenarioError(f"custom emitter missing keys {sorted(missing)}")
    return EmitterParams(
        label=body.get("label", "custom"),
        omega_1a=TWO_PI * body.get("omega_1a_ghz", 0.0),
        omega_2b=TWO_PI * body["omega_2b_ghz"],
        gamma_1a=TWO_PI * body["gamma_1a_ghz"],
        gamma_2b=TWO_PI * body["gamma_2b_ghz"],
        g_1a=TWO_PI * body["g_1a_ghz"],
        g_2b=TWO_PI * body["g_2b_ghz"],
        omega_s=TWO_PI * body.get("omega_s_ghz", 0.0),
    )


def _build_cavity(body: dict) -> tuple[CavityConfig, float | None]:
    if "preset" in body:
        extra = set(body) - {"preset"}
        if extra:
            raise ScenarioError(
                f"cavity preset cannot be combined with keys {sorted(extra)}")
        name = body["preset"]
        if name == "siv":
            return presets.siv_optimal_cavity()
        if name == "snv":
            return presets.snv_optimal_cavity()
        raise ScenarioError(f"unknown cavity preset '{name}'")
    for key in ("kappa_ghz", "delta_c_ghz"):
        if key not in body:
            raise ScenarioError(f"cavity section missing '{key}'")
    cav = CavityConfig(
        kappa=TWO_PI * body["kappa_ghz"],
        delta_c=TWO_PI * body["delta_c_ghz"],
        waveguide_fraction=body.get("waveguide_fraction", 1.0),
    )
    return cav, None


def _build_filters(body: dict, gamma_x: float, gamma_xx: float):
    fx = fxx = None
    if "target_xx_per_ns" in body:
        fxx = FilterStage.for_target(gamma_xx, body["target_xx_per_ns"])
    if body.get("shared_cavity", False):
        if fxx is None:
            raise ScenarioError("shared_cavity requires target_xx_per_ns")
        if "target_x_per_ns" in body:
            raise ScenarioError(
                "shared_cavity and target_x_per_ns are mutually exclusive")
        fx = FilterStage.for_kappa(gamma_x, fxx.kappa_f)
    elif "target_x_per_ns" in body:
        fx = FilterStage.for_target(gamma_x, body["target_x_per_ns"])
    return fx, fxx


def _build_chain(body: dict) -> tuple[ChainParams, list]:
    kwargs = {}
    defaulted = []
    for key, (attr, conv) in _CHAIN_PARAM_MAP.items():
        if key in body:
            val = body[key]
            if conv is None or conv == 1:
                kwargs[attr] = val
            else:
                kwargs[attr] = val * conv
        else:
            defaulted.append(key)
    params = ChainParams(**kwargs)
    return params, defaulted


def _build_rho(body: dict) -> np.ndarray | None:
    has_re = "rho_sp_real" in body
    has_im = "rho_sp_imag" in body
    if not has_re and not has_im:
        return None
    if not has_re:
        raise ScenarioError("rho_sp_imag given without rho_sp_real")
    re = np.asarray(body["rho_sp_real"], dtype=float)
    im = np.asarray(body["rho_sp_imag"], dtype=float) if has_im else np.zeros((4, 4))
    if re.shape != (4, 4) or im.shape != (4, 4):
        raise ScenarioError("rho_sp matrices must be 4x4")
    return re + 1j * im


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid TOML: {exc}")
    return parse_scenario(raw)


def parse_scenario(raw: dict) -> Scenario:
    _check_unknown(raw)
    scn = Scenario(raw=raw, sections=set(raw))

    if "photon" in raw:
        body = raw["photon"]
        scn.gamma_x = body.get("gamma_x_per_ns", presets.GAMMA_X)
        scn.gamma_xx = body.get("gamma_xx_per_ns", presets.GAMMA_XX)
        scn.pair_fidelity = body.get("pair_fidelity", 1.0)
        scn.rotation_fidelity = body.get("rotation_fidelity", 1.0)
        if "delta_0_ghz" in body:
            scn.delta_0 = TWO_PI * body["delta_0_ghz"]

    if "emitter" in raw:
        scn.emitter = _build_emitter(raw["emitter"])
    if "cavity" in raw:
        scn.cavity, preset_d0 = _build_cavity(raw["cavity"])
        if scn.delta_0 is None:
            scn.delta_0 = preset_d0
    if "filter" in raw:
        scn.filter_x, scn.filter_xx = _build_filters(
            raw["filter"], scn.gamma_x, scn.gamma_xx)

    if "chain" in raw:
        body = raw["chain"]
        scn.chain_params, scn.defaulted_chain_keys = _build_chain(body)
        scn.distance_km = body.get("distance_km")
        scn.rho_sp = _build_rho(body)
        if "n_segments" in body and "n_loa" in body:
            scn.choice = EngineeringChoice(
                n_segments=body["n_segments"],
                n_loa=body["n_loa"],
                level_elementary=body.get("level_elementary", 0),
                level_end=body.get("level_end", 0),
                m=body.get("m", 1000),
                m_loa=body.get("m_loa"),
            )

    if "scan" in raw:
        body = raw["scan"]
        scn.scan_spec = {
            "n_segments_min": body.get("n_segments_min", 2),
            "n_segments_max": body.get("n_segments_max", 14),
            "n_loa_min": body.get("n_loa_min", 20),
            "n_loa_max": body.get("n_loa_max", 20000),
            "n_loa_points": body.get("n_loa_points", 100),
            "levels": [tuple(x) for x in body["levels"]] if "levels" in body else None,
            "distances_km": body.get("distances_km"),
            "infidelity_target": body.get("infidelity_target"),
            "cooperativity_cap": body.get("cooperativity_cap"),
            "gamma_min_per_ns": body.get("gamma_min_per_ns", 0.05),
            "gamma_max_per_ns": body.get("gamma_max_per_ns", 10.0),
            "hold_cavity": body.get("hold_cavity", False),
            "gamma_xx_tilde_grid": body.get("gamma_xx_tilde_grid"),
        }
    return scn
