"""JSON descriptors and CSV tables.

Every JSON document carries ``"version": 1``.  Angles are radians, given
either as a bare number, ``{"radians": x}`` or ``{"degrees": x}``.  A
density matrix is ``{"dim": d, "entries": [re, im, re, im, ...]}`` with the
``d * d`` entries in row-major order over the basis |HH>, |HV>, |VH>, |VV>.
CSV numbers use ``.`` as decimal separator and 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping

import numpy as np

from . import __version__
from .distributions import PAIRS, BivariateDistribution, ExperimentQuartet, QuadrivariateDistribution, Settings
from .hidden import (
    DEFAULT_GRID,
    ConstantResponse,
    HiddenVariableSpace,
    QuasiObjectivisticModel,
    SawtoothResponse,
    VisibilityResponse,
)
from .macro import ContextEntry, MacrostateModel, context_independent_model, quantum_target_model
from .povm import CHSH_ANGLES, ArmConfig, ExperimentConfig
from .quantum import DensityMatrix, bell_state, maximally_mixed, product_state
from .relax import RelaxationParams

__all__ = [
    "SCHEMA_VERSION",
    "InputError",
    "angle_from_json",
    "angle_to_json",
    "density_from_json",
    "density_to_json",
    "experiment_config_from_json",
    "experiment_config_to_json",
    "fmt",
    "hv_model_from_json",
    "load_json",
    "macro_model_from_json",
    "metadata_header",
    "quad_csv_rows",
    "quartet_csv_rows",
    "quartet_from_json",
    "quartet_to_json",
    "relaxation_params_from_json",
    "settings_from_json",
    "settings_to_json",
    "state_from_json",
]

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed or invalid input document."""


def fmt(x: float) -> str:
    """Locale-free 12-significant-digit rendering; ``-0`` prints as ``0``."""
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _sign(v: int) -> str:
    return "+" if v > 0 else "-"


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _check_version(obj: Mapping) -> None:
    v = obj.get("version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {v!r}")


def _require(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, Mapping) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


# --- angles and states ---------------------------------------------------


def angle_to_json(theta: float) -> dict:
    return {"radians": float(theta)}


def angle_from_json(obj: Any) -> float:
    if isinstance(obj, bool):
        raise InputError(f"invalid angle {obj!r}")
    if isinstance(obj, (int, float)):
        value = float(obj)
    elif isinstance(obj, Mapping) and "radians" in obj:
        value = float(obj["radians"])
    elif isinstance(obj, Mapping) and "degrees" in obj:
        value = math.radians(float(obj["degrees"]))
    else:
        raise InputError(f"invalid angle {obj!r}")
    if not math.isfinite(value):
        raise InputError("angle must be finite")
    return value


def density_to_json(rho: DensityMatrix) -> dict:
    flat = rho.matrix.ravel()
    entries = []
    for z in flat:
        entries.extend((float(z.real), float(z.imag)))
    return {"version": SCHEMA_VERSION, "dim": rho.dim, "entries": entries}


def density_from_json(obj: Mapping) -> DensityMatrix:
    _check_version(obj)
    dim = _require(obj, "dim", "density matrix")
    entries = _require(obj, "entries", "density matrix")
    if not isinstance(dim, int) or dim not in (2, 4):
        raise InputError("density matrix dim must be 2 or 4")
    if not isinstance(entries, list) or len(entries) != 2 * dim * dim:
        raise InputError(f"density matrix needs {2 * dim * dim} interleaved entries")
    a = np.asarray(entries, dtype=float)
    m = (a[0::2] + 1j * a[1::2]).reshape(dim, dim)
    try:
        return DensityMatrix(m)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def state_from_json(obj: Any) -> DensityMatrix:
    """Two-photon state: ``{"bell": kind}``, ``"maximally_mixed"``,
    ``{"product": [rho1, rho2]}`` or an explicit density matrix."""
    if obj is None:
        return bell_state()
    if obj == "maximally_mixed":
        return maximally_mixed(4)
    if isinstance(obj, Mapping):
        if "bell" in obj:
            try:
                return bell_state(obj["bell"])
            except ValueError as exc:
                raise InputError(str(exc)) from exc
        if "product" in obj:
            parts = obj["product"]
            if not isinstance(parts, list) or len(parts) != 2:
                raise InputError("product state needs two single-photon states")
            try:
                return product_state(density_from_json(parts[0]), density_from_json(parts[1]))
            except ValueError as exc:
                raise InputError(str(exc)) from exc
        if "dim" in obj:
            rho = density_from_json(obj)
            if rho.dim != 4:
                raise InputError("experiment state must be a two-photon (dim 4) state")
            return rho
    raise InputError(f"unrecognized state descriptor {obj!r}")


def settings_to_json(settings: Settings) -> dict:
    return {k: float(v) for k, v in Settings(*settings)._asdict().items()}


def settings_from_json(obj: Any, default: Settings = CHSH_ANGLES) -> Settings:
    if obj is None:
        return Settings(*default)
    if not isinstance(obj, Mapping):
        raise InputError("settings must be an object with a1, b1, a2, b2")
    return Settings(*(angle_from_json(_require(obj, k, "settings")) for k in ("a1", "b1", "a2", "b2")))


# --- generalized Aspect experiment ---------------------------------------


def _arm_from_json(obj: Any, where: str) -> ArmConfig:
    try:
        return ArmConfig(
            float(_require(obj, "gamma", where)),
            angle_from_json(_require(obj, "theta", where)),
            angle_from_json(_require(obj, "theta_prime", where)),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def experiment_config_from_json(obj: Any) -> ExperimentConfig:
    if not isinstance(obj, Mapping):
        raise InputError("experiment config must be a JSON object")
    _check_version(obj)
    return ExperimentConfig(
        _arm_from_json(_require(obj, "arm1", "experiment"), "arm1"),
        _arm_from_json(_require(obj, "arm2", "experiment"), "arm2"),
        state_from_json(obj.get("state")),
    )


def experiment_config_to_json(cfg: ExperimentConfig) -> dict:
    def arm(a: ArmConfig) -> dict:
        return {"gamma": a.gamma, "theta": angle_to_json(a.theta), "theta_prime": angle_to_json(a.theta_prime)}

    return {
        "version": SCHEMA_VERSION,
        "arm1": arm(cfg.arm1),
        "arm2": arm(cfg.arm2),
        "state": density_to_json(cfg.state),
    }


# --- quartets and joints -------------------------------------------------


def quartet_to_json(q: ExperimentQuartet) -> dict:
    return {"version": SCHEMA_VERSION, "pairs": {p: q[p].table.tolist() for p in PAIRS}}


def quartet_from_json(obj: Any) -> ExperimentQuartet:
    if not isinstance(obj, Mapping):
        raise InputError("quartet must be a JSON object")
    _check_version(obj)
    pairs = _require(obj, "pairs", "quartet")
    out = {}
    for p in PAIRS:
        table = _require(pairs, p, "quartet.pairs")
        try:
            out[p] = BivariateDistribution.normalized(np.asarray(table, dtype=float))
        except (TypeError, ValueError) as exc:
            raise InputError(f"quartet pair {p}: {exc}") from exc
    return ExperimentQuartet.from_mapping(out)


def quartet_csv_rows(q: ExperimentQuartet) -> list[list[str]]:
    rows = [["pair", "p_pp", "p_pm", "p_mp", "p_mm"]]
    for p in PAIRS:
        t = q[p].table
        rows.append([p, fmt(t[0, 0]), fmt(t[0, 1]), fmt(t[1, 0]), fmt(t[1, 1])])
    return rows


def quad_csv_rows(quad: QuadrivariateDistribution) -> list[list[str]]:
    rows = [["a1", "b1", "a2", "b2", "probability"]]
    for signs, p in quad.items():
        rows.append([_sign(s) for s in signs] + [fmt(p)])
    return rows


# --- models --------------------------------------------------------------


def _response_from_json(obj: Any):
    family = (obj or {}).get("family", "sawtooth") if isinstance(obj, Mapping) or obj is None else None
    try:
        if family == "sawtooth":
            return SawtoothResponse()
        if family == "visibility":
            return VisibilityResponse(float(obj.get("visibility", 1.0)))
        if family == "constant":
            return ConstantResponse(float(obj.get("p", 0.5)))
    except (TypeError, ValueError) as exc:
        raise InputError(f"response: {exc}") from exc
    raise InputError(f"unknown response family in {obj!r}")


def hv_model_from_json(obj: Any) -> QuasiObjectivisticModel:
    """``{"kind", "grid_size", "response", "response2"?}``; response2 defaults to response."""
    obj = {} if obj is None else obj
    if not isinstance(obj, Mapping):
        raise InputError("hidden-variables model must be a JSON object")
    _check_version(obj)
    kind = obj.get("kind", "finite_grid")
    grid = obj.get("grid_size", DEFAULT_GRID)
    if not isinstance(grid, int) or grid < 1:
        raise InputError("grid_size must be a positive integer")
    if kind == "finite_grid":
        space = HiddenVariableSpace.uniform_grid(grid)
    elif kind == "continuous_circle":
        space = HiddenVariableSpace.circle(grid)
    else:
        raise InputError(f"unknown hidden-variable space kind {kind!r}")
    r1 = _response_from_json(obj.get("response"))
    r2 = _response_from_json(obj.get("response2", obj.get("response")))
    return QuasiObjectivisticModel(space, r1, r2)


def macro_model_from_json(obj: Any) -> MacrostateModel:
    """``kind`` is ``quantum_target`` (default), ``context_independent`` or ``explicit``."""
    obj = {} if obj is None else obj
    if not isinstance(obj, Mapping):
        raise InputError("macrostate model must be a JSON object")
    _check_version(obj)
    kind = obj.get("kind", "quantum_target")
    settings = settings_from_json(obj.get("settings"))
    if kind == "quantum_target":
        grid = obj.get("grid_size", DEFAULT_GRID)
        if not isinstance(grid, int) or grid < 4:
            raise InputError("grid_size must be an integer >= 4")
        return quantum_target_model(state_from_json(obj.get("state")), settings, grid)
    if kind == "context_independent":
        return context_independent_model(hv_model_from_json(obj.get("hv")), settings)
    if kind == "explicit":
        contexts = _require(obj, "contexts", "macrostate model")
        entries = {}
        for p in PAIRS:
            c = _require(contexts, p, "macrostate model contexts")
            try:
                entries[p] = ContextEntry(
                    np.asarray(_require(c, "weights", p), float),
                    np.asarray(_require(c, "response1", p), float),
                    np.asarray(_require(c, "response2", p), float),
                )
            except (TypeError, ValueError) as exc:
                raise InputError(f"context {p}: {exc}") from exc
        return MacrostateModel(settings, entries, conditioning=obj.get("conditioning", "pair"), description="explicit")
    raise InputError(f"unknown macrostate model kind {kind!r}")


def relaxation_params_from_json(obj: Any) -> RelaxationParams:
    obj = {} if obj is None else obj
    if not isinstance(obj, Mapping):
        raise InputError("relaxation parameters must be a JSON object")
    _check_version(obj)
    fields = {}
    for key, conv in (("tau", float), ("window", float), ("diffusion", float), ("step", int), ("seed", int), ("n_samples", int)):
        if key in obj:
            try:
                fields[key] = conv(obj[key])
            except (TypeError, ValueError) as exc:
                raise InputError(f"relaxation parameter {key}: {exc}") from exc
    try:
        return RelaxationParams(**fields)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# --- output --------------------------------------------------------------


def metadata(subcommand: str, seed: int, parameters: Mapping) -> dict:
    return {"tool": "aspectlab", "version": __version__, "subcommand": subcommand, "seed": seed, "parameters": parameters}


def metadata_header(subcommand: str, seed: int, parameters: Mapping) -> list[str]:
    """Comment lines opening every CSV output."""
    return [
        f"# aspectlab {__version__}",
        f"# subcommand: {subcommand}",
        f"# seed: {seed}",
        "# parameters: " + json.dumps(parameters, sort_keys=True, separators=(",", ":")),
    ]


def csv_lines(rows: Iterable[Iterable[str]]) -> list[str]:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().splitlines()
