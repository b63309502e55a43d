"""Plain-text reports and the JSON simulation-grid config.

Reports are deterministic key-value documents: a header block, then one
record line per item. All floats use 17 significant digits so reruns with
the same seed are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cdtests import TestResult
from .errors import ParseError
from .simulate import (
    Alternative,
    AltKind,
    DgpConfig,
    ErrorDist,
    McReport,
    SlopeMode,
    TEST_ORDER,
)

FLOAT_FORMAT = "%.17g"

_GRID_KEYS = {
    "n",
    "T",
    "k",
    "error_dist",
    "slope_mode",
    "alternative",
    "h",
    "replications",
    "alpha",
    "burn_in",
    "ar_coef",
}


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def format_test_report(
    results: list[TestResult],
    *,
    n: int,
    T: int,
    k: int,
    alpha: float,
    input_path: str,
    k_convention: str,
) -> str:
    lines = [
        "# panelcd test report",
        f"input = {input_path}",
        f"n = {n}",
        f"T = {T}",
        f"k = {k}",
        f"k_convention = {k_convention}",
        f"alpha = {_fmt(alpha)}",
        f"tests = {len(results)}",
        "",
    ]
    for r in results:
        lines.append(
            f"test name={r.test_name.value} statistic={_fmt(r.statistic)} "
            f"null={r.null_dist} p_value={_fmt(r.p_value)} "
            f"tail={r.tail.value} reject={'true' if r.reject else 'false'}"
        )
    return "\n".join(lines) + "\n"


def _cell_fields(config: DgpConfig) -> str:
    fields = (
        f"n={config.n} T={config.T} k={config.k} "
        f"error_dist={config.error_dist.value} "
        f"slope_mode={config.slope_mode.value} "
        f"alternative={config.alternative.kind.value}"
    )
    if config.alternative.kind is AltKind.DENSE:
        fields += f" h={_fmt(config.alternative.h)}"
    return fields


def format_simulate_report(
    reports: list[McReport], *, seed: int, replications: int, alpha: float
) -> str:
    lines = [
        "# panelcd simulate report",
        f"seed = {seed}",
        f"replications = {replications}",
        f"alpha = {_fmt(alpha)}",
        f"cells = {len(reports)}",
        "",
    ]
    for rep in reports:
        lines.append(f"cell {_cell_fields(rep.config)} excluded={rep.excluded}")
        for name in TEST_ORDER:
            lines.append(
                f"rate test={name.value} "
                f"rate={_fmt(rep.rejection_rate[name])} "
                f"se={_fmt(rep.mc_se[name])}"
            )
    return "\n".join(lines) + "\n"


def format_probe_report(
    cells: list[tuple[DgpConfig, np.ndarray]], *, seed: int, replications: int
) -> str:
    lines = [
        "# panelcd trace-probe report",
        f"seed = {seed}",
        f"replications = {replications}",
        f"cells = {len(cells)}",
        "",
    ]
    for config, gaps in cells:
        ok = gaps[np.isfinite(gaps).all(axis=1)]
        lines.append(
            f"probe {_cell_fields(config)} "
            f"effective={ok.shape[0]} "
            f"median_gap2={_fmt(float(np.median(ok[:, 0])))} "
            f"median_gap4={_fmt(float(np.median(ok[:, 1])))} "
            f"mean_gap2={_fmt(float(ok[:, 0].mean()))} "
            f"mean_gap4={_fmt(float(ok[:, 1].mean()))}"
        )
    return "\n".join(lines) + "\n"


def load_simulation_grid(
    path: str | Path,
) -> tuple[list[DgpConfig], int, float]:
    """Parse a JSON grid config into the ordered list of simulation cells.

    Axes (``n``, ``T``, ``k``, ``error_dist`` and, for the dense
    alternative, ``h``) are explicit lists; the cells enumerate their cross
    product with the last axis varying fastest.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    unknown = set(raw) - _GRID_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown config fields {sorted(unknown)}")

    ns = _int_axis(path, raw, "n")
    Ts = _int_axis(path, raw, "T")
    ks = _int_axis(path, raw, "k")
    dists = [
        _enum_value(path, "error_dist", ErrorDist, v)
        for v in _axis(path, raw, "error_dist", ["normal"])
    ]
    slope_mode = _enum_value(
        path, "slope_mode", SlopeMode, raw.get("slope_mode", "fixed_effects")
    )
    alt_kind = _enum_value(
        path, "alternative", AltKind, raw.get("alternative", "null")
    )
    if alt_kind is AltKind.DENSE:
        hs = [float(h) for h in _axis(path, raw, "h", None)]
        alternatives = [Alternative(AltKind.DENSE, h) for h in hs]
    else:
        if "h" in raw:
            raise ParseError(
                f"{path}: field 'h' is only valid with the dense alternative"
            )
        alternatives = [Alternative(alt_kind)]

    replications = raw.get("replications")
    if not isinstance(replications, int) or replications < 1:
        raise ParseError(
            f"{path}: field 'replications' must be a positive integer"
        )
    alpha = raw.get("alpha", 0.05)
    if not isinstance(alpha, (int, float)) or not 0.0 < alpha < 1.0:
        raise ParseError(f"{path}: field 'alpha' must lie in (0, 1)")

    extra = {}
    if "burn_in" in raw:
        extra["burn_in"] = int(raw["burn_in"])
    if "ar_coef" in raw:
        extra["ar_coef"] = float(raw["ar_coef"])

    cells = []
    try:
        for n in ns:
            for T in Ts:
                for k in ks:
                    for dist in dists:
                        for alt in alternatives:
                            cells.append(
                                DgpConfig(
                                    n=n,
                                    T=T,
                                    k=k,
                                    error_dist=dist,
                                    slope_mode=slope_mode,
                                    alternative=alt,
                                    **extra,
                                )
                            )
    except ValueError as exc:
        raise ParseError(f"{path}: invalid cell: {exc}") from None
    return cells, replications, float(alpha)


def _axis(path, raw, key, default):
    value = raw.get(key, default)
    if value is None:
        raise ParseError(f"{path}: missing required field '{key}'")
    if not isinstance(value, list) or not value:
        raise ParseError(f"{path}: field '{key}' must be a non-empty list")
    return value


def _int_axis(path, raw, key):
    values = _axis(path, raw, key, None)
    if not all(isinstance(v, int) for v in values):
        raise ParseError(f"{path}: field '{key}' must list integers")
    return values


def _enum_value(path, key, enum_cls, text):
    try:
        return enum_cls(text)
    except ValueError:
        choices = [e.value for e in enum_cls]
        raise ParseError(
            f"{path}: field '{key}': unknown value {text!r}, expected one of {choices}"
        ) from None
