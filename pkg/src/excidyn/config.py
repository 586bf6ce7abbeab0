"""Run configuration: YAML documents validated against a per-command schema.

A config document is a flat mapping. Reserved keys are ``command``,
``output_dir`` and ``seed``; every other key is a parameter of the command.
Validation reports every violation at once, each anchored to its line.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass, field
from typing import Any, Callable

import yaml

from .errors import ConfigError

class _Loader(yaml.SafeLoader):
    """Safe loader that also reads ``1e-3`` style floats (plain YAML 1.1 needs ``1.0e-3``)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
    ),
    list("-+0123456789."),
)


def load_yaml(text: str):
    return yaml.load(text, Loader=_Loader)


COMMANDS = ("eig", "tcl", "lindblad", "nonmarkov", "measures", "thermo", "states")
RESERVED = ("command", "output_dir", "seed")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_paths: tuple = ()
    output_dir: str | None = None
    overrides: dict = field(default_factory=dict)
    seed: int = 0


@dataclass(frozen=True)
class Param:
    default: Any
    check: Callable[[Any], str | None]
    is_path: bool = False


def _is_real(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def real(lo=None, lo_open=False):
    def check(v):
        if not _is_real(v):
            return f"must be a number, got {v!r}"
        if lo is not None and (v <= lo if lo_open else v < lo):
            return f"must be {'>' if lo_open else '>='} {lo}, got {v!r}"
        return None

    return check


def real_or_list(lo=None):
    single = real(lo)

    def check(v):
        if isinstance(v, list):
            if not v:
                return "must not be an empty list"
            for x in v:
                msg = single(x)
                if msg:
                    return msg
            return None
        return single(v)

    return check


def integer(lo=None):
    def check(v):
        if not isinstance(v, int) or isinstance(v, bool):
            return f"must be an integer, got {v!r}"
        if lo is not None and v < lo:
            return f"must be >= {lo}, got {v!r}"
        return None

    return check


def choice(*options):
    def check(v):
        return None if v in options else f"must be one of {list(options)}, got {v!r}"

    return check


def text(v):
    return None if isinstance(v, str) and v else f"must be a nonempty string, got {v!r}"


def optional_path(v):
    return None if v is None or (isinstance(v, str) and v) else f"must be a file path or null, got {v!r}"


def boolean(v):
    return None if isinstance(v, bool) else f"must be true or false, got {v!r}"


def _is_complex_entry(v):
    return _is_real(v) or (isinstance(v, list) and len(v) == 2 and all(_is_real(x) for x in v))


def complex_number(v):
    return None if _is_complex_entry(v) else f"must be a number or a [re, im] pair, got {v!r}"


def complex_list(v):
    if not isinstance(v, list) or not v or not all(_is_complex_entry(x) for x in v):
        return f"must be a nonempty list of numbers or [re, im] pairs, got {v!r}"
    return None


def optional_complex_list(v):
    return None if v is None else complex_list(v)


def matrix(v):
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        return "must be a list of rows"
    n = len(v)
    if any(len(r) != n for r in v):
        return f"must be square, got {n} rows of lengths {[len(r) for r in v]}"
    if not all(_is_complex_entry(x) for r in v for x in r):
        return "entries must be numbers or [re, im] pairs"
    return None


def pair_of(kind):
    def check(v):
        if not isinstance(v, list) or len(v) != 2:
            return f"must be a two-element list, got {v!r}"
        for x in v:
            msg = kind(x)
            if msg:
                return msg
        return None

    return check


def to_complex(v) -> complex:
    return complex(v[0], v[1]) if isinstance(v, list) else complex(v)


def to_matrix(rows):
    import numpy as np

    return np.array([[to_complex(x) for x in r] for r in rows], dtype=complex)


_TRANSPORT = {
    "hamiltonian": Param(None, optional_path, is_path=True),
    "initial_site": Param("BChl 1", text),
    "sink_site": Param("BChl 3", text),
    "t_final_ps": Param(5.0, real(0, lo_open=True)),
    "dt_ps": Param(5e-4, real(0, lo_open=True)),
    "dephasing_rate": Param(1.0, real(0)),
    "sink_rate": Param(1.0, real(0)),
    "loss_rate": Param(0.001, real(0)),
    "record_every": Param(10, integer(1)),
}

_BATH = {
    "units": Param("rad/ps", choice("rad/ps", "cm-1")),
    "gamma0": Param(5.0, real_or_list(0)),
    "delta_omega": Param(7.534, real(0, lo_open=True)),
    "delta": Param(0.0, real()),
    "omega0": Param(0.0, real(0)),
}

SCHEMA: dict[str, dict[str, Param]] = {
    "eig": {"hamiltonian": Param(None, optional_path, is_path=True)},
    "tcl": {
        **_BATH,
        "t_final_ps": Param(1.0, real(0, lo_open=True)),
        "dt_ps": Param(1e-5, real(0, lo_open=True)),
        "record_every": Param(100, integer(1)),
    },
    "lindblad": dict(_TRANSPORT),
    "nonmarkov": {
        "family": Param("lorentzian", choice("lorentzian", "markovian")),
        **{k: v for k, v in _BATH.items() if k != "gamma0"},
        "gamma0": Param(30.0, real(0)),
        "damping_rate": Param(1.0, real(0)),
        "source": Param("closed_form", choice("closed_form", "kernel_integration")),
        "t_final_ps": Param(2.0, real(0, lo_open=True)),
        "dt_ps": Param(1e-4, real(0, lo_open=True)),
    },
    "measures": {
        **_TRANSPORT,
        "site_pair": Param(["BChl 3", "BChl 4"], pair_of(text)),
        "sample_every": Param(20, integer(1)),
        "discord": Param(True, boolean),
    },
    "thermo": {
        "temperature_K": Param(300.0, real(0, lo_open=True)),
        "rho": Param([[1, 0], [0, 0]], matrix),
        "rho_reversed": Param([[0.5, 0], [0, 0.5]], matrix),
        "rho_sx_before": Param([[0.5, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0.5]], matrix),
        "rho_sx_after": Param([[0.25, 0, 0, 0], [0, 0.25, 0, 0], [0, 0, 0.25, 0], [0, 0, 0, 0.25]], matrix),
        "dims": Param([2, 2], pair_of(integer(1))),
    },
    "states": {
        "family": Param("W", choice("W", "GHZ", "general", "exciton")),
        "n_qubits": Param(3, integer(2)),
        "alpha": Param(0.7071067811865476, complex_number),
        "beta": Param(0.7071067811865476, complex_number),
        "coeffs": Param(None, optional_complex_list),
        "exciton": Param(1, integer(1)),
        "hamiltonian": Param(None, optional_path, is_path=True),
        "discord": Param(True, boolean),
    },
}


def _key_lines(document: str) -> dict:
    try:
        node = yaml.compose(document, Loader=_Loader)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def _suggest(key, known):
    close = difflib.get_close_matches(key, known, n=1, cutoff=0.6)
    return f" (did you mean {close[0]!r}?)" if close else ""


def parse_override(item: str):
    """``key=value`` with the value parsed as YAML (numbers, lists, strings)."""
    if "=" not in item:
        raise ConfigError(f"--set {item!r}: expected key=value")
    key, value = item.split("=", 1)
    try:
        parsed = load_yaml(value) if value.strip() else ""
    except yaml.YAMLError as exc:
        raise ConfigError(f"--set {key}: cannot parse value {value!r}: {exc}") from None
    return key.strip(), parsed


def validate_config(document: str = "", command: str | None = None, overrides=()) -> RunConfig:
    """Parse and validate a config document (plus ``--set`` overrides).

    ``command`` (from the command line) takes part in validation: the
    document may repeat it but not contradict it. Raises
    :class:`ConfigError` listing every violation.
    """
    errors = []
    try:
        doc = load_yaml(document) if document and document.strip() else {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping of keys to values")
    lines = _key_lines(document) if document else {}

    def where(key, origin):
        if origin == "set":
            return f"--set {key}"
        return f"line {lines[key]}: {key}" if key in lines else key

    doc_command = doc.get("command")
    if command is None:
        command = doc_command
    elif doc_command is not None and doc_command != command:
        errors.append(f"{where('command', 'doc')}: config is for {doc_command!r}, not {command!r}")
    if command not in COMMANDS:
        raise ConfigError(errors + [f"{where('command', 'doc')}: unknown or missing command {command!r}; expected one of {list(COMMANDS)}"])

    schema = SCHEMA[command]
    entries = [(k, v, "doc") for k, v in doc.items()]
    for item in overrides:
        key, value = parse_override(item) if isinstance(item, str) else item
        entries.append((key, value, "set"))

    params = {name: p.default for name, p in schema.items()}
    output_dir = None
    seed = 0
    for key, value, origin in entries:
        if key == "command":
            continue
        if key == "output_dir":
            if not isinstance(value, str) or not value:
                errors.append(f"{where(key, origin)} must be a nonempty path")
            else:
                output_dir = value
            continue
        if key == "seed":
            msg = integer()(value)
            if msg:
                errors.append(f"{where(key, origin)} {msg}")
            else:
                seed = value
            continue
        if key not in schema:
            known = list(schema) + list(RESERVED)
            errors.append(f"{where(key, origin)}: unknown key for {command!r}{_suggest(str(key), known)}")
            continue
        msg = schema[key].check(value)
        if msg:
            errors.append(f"{where(key, origin)} {msg}")
        else:
            params[key] = value

    if command in ("lindblad", "measures") and _is_real(params["dt_ps"]) and _is_real(params["t_final_ps"]):
        if params["dt_ps"] >= params["t_final_ps"]:
            errors.append(f"dt_ps ({params['dt_ps']}) must be smaller than t_final_ps ({params['t_final_ps']})")
    if errors:
        raise ConfigError(errors)
    inputs = tuple(params[n] for n, p in schema.items() if p.is_path and params[n] is not None)
    return RunConfig(command=command, input_paths=inputs, output_dir=output_dir, overrides=params, seed=seed)
