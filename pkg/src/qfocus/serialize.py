"""Reading models, likelihoods and Hamiltonians from JSON/CSV; writing traces and risk tables.

Model file layout::

    {"order": n, "table": [[...]], "points": m, "action": [[...]],
     "parameters": [{"name": str, "values": [...], "map": [...]}]}

``table[g][h]`` is the index of ``gh``; ``action[phi][g]`` is the index of
``phi g``; ``map[phi]`` is the value of the parameter at ``phi`` (``null`` for
a point outside its domain). All indices are 0-based.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import dynamics, inference, measurement
from .focusing import FocusedParameter, find_transition, verify_coupling
from .groups import (NotAGroup, NotAnAction, build_action, generated_subgroup, invariant_measure,
                     maximal_permissible_subgroup, orbits, verify_group)
from .quantum_space import build_parametric_space, regular_representation, transport_check
from .report import ScenarioReport, complex_from_json, complex_to_json

__all__ = [
    "InputError",
    "ModelFile",
    "load_json",
    "parse_model",
    "load_model",
    "verify_model",
    "model_to_json",
    "load_likelihood",
    "load_hamiltonian",
    "load_inference_model",
    "evolution_trace",
    "write_trace_csv",
    "risk_table_csv",
    "operator_to_json",
    "operator_from_json",
]


class InputError(ValueError):
    """Malformed input file: wrong schema, shape or type."""


def load_json(src):
    """Parse ``src`` (a path, a JSON string, or an already-decoded object)."""
    if isinstance(src, (dict, list)):
        return src
    if isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith(("{", "["))):
        try:
            text = Path(src).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {src}: {exc}") from exc
    else:
        text = src
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _require(obj, key, kind=None):
    if key not in obj:
        raise InputError(f"missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"field {key!r} has the wrong type")
    return val


def _int_matrix(obj, name, shape):
    try:
        a = np.asarray(obj)
    except ValueError as exc:
        raise InputError(f"{name} is ragged") from exc
    if a.shape != shape:
        raise InputError(f"{name} has shape {a.shape}, expected {shape}")
    if a.size and not (np.issubdtype(a.dtype, np.integer)
                       or (np.issubdtype(a.dtype, np.floating) and np.all(np.mod(a, 1) == 0))):
        raise InputError(f"{name} entries must be integers")
    return a.astype(np.int64)


@dataclass(frozen=True)
class ModelFile:
    """Raw, shape-checked content of a model file; group axioms are not yet verified."""

    table: np.ndarray
    action: np.ndarray
    parameters: tuple       # (name, values, map) triples


def parse_model(obj) -> ModelFile:
    obj = load_json(obj)
    if not isinstance(obj, dict):
        raise InputError("model file must be a JSON object")
    n = _require(obj, "order", int)
    m = _require(obj, "points", int)
    if n < 1 or m < 1:
        raise InputError("order and points must be positive")
    table = _int_matrix(_require(obj, "table", list), "table", (n, n))
    action = _int_matrix(_require(obj, "action", list), "action", (m, n))
    params = []
    for i, p in enumerate(obj.get("parameters", [])):
        if not isinstance(p, dict):
            raise InputError(f"parameter {i} is not an object")
        name = str(p.get("name", f"param{i}"))
        values = tuple(_require(p, "values", list))
        pmap = _require(p, "map", list)
        if len(pmap) != m:
            raise InputError(f"parameter {name!r}: map has {len(pmap)} entries, expected {m}")
        if len(set(map(repr, values))) != len(values):
            raise InputError(f"parameter {name!r}: repeated values")
        params.append((name, values, tuple(pmap)))
    return ModelFile(table, action, tuple(params))


def _parameter(name, values, pmap) -> FocusedParameter:
    where = {repr(v): k for k, v in enumerate(values)}
    index = []
    for phi, v in enumerate(pmap):
        if v is None:
            index.append(-1)
        elif repr(v) in where:
            index.append(where[repr(v)])
        else:
            raise InputError(f"parameter {name!r}: value {v!r} at point {phi} is not in the value list")
    try:
        return FocusedParameter(name, values, tuple(index))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_model(src):
    """Parse and validate a model file.

    Returns ``(group, action, parameters)``.

    Raises
    ------
    InputError
        Schema or shape problems.
    NotAGroup, NotAnAction
        Axiom failures, each with a witness.
    """
    mf = parse_model(src)
    group = verify_group(mf.table, "model")
    action = build_action(group, mf.action)
    return group, action, [_parameter(*p) for p in mf.parameters]


def model_to_json(group, action, parameters=()) -> dict:
    return {
        "order": group.order,
        "table": np.asarray(group.table).tolist(),
        "points": action.n_points,
        "action": np.asarray(action.map).tolist(),
        "parameters": [{"name": p.label, "values": list(p.values),
                        "map": [p.values[k] if k >= 0 else None for k in p.index]} for p in parameters],
    }


def verify_model(src, tol: float = 1e-10, seed: int = 0) -> ScenarioReport:
    """Group, action, measure, permissibility, coupling and transport checks on a user model.

    Axiom failures become failing checks carrying their witness; schema errors
    raise :class:`InputError`.
    """
    mf = parse_model(src)
    rep = ScenarioReport("verify", seed)
    try:
        group = verify_group(mf.table, "model")
    except NotAGroup as exc:
        rep.check(f"group axioms ({exc.reason})", False, True)
        rep.notes.append(f"witness: {list(exc.witness)}")
        return rep
    rep.check("group axioms", True, True)
    try:
        action = build_action(group, mf.action)
    except NotAnAction as exc:
        rep.check(f"action laws ({exc.reason})", False, True)
        rep.notes.append(f"witness: {list(exc.witness)}")
        return rep
    rep.check("action laws", True, True)
    part = orbits(action)
    rep.check("orbit count", len(part), len(part))
    rho = invariant_measure(action)
    rep.check("invariant measure right-invariant",
              all(rho.weights[action.act(p, g)] == rho.weights[p]
                  for g in range(group.order) for p in range(action.n_points)), True)
    rep.check("invariant measure unique", rho.unique, part.is_transitive)
    params = [_parameter(*p) for p in mf.parameters]
    subs = {}
    for p in params:
        sub = maximal_permissible_subgroup(p, action)
        subs[p.label] = sub
        rep.check(f"|G^{p.label}|", sub.order, sub.order)
        space = build_parametric_space(p, rho)
        gram = space.orthonormal_basis.T @ space.orthonormal_basis
        rep.check_le(f"indicator basis of {p.label} orthonormal", float(np.abs(gram - np.eye(space.dimension)).max()), tol)
    if len(params) >= 2:
        U = regular_representation(action, rho)
        for a, b in itertools.permutations(params, 2):
            t = find_transition(a, b, action)
            rep.check(f"transition {a.label}->{b.label}", t is not None, True)
            if t is None:
                continue
            cr = verify_coupling(a, b, action, t)
            rep.check(f"conjugation {a.label}->{b.label}", cr.conjugation_ok, True)
            if cr.alignment_pair is not None:
                tr = transport_check(build_parametric_space(a, rho), build_parametric_space(b, rho),
                                     U, t, cr.alignment_pair)
                rep.check(f"indicator transport {a.label}->{b.label}", tr.max_deviation, 0.0, 0.0)
        gens = sorted(set().union(*(s.embedding for s in subs.values())))
        rep.check("permissible subgroups generate the group", generated_subgroup(group, gens).order, group.order)
    return rep


# ---------------------------------------------------------------- measurement and dynamics inputs


def _number(x):
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise InputError(f"not a number: {x!r}") from exc
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return x
    raise InputError(f"not a number: {x!r}")


def load_likelihood(src) -> measurement.LikelihoodTable:
    """Likelihood table from JSON (``{"likelihood": [[...]], "outcomes": [...]}`` or a bare
    nested list) or from a ``.csv`` file whose optional header holds outcome labels."""
    if isinstance(src, (str, Path)) and str(src).endswith(".csv"):
        try:
            rows = list(csv.reader(Path(src).read_text().splitlines()))
        except OSError as exc:
            raise InputError(f"cannot read {src}: {exc}") from exc
        rows = [r for r in rows if r]
        outcomes = None
        try:
            float(rows[0][0])
        except (ValueError, IndexError):
            outcomes = rows[0]
            rows = rows[1:]
        try:
            p = [[float(x) for x in r] for r in rows]
        except ValueError as exc:
            raise InputError(f"non-numeric likelihood entry: {exc}") from exc
    else:
        obj = load_json(src)
        if isinstance(obj, dict):
            p = _require(obj, "likelihood", list)
            outcomes = obj.get("outcomes")
        else:
            p, outcomes = obj, None
        p = [[float(_number(x)) for x in r] for r in p]
    try:
        return measurement.LikelihoodTable(np.array(p), outcomes)
    except (measurement.BadLikelihood, ValueError) as exc:
        raise InputError(str(exc)) from exc


def load_hamiltonian(src) -> dynamics.Hamiltonian:
    """``{"matrix": [[...]], "hbar": 1.0}``; entries are reals or ``[re, im]`` pairs."""
    obj = load_json(src)
    if isinstance(obj, list):
        obj = {"matrix": obj}
    mat = _require(obj, "matrix", list)
    try:
        a = np.asarray(mat, dtype=float)
        if a.ndim == 3 and a.shape[-1] == 2:
            a = complex_from_json(mat)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc
    try:
        return dynamics.Hamiltonian(a, float(obj.get("hbar", 1.0)))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def evolution_trace(v0, H: dynamics.Hamiltonian, times) -> list[list]:
    """Rows ``t, Re v_0, Im v_0, ..., norm`` along the unitary flow."""
    d = H.dimension
    header = ["t"] + [f"{part}{i}" for i in range(d) for part in ("re", "im")] + ["norm"]
    rows = [header]
    for t in times:
        v = dynamics.evolve_state(v0, H, float(t))
        rows.append([float(t)] + [x for c in v for x in (float(c.real), float(c.imag))]
                    + [float(np.linalg.norm(v))])
    return rows


def write_trace_csv(rows, path=None) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def operator_to_json(matrix, basis: str = "") -> dict:
    return {"basis": basis, "shape": list(np.shape(matrix)), "data": complex_to_json(matrix)}


def operator_from_json(obj) -> np.ndarray:
    obj = load_json(obj)
    a = complex_from_json(_require(obj, "data", list))
    if list(a.shape) != list(obj.get("shape", a.shape)):
        raise InputError("shape metadata does not match data")
    return a


# ---------------------------------------------------------------- inference inputs


def load_inference_model(src) -> inference.FiniteModel:
    """``{"theta": n, "y": m, "likelihood": [[...]], "group": {"table": [[...]]},
    "actions": {"theta": [[...]], "y": [[...]]}}``; probabilities may be ``"p/q"`` strings."""
    obj = load_json(src)
    n = _require(obj, "theta", int)
    m = _require(obj, "y", int)
    lik = _require(obj, "likelihood", list)
    if len(lik) != n or any(not isinstance(r, list) or len(r) != m for r in lik):
        raise InputError(f"likelihood must be {n} rows of {m} entries")
    lik = [[_number(x) for x in r] for r in lik]
    grp = _require(obj, "group", dict)
    table = np.asarray(_require(grp, "table", list))
    group = verify_group(table)
    acts = _require(obj, "actions", dict)
    ta = build_action(group, _int_matrix(_require(acts, "theta", list), "actions.theta", (n, group.order)))
    ya = build_action(group, _int_matrix(_require(acts, "y", list), "actions.y", (m, group.order)))
    try:
        return inference.FiniteModel(lik, ta, ya)
    except inference.IncompatibleModel:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def risk_table_csv(best: inference.BestEquivariant, path=None) -> str:
    """One row per equivariant candidate: its value at the reference sample and its risk per theta."""
    n = len(best.risk_table[0][1]) if best.risk_table else 0
    rows = [["candidate"] + [f"risk_theta{t}" for t in range(n)] + ["pitman"]]
    for c, risks in best.risk_table:
        rows.append([c] + [str(r) for r in risks] + [int(best.pitman[0] == c)])
    return write_trace_csv(rows, path)
