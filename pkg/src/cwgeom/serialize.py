"""JSON schemas shared by the library and the CLI.

Schemas:
    profile     {"n": int, "S": [[real]]}
    beta        {"beta0": [real], "beta1": [real]}
    homothety   {"b": real, "beta0": [real], "beta1": [real],
                 "c": real, "eps": +-1, "A": [[real]], "s": real}
    jet         {"value": real, "gradient": [real], "hessian": [[real]]}
    point       [t, x_1, ..., x_n, v]
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .core import BetaSolution, Point, SymmetricProfile
from .curvature import CurvatureTensor4, ScalarJet2, SymBilinear
from .errors import CWError, InputError
from .group import Homothety


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InputError(message)


def load_profile(data: Any) -> SymmetricProfile:
    _require(isinstance(data, dict), "profile must be a JSON object")
    _require("S" in data, "profile is missing the field 'S'")
    try:
        S = np.asarray(data["S"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"profile field 'S' is not a numeric matrix: {exc}") from exc
    if "n" in data:
        _require(S.shape == (data["n"], data["n"]),
                 f"'S' shape {S.shape} does not match n = {data['n']}")
    tol = float(data.get("tolerance", 1e-9))
    return SymmetricProfile(S, tolerance=tol)


def dump_profile(profile: SymmetricProfile) -> dict:
    return {"n": profile.n, "S": profile.S.tolist()}


def load_beta(profile: SymmetricProfile, data: Any) -> BetaSolution:
    _require(isinstance(data, dict), "beta must be a JSON object")
    try:
        return BetaSolution(profile,
                            np.asarray(data.get("beta0", np.zeros(profile.n)), float),
                            np.asarray(data.get("beta1", np.zeros(profile.n)), float))
    except CWError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed beta data: {exc}") from exc


def dump_beta(beta: BetaSolution) -> dict:
    return {"beta0": beta.beta0.tolist(), "beta1": beta.beta1.tolist()}


def load_homothety(profile: SymmetricProfile, data: Any) -> Homothety:
    _require(isinstance(data, dict), "homothety must be a JSON object")
    eps = int(data.get("eps", 1))
    _require(eps in (1, -1), "'eps' must be +1 or -1")
    beta = load_beta(profile, {"beta0": data.get("beta0", [0.0] * profile.n),
                               "beta1": data.get("beta1", [0.0] * profile.n)})
    A = data.get("A")
    try:
        return Homothety(profile,
                         b=float(data.get("b", 0.0)),
                         beta=beta,
                         c=float(data.get("c", 0.0)),
                         eps=eps,
                         A=None if A is None else np.asarray(A, float),
                         s=float(data.get("s", 0.0)))
    except CWError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed homothety data: {exc}") from exc


def dump_homothety(phi: Homothety) -> dict:
    return {"b": phi.b, "beta0": phi.beta.beta0.tolist(),
            "beta1": phi.beta.beta1.tolist(), "c": phi.c, "eps": phi.eps,
            "A": phi.A.tolist(), "s": phi.s}


def load_point(n: int, data: Any) -> Point:
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"point must be a numeric array: {exc}") from exc
    _require(a.shape == (n + 2,), f"point must have {n + 2} coordinates")
    return Point.from_array(a)


def dump_point(p: Point) -> list:
    return p.as_array().tolist()


def load_jet(n: int, data: Any) -> ScalarJet2:
    _require(isinstance(data, dict), "jet must be a JSON object")
    try:
        return ScalarJet2(float(data.get("value", 0.0)),
                          np.asarray(data.get("gradient", np.zeros(n + 2)), float),
                          np.asarray(data.get("hessian", np.zeros((n + 2, n + 2))),
                                     float))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed jet data: {exc}") from exc


def dump_bilinear(T: SymBilinear) -> list:
    return T.components.tolist()


def dump_tensor4(T: CurvatureTensor4) -> list:
    return T.components.tolist()


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
