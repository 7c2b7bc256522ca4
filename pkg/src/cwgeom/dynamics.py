"""Fixed points, essentiality, conjugation normal forms and the
obstructions to properly discontinuous cocompact actions.

Fixed-point logic for a strict homothety: a fixed point exists iff
eps = -1 or c = 0.  The point is assembled at the fixed time t* of the
induced Euclidean motion, inverting (e^s A - I) on the x-block and
solving the affine v-equation.  Essentiality of a strict homothety is
equivalent to having a fixed point; in the fixed-point-free case an
explicit rescaling function f with f(phi(p)) = f(p) - s is constructed
from a smooth partition of unity along the t-axis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .core import BetaSolution, Point, SymmetricProfile, beta_eval, beta_reparam, classify
from .errors import (
    PreconditionError,
    ResonanceError,
    UnsupportedCaseError,
)
from .group import (
    Homothety,
    apply,
    compose,
    conjugate,
    element_distance,
    identity,
    inverse,
    power,
    project,
)

PARAM_TOL = 1e-9
RESONANCE_TOL = 1e-7


@dataclass(frozen=True)
class FixedPointReport:
    exists: bool
    point: Optional[Point]
    reason: str  # strict_eps_minus1 | strict_c_zero | isometry_euclidean_fp
    #             | torsion_center_of_mass | none_translation
    residual: float = 0.0


def _verify(phi: Homothety, p: Point) -> float:
    q = apply(phi, p)
    return float(np.max(np.abs(q - p)))


def _solve_v(phi: Homothety, t_star: float, x_star: np.ndarray) -> Optional[float]:
    """Solve the affine v-equation v = eps(e^{2s} v + b - <beta'(t*),
    e^s A x* + beta(t*)/2>) for v; None if the map translates v."""
    val, der = beta_eval(phi.beta, t_star)
    d = phi.eps * (phi.b
                   - float(der @ (np.exp(phi.s) * (phi.A @ x_star) + 0.5 * val)))
    slope = phi.eps * np.exp(2 * phi.s)
    if abs(1.0 - slope) <= PARAM_TOL:
        return None if abs(d) > 1e-8 else 0.0
    return d / (1.0 - slope)


def fixed_point(phi: Homothety) -> FixedPointReport:
    """Fixed-point classification of a homothety.

    Strict case: a fixed point exists iff eps = -1 or c = 0, built
    explicitly at the fixed time of the Euclidean motion.  Isometry case:
    eps = -1 reduces to the affine solve (A - I) y = -beta(c/2); eps = +1
    needs c = 0 and a consistent affine system on the x-block plus a
    vanishing v-shift.
    """
    prof = phi.profile
    n = prof.n
    if phi.is_strict:
        if phi.eps == -1:
            t_star, reason = phi.c / 2.0, "strict_eps_minus1"
        elif abs(phi.c) <= PARAM_TOL:
            t_star, reason = 0.0, "strict_c_zero"
        else:
            return FixedPointReport(False, None, "none_translation")
        val, _ = beta_eval(phi.beta, t_star)
        M = np.exp(phi.s) * phi.A - np.eye(n)
        x_star = np.linalg.solve(M, -val)
        v_star = _solve_v(phi, t_star, x_star)
        p = Point(t_star, x_star, v_star)
        return FixedPointReport(True, p, reason, _verify(phi, p))
    # isometry
    if phi.eps == -1:
        t_star = phi.c / 2.0
        val, _ = beta_eval(phi.beta, t_star)
        M = phi.A - np.eye(n)
        y, res, _, _ = np.linalg.lstsq(M, -val, rcond=None)
        if float(np.max(np.abs(M @ y + val))) > 1e-8:
            return FixedPointReport(False, None, "none_translation")
        v_star = _solve_v(phi, t_star, y)
        p = Point(t_star, y, v_star)
        return FixedPointReport(True, p, "isometry_euclidean_fp", _verify(phi, p))
    if abs(phi.c) > PARAM_TOL:
        return FixedPointReport(False, None, "none_translation")
    # isometry, eps = +1, c = 0: solve x = A x + beta(0), then the v-shift
    # must vanish since v is otherwise translated
    val, _ = beta_eval(phi.beta, 0.0)
    M = phi.A - np.eye(n)
    y, _, _, _ = np.linalg.lstsq(M, -val, rcond=None)
    if float(np.max(np.abs(M @ y + val))) > 1e-8:
        return FixedPointReport(False, None, "none_translation")
    v_star = _solve_v(phi, 0.0, y)
    if v_star is None:
        return FixedPointReport(False, None, "none_translation")
    p = Point(0.0, y, v_star)
    res = _verify(phi, p)
    if res > 1e-8:
        return FixedPointReport(False, None, "none_translation")
    return FixedPointReport(True, p, "isometry_euclidean_fp", res)


def torsion_fixed_point(phi: Homothety, k: int) -> FixedPointReport:
    """Fixed point of a finite-order element via the centre of mass of a
    k-periodic orbit of the x-block affine action at the fixed time."""
    if k < 1:
        raise PreconditionError("order k must be a positive integer")
    if element_distance(power(phi, k), identity(phi.profile)) > 1e-6:
        raise PreconditionError(f"phi^{k} is not the identity")
    prof = phi.profile
    if phi.eps == -1:
        t_star = phi.c / 2.0
    elif abs(phi.c) <= PARAM_TOL:
        t_star = 0.0
    else:
        raise PreconditionError("a torsion element must have eps = -1 or c = 0")
    val, _ = beta_eval(phi.beta, t_star)
    F = np.exp(phi.s) * phi.A

    def step(x):
        return F @ x + val

    orbit = [np.zeros(prof.n)]
    for _ in range(k - 1):
        orbit.append(step(orbit[-1]))
    y = np.mean(orbit, axis=0)
    v_star = _solve_v(phi, t_star, y)
    p = Point(t_star, y, 0.0 if v_star is None else v_star)
    return FixedPointReport(True, p, "torsion_center_of_mass", _verify(phi, p))


def is_essential(phi: Homothety) -> bool:
    """A strict homothety is essential iff it fixes a point."""
    if not phi.is_strict:
        raise PreconditionError("essentiality criterion applies to strict homotheties only")
    return fixed_point(phi).exists


def _smooth_step(x):
    """C^infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)

    def h(u):
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = np.exp(-1.0 / u[pos])
        return out

    a = h(x)
    return a / (a + h(1.0 - x))


def _bump(tau):
    """Smooth bump with plateau [0, 1] and support (-1/4, 5/4)."""
    tau = np.asarray(tau, dtype=float)
    up = _smooth_step((tau + 0.25) / 0.25)
    down = _smooth_step((1.25 - tau) / 0.25)
    return up * down


def inessential_rescaling(phi: Homothety) -> Callable[[Point], float]:
    """Rescaling function for a fixed-point-free strict homothety.

    Returns a smooth f with f(apply(phi, p)) = f(p) - s for all p, so phi
    is an isometry of e^{2f} g_S.  Built from translates of a bump along
    the t-axis in units of c, normalized to a partition of unity.
    """
    if not phi.is_strict:
        raise PreconditionError("rescaling applies to strict homotheties only")
    if phi.eps != 1 or abs(phi.c) <= PARAM_TOL:
        raise PreconditionError("phi has a fixed point; no equivariant rescaling exists")
    s, c = phi.s, phi.c

    def f(p: Point) -> float:
        tau = p.t / c
        ks = np.arange(np.floor(tau) - 2, np.floor(tau) + 3)
        weights = _bump(tau - ks)
        return float(-s * (ks @ weights) / np.sum(weights))

    return f


def conjugation_block_matrix(eigenvalue: float, A_block: np.ndarray,
                             s: float, c: float) -> Tuple[np.ndarray, Callable]:
    """The 2d x 2d linear system, on one eigenspace of S, for the initial
    data of a solution of e^s A beta(t + c) - beta(t) = betahat(t).

    Returns (M, pack) where pack maps block rhs data (y0, y1) to the
    stacked right-hand side.
    """
    d = A_block.shape[0]
    I = np.eye(d)
    E = np.exp(s) * A_block
    if eigenvalue < 0:
        mu = np.sqrt(-eigenvalue)
        top = np.hstack([np.cos(mu * c) * E - I, (np.sin(mu * c) / mu) * E])
        bot = np.hstack([-mu * np.sin(mu * c) * E, np.cos(mu * c) * E - I])
    elif eigenvalue > 0:
        lam = np.sqrt(eigenvalue)
        top = np.hstack([np.cosh(lam * c) * E - I, (np.sinh(lam * c) / lam) * E])
        bot = np.hstack([lam * np.sinh(lam * c) * E, np.cosh(lam * c) * E - I])
    else:
        top = np.hstack([E - I, c * E])
        bot = np.hstack([np.zeros((d, d)), E - I])
    M = np.vstack([top, bot])

    def pack(y0, y1):
        return np.concatenate([y0, y1])

    return M, pack


def block_determinant(eigenvalue: float, s: float, c: float) -> float:
    """Determinant of the scalar (A = 1, d = 1) conjugation block; vanishes
    exactly at the resonance s = +-lambda c for positive eigenvalues."""
    M, _ = conjugation_block_matrix(eigenvalue, np.eye(1), s, c)
    return float(np.linalg.det(M))


def solve_conjugation_beta(profile: SymmetricProfile, A, s: float, c: float,
                           betahat: BetaSolution) -> BetaSolution:
    """Solve e^s A beta(t + c) - beta(t) = betahat(t) for beta.

    The system decouples over the eigenspaces of S into 2d x 2d blocks.
    Solvable for s != 0 unless (s/c)^2 equals a positive eigenvalue of S,
    in which case a resonance error is raised.
    """
    A = profile.require_centraliser(A)
    if abs(s) <= PARAM_TOL:
        raise PreconditionError("conjugation solve requires a strict homothety (s != 0)")
    if abs(c) > PARAM_TOL:
        ratio_sq = (s / c) ** 2
        for blk in profile.spectrum:
            lam_sq = blk.eigenvalue
            if lam_sq > 0 and abs(ratio_sq - lam_sq) <= RESONANCE_TOL * max(1.0, lam_sq):
                raise ResonanceError(
                    f"(s/c)^2 = {ratio_sq:.6g} hits the eigenvalue {lam_sq:.6g} of S"
                )
    b0 = np.zeros(profile.n)
    b1 = np.zeros(profile.n)
    for blk in profile.spectrum:
        Q = blk.basis
        A_block = Q.T @ A @ Q
        y0 = Q.T @ betahat.beta0
        y1 = Q.T @ betahat.beta1
        M, pack = conjugation_block_matrix(blk.eigenvalue, A_block, s, c)
        try:
            sol = np.linalg.solve(M, pack(y0, y1))
        except np.linalg.LinAlgError as exc:
            raise ResonanceError(f"singular conjugation block: {exc}") from exc
        d = blk.multiplicity
        b0 += Q @ sol[:d]
        b1 += Q @ sol[d:]
    return BetaSolution(profile, b0, b1)


@dataclass(frozen=True)
class NormalFormResult:
    conjugator: Homothety
    normal: Homothety
    residual: float


def normal_form(phi: Homothety) -> NormalFormResult:
    """Conjugate a non-resonant strict homothety with eps = +1 into
    E(1) x C_O(n)(S) x R, by an isometry from Hei_n extended by the
    reflection (t, x, v) -> (-t, x, -v) to force c >= 0.

    The beta-part is removed by solving the conjugation linear system,
    the central parameter by exploiting that conjugation by a central
    element scales it with slope 1 - e^{2s}.
    """
    prof = phi.profile
    if not phi.is_strict:
        raise PreconditionError("normal form applies to strict homotheties")
    if phi.eps != 1:
        raise UnsupportedCaseError("normal form requires eps = +1")
    # chi has x-part x + beta_chi(t); chi^{-1} phi chi removes beta when
    # beta_chi(t + c) - e^s A beta_chi(t) = beta(t), i.e. the solver
    # equation with shift -c and right-hand side -beta(. - c)
    rhs = beta_reparam(phi.beta, -phi.c, 1)
    rhs = BetaSolution(prof, -rhs.beta0, -rhs.beta1)
    beta_chi = solve_conjugation_beta(prof, phi.A, phi.s, -phi.c, rhs)
    chi = Homothety(prof, beta=beta_chi)
    g = inverse(chi)
    current = conjugate(g, phi)
    # central conjugation is affine in the centre parameter; probe the slope
    probe = conjugate(Homothety(prof, b=1.0), current)
    slope = probe.b - current.b
    if abs(slope) <= PARAM_TOL:
        raise PreconditionError("cannot normalize the central parameter (s = 0?)")
    b0 = -current.b / slope
    g = compose(Homothety(prof, b=b0), g)
    current = conjugate(Homothety(prof, b=b0), current)
    if current.c < 0:
        refl = Homothety(prof, eps=-1)
        g = compose(refl, g)
        current = conjugate(refl, current)
    residual = max(abs(current.b),
                   float(np.max(np.abs(current.beta.beta0))),
                   float(np.max(np.abs(current.beta.beta1))))
    clean = replace(current, b=0.0, beta=BetaSolution(prof))
    return NormalFormResult(g, clean, residual)


@dataclass(frozen=True)
class OrbitReport:
    points: List[Point]
    limit: Point
    converged: bool
    rate: Optional[float]


def orbit_obstruction_sequence(gamma: Homothety, phi: Homothety,
                               K: int = 60, threshold: float = 1e-6) -> OrbitReport:
    """The sequence y_k = gamma^{-k} phi gamma^k (0) and its convergence
    to (c_phi, 0, 0), the obstruction to proper discontinuity.

    gamma must lie in E(1) x C_O(n)(S) x R (no Heisenberg part, eps = +1).
    The report fits a geometric decay rate to the x-block norms.
    """
    if gamma.eps != 1 or abs(gamma.b) > PARAM_TOL or not gamma.beta.is_zero():
        raise PreconditionError("gamma must lie in E(1) x C_O(n)(S) x R")
    prof = phi.profile
    origin = Point(0.0, np.zeros(prof.n), 0.0)
    ginv = inverse(gamma)
    current = phi
    pts = []
    for _ in range(K):
        current = compose(ginv, compose(current, gamma)).renormalized()
        pts.append(apply(current, origin))
    limit = Point(phi.c, np.zeros(prof.n), 0.0)
    converged = float(np.max(np.abs(pts[-1] - limit))) <= threshold
    norms = np.array([np.linalg.norm(p.x) for p in pts])
    rate = None
    # estimate the decay rate on the tail only, past any transient; the
    # x-norms oscillate under the rotational part, so compare arithmetic
    # means of two windows rather than fitting the noisy log-norms
    tail = norms[K // 3:]
    if tail.size >= 10 and np.all(tail < np.inf):
        half = tail.size // 2
        m1, m2 = float(np.mean(tail[:half])), float(np.mean(tail[half:]))
        if m1 > 1e-300 and m2 > 1e-300:
            rate = float((m2 / m1) ** (1.0 / half))
    return OrbitReport(pts, limit, converged, rate)


@dataclass(frozen=True)
class PDObstruction:
    word: Tuple[int, ...]
    kind: str  # fixed-point | inequality | imaginary-strict
    detail: str


@dataclass(frozen=True)
class PDReport:
    space_type: str
    lambda_max_sq: Optional[float]
    obstructions: List[PDObstruction]
    words_checked: int

    @property
    def clean(self) -> bool:
        return not self.obstructions


def pd_necessary_report(generators: Sequence[Homothety],
                        max_length: int = 3) -> PDReport:
    """Necessary-condition sweep for a properly discontinuous cocompact
    action of the group generated by the given elements.

    Each word up to the given length (letters are generators and their
    inverses) is checked: a strict element with eps = -1 or c = 0 has a
    fixed point; on a space with positive eigenvalues a strict element
    must satisfy (s/c)^2 <= lambda_max^2; on an imaginary-type space
    every strict element is an obstruction outright.
    """
    prof = generators[0].profile
    cls = classify(prof)
    letters = []
    for i, g in enumerate(generators):
        letters.append((i + 1, g))
        letters.append((-(i + 1), inverse(g)))
    obstructions = []
    seen = 0
    for length in range(1, max_length + 1):
        for combo in itertools.product(letters, repeat=length):
            word = tuple(idx for idx, _ in combo)
            # skip words with an adjacent cancelling pair
            if any(word[i] == -word[i + 1] for i in range(length - 1)):
                continue
            elem = identity(prof)
            for _, g in combo:
                elem = compose(elem, g)
            elem = elem.renormalized()
            seen += 1
            if not elem.is_strict:
                continue
            if elem.eps == -1 or abs(elem.c) <= PARAM_TOL:
                obstructions.append(PDObstruction(
                    word, "fixed-point",
                    f"strict element with eps={elem.eps}, c={elem.c:.3g} fixes a point"))
                continue
            if cls.type == "imaginary":
                obstructions.append(PDObstruction(
                    word, "imaginary-strict",
                    "imaginary type admits no strict homothety in a PD cocompact group"))
                continue
            if cls.lambda_max_sq is not None:
                ratio_sq = (elem.s / elem.c) ** 2
                if ratio_sq > cls.lambda_max_sq + 1e-12:
                    obstructions.append(PDObstruction(
                        word, "inequality",
                        f"(s/c)^2 = {ratio_sq:.6g} exceeds lambda_max^2 = "
                        f"{cls.lambda_max_sq:.6g}"))
    return PDReport(cls.type, cls.lambda_max_sq, obstructions, seen)


@dataclass(frozen=True)
class CentraliserDemoReport:
    injective: bool
    c_values: List[float]
    orbit_norms: List[float]
    convergence_consistent: bool


def centraliser_projection_demo(eta: Homothety,
                                gammas: Sequence[Homothety]) -> CentraliserDemoReport:
    """Numerical content of the projection argument: on the centraliser of
    a strict origin-fixing homothety eta, the quotient projection
    (c, eps, A, s) is injective, and c_n -> 0 forces gamma_n(0) -> 0."""
    if not eta.is_strict or eta.eps != 1:
        raise PreconditionError("eta must be a strict homothety with eps = +1")
    origin = Point(0.0, np.zeros(eta.profile.n), 0.0)
    if float(np.max(np.abs(apply(eta, origin) - origin))) > 1e-8:
        raise PreconditionError("eta must fix the origin")
    for g in gammas:
        if element_distance(compose(g, eta), compose(eta, g)) > 1e-7:
            raise PreconditionError("all supplied elements must centralise eta")
    # injectivity: distinct elements have distinct projections
    injective = True
    for i in range(len(gammas)):
        for j in range(i + 1, len(gammas)):
            gi, gj = gammas[i], gammas[j]
            if element_distance(gi, gj) > 1e-7:
                ci, ei, Ai, si = project(gi)
                cj, ej, Aj, sj = project(gj)
                same_proj = (ei == ej and abs(ci - cj) <= 1e-9
                             and abs(si - sj) <= 1e-9
                             and float(np.max(np.abs(Ai - Aj))) <= 1e-9)
                if same_proj:
                    injective = False
    cs = [abs(g.c) for g in gammas]
    norms = [float(np.linalg.norm(apply(g, origin).as_array())) for g in gammas]
    # if the c-sequence decays, the orbit points must decay with it
    consistent = True
    if len(cs) >= 2 and cs[-1] < 0.1 * max(cs[0], 1e-30):
        consistent = norms[-1] <= 10 * max(cs[-1], 1e-12) + 1e-9
    return CentraliserDemoReport(injective, cs, norms, consistent)
