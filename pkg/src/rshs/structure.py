"""Structural checks: symmetriser positivity, dissipativity and the Kawashima condition.

The Kawashima condition asks that no eigenvector of the flux Hessian relative
to the symmetriser lies in the kernel of the source Jacobian.  Eigenvalues are
repeated at equilibrium (isotropy), so the check works on whole eigenspaces:
for each cluster of (numerically) equal eigenvalues with symmetriser-orthonormal
basis ``V`` it takes the smallest singular value of ``V`` projected onto the
orthogonal complement of ``ker(DI)``.  A zero singular value means some
eigenvector lies in the kernel.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NumericalError, PreconditionError, StructuralError
from .potentials import hess_x0, hess_x_dir, source_jacobian
from .state import DISS, THETA, as_vector


class CheckResult(NamedTuple):
    value: float
    passed: bool | None


def symmetry_residual(H):
    """max over the batch of ||H - H^T|| / ||H||."""
    H = np.asarray(H)
    num = np.linalg.norm(H - np.swapaxes(H, -1, -2), axis=(-2, -1))
    den = np.linalg.norm(H, axis=(-2, -1))
    return float(np.max(num / np.where(den > 0, den, 1.0)))


def _require_valid(Y):
    if not np.all(Y[..., THETA] < 0.0):
        from .errors import DomainError

        raise DomainError("theta_t must be negative (theta > 0)")


def generalized_eigh(A, B, eigvals_only=False):
    """Solve A v = lam B v for symmetric A and SPD B by Cholesky congruence.

    Vectorised over leading axes.  Returns ascending eigenvalues and
    B-orthonormal eigenvectors (columns), or only the eigenvalues.
    """
    try:
        L = np.linalg.cholesky(B)
    except np.linalg.LinAlgError as exc:
        raise StructuralError(f"symmetriser is not positive definite: {exc}") from None
    n = A.shape[-1]
    eye = np.broadcast_to(np.eye(n), A.shape)
    try:
        Linv = np.linalg.solve(L, eye)
        C = Linv @ A @ np.swapaxes(Linv, -1, -2)
        C = 0.5 * (C + np.swapaxes(C, -1, -2))
        if eigvals_only:
            w, Z = np.linalg.eigvalsh(C), None
        else:
            w, Z = np.linalg.eigh(C)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigen-solve failed: {exc}") from None
    if not np.all(np.isfinite(w)):
        raise NumericalError("generalized eigenvalues are not finite")
    if eigvals_only:
        return w
    return w, np.swapaxes(Linv, -1, -2) @ Z


def check_spd(Y, eos, rp, tol=1e-10):
    """Smallest eigenvalue of the symmetriser; pass iff it exceeds ``tol * ||H0||``."""
    Y = as_vector(Y)
    _require_valid(Y)
    H = hess_x0(Y, eos, rp)
    try:
        w = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigvalsh failed on symmetriser: {exc}") from None
    min_eig = float(np.min(w))
    scale = float(np.max(np.linalg.norm(H, ord=2, axis=(-2, -1))))
    return CheckResult(min_eig, min_eig > tol * scale)


def characteristic_speeds(Y, n, eos, rp):
    """Sorted generalized eigenvalues of (D^2(n.X), D^2 X0); shape (..., 14)."""
    Y = as_vector(Y)
    _require_valid(Y)
    return generalized_eigh(hess_x_dir(Y, n, eos, rp), hess_x0(Y, eos, rp), eigvals_only=True)


def spectral_radius(Y, n, eos, rp):
    return np.max(np.abs(characteristic_speeds(Y, n, eos, rp)), axis=-1)


def is_equilibrium(Y, atol=1e-14):
    Y = as_vector(Y)
    return bool(np.all(np.abs(Y[..., DISS]) <= atol))


def _cluster(w, cluster_tol):
    radius = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    groups, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or (w[i] - w[i - 1]) > cluster_tol * radius:
            groups.append(np.arange(start, i))
            start = i
    return groups


def kernel_complement(DI, rank_rtol=1e-12):
    """Orthonormal basis (columns) of ker(DI)^perp, i.e. the row space of DI."""
    _, s, Vt = np.linalg.svd(DI)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > rank_rtol * smax)) if smax > 0 else 0
    return Vt[:r].T


def _cluster_margin(w, V, Q, cluster_tol):
    margin = np.inf
    for idx in _cluster(w, cluster_tol):
        P = Q.T @ V[:, idx]
        k = len(idx)
        smin = 0.0 if P.shape[0] < k else float(np.linalg.svd(P, compute_uv=False)[k - 1])
        margin = min(margin, smin)
    return float(margin)


def kawashima_margins(Y_eq, n, eos, rp, cluster_tol=1e-8, with_source=True):
    """Kawashima margins for a batch (m, 14) of equilibria in one direction.

    The Hessians and eigenproblems are batched; only the cluster projections
    loop over states.
    """
    Y = np.atleast_2d(as_vector(Y_eq))
    _require_valid(Y)
    if not is_equilibrium(Y):
        raise PreconditionError("kawashima_check requires an equilibrium state (Sigma = sigma = q = 0)")
    w, V = generalized_eigh(hess_x_dir(Y, n, eos, rp), hess_x0(Y, eos, rp))
    DI = source_jacobian(Y, rp) if with_source else np.zeros(Y.shape + (Y.shape[-1],))
    return np.array(
        [_cluster_margin(w[i], V[i], kernel_complement(DI[i]), cluster_tol) for i in range(len(Y))]
    )


def kawashima_check(Y_eq, n, eos, rp, cluster_tol=1e-8, rank_tol=1e-8, with_source=True):
    """Eigenspace-level Kawashima check at one equilibrium state and direction.

    Returns ``CheckResult(margin, passed)`` where ``margin`` is the smallest,
    over eigenvalue clusters, singular value of the cluster basis projected
    off ``ker(DI)``.  ``with_source=False`` replaces DI by the zero matrix.
    """
    Y = as_vector(Y_eq)
    if Y.ndim != 1:
        raise PreconditionError("kawashima_check takes a single state")
    margin = float(kawashima_margins(Y, n, eos, rp, cluster_tol, with_source)[0])
    return CheckResult(margin, bool(margin > rank_tol))


def check_dissipativity(Y, rp, tol=1e-12):
    """Largest eigenvalue of the symmetric part of DI.

    A verdict is given only at equilibrium; elsewhere ``passed`` is ``None``.
    """
    Y = as_vector(Y)
    _require_valid(Y)
    DI = source_jacobian(Y, rp)
    M = 0.5 * (DI + np.swapaxes(DI, -1, -2))
    mx = float(np.max(np.linalg.eigvalsh(M)))
    if not is_equilibrium(Y):
        return CheckResult(mx, None)
    return CheckResult(mx, mx <= tol)


@dataclass
class StructureReport:
    symmetry_residual: float
    min_eig_h0: float
    kawashima_margin: float
    dissipativity_max: float
    verdicts: dict = field(default_factory=dict)
    directions: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return all(v["pass"] for v in self.verdicts.values())

    def to_dict(self):
        d = asdict(self)
        d["all_passed"] = self.all_passed
        return d

    def table(self):
        lines = [f"{'check':<14} {'value':>14} {'tolerance':>12}  verdict"]
        for name, v in self.verdicts.items():
            lines.append(
                f"{name:<14} {v['value']:>14.6e} {v['tol']:>12.1e}  {'PASS' if v['pass'] else 'FAIL'}"
            )
        return "\n".join(lines)


def default_directions(rng, n_random=5):
    dirs = [np.eye(3)[i] for i in range(3)]
    for _ in range(n_random):
        v = rng.normal(size=3)
        dirs.append(v / np.linalg.norm(v))
    return dirs


def verify_structure(
    Y_eq,
    eos,
    rp,
    directions,
    with_source=True,
    sym_tol=1e-12,
    spd_tol=1e-10,
    cluster_tol=1e-8,
    rank_tol=1e-8,
):
    """Run every structural check at one equilibrium and collect a report."""
    Y = as_vector(Y_eq)
    H0 = hess_x0(Y, eos, rp)
    sym = symmetry_residual(H0)
    for n in directions:
        sym = max(sym, symmetry_residual(hess_x_dir(Y, n, eos, rp)))
    spd = check_spd(Y, eos, rp, tol=spd_tol)
    if with_source:
        diss = check_dissipativity(Y, rp)
    else:
        diss = CheckResult(0.0, True)
    margins = [
        kawashima_check(Y, n, eos, rp, cluster_tol, rank_tol, with_source).value
        for n in directions
    ]
    margin = float(min(margins))
    verdicts = {
        "symmetry": {"value": sym, "tol": sym_tol, "pass": sym <= sym_tol},
        "spd": {"value": spd.value, "tol": spd_tol, "pass": bool(spd.passed)},
        "dissipativity": {"value": diss.value, "tol": 1e-12, "pass": bool(diss.passed)},
        "kawashima": {"value": margin, "tol": rank_tol, "pass": margin > rank_tol},
    }
    return StructureReport(
        symmetry_residual=sym,
        min_eig_h0=spd.value,
        kawashima_margin=margin,
        dissipativity_max=diss.value,
        verdicts=verdicts,
        directions=[np.asarray(n).tolist() for n in directions],
        margins=margins,
        metadata={
            "source": "on" if with_source else "off",
            "cluster_tol": cluster_tol,
            "bulk_block_modulus": "tau2",
        },
    )
