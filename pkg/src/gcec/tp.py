"""Trace-preservation solving over a covariant CP-map family.

Coefficients c over the kernel basis determine Kraus operators A_k(c) and
the Hermitian form Xi(c) = sum_k A_k(c)^dag A_k(c); a channel needs
Xi(c) = identity.  Every entry of Xi is a Hermitian quadratic form
Xi_pq(c) = c^dag M^(pq) c, which drives a three-stage strategy:

1. Certificates.  If the vertical stack of the A_k never reaches column
   rank d anywhere on the family (generic rank < d), or the diagonal
   constraints are infeasible over moduli, no solution exists.
2. Linear path.  When the diagonal forms M^(pp) commute they share an
   eigenbasis; in those decoupled coordinates u the diagonal constraints
   read R t = 1 with t_j = |u_j|^2, a linear-programming problem.  If the
   off-diagonal forms vanish structurally the phases of u stay free and the
   LP describes the full solution set.
3. Fallback.  Otherwise multi-start damped least squares on
   ||Xi(c) - 1||_F^2 from seeded random starts; failure to converge is
   reported as such, not as proof of infeasibility.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, linprog

from .errors import EmptyManifold
from .kernels import KernelFamily, vec_to_kraus

DEFAULT_TOL_TP = 1e-10
MAX_SOLUTIONS = 8

_STRUCT_TOL = 1e-12  # structural-zero decision for quadratic-form tensors
_DIAG_TOL = 1e-10  # joint-diagonalization verification
_CERT_SEED = 0x5EED  # fixed seed: certificates must not depend on user seed


@dataclass
class TpSolveReport:
    """Outcome of a trace-preservation solve.

    ``solutions`` are coefficient vectors over the family's kernel basis;
    when the linear path applies, ``decoupling`` maps decoupled coordinates
    u to those coefficients (c = decoupling @ u) and ``moduli_rows`` holds
    R with R @ |u|^2 = 1.  ``free_phase`` marks families whose constraint
    depends on moduli only, leaving every phase of u free.
    """

    status: str  # "solved" | "no_solution" | "solver_failed"
    xi_diagonal: bool
    solutions: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    moduli_rows: np.ndarray | None = None
    moduli_constraints: list = field(default_factory=list)
    decoupling: np.ndarray | None = None
    free_phase: bool = False
    detail: str = ""


def xi_of(coeffs, family: KernelFamily) -> np.ndarray:
    """Xi(c) = sum_k A_k(c)^dag A_k(c) for coefficients over the basis."""
    kraus = family.kraus_at(np.asarray(coeffs, dtype=complex))
    return sum(m.conj().T @ m for m in kraus)


def xi_forms(family: KernelFamily) -> np.ndarray:
    """Coefficient tensor F with Xi_pq(c) = c^dag F[p, q] c, shape (d,d,n,n)."""
    n, d = family.n_params, family.d
    kraus_basis = [vec_to_kraus(family.basis[:, j], family.K, d) for j in range(n)]
    forms = np.zeros((d, d, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            forms[:, :, i, j] = sum(
                a.conj().T @ b for a, b in zip(kraus_basis[i], kraus_basis[j])
            )
    return forms


def diagonal_structure(family: KernelFamily) -> bool:
    """True iff every off-diagonal entry of Xi is identically zero in c."""
    if family.n_params == 0:
        return True
    return _offdiag_vanishes(xi_forms(family))


def _offdiag_vanishes(forms: np.ndarray) -> bool:
    d = forms.shape[0]
    mask = ~np.eye(d, dtype=bool)
    scale = max(1.0, float(np.abs(forms).max()))
    return float(np.abs(forms[mask]).max()) <= _STRUCT_TOL * scale


def _gauge_phase(c: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first significant entry is real > 0."""
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c
    lead = int(np.argmax(mags > 1e-8 * top))
    return c * np.exp(-1j * np.angle(c[lead]))


def _solution_key(c: np.ndarray) -> bytes:
    return (np.round(np.asarray(c), 9) + 0.0).tobytes()


def _generic_stack_rank(family: KernelFamily, tries: int = 3) -> int:
    """Max over random coefficients of rank of the stacked (K d, d) operator.

    Rank is lower-semicontinuous, so a random point attains the family's
    maximal rank almost surely; below d this certifies that Xi(c) = 1 (an
    isometry condition on the stack) has no solution.
    """
    rng = np.random.default_rng(_CERT_SEED)
    n = family.n_params
    best = 0
    for _ in range(tries):
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        stack = np.vstack(family.kraus_at(c))
        svals = np.linalg.svd(stack, compute_uv=False)
        if svals[0] > 0.0:
            best = max(best, int(np.sum(svals > 1e-10 * svals[0])))
    return best


def _joint_diagonalizer(diag_forms: list[np.ndarray]) -> np.ndarray | None:
    """Common eigenbasis of commuting Hermitian forms, or None."""
    n = diag_forms[0].shape[0]
    if n == 1:
        return np.eye(1, dtype=complex)
    scale = max(1.0, max(float(np.abs(m).max()) for m in diag_forms))
    for a in range(len(diag_forms)):
        for b in range(a + 1, len(diag_forms)):
            comm = diag_forms[a] @ diag_forms[b] - diag_forms[b] @ diag_forms[a]
            if float(np.abs(comm).max()) > _DIAG_TOL * scale * scale:
                return None
    rng = np.random.default_rng(_CERT_SEED)
    for _ in range(3):
        weights = rng.uniform(0.5, 1.5, len(diag_forms))
        combo = sum(w * m for w, m in zip(weights, diag_forms))
        _, vecs = np.linalg.eigh(combo)
        ok = all(
            float(
                np.abs(
                    (vecs.conj().T @ m @ vecs)[~np.eye(n, dtype=bool)]
                ).max()
            )
            <= _DIAG_TOL * scale
            for m in diag_forms
        )
        if ok:
            return vecs
    return None


def _order_decoupled(basis: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Permute/phase the decoupled transform so columns of basis @ W are
    ordered by their first significant entry and lead with a positive real."""
    B = basis @ W
    leads, phases = [], []
    for j in range(B.shape[1]):
        col = B[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            leads.append(B.shape[0])
            phases.append(1.0 + 0j)
            continue
        lead = int(np.argmax(mags > 1e-8 * top))
        leads.append(lead)
        phases.append(col[lead] / abs(col[lead]))
    order = sorted(range(B.shape[1]), key=lambda j: (leads[j], j))
    out = W[:, order].copy()
    for pos, j in enumerate(order):
        out[:, pos] = out[:, pos] * np.conj(phases[j])
    return out


def _moduli_rows(forms: np.ndarray, W: np.ndarray) -> np.ndarray:
    d, n = forms.shape[0], W.shape[1]
    R = np.zeros((d, n))
    for p in range(d):
        diag = np.real(np.diag(W.conj().T @ forms[p, p] @ W)).copy()
        diag[np.abs(diag) <= 1e-12 * max(1.0, float(np.abs(diag).max()))] = 0.0
        R[p] = np.clip(diag, 0.0, None)
    return R


def _constraint_strings(R: np.ndarray) -> list[str]:
    seen: list[str] = []
    for row in R:
        terms = [
            f"{val:.6g}|u{j + 1}|^2" for j, val in enumerate(row) if val != 0.0
        ]
        text = (" + ".join(terms) if terms else "0") + " = 1"
        if text not in seen:
            seen.append(text)
    return seen


def _vertex(R: np.ndarray, cost: np.ndarray):
    res = linprog(
        cost,
        A_eq=R,
        b_eq=np.ones(R.shape[0]),
        bounds=[(0.0, None)] * R.shape[1],
        method="highs",
    )
    if res.status == 2:
        return "infeasible"
    if res.status == 0:
        return np.clip(res.x, 0.0, None)
    return None


def _coeff_from_moduli(W: np.ndarray, t: np.ndarray, phases=None) -> np.ndarray:
    u = np.sqrt(np.clip(t, 0.0, None)).astype(complex)
    if phases is not None:
        u = u * np.exp(1j * phases)
    return _gauge_phase(W @ u)


def solve_tp(
    family: KernelFamily,
    tol_tp: float = DEFAULT_TOL_TP,
    n_starts: int = 64,
    seed=0,
    deadline: float | None = None,
) -> TpSolveReport:
    """Find trace-preserving points of the family, with certificates.

    ``deadline`` is an absolute ``time.perf_counter`` value after which the
    fallback stops issuing new starts (statuses stay deterministic for runs
    that do not hit it).
    """
    n, d = family.n_params, family.d
    if n == 0:
        return TpSolveReport(
            status="no_solution",
            xi_diagonal=True,
            detail="empty family: only the zero map is covariant",
        )

    if _generic_stack_rank(family) < d:
        return TpSolveReport(
            status="no_solution",
            xi_diagonal=diagonal_structure(family),
            detail="stacked Kraus operator is rank deficient on the whole family",
        )

    forms = xi_forms(family)
    diag_ok = _offdiag_vanishes(forms)
    diag_forms = [forms[p, p] for p in range(d)]
    W = _joint_diagonalizer(diag_forms)
    rng = np.random.default_rng(seed)

    if W is not None:
        W = _order_decoupled(family.basis, W)
        R = _moduli_rows(forms, W)
        report = _linear_path(family, forms, diag_ok, W, R, tol_tp, rng)
        if report is not None:
            return report
        # canonical moduli point failed the full residual: constraints are
        # genuinely quadratic in phases, handled below

    return _nonlinear_path(family, diag_ok, tol_tp, n_starts, rng, deadline)


def _linear_path(family, forms, diag_ok, W, R, tol_tp, rng):
    d, n = family.d, family.n_params
    if np.any(R.sum(axis=1) == 0.0):
        return TpSolveReport(
            status="no_solution",
            xi_diagonal=diag_ok,
            moduli_rows=R,
            moduli_constraints=_constraint_strings(R),
            decoupling=W,
            detail="a diagonal entry of Xi is identically zero",
        )
    canonical = _vertex(R, np.arange(1.0, n + 1.0))
    if isinstance(canonical, str):  # infeasible
        return TpSolveReport(
            status="no_solution",
            xi_diagonal=diag_ok,
            moduli_rows=R,
            moduli_constraints=_constraint_strings(R),
            decoupling=W,
            detail="diagonal moduli constraints are infeasible",
        )
    if canonical is None:
        return None
    c0 = _coeff_from_moduli(W, canonical)
    r0 = float(np.linalg.norm(xi_of(c0, family) - np.eye(d)))
    if r0 > tol_tp:
        return None

    solutions, residuals = [c0], [r0]
    keys = {_solution_key(c0)}
    vertices = [canonical]
    for _ in range(6):
        v = _vertex(R, rng.uniform(0.1, 1.0, n))
        if isinstance(v, np.ndarray) and not any(
            np.allclose(v, known, atol=1e-9) for known in vertices
        ):
            vertices.append(v)
    attempts = 0
    while len(solutions) < MAX_SOLUTIONS and attempts < 8 * MAX_SOLUTIONS:
        attempts += 1
        weights = rng.random(len(vertices))
        weights /= weights.sum()
        t = sum(w * v for w, v in zip(weights, vertices))
        phases = rng.uniform(0.0, 2.0 * np.pi, n)
        c = _coeff_from_moduli(W, t, phases)
        r = float(np.linalg.norm(xi_of(c, family) - np.eye(d)))
        if r > tol_tp:
            continue
        key = _solution_key(c)
        if key not in keys:
            keys.add(key)
            solutions.append(c)
            residuals.append(r)
    return TpSolveReport(
        status="solved",
        xi_diagonal=diag_ok,
        solutions=solutions,
        residuals=residuals,
        moduli_rows=R,
        moduli_constraints=_constraint_strings(R),
        decoupling=W,
        free_phase=diag_ok,
        detail="moduli linear program" + ("" if diag_ok else " + residual check"),
    )


def _project(c: np.ndarray, family: KernelFamily, max_iter: int = 60):
    """Pull a point onto the trace-preserving set by alternating between the
    nearest isometry (polar factor of the stacked Kraus matrix) and the kernel
    span.  Unlike damped least squares, each step is an explicit well-
    conditioned map, so the landing point is a stable function of the start —
    important where the solution set has flat directions, along which an
    iterative solver's endpoint is exquisitely sensitive to rounding noise."""
    eye = np.eye(family.d)
    best_c = c
    best_r = float(np.linalg.norm(xi_of(c, family) - eye))
    for _ in range(max_iter):
        u, _, vh = np.linalg.svd(np.vstack(family.kraus_at(c)), full_matrices=False)
        c = family.basis.conj().T @ (u @ vh).reshape(-1)
        r = float(np.linalg.norm(xi_of(c, family) - eye))
        if r < best_r:
            best_c, best_r = c, r
        elif r > 2.0 * best_r:
            break
        if r <= 1e-14:
            break
    return best_c, best_r


def _polish(c: np.ndarray, family: KernelFamily, tol_tp: float):
    """Sharpen a near-solution: the gauge freedom makes the LM Jacobian
    singular, stalling it near sqrt(eps); alternating projection between the
    isometry manifold (polar factor) and the family span finishes the job."""
    r = float(np.linalg.norm(xi_of(c, family) - np.eye(family.d)))
    if r > 1e4 * tol_tp:
        return c, r
    return _project(c, family, max_iter=25)


def _snap(c: np.ndarray, family: KernelFamily, tol_tp: float):
    """Round a solution onto a coarse lattice and re-polish.  Repeated runs
    then agree bitwise even if the optimizer's last few ulps differ."""
    c = np.round(_gauge_phase(c), 8) + (0.0 + 0.0j)
    c, r = _polish(c, family, tol_tp)
    return _gauge_phase(c), r


def _nonlinear_path(family, diag_ok, tol_tp, n_starts, rng, deadline):
    n, d = family.n_params, family.d
    eye = np.eye(d)

    def residual_vec(x):
        xi = xi_of(x[:n] + 1j * x[n:], family) - eye
        return np.concatenate([xi.real.reshape(-1), xi.imag.reshape(-1)])

    method = "lm" if 2 * d * d >= 2 * n else "trf"
    solutions, residuals = [], []
    keys = set()
    timed_out = False
    for _ in range(n_starts):
        if deadline is not None and time.perf_counter() > deadline:
            timed_out = True
            break
        x0 = rng.standard_normal(2 * n)
        c, r = _project(x0[:n] + 1j * x0[n:], family)
        if r > tol_tp:
            try:
                fit = least_squares(
                    residual_vec, x0, method=method, xtol=1e-14, ftol=1e-14, max_nfev=4000
                )
            except Exception:  # pragma: no cover - solver hiccups are skippable
                continue
            c, r = _polish(fit.x[:n] + 1j * fit.x[n:], family, tol_tp)
        if r <= tol_tp:
            c, r = _snap(c, family, tol_tp)
        if r <= tol_tp:
            key = _solution_key(c)
            if key not in keys:
                keys.add(key)
                solutions.append(c)
                residuals.append(r)
            if len(solutions) >= MAX_SOLUTIONS:
                break
    if solutions:
        return TpSolveReport(
            status="solved",
            xi_diagonal=diag_ok,
            solutions=solutions,
            residuals=residuals,
            detail="multi-start projection and least squares",
        )
    return TpSolveReport(
        status="solver_failed",
        xi_diagonal=diag_ok,
        detail="no start converged"
        + (" before the time budget expired" if timed_out else "")
        + "; existence undecided",
    )


def solution_sampler(family: KernelFamily, report: TpSolveReport, tol_tp: float = DEFAULT_TOL_TP):
    """Build ``sampler(rng, count) -> list of coefficient vectors`` over the
    trace-preserving set described by a solved report."""
    if report.status != "solved" or not report.solutions:
        raise EmptyManifold("family has no known trace-preserving points")
    d, n = family.d, family.n_params

    if report.moduli_rows is not None and report.free_phase:
        R, W = report.moduli_rows, report.decoupling

        def sampler(rng: np.random.Generator, count: int) -> list[np.ndarray]:
            vertices = []
            for _ in range(max(6, count // 2)):
                v = _vertex(R, rng.uniform(0.1, 1.0, n))
                if isinstance(v, np.ndarray):
                    vertices.append(v)
            if not vertices:
                vertices = [np.abs(np.asarray(report.solutions[0])) ** 2]
            out = []
            while len(out) < count:
                weights = rng.random(len(vertices))
                weights /= weights.sum()
                t = sum(w * v for w, v in zip(weights, vertices))
                out.append(_coeff_from_moduli(W, t, rng.uniform(0.0, 2.0 * np.pi, n)))
            return out

        return sampler

    base = [np.asarray(c, dtype=complex) for c in report.solutions]

    def sampler(rng: np.random.Generator, count: int) -> list[np.ndarray]:
        eye = np.eye(d)

        def residual_vec(x):
            xi = xi_of(x[:n] + 1j * x[n:], family) - eye
            return np.concatenate([xi.real.reshape(-1), xi.imag.reshape(-1)])

        method = "lm" if 2 * d * d >= 2 * n else "trf"
        out: list[np.ndarray] = []
        attempts = 0
        while len(out) < count and attempts < 10 * count:
            attempts += 1
            c = base[attempts % len(base)]
            x0 = np.concatenate([c.real, c.imag]) + 0.2 * rng.standard_normal(2 * n)
            cc, rr = _project(x0[:n] + 1j * x0[n:], family)
            if rr > tol_tp:
                try:
                    fit = least_squares(
                        residual_vec, x0, method=method, xtol=1e-14, ftol=1e-14, max_nfev=4000
                    )
                except Exception:  # pragma: no cover
                    continue
                cc, rr = _polish(fit.x[:n] + 1j * fit.x[n:], family, tol_tp)
            if rr <= tol_tp:
                out.append(_gauge_phase(cc))
        if not out:
            raise EmptyManifold("could not re-converge onto the solution set")
        return out

    return sampler
