# ====================================================================================================
# P08b_active_set_qp.py
# ----------------------------------------------------------------------------------------------------
# Dense primal active-set solver for the constrained OFO direction.
#
# Purpose:
#   - Solve  min_w ½ wᵀGw + gᵀw   s.t.  M w ≤ r
#     which is ‖w + G⁻¹g‖²_G up to a constant, with g = Hᵀ∇Φᵀ.
#   - Build M, r from the input constraints A(u + αw) ≤ b and the linearized output
#     constraints C(y + α∇h w) ≤ d.
#
# Problem sizes here are tiny (a handful of inputs and rows), so every iteration solves the
# full KKT system densely.
#
# ----------------------------------------------------------------------------------------------------
# Author:       Gerry Pidgeon
# Created:      2025-11-07
# Project:      OFO Compressor Tuner
# ====================================================================================================


# ====================================================================================================
# 1. SYSTEM IMPORTS
# ----------------------------------------------------------------------------------------------------
# Add parent directory to sys.path so this module can import other "processes" packages.
# ====================================================================================================
import sys
from pathlib import Path

# --- Standard block for all modules ---
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True  # Prevents __pycache__ folders from being created


# ====================================================================================================
# 2. PROJECT IMPORTS
# ----------------------------------------------------------------------------------------------------
# Bring in standard libraries and settings from the central import hub.
# ====================================================================================================
from processes.P00_set_packages import * # Imports all packages from P00_set_packages.py
from processes.P06_class_items import QpConfig, QpInfeasible, QpStalled

logger = logging.getLogger(__name__)


# ====================================================================================================
# 3. SOLVER
# ----------------------------------------------------------------------------------------------------
class ActiveSetSolver:
    """
    Primal active-set method for a strictly convex QP with inequality constraints.

    Starts from the unconstrained minimizer when it is feasible, otherwise from a feasible
    vertex found by a linear program (phase one). The working set only ever holds linearly
    independent rows, since a row becomes blocking only when it is not orthogonal to a step
    that lies in the null space of the current working set.
    """

    def __init__(self, G: np.ndarray, g: np.ndarray, M: np.ndarray, r: np.ndarray,
                 tol: float = 1e-10, max_iter: int = 200):
        self.G = np.atleast_2d(np.asarray(G, dtype=float))
        self.g = np.asarray(g, dtype=float).reshape(-1)
        p = self.G.shape[0]
        self.M = np.asarray(M, dtype=float).reshape(-1, p)
        self.r = np.asarray(r, dtype=float).reshape(-1)
        self.tol = tol
        self.max_iter = max_iter
        self.iterations = 0
        self.multipliers = np.zeros(self.M.shape[0])

    # --- Helpers ---
    def _violation(self, w: np.ndarray) -> np.ndarray:
        return self.M @ w - self.r

    def unconstrained(self) -> np.ndarray:
        return -sla.cho_solve(sla.cho_factor(self.G), self.g)

    def _phase_one(self) -> np.ndarray:
        p = self.G.shape[0]
        res = optimize.linprog(
            np.zeros(p), A_ub=self.M, b_ub=self.r, bounds=[(None, None)] * p, method="highs",
        )
        if res.status == 2:
            raise QpInfeasible("QP constraint set is empty")
        if res.status != 0:
            raise QpStalled(f"Phase-one linear program failed: {res.message}")
        return np.asarray(res.x, dtype=float)

    # --- Main loop ---
    def solve(self) -> np.ndarray:
        w = self.unconstrained()
        if self.M.shape[0] == 0 or np.all(self._violation(w) <= self.tol):
            return w

        w = self._phase_one()
        p = self.G.shape[0]
        working: List[int] = []

        for iteration in range(1, self.max_iter + 1):
            self.iterations = iteration
            n_w = len(working)
            Mw = self.M[working]
            kkt = np.zeros((p + n_w, p + n_w))
            kkt[:p, :p] = self.G
            kkt[:p, p:] = Mw.T
            kkt[p:, :p] = Mw
            rhs = np.concatenate([-(self.G @ w + self.g), np.zeros(n_w)])
            sol = np.linalg.solve(kkt, rhs)
            step, lam = sol[:p], sol[p:]

            if np.linalg.norm(step, np.inf) <= self.tol * max(1.0, np.linalg.norm(w, np.inf)):
                if n_w == 0 or np.min(lam) >= -self.tol:
                    self.multipliers = np.zeros(self.M.shape[0])
                    self.multipliers[working] = lam
                    logger.debug(f"Active-set QP converged in {self.iterations} iterations")
                    return w
                working.pop(int(np.argmin(lam)))
                continue

            # Blocking constraints along the step
            t_max, blocking = 1.0, None
            Mp = self.M @ step
            slack = self.r - self.M @ w
            for i in range(self.M.shape[0]):
                if i in working or Mp[i] <= self.tol:
                    continue
                t_i = max(slack[i], 0.0) / Mp[i]
                if t_i < t_max:
                    t_max, blocking = t_i, i

            w = w + t_max * step
            if blocking is not None:
                working.append(blocking)

        raise QpStalled(f"Active-set QP did not converge in {self.max_iter} iterations")


# ====================================================================================================
# 4. OFO DIRECTION
# ----------------------------------------------------------------------------------------------------
def qp_direction(u, y, grad: Tuple[Any, Any], sens_matrix, qp: QpConfig) -> Any:
    """
    Constrained OFO direction w*.

    Parameters:
        u           : current input (p,)                       [Nm]
        y           : current output (n,), same unit as C, d    [Pa]
        grad        : (∂Φ/∂u, ∂Φ/∂y) in the gradient unit
        sens_matrix : ∇h, shape (n, p)                         [Pa/Nm]
        qp          : α, G and the constraint sets

    Returns:
        w* with the same shape as u (float for a single input).

    Raises:
        QpInfeasible: empty constraint set.   QpStalled: iteration cap reached.
    """
    arrays = qp.arrays()
    G = arrays["G"]
    p = G.shape[0]

    u_vec = np.broadcast_to(np.asarray(u, dtype=float), (p,)).astype(float)
    S = np.atleast_2d(np.asarray(sens_matrix, dtype=float))
    if S.shape[1] != p:
        raise ValueError(f"Sensitivity must have {p} columns, got shape {S.shape}")
    y_vec = np.broadcast_to(np.asarray(y, dtype=float), (S.shape[0],))

    dphi_du = np.broadcast_to(np.asarray(grad[0], dtype=float), (p,))
    dphi_dy = np.broadcast_to(np.asarray(grad[1], dtype=float), (S.shape[0],))
    g = dphi_du + S.T @ dphi_dy

    rows, rhs = [], []
    if arrays["A"].size:
        rows.append(qp.alpha * arrays["A"])
        rhs.append(arrays["b"] - arrays["A"] @ u_vec)
    if arrays["C"].size:
        C = arrays["C"]
        rows.append(qp.alpha * C @ S)
        rhs.append(arrays["d"] - C @ y_vec)
    M = np.vstack(rows) if rows else np.zeros((0, p))
    r = np.concatenate(rhs) if rhs else np.zeros(0)

    w = ActiveSetSolver(G, g, M, r).solve()
    return float(w[0]) if np.ndim(u) == 0 and p == 1 else w
