"""Douglas-Rachford iteration for the wavelet feasibility problem.

The problem lives on a product of r copies of the ensemble space.  The
diagonal subspace D meets the product C of the individual constraint sets
exactly at the constant tuples whose common value satisfies every
constraint at once, so a point of C intersect D is a solved filter
ensemble.  Each step applies the Douglas-Rachford operator with A = D and
B = C; the monitored quantity is the distance of the constraint-projected
iterate from the diagonal, and the reported solution is its diagonal
average.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .ensembles import Ensemble, symmetrize
from .projectors import build_problem, project_constraints, project_diagonal

logger = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    """Parameters of one solve run.

    max_iters of zero selects the standard cutoff for the grid order:
    10000 when eta is 4, 300000 otherwise.
    """

    eta: int = 4
    mu: int = 1
    symmetric: bool = False
    tol: float = 1e-9
    max_iters: int = 0
    seed: int = 0
    log_every: int = 0

    def __post_init__(self):
        if self.eta % 2 != 0 or self.eta < 4:
            raise ValueError(
                "grid order must be an even integer >= 4, got %r"
                % (self.eta,))
        if self.mu < 1:
            raise ValueError("moment order must be >= 1, got %r"
                             % (self.mu,))
        if not self.tol > 0:
            raise ValueError("tolerance must be positive, got %r"
                             % (self.tol,))
        if self.max_iters == 0:
            self.max_iters = 10000 if self.eta == 4 else 300000
        if self.max_iters < 1:
            raise ValueError("iteration cutoff must be >= 1, got %r"
                             % (self.max_iters,))


@dataclass
class SolverReport:
    """Outcome of a solve run.

    residual_history holds one (iteration, dr_err, shadow_err) triple per
    step, where dr_err is the step length of the main sequence and
    shadow_err the step length of the constraint-projected sequence.
    solution is the diagonal average of the final constraint projection
    when solved, else None.
    """

    solved: bool
    iterations: int
    final_residual: float
    residual_history: list = field(default_factory=list)
    solution: Ensemble = None


def random_start(config):
    """Draw a consistent random ensemble and replicate it over the product.

    Every stored component is drawn i.i.d. uniform on [-1, 1], then the
    draw is symmetrized so the iteration starts inside the consistency
    subspace.  Deterministic for a fixed seed.
    """
    problem = build_problem(config.eta, config.mu, config.symmetric)
    rng = np.random.default_rng(config.seed)
    shape = (config.eta, config.eta, 8, 8)
    raw = rng.uniform(-1.0, 1.0, size=shape) \
        + 1j * rng.uniform(-1.0, 1.0, size=shape)
    start = symmetrize(raw)
    return (start,) * problem.r


def _tuple_diff_norm(a, b):
    total = 0.0
    for u, v in zip(a, b):
        d = u.code - v.code
        total += np.vdot(d, d).real
    return math.sqrt(total)


def dr_step(x, problem):
    """One Douglas-Rachford step; returns the new iterate and the shadow.

    The shadow is the diagonal projection of the incoming iterate, i.e.
    the tuple of candidate solutions before the constraint reflection.
    """
    p = project_diagonal(x)
    reflected = tuple(Ensemble(2.0 * pc.code - xc.code)
                      for pc, xc in zip(p, x))
    q = project_constraints(reflected, problem)
    x_next = tuple(Ensemble(xc.code + qc.code - pc.code)
                   for xc, qc, pc in zip(x, q, p))
    return x_next, p


def constraint_residuals(U, problem):
    """Distance of an ensemble to each constraint set of the problem.

    Returns a dict keyed by constraint label; each value is the norm of
    the displacement produced by the corresponding projector.
    """
    out = {}
    for i, label in enumerate(problem.labels):
        moved = problem.project(i, U)
        d = moved.code - U.code
        out[label] = math.sqrt(np.vdot(d, d).real)
    return out


def solve(config):
    """Run the iteration until the stopping criterion or the cutoff.

    The criterion is the distance of the constraint-projected iterate
    from the diagonal subspace; once it drops below the tolerance the
    diagonal average of that projection is returned as the solution.
    """
    problem = build_problem(config.eta, config.mu, config.symmetric)
    x = random_start(config)
    y_prev = project_constraints(x, problem)
    history = []
    solved = False
    solution = None
    stop = math.inf
    n = 0
    for n in range(1, config.max_iters + 1):
        x_next, _ = dr_step(x, problem)
        y = project_constraints(x_next, problem)
        mean_code = sum(c.code for c in y) / float(problem.r)
        stop = math.sqrt(sum(np.vdot(c.code - mean_code,
                                     c.code - mean_code).real for c in y))
        dr_err = _tuple_diff_norm(x_next, x)
        shadow_err = _tuple_diff_norm(y, y_prev)
        history.append((n, dr_err, shadow_err))
        if config.log_every > 0 and n % config.log_every == 0:
            logger.info("iter=%d dr_err=%.3e shadow_err=%.3e stop=%.3e",
                        n, dr_err, shadow_err, stop)
        x, y_prev = x_next, y
        if stop < config.tol:
            solved = True
            solution = Ensemble(mean_code)
            break
    return SolverReport(solved=solved, iterations=n, final_residual=stop,
                        residual_history=history, solution=solution)
