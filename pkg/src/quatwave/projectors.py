"""Projectors onto the constraint families of the filter design problem.

The feasibility problem asks for a consistent ensemble whose entries (and
whose half-shifted samples) are unitary, whose filters satisfy moment
conditions up to a prescribed order, and, optionally, whose scaling filter
has a point symmetry.  Each family below gets an orthogonal projector:

* unitary samples: nearest-unitary entry by entry, with the corner entry
  at grid index 0 forced to the form [1] (+) W (completeness);
* unitary shifted samples: the same projection conjugated by the
  modulation that moves the sample grid by half a vertex;
* vanishing moments: null-space projections of small real moment matrices
  applied to the filter coefficients;
* point symmetry: a paired projection tying the scaling samples at j and
  -j through a fixed spinor phase.

All projectors map consistent ensembles to consistent ensembles.  The two
coefficient-space projectors rebuild the full ensemble from the scalar
row-0 data via the unique consistent completion; the unitary projectors
work on a quarter-grid fundamental domain and transport the results by the
sigma permutations, finishing with a symmetrize pass that absorbs SVD
tie-breaking roundoff.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import Quaternion, multiply
from .ensembles import (
    Ensemble,
    SIGMA_ROWS,
    VERTICES,
    dft_matrix,
    modulation_phases,
    symmetrize,
)
from .svblocks import nearest_unitary

_SHIFT_CACHE = {}


# ---------------------------------------------------------------------------
# consistent completion from scalar row-0 data

def _complete_sample_row0(row0, eta):
    """Full consistent ensemble from row 0 of every entry (sample grid).

    Row 1 of the entry at j is forced by the reflection relation (it reads
    row 0 of the entry at -j), and block rows 1..3 of the entry at j are
    rows (0, 1) of the entries at j + eta*v_i/2.
    """
    half = eta // 2
    rev = np.roll(row0[::-1, ::-1], 1, axis=(0, 1))
    top = np.empty((eta, eta, 2, 8), dtype=complex)
    top[:, :, 0, :] = row0
    top[:, :, 1, 0::2] = -rev[:, :, 1::2].conj()
    top[:, :, 1, 1::2] = rev[:, :, 0::2].conj()
    code = np.empty((eta, eta, 8, 8), dtype=complex)
    code[:, :, 0:2, :] = top
    code[:, :, 2:4, :] = np.roll(top, -half, axis=0)
    code[:, :, 4:6, :] = np.roll(top, -half, axis=1)
    code[:, :, 6:8, :] = np.roll(top, -half, axis=(0, 1))
    return code


def _complete_coeff_row0(row0, eta):
    """Full coefficient ensemble from row 0 of every entry.

    Coefficient ensembles obey per-entry relations: row 1 comes from the
    entry's own row 0, scalar rows (2, 3) are (-1)^{k2} times rows (0, 1),
    and rows 4..7 are (-1)^{k1} times rows 0..3.
    """
    k1 = np.arange(eta)[:, None, None, None]
    k2 = np.arange(eta)[None, :, None, None]
    code = np.empty((eta, eta, 8, 8), dtype=complex)
    code[:, :, 0, :] = row0
    code[:, :, 1, 0::2] = -row0[:, :, 1::2].conj()
    code[:, :, 1, 1::2] = row0[:, :, 0::2].conj()
    code[:, :, 2:4, :] = (-1.0) ** k2 * code[:, :, 0:2, :]
    code[:, :, 4:8, :] = (-1.0) ** k1 * code[:, :, 0:4, :]
    return code


# ---------------------------------------------------------------------------
# unitarity projectors

def _corner_project(block):
    """Nearest matrix of the form [1] (+) W, W unitary, to one 8x8 code."""
    out = np.zeros((8, 8), dtype=complex)
    out[:2, :2] = np.eye(2)
    out[2:, 2:] = nearest_unitary(block[2:, 2:])
    return out


def _unitary_project_consistent(code, eta, corner):
    """Nearest-unitary projection of a consistent ensemble.

    Projects the quarter-grid fundamental domain with one batched SVD and
    fills the three shifted copies through the sigma permutations, which
    equals independent per-entry projection on consistent input.  With
    corner=True the entry at grid index 0 receives the [1] (+) W corner
    form instead (and its sigma images land at the half-vertex points).
    """
    half = eta // 2
    proj = nearest_unitary(code[:half, :half])
    if corner:
        proj[0, 0] = _corner_project(code[0, 0])
    out = np.empty_like(code)
    for k, (v1, v2) in enumerate(VERTICES):
        r, c = half * v1, half * v2
        out[r:r + half, c:c + half] = proj[:, :, SIGMA_ROWS[k], :]
    return out


def project_unitary_samples(U):
    """Project onto ensembles with unitary entries and the corner form at 0.

    The corner form [1] (+) W at grid index 0 encodes completeness: the
    scaling filter takes the value 1 at frequency zero and 0 at the three
    half vertices, and the wavelet filters vanish at frequency zero.
    """
    out = _unitary_project_consistent(U.code, U.eta, corner=True)
    return symmetrize(out)


def _shift_matrices(eta, ell):
    key = (int(eta), int(ell))
    if key not in _SHIFT_CACHE:
        W = dft_matrix(eta)
        ph = modulation_phases(eta, ell).reshape(-1)
        forward = W @ (ph[:, None] * W) / (eta * eta)
        backward = W @ (ph.conj()[:, None] * W) / (eta * eta)
        _SHIFT_CACHE[key] = (forward, backward)
    return _SHIFT_CACHE[key]


def project_unitary_shifted(U, ell):
    """Project onto ensembles whose v_ell/2-shifted samples are unitary.

    Conjugates the plain nearest-unitary projection by the invertible map
    that turns grid samples into half-shifted samples (Fourier, modulate,
    Fourier back).  ell must be 1, 2, or 3.
    """
    if ell not in (1, 2, 3):
        raise ValueError("shift index must be 1, 2, or 3, got %r" % (ell,))
    eta = U.eta
    forward, backward = _shift_matrices(eta, ell)
    flat = U.code.reshape(eta * eta, 64)
    shifted = (forward @ flat).reshape(eta, eta, 8, 8)
    proj = _unitary_project_consistent(shifted, eta, corner=False)
    back = (backward @ proj.reshape(eta * eta, 64)).reshape(eta, eta, 8, 8)
    return symmetrize(back)


# ---------------------------------------------------------------------------
# vanishing-moment projector

@dataclass
class RegularityMatrices:
    """Moment matrices and null-space projectors for one (eta, mu).

    R has one row per derivative order alpha with 0 < |alpha| <= mu and one
    column per grid index; S stacks three sign-twisted copies of R.  Rtilde
    and Stilde project onto the null spaces of R and S.  alphas records the
    row order of R; grid indices are flattened as n = k1*eta + k2.
    """

    eta: int
    mu: int
    alphas: tuple
    R: np.ndarray
    S: np.ndarray
    Rtilde: np.ndarray
    Stilde: np.ndarray


def _null_projector(M, eta, mu):
    gram = M @ M.T
    if np.linalg.matrix_rank(gram) < gram.shape[0]:
        raise ValueError("moment system is singular for eta=%d, mu=%d"
                         % (eta, mu))
    if np.linalg.cond(gram) > 1e12:
        sol = np.linalg.pinv(gram) @ M
    else:
        sol = np.linalg.solve(gram, M)
    return np.eye(M.shape[1]) - M.T @ sol


def build_regularity(eta, mu):
    """Moment matrices for grid size eta and moment order mu >= 1."""
    if eta < 4 or eta % 2:
        raise ValueError("eta must be an even integer >= 4, got %d" % eta)
    if mu < 1:
        raise ValueError("moment order mu must be >= 1, got %d" % mu)
    alphas = tuple((a1, t - a1) for t in range(1, mu + 1)
                   for a1 in range(t, -1, -1))
    n = np.arange(eta * eta)
    k1, k2 = (n // eta).astype(float), (n % eta).astype(float)
    R = np.stack([k2 ** a1 * k1 ** a2 for a1, a2 in alphas])
    signs = ((-1.0) ** k2, (-1.0) ** k1, (-1.0) ** (k1 + k2))
    S = np.vstack([R * s for s in signs])
    return RegularityMatrices(eta=eta, mu=mu, alphas=alphas, R=R, S=S,
                              Rtilde=_null_projector(R, eta, mu),
                              Stilde=_null_projector(S, eta, mu))


def project_vanishing_moments(U, reg):
    """Project onto ensembles meeting the moment conditions of order mu.

    Passes to filter coefficients, applies Stilde to the scaling column
    pair and Rtilde to each wavelet column pair of the scalar row-0 data
    (the matrices are real, so they act on the complex codes column by
    column), rebuilds the coefficient ensemble by its consistent
    completion, and transforms back to samples.
    """
    eta = U.eta
    if reg.eta != eta:
        raise ValueError("regularity matrices built for eta=%d, ensemble "
                         "has eta=%d" % (reg.eta, eta))
    W = dft_matrix(eta)
    flat = U.code.reshape(eta * eta, 64)
    coeff = (W @ flat).reshape(eta, eta, 8, 8) / (eta * eta)
    row0 = coeff[:, :, 0, :].reshape(eta * eta, 8)
    out = np.empty_like(row0)
    out[:, 0:2] = reg.Stilde @ row0[:, 0:2]
    out[:, 2:8] = reg.Rtilde @ row0[:, 2:8]
    plus = _complete_coeff_row0(out.reshape(eta, eta, 8), eta)
    samples = (W @ plus.reshape(eta * eta, 64)).reshape(eta, eta, 8, 8)
    return Ensemble(samples)


# ---------------------------------------------------------------------------
# point-symmetry projector

def symmetry_angle(eta, j1, j2):
    """Phase angle tying the scaling samples at j and -j."""
    return 2.0 * np.pi * (eta - 1) * (j1 - j2) / eta


def symmetry_vector(eta, j1, j2):
    """The quaternion pair g = (1, -e^{-angle e12}) for grid index j."""
    t = symmetry_angle(eta, j1, j2)
    return (Quaternion(1.0),
            Quaternion(-np.cos(t), 0.0, 0.0, np.sin(t)))


def project_symmetry_pair(z, g):
    """Orthogonal projection of a quaternion pair onto <g, z> = 0.

    The inner product conjugates the first argument; the projection is
    p_i = z_i - g_i * <g, z> / |g|^2.
    """
    z1, z2 = z
    g1, g2 = g
    h = multiply(g1.conjugate(), z1) + multiply(g2.conjugate(), z2)
    h = h * (1.0 / (abs(g1) ** 2 + abs(g2) ** 2))
    return (z1 - multiply(g1, h), z2 - multiply(g2, h))


def symmetry_phases(eta):
    """Grid of scalar phases e^{i angle(j)} used by the paired projection."""
    j1, j2 = np.meshgrid(np.arange(eta), np.arange(eta), indexing="ij")
    return np.exp(1j * symmetry_angle(eta, j1, j2))


def project_point_symmetry(U):
    """Project onto ensembles whose scaling filter is point symmetric.

    For every pair {j, -j} the scaling samples are averaged against each
    other with the phase e^{i angle(j)}; both scalar-row slots of the
    scaling column scale by the same factor at the code level.  Wavelet
    slots are untouched; the rest of each entry is rebuilt by the
    consistent completion.
    """
    eta = U.eta
    code = U.code
    row0 = code[:, :, 0, :]
    w = symmetry_phases(eta)[:, :, None]
    rev = np.roll(row0[::-1, ::-1], 1, axis=(0, 1))
    row0[:, :, 0:2] = 0.5 * (row0[:, :, 0:2] + w * rev[:, :, 0:2])
    return Ensemble(_complete_sample_row0(row0, eta))


# ---------------------------------------------------------------------------
# product-space sets

@dataclass
class Problem:
    """One instance of the filter design feasibility problem.

    labels names the constraint coordinates in order; project(i, U)
    applies the i-th constraint projector.
    """

    eta: int
    mu: int
    symmetric: bool
    reg: RegularityMatrices
    labels: tuple

    @property
    def r(self):
        return len(self.labels)

    def project(self, index, U):
        if index == 0:
            return project_unitary_samples(U)
        if index in (1, 2, 3):
            return project_unitary_shifted(U, index)
        if index == 4:
            return project_vanishing_moments(U, self.reg)
        if index == 5 and self.symmetric:
            return project_point_symmetry(U)
        raise IndexError("no constraint coordinate %d" % index)


def build_problem(eta, mu, symmetric=False):
    """Assemble the constraint family for one (eta, mu) instance."""
    labels = ("unitary_0", "unitary_1", "unitary_2", "unitary_3", "moments")
    if symmetric:
        labels = labels + ("symmetry",)
    return Problem(eta=eta, mu=mu, symmetric=bool(symmetric),
                   reg=build_regularity(eta, mu), labels=labels)


def project_constraints(x, problem):
    """Componentwise projection onto the product of the constraint sets."""
    if len(x) != problem.r:
        raise ValueError("expected %d coordinates, got %d"
                         % (problem.r, len(x)))
    return tuple(problem.project(i, U) for i, U in enumerate(x))


def project_diagonal(x):
    """Replace every coordinate with the arithmetic mean of all of them."""
    r = len(x)
    mean = Ensemble(sum(U._code for U in x) / r)
    return (mean,) * r
