"""Filter extraction, the cascade algorithm, and the quality checks.

A solved sample ensemble determines four quaternion-valued filters: the
scaling filter m_0 and three wavelet filters m_1, m_2, m_3.  This module
recovers their coefficients, re-evaluates the filters anywhere on the
torus, runs the quaternionic cascade to produce dyadic samples of the
scaling function and wavelets, and computes the residuals used to judge a
solution: quadrature mirror identity, completeness, vanishing moments,
point symmetry, orthonormality of the shift system, and the separability
measure.

Filter values act on the left of coefficients, and refinement products
keep coefficients on the right; both orders matter because quaternion
multiplication is noncommutative.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Quaternion
from .ensembles import Ensemble, dft_inverse, dft_matrix
from .svblocks import SVMatrix

_VERTICES = ((0, 0), (1, 0), (0, 1), (1, 1))


class FilterBank:
    """Coefficients a_k^eps of the four filters on the eta x eta grid.

    Stored as two complex arrays of shape (4, eta, eta): the spinor code
    x0 + i*x12 and the vector code x1 - i*x2 of each coefficient.
    """

    __slots__ = ("eta", "spin", "vec")

    def __init__(self, eta, spin, vec):
        eta = int(eta)
        if eta < 2 or eta % 2 != 0:
            raise ValueError("filter grid order must be even and >= 2, "
                             "got %r" % (eta,))
        spin = np.asarray(spin, dtype=complex)
        vec = np.asarray(vec, dtype=complex)
        if spin.shape != (4, eta, eta) or vec.shape != (4, eta, eta):
            raise ValueError("coefficient arrays must have shape "
                             "(4, %d, %d)" % (eta, eta))
        self.eta = eta
        self.spin = spin.copy()
        self.vec = vec.copy()
        self.spin.flags.writeable = False
        self.vec.flags.writeable = False

    def coefficient(self, eps, k1, k2):
        """The quaternion a_k^eps at grid index k = (k1, k2)."""
        s = self.spin[eps, k1 % self.eta, k2 % self.eta]
        c = self.vec[eps, k1 % self.eta, k2 % self.eta]
        return Quaternion(s.real, c.real, -c.imag, s.imag)

    def component_array(self):
        """All coefficients as a real (4, eta, eta, 4) component array."""
        out = np.empty((4, self.eta, self.eta, 4))
        out[..., 0] = self.spin.real
        out[..., 1] = self.vec.real
        out[..., 2] = -self.vec.imag
        out[..., 3] = self.spin.imag
        return out

    @classmethod
    def from_component_array(cls, eta, components):
        components = np.asarray(components, dtype=float)
        if components.shape != (4, eta, eta, 4):
            raise ValueError("component array must have shape "
                             "(4, %d, %d, 4)" % (eta, eta))
        spin = components[..., 0] + 1j * components[..., 3]
        vec = components[..., 1] - 1j * components[..., 2]
        return cls(eta, spin, vec)


def extract_filters(U):
    """Read the filter bank off a consistent sample ensemble.

    The coefficient ensemble is the inverse transform of the samples; the
    coefficient a_k^eps is the sum of the spinor and vector slots in the
    first block row of its entry at k.
    """
    A = dft_inverse(U)
    code = A.code
    spin = np.empty((4, code.shape[0], code.shape[1]), dtype=complex)
    vec = np.empty_like(spin)
    for eps in range(4):
        spin[eps] = code[:, :, 0, 2 * eps]
        vec[eps] = -np.conj(code[:, :, 0, 2 * eps + 1])
    return FilterBank(code.shape[0], spin, vec)


def _value_grids(fb):
    """Filter values at every grid point j/eta, as spinor/vector codes."""
    eta = fb.eta
    W = dft_matrix(eta)
    s = (fb.spin.reshape(4, eta * eta) @ W.T).reshape(4, eta, eta)
    c = (fb.vec.reshape(4, eta * eta) @ np.conj(W).T).reshape(4, eta, eta)
    return s, c


def synthesize_ensemble(fb):
    """Assemble the sample ensemble of a filter bank.

    The block at grid point j, block row i, block column eps is the SV
    matrix of m_eps evaluated at (j + eta*v_i/2)/eta.
    """
    eta = fb.eta
    s, c = _value_grids(fb)
    s_rev = s[:, (-np.arange(eta)) % eta][:, :, (-np.arange(eta)) % eta]
    c_rev = c[:, (-np.arange(eta)) % eta][:, :, (-np.arange(eta)) % eta]
    half = eta // 2
    code = np.empty((eta, eta, 8, 8), dtype=complex)
    for i, (v1, v2) in enumerate(_VERTICES):
        sh = (-half * v1, -half * v2)
        for eps in range(4):
            code[:, :, 2 * i, 2 * eps] = np.roll(s[eps], sh, axis=(0, 1))
            code[:, :, 2 * i, 2 * eps + 1] = \
                -np.conj(np.roll(c[eps], sh, axis=(0, 1)))
            code[:, :, 2 * i + 1, 2 * eps] = \
                np.roll(c_rev[eps], sh, axis=(0, 1))
            code[:, :, 2 * i + 1, 2 * eps + 1] = \
                np.conj(np.roll(s_rev[eps], sh, axis=(0, 1)))
    return Ensemble(code)


def _codes_at(fb, eps, xi1, xi2):
    """Spinor and vector codes of m_eps at one point of the plane."""
    eta = fb.eta
    k1 = np.arange(eta)[:, None]
    k2 = np.arange(eta)[None, :]
    theta = 2.0 * math.pi * (xi1 * k2 - xi2 * k1)
    phase = np.exp(1j * theta)
    s = (phase * fb.spin[eps]).sum()
    c = (np.conj(phase) * fb.vec[eps]).sum()
    return s, c


def evaluate_filter(fb, eps, xi):
    """m_eps(xi) = sum_k e^{2 pi xi ^ k} a_k^eps as a quaternion."""
    s, c = _codes_at(fb, eps, float(xi[0]), float(xi[1]))
    return Quaternion(s.real, c.real, -c.imag, s.imag)


def evaluate_sv(fb, eps, xi):
    """The SV matrix [m_eps(xi)], built from the values at xi and -xi."""
    plus = evaluate_filter(fb, eps, xi)
    minus = evaluate_filter(fb, eps, (-xi[0], -xi[1]))
    return SVMatrix.from_filter_values(plus, minus)


def qqmf_residual(fb, xi):
    """Defect of the quadrature mirror identity at one point.

    Over the four half-vertex translates of xi, the SV matrices of the
    filters must satisfy sum_j [m_eps]^* [m_zeta] = delta_{eps zeta} I2;
    returns the largest Frobenius defect over filter pairs.
    """
    blocks = np.empty((4, 4, 2, 2), dtype=complex)
    for eps in range(4):
        for j, (v1, v2) in enumerate(_VERTICES):
            point = (xi[0] + v1 / 2.0, xi[1] + v2 / 2.0)
            blocks[eps, j] = evaluate_sv(fb, eps, point).code()
    worst = 0.0
    eye = np.eye(2)
    for eps in range(4):
        for zeta in range(4):
            acc = np.zeros((2, 2), dtype=complex)
            for j in range(4):
                acc += np.conj(blocks[eps, j]).T @ blocks[zeta, j]
            if eps == zeta:
                acc -= eye
            worst = max(worst, np.linalg.norm(acc))
    return worst


def completeness_residual(fb):
    """max of |m0(0) - 1|, |m0| at the three half-vertices, |m_eps(0)|."""
    worst = abs(evaluate_filter(fb, 0, (0.0, 0.0)) - Quaternion(1.0))
    for v1, v2 in _VERTICES[1:]:
        worst = max(worst, abs(evaluate_filter(fb, 0, (v1 / 2.0, v2 / 2.0))))
    for eps in (1, 2, 3):
        worst = max(worst, abs(evaluate_filter(fb, eps, (0.0, 0.0))))
    return worst


def _moment_weights(eta, mu):
    k1 = np.arange(eta, dtype=float)[:, None]
    k2 = np.arange(eta, dtype=float)[None, :]
    weights = []
    for total in range(mu + 1):
        for a1 in range(total, -1, -1):
            weights.append(k2 ** a1 * k1 ** (total - a1))
    return k1, k2, weights


def vanishing_moment_residual(fb, mu):
    """Largest moment defect of the bank up to order mu.

    Covers the wavelet sums sum_k k2^a1 k1^a2 a_k^eps for eps >= 1 and the
    three sign-twisted scaling sums that express the derivatives of m0 at
    the half-vertices, all for 0 <= |alpha| <= mu.
    """
    k1, k2, weights = _moment_weights(fb.eta, mu)
    twists = ((-1.0) ** k2, (-1.0) ** k1, (-1.0) ** (k1 + k2))
    worst = 0.0
    for w in weights:
        for eps in (1, 2, 3):
            s = (w * fb.spin[eps]).sum()
            c = (w * fb.vec[eps]).sum()
            worst = max(worst, math.hypot(abs(s), abs(c)))
        for twist in twists:
            s = (twist * w * fb.spin[0]).sum()
            c = (twist * w * fb.vec[0]).sum()
            worst = max(worst, math.hypot(abs(s), abs(c)))
    return worst


def symmetry_residual(fb):
    """Largest defect of the point symmetry a_k^0 = a_{2P-k}^0."""
    rev = slice(None, None, -1)
    ds = fb.spin[0] - fb.spin[0][rev, rev]
    dc = fb.vec[0] - fb.vec[0][rev, rev]
    return float(np.sqrt(np.abs(ds) ** 2 + np.abs(dc) ** 2).max())


@dataclass
class SampledFunction:
    """Dyadic samples of a compactly supported quaternion function.

    Values live on the grid i * 2^-level for i in {0, ..., (eta-1)*2^level}
    squared; the function vanishes on and outside the boundary of the
    support square [0, eta-1]^2.  spin and vec hold the component codes.
    """

    level: int
    eta: int
    spin: np.ndarray
    vec: np.ndarray

    @property
    def n(self):
        return (self.eta - 1) * 2 ** self.level + 1

    @property
    def step(self):
        return 2.0 ** (-self.level)

    def value(self, i1, i2):
        s = self.spin[i1, i2]
        c = self.vec[i1, i2]
        return Quaternion(s.real, c.real, -c.imag, s.imag)


def _right_mult_matrix(a):
    """Realification of x -> x*a on quaternion components."""
    basis = (Quaternion(1.0), Quaternion(0.0, 1.0),
             Quaternion(0.0, 0.0, 1.0), Quaternion(0.0, 0.0, 0.0, 1.0))
    out = np.empty((4, 4))
    for i, b in enumerate(basis):
        out[:, i] = (b * a).components
    return out


def _lattice_values(fb):
    """Solve the lattice system v = Sv for the scaling function.

    S encodes right multiplication by the scaling coefficients: sampling
    the refinement equation at integer points gives
    v_m = 4 sum_n v_n a^0_{2m - n}.  Requires a simple eigenvalue 1.
    """
    eta = fb.eta
    size = eta * eta
    T = np.zeros((4 * size, 4 * size))
    for m1 in range(eta):
        for m2 in range(eta):
            row = m1 * eta + m2
            for n1 in range(eta):
                for n2 in range(eta):
                    i1, i2 = 2 * m1 - n1, 2 * m2 - n2
                    if not (0 <= i1 < eta and 0 <= i2 < eta):
                        continue
                    col = n1 * eta + n2
                    a = fb.coefficient(0, i1, i2)
                    T[4 * row:4 * row + 4, 4 * col:4 * col + 4] = \
                        4.0 * _right_mult_matrix(a)
    _, sing, vh = np.linalg.svd(T - np.eye(4 * size))
    small = int((sing < 1e-8).sum())
    # solutions form a left quaternion subspace, so the real null space
    # of a simple eigenvalue has dimension exactly 4
    if small < 4:
        raise ValueError("cascade lattice system has no eigenvalue 1; "
                         "real null-space dimension %d" % small)
    if small > 4:
        raise ValueError(
            "cascade needs a quaternionically simple eigenvalue 1 of the "
            "lattice system; real null-space dimension %d means a "
            "degenerate filter" % small)
    comp = vh[-1].reshape(eta, eta, 4)
    total = Quaternion(*comp.sum(axis=(0, 1)))
    if abs(total) < 1e-8:
        raise ValueError("cascade lattice values sum to zero "
                         "(degenerate filter)")
    scale = total.conjugate() * (1.0 / abs(total) ** 2)
    spin = np.zeros((eta, eta), dtype=complex)
    vec = np.zeros_like(spin)
    for k1 in range(eta):
        for k2 in range(eta):
            q = scale * Quaternion(*comp[k1, k2])
            spin[k1, k2] = q.x0 + 1j * q.x12
            vec[k1, k2] = q.x1 - 1j * q.x2
    # the continuous limit vanishes on the support boundary
    for arr in (spin, vec):
        arr[0, :] = 0.0
        arr[-1, :] = 0.0
        arr[:, 0] = 0.0
        arr[:, -1] = 0.0
    return spin, vec


def _refine(spin, vec, fb, eps, h, n_out):
    """One refinement pass: out[i] = 4 sum_k prev[i - k*h] * a_k^eps."""
    n_in = spin.shape[0]
    out_s = np.zeros((n_out, n_out), dtype=complex)
    out_c = np.zeros_like(out_s)
    for k1 in range(fb.eta):
        for k2 in range(fb.eta):
            a_s = fb.spin[eps, k1, k2]
            a_c = fb.vec[eps, k1, k2]
            if a_s == 0 and a_c == 0:
                continue
            r1, r2 = k1 * h, k2 * h
            win_s = out_s[r1:r1 + n_in, r2:r2 + n_in]
            win_c = out_c[r1:r1 + n_in, r2:r2 + n_in]
            win_s += 4.0 * (spin * a_s - np.conj(vec) * a_c)
            win_c += 4.0 * (np.conj(spin) * a_c + vec * a_s)
    return out_s, out_c


def cascade(fb, eps, level):
    """Dyadic samples of the scaling function (eps 0) or a wavelet.

    Starts from the lattice values, refines `level` times through the
    scaling relation, and for a wavelet applies the two-scale relation
    psi^eps(x) = 4 sum_k phi(2x - k) a_k^eps once at the final level.
    """
    if level < 1:
        raise ValueError("cascade level must be >= 1, got %r" % (level,))
    if not 0 <= eps <= 3:
        raise ValueError("filter index must be in 0..3, got %r" % (eps,))
    spin, vec = _lattice_values(fb)
    for lev in range(1, level + 1):
        n_out = (fb.eta - 1) * 2 ** lev + 1
        spin, vec = _refine(spin, vec, fb, 0, 2 ** (lev - 1), n_out)
    if eps == 0:
        return SampledFunction(level, fb.eta, spin, vec)

    n = (fb.eta - 1) * 2 ** level + 1
    out_s = np.zeros((n, n), dtype=complex)
    out_c = np.zeros_like(out_s)
    shift = 2 ** level
    for k1 in range(fb.eta):
        for k2 in range(fb.eta):
            a_s = fb.spin[eps, k1, k2]
            a_c = fb.vec[eps, k1, k2]
            lo1, lo2 = k1 * shift // 2, k2 * shift // 2
            hi1 = (k1 * shift + n - 1) // 2
            hi2 = (k2 * shift + n - 1) // 2
            src_s = spin[2 * lo1 - k1 * shift: 2 * hi1 - k1 * shift + 1: 2,
                         2 * lo2 - k2 * shift: 2 * hi2 - k2 * shift + 1: 2]
            src_c = vec[2 * lo1 - k1 * shift: 2 * hi1 - k1 * shift + 1: 2,
                        2 * lo2 - k2 * shift: 2 * hi2 - k2 * shift + 1: 2]
            out_s[lo1:hi1 + 1, lo2:hi2 + 1] += \
                4.0 * (src_s * a_s - np.conj(src_c) * a_c)
            out_c[lo1:hi1 + 1, lo2:hi2 + 1] += \
                4.0 * (np.conj(src_s) * a_c + src_c * a_s)
    return SampledFunction(level, fb.eta, out_s, out_c)


def partition_of_unity_residual(sf):
    """max |sum_k phi(x + k) - 1| over one period cell of the grid."""
    m = 2 ** sf.level
    acc_s = np.zeros((m, m), dtype=complex)
    acc_c = np.zeros_like(acc_s)
    for k1 in range(sf.eta - 1):
        for k2 in range(sf.eta - 1):
            acc_s += sf.spin[k1 * m:k1 * m + m, k2 * m:k2 * m + m]
            acc_c += sf.vec[k1 * m:k1 * m + m, k2 * m:k2 * m + m]
    return float(np.sqrt(np.abs(acc_s - 1.0) ** 2
                         + np.abs(acc_c) ** 2).max())


def integral(sf):
    """Plain Riemann sum of the samples, as a quaternion."""
    h2 = sf.step ** 2
    s = sf.spin.sum() * h2
    c = sf.vec.sum() * h2
    return Quaternion(s.real, c.real, -c.imag, s.imag)


@dataclass
class OrthonormalityProfile:
    """Minimum-eigenvalue surface of [m0]^*[m0] over [-1/4, 1/4]^2."""

    grid_n: int
    xi: np.ndarray
    values: np.ndarray
    min_value: float
    passed: bool


def orthonormality_check(fb, grid_n=101):
    """Evaluate Lambda(xi) on a uniform grid and test positivity.

    Lambda is the smaller eigenvalue of the self-adjoint SV matrix
    [m0(xi)]^*[m0(xi)]; positivity on the grid is the orthonormality
    check for the shift system of the scaling function.
    """
    if grid_n < 2:
        raise ValueError("grid size must be >= 2, got %r" % (grid_n,))
    xi = np.linspace(-0.25, 0.25, grid_n)
    eta = fb.eta
    k1 = np.arange(eta, dtype=float)
    k2 = np.arange(eta, dtype=float)
    # phases e^{2 pi i (xi1 k2 - xi2 k1)} on the xi1 x xi2 x k1 x k2 grid
    p1 = np.exp(2j * math.pi * np.outer(xi, k2))
    p2 = np.exp(-2j * math.pi * np.outer(xi, k1))
    phase = p1[:, None, None, :] * p2[None, :, :, None]

    def values(sign):
        ph = phase if sign > 0 else np.conj(phase)
        s = np.einsum("abkl,kl->ab", ph, fb.spin[0])
        c = np.einsum("abkl,kl->ab", np.conj(ph), fb.vec[0])
        return s, c

    s_p, c_p = values(+1)
    s_m, c_m = values(-1)
    m00, m01 = s_p, -np.conj(c_p)
    m10, m11 = c_m, np.conj(s_m)
    a = np.abs(m00) ** 2 + np.abs(m10) ** 2
    d = np.abs(m01) ** 2 + np.abs(m11) ** 2
    b = np.conj(m00) * m01 + np.conj(m10) * m11
    lam = (a + d) / 2.0 - np.sqrt(((a - d) / 2.0) ** 2 + np.abs(b) ** 2)
    lam = lam.real
    min_value = float(lam.min())
    return OrthonormalityProfile(grid_n=grid_n, xi=xi, values=lam,
                                 min_value=min_value,
                                 passed=bool(min_value > 0.0))


def separability_measure(sf):
    """Riemann-sum distance of the samples from a marginal tensor product.

    Computes zeta(phi) = integral of |phi(x1, x2) - mu(x1) nu(x2)|^2 where
    mu integrates phi over the second argument and nu over the first; the
    marginal product keeps mu on the left.
    """
    h = sf.step
    mu_s = h * sf.spin.sum(axis=1)
    mu_c = h * sf.vec.sum(axis=1)
    nu_s = h * sf.spin.sum(axis=0)
    nu_c = h * sf.vec.sum(axis=0)
    prod_s = np.outer(mu_s, nu_s) - np.outer(np.conj(mu_c), nu_c)
    prod_c = np.outer(np.conj(mu_s), nu_c) + np.outer(mu_c, nu_s)
    diff2 = np.abs(sf.spin - prod_s) ** 2 + np.abs(sf.vec - prod_c) ** 2
    return float(diff2.sum() * h * h)
