"""Grids of SV-block matrices and their spectral operations.

An ensemble assigns one 4x4 SV-block matrix to every point of the integer
grid Q_eta^2 = {0, ..., eta-1}^2, with index arithmetic wrapping mod eta.
It is stored as a single complex array of shape (eta, eta, 8, 8) holding the
codification of each entry; see svblocks for the code layout.

The discrete Fourier transform used here pairs indices through the wedge
j ^ k = j1*k2 - j2*k1 and multiplies entries by the spinor phase pair
diag(e^{t e12}, e^{-t e12}).  That pair codifies to the scalar e^{it}, so
on code arrays every transform is an ordinary complex matrix product.

A consistent ensemble additionally satisfies, for all j,

    U_{j + eta*v1/2} = sigma1 U_j,
    U_{j + eta*v2/2} = sigma2 U_j,
    U_{eta*v3 - j}   = tau U_j tau,

where v1, v2, v3 are the nonzero vertices (1,0), (0,1), (1,1), the sigmas
permute block rows, and tau swaps rows and columns inside every 2x2 block.
Consistency is what lets four filters on the torus be recovered from the
grid samples.
"""

import numpy as np

# vertices v0..v3 of the unit square
VERTICES = ((0, 0), (1, 0), (0, 1), (1, 1))

# code-row index arrays for left multiplication by sigma_1, sigma_2, sigma_3
# (block permutations [1,0,3,2], [2,3,0,1], [3,2,1,0])
SIGMA_ROWS = (
    np.arange(8),
    np.array([2, 3, 0, 1, 6, 7, 4, 5]),
    np.array([4, 5, 6, 7, 0, 1, 2, 3]),
    np.array([6, 7, 4, 5, 2, 3, 0, 1]),
)

# tau A tau at the code level: out = TAU_SIGN * conj(code[TAU_IDX][:, TAU_IDX])
TAU_IDX = np.array([1, 0, 3, 2, 5, 4, 7, 6])
TAU_SIGN = np.fromfunction(lambda r, c: 1.0 - 2.0 * ((r + c) % 2), (8, 8))

_SLOTS = ("s1", "v1", "v2", "s2")

_W_CACHE = {}


class Ensemble:
    """Immutable grid of 4x4 SV-block matrices over Q_eta^2."""

    __slots__ = ("eta", "_code")

    def __init__(self, code):
        code = np.array(code, dtype=complex)
        if code.ndim != 4 or code.shape[2:] != (8, 8) \
                or code.shape[0] != code.shape[1]:
            raise ValueError("expected code of shape (eta, eta, 8, 8), "
                             "got %r" % (code.shape,))
        eta = code.shape[0]
        if eta < 4 or eta % 2:
            raise ValueError("eta must be an even integer >= 4, got %d" % eta)
        code.flags.writeable = False
        self.eta = eta
        self._code = code

    @classmethod
    def zeros(cls, eta):
        return cls(np.zeros((eta, eta, 8, 8), dtype=complex))

    @property
    def code(self):
        """The (eta, eta, 8, 8) code array (a writable copy)."""
        return self._code.copy()

    def entry(self, k1, k2):
        """The SV-block matrix at grid index (k1, k2), wrapping mod eta."""
        from .svblocks import SVBlockMatrix
        return SVBlockMatrix(self._code[k1 % self.eta, k2 % self.eta])

    def norm(self):
        return float(np.linalg.norm(self._code))

    def __repr__(self):
        return "Ensemble(eta=%d)" % self.eta


def _as_code(B):
    return B._code if isinstance(B, Ensemble) else np.asarray(B)


def dft_matrix(eta):
    """Scalar phase matrix of the forward transform, shape (eta^2, eta^2).

    Row index j and column index k are flattened as j1*eta + j2; the entry
    is e^{2 pi i (j1 k2 - j2 k1) / eta}.
    """
    key = int(eta)
    if key not in _W_CACHE:
        j1, j2, k1, k2 = np.meshgrid(*(np.arange(eta),) * 4, indexing="ij")
        angles = 2.0 * np.pi * (j1 * k2 - j2 * k1) / eta
        W = np.exp(1j * angles).reshape(eta * eta, eta * eta)
        W.flags.writeable = False
        _W_CACHE[key] = W
    return _W_CACHE[key]


def dft_forward(B):
    """(F B)_j = sum_k [e^{2 pi j^k / eta}] B_k."""
    code = _as_code(B)
    eta = code.shape[0]
    flat = dft_matrix(eta) @ code.reshape(eta * eta, 64)
    return Ensemble(flat.reshape(eta, eta, 8, 8))


def dft_inverse(C):
    """(F^-1 C)_k = (1/eta^2) sum_j [e^{2 pi k^j / eta}] C_j.

    The wedge kernel is antisymmetric, so the inverse uses the same phase
    matrix as the forward transform, scaled by 1/eta^2.
    """
    code = _as_code(C)
    eta = code.shape[0]
    flat = dft_matrix(eta) @ code.reshape(eta * eta, 64)
    return Ensemble(flat.reshape(eta, eta, 8, 8) / (eta * eta))


def modulation_phases(eta, ell):
    """Scalar phases e^{i pi (v_ell ^ k) / eta} on the grid, shape (eta, eta)."""
    v1, v2 = VERTICES[ell]
    k1, k2 = np.meshgrid(np.arange(eta), np.arange(eta), indexing="ij")
    return np.exp(1j * np.pi * (v1 * k2 - v2 * k1) / eta)


def modulate(B, ell):
    """(chi_ell B)_k = [e^{pi v_ell^k / eta}] B_k; chi_0 is the identity."""
    code = _as_code(B)
    eta = code.shape[0]
    out = code * modulation_phases(eta, ell)[:, :, None, None]
    return Ensemble(out)


def dense_samples(U, ell):
    """Samples of the underlying polynomial at the v_ell/2-shifted grid.

    For a consistent ensemble whose entries are U(j/eta), returns the
    ensemble of values U((j + v_ell/2)/eta), computed as F chi_ell F^-1 U.
    """
    return dft_forward(modulate(dft_inverse(U), ell))


def sigma_apply(code, k):
    """Left multiplication by sigma_k on a stacked code array."""
    return code[..., SIGMA_ROWS[k], :]


def tau_conjugate(code):
    """tau A tau on a stacked code array."""
    out = code[..., TAU_IDX, :][..., :, TAU_IDX].conj()
    return out * TAU_SIGN


def _reverse_grid(code):
    """R[j] = code[(-j) mod eta] along the two grid axes."""
    return np.roll(code[::-1, ::-1], 1, axis=(0, 1))


def symmetrize(B):
    """Average an ensemble onto the consistent subspace.

    Applies, in order, the sigma1, sigma2, and tau orbit averages.  The map
    is linear, idempotent, never increases the norm, and leaves consistent
    ensembles untouched.
    """
    code = _as_code(B)
    eta = code.shape[0]
    half = eta // 2
    V = 0.5 * (code + sigma_apply(np.roll(code, -half, axis=0), 1))
    V = 0.5 * (V + sigma_apply(np.roll(V, -half, axis=1), 2))
    V = 0.5 * (V + tau_conjugate(_reverse_grid(V)))
    return Ensemble(V)


def inner_product_real(A, B):
    """Real inner product summing all quaternion components entrywise."""
    ca, cb = _as_code(A), _as_code(B)
    if ca.shape != cb.shape:
        raise ValueError("ensembles have different grids: %r vs %r"
                         % (ca.shape, cb.shape))
    return float(np.vdot(ca, cb).real)


def consistency_residuals(U):
    """Max violation of each consistency relation, keyed by relation."""
    code = _as_code(U)
    eta = code.shape[0]
    half = eta // 2
    d1 = np.roll(code, -half, axis=0) - sigma_apply(code, 1)
    d2 = np.roll(code, -half, axis=1) - sigma_apply(code, 2)
    d3 = _reverse_grid(code) - tau_conjugate(code)
    return {
        "sigma1": float(np.abs(d1).max()),
        "sigma2": float(np.abs(d2).max()),
        "tau": float(np.abs(d3).max()),
    }


def max_consistency_residual(U):
    return max(consistency_residuals(U).values())


# ---------------------------------------------------------------------------
# serialization: one text record per quaternion slot

def _slot_components(z, slot):
    if slot == "s1":
        return (z.real, 0.0, 0.0, z.imag)
    if slot == "v1":
        return (0.0, -z.real, -z.imag, 0.0)
    if slot == "v2":
        return (0.0, z.real, -z.imag, 0.0)
    return (z.real, 0.0, 0.0, -z.imag)


def _slot_code(components, slot):
    x0, x1, x2, x12 = components
    if slot in ("s1", "s2"):
        if x1 != 0.0 or x2 != 0.0:
            raise ValueError("spinor slot %s has vector components" % slot)
        return complex(x0, x12) if slot == "s1" else complex(x0, -x12)
    if x0 != 0.0 or x12 != 0.0:
        raise ValueError("vector slot %s has spinor components" % slot)
    return complex(-x1, -x2) if slot == "v1" else complex(x1, -x2)


def save_ensemble(U, path):
    """Write an ensemble as a flat text table.

    Each line holds: k1 k2 block-row block-col slot x0 x1 x2 x12, with the
    slot one of s1, v1, v2, s2 and components printed with %.17g (lossless
    for doubles).  Lines starting with '#' are comments.
    """
    code = _as_code(U)
    eta = code.shape[0]
    lines = ["# ensemble grid, eta = %d" % eta,
             "# k1 k2 row col slot x0 x1 x2 x12"]
    for k1 in range(eta):
        for k2 in range(eta):
            for i in range(4):
                for b in range(4):
                    block = code[k1, k2, 2 * i:2 * i + 2, 2 * b:2 * b + 2]
                    for slot, z in zip(_SLOTS,
                                       (block[0, 0], block[0, 1],
                                        block[1, 0], block[1, 1])):
                        comps = _slot_components(complex(z), slot)
                        lines.append("%d %d %d %d %s %.17g %.17g %.17g %.17g"
                                     % ((k1, k2, i, b, slot) + comps))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_ensemble(path):
    """Read an ensemble written by save_ensemble."""
    records = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 9 or parts[4] not in _SLOTS:
                raise ValueError("malformed ensemble record on line %d"
                                 % lineno)
            k1, k2, i, b = (int(p) for p in parts[:4])
            comps = tuple(float(p) for p in parts[5:])
            key = (k1, k2, i, b, parts[4])
            if key in records:
                raise ValueError("duplicate record on line %d" % lineno)
            records[key] = comps
    if not records:
        raise ValueError("no ensemble records in %s" % path)
    eta = 1 + max(max(k1, k2) for k1, k2, _, _, _ in records)
    if len(records) != eta * eta * 16 * 4:
        raise ValueError("expected %d records for eta = %d, got %d"
                         % (eta * eta * 64, eta, len(records)))
    code = np.zeros((eta, eta, 8, 8), dtype=complex)
    for (k1, k2, i, b, slot), comps in records.items():
        r = 2 * i + (slot in ("v2", "s2"))
        c = 2 * b + (slot in ("v1", "s2"))
        code[k1, k2, r, c] = _slot_code(comps, slot)
    return Ensemble(code)
