"""Spinor-vector matrices and their complex codification.

A spinor-vector (SV) matrix is the 2x2 array [[s1, v1], [v2, s2]] with
spinors on the diagonal and plane vectors off it; values of a quaternion
filter m and its reflection m(-.) naturally fill one such block.  An SV-block
matrix is an m x m grid of SV blocks, i.e. a 2m x 2m quaternion matrix whose
slots alternate spinor/vector in the checkerboard pattern above.

Each block codifies to the complex 2x2 array

    [[s1, -conj(c1)],
     [c2,  conj(s2)]]

where spinors are coded a + b*i and vectors v1 - v2*i.  Codification is a
bijective algebra homomorphism onto complex 2m x 2m matrices: it turns
SV products into complex matrix products, adjoints into conjugate
transposes, preserves the Frobenius norm, and matches unitaries with
unitaries.  That lets the nearest-unitary projection ride on a standard
complex SVD.  All heavy lifting in this package therefore happens on plain
complex ndarrays; the classes here wrap such arrays and translate back and
forth to quaternion entries at the edges.
"""

import cmath

import numpy as np

from .algebra import PlaneVector, Quaternion, Spinor, multiply


class SVMatrix:
    """One spinor-vector block [[s1, v1], [v2, s2]]."""

    __slots__ = ("s1", "v1", "v2", "s2")

    def __init__(self, s1, v1, v2, s2):
        self.s1 = s1
        self.v1 = v1
        self.v2 = v2
        self.s2 = s2

    @classmethod
    def identity(cls):
        return cls(Spinor(1.0), PlaneVector(), PlaneVector(), Spinor(1.0))

    @classmethod
    def zero(cls):
        return cls(Spinor(), PlaneVector(), PlaneVector(), Spinor())

    @classmethod
    def from_filter_values(cls, m_plus, m_minus):
        """Block [[spinor(m+), vector(m+)], [vector(m-), spinor(m-)]].

        This is the SV form [m] built from a filter value m+ = m(xi) and its
        reflected value m- = m(-xi), both given as quaternions.
        """
        return cls(m_plus.spinor_part(), m_plus.vector_part(),
                   m_minus.vector_part(), m_minus.spinor_part())

    def code(self):
        """Complex 2x2 codification of this block."""
        return np.array(
            [[self.s1.to_complex(), -self.v1.to_complex().conjugate()],
             [self.v2.to_complex(), self.s2.to_complex().conjugate()]])

    @classmethod
    def from_code(cls, block):
        return cls(Spinor.from_complex(complex(block[0, 0])),
                   PlaneVector.from_complex(-complex(block[0, 1]).conjugate()),
                   PlaneVector.from_complex(complex(block[1, 0])),
                   Spinor.from_complex(complex(block[1, 1]).conjugate()))

    def entries(self):
        """The four quaternion entries as a 2x2 nested tuple."""
        return ((self.s1.as_quaternion(), self.v1.as_quaternion()),
                (self.v2.as_quaternion(), self.s2.as_quaternion()))

    def apply(self, x):
        """Act on a quaternion pair by left matrix multiplication."""
        x1, x2 = x
        rows = self.entries()
        return (multiply(rows[0][0], x1) + multiply(rows[0][1], x2),
                multiply(rows[1][0], x1) + multiply(rows[1][1], x2))

    def adjoint(self):
        return SVMatrix(self.s1.conjugate(), -self.v2,
                        -self.v1, self.s2.conjugate())

    def is_self_adjoint(self, tol=1e-12):
        scale = max(1.0, abs(self.s1), abs(self.s2), abs(self.v1),
                    abs(self.v2))
        return (abs(self.s1.b) <= tol * scale
                and abs(self.s2.b) <= tol * scale
                and abs(self.v1 + self.v2) <= tol * scale)

    def __eq__(self, other):
        return (isinstance(other, SVMatrix) and self.s1 == other.s1
                and self.v1 == other.v1 and self.v2 == other.v2
                and self.s2 == other.s2)

    def __repr__(self):
        return "SVMatrix(%r, %r, %r, %r)" % (self.s1, self.v1,
                                             self.v2, self.s2)


class SVBlockMatrix:
    """An m x m grid of SV blocks, stored as its 2m x 2m complex code."""

    __slots__ = ("_code",)

    def __init__(self, code):
        code = np.asarray(code, dtype=complex)
        if code.ndim != 2 or code.shape[0] != code.shape[1] \
                or code.shape[0] % 2:
            raise ValueError("code must be a square array of even size, "
                             "got shape %r" % (code.shape,))
        self._code = code

    @property
    def m(self):
        return self._code.shape[0] // 2

    @property
    def code(self):
        """The backing complex array (a defensive copy)."""
        return self._code.copy()

    @classmethod
    def identity(cls, m):
        return cls(np.eye(2 * m, dtype=complex))

    @classmethod
    def from_blocks(cls, blocks):
        """Assemble from an m x m nested sequence of SVMatrix values."""
        m = len(blocks)
        code = np.zeros((2 * m, 2 * m), dtype=complex)
        for i in range(m):
            if len(blocks[i]) != m:
                raise ValueError("blocks must form a square grid")
            for j in range(m):
                code[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blocks[i][j].code()
        return cls(code)

    def block(self, i, j):
        return SVMatrix.from_code(
            self._code[2 * i:2 * i + 2, 2 * j:2 * j + 2])

    def blocks(self):
        return [[self.block(i, j) for j in range(self.m)]
                for i in range(self.m)]

    def entry(self, r, c):
        """Quaternion entry at row r, column c of the 2m x 2m matrix."""
        z = complex(self._code[r, c])
        if r % 2 == 0 and c % 2 == 0:
            return Quaternion(z.real, 0.0, 0.0, z.imag)
        if r % 2 == 0:
            return Quaternion(0.0, -z.real, -z.imag, 0.0)
        if c % 2 == 0:
            return Quaternion(0.0, z.real, -z.imag, 0.0)
        return Quaternion(z.real, 0.0, 0.0, -z.imag)

    def adjoint(self):
        return SVBlockMatrix(self._code.conj().T)

    def frobenius_norm(self):
        return float(np.linalg.norm(self._code))

    def __add__(self, other):
        return SVBlockMatrix(self._code + other._code)

    def __sub__(self, other):
        return SVBlockMatrix(self._code - other._code)

    def __matmul__(self, other):
        if self.m != other.m:
            raise ValueError("block dimensions differ: %d vs %d"
                             % (self.m, other.m))
        return SVBlockMatrix(self._code @ other._code)

    def __repr__(self):
        return "SVBlockMatrix(m=%d)" % self.m


def sv_multiply(A, B):
    """Product of two SV-block matrices of equal block dimension."""
    return A @ B


def codify(A):
    """Complex 2m x 2m code of an SV-block matrix."""
    return A.code


def decodify(M):
    """SV-block matrix whose code is M (inverse of codify)."""
    return SVBlockMatrix(M)


def sv_eigenvalues(A):
    """Both spinor eigenvalues of a single SV block.

    Computed as (s1 + conj(s2) +- sqrt((s1 - conj(s2))^2 + 4 v1 v2)) / 2 in
    spinor codes, with the square root on the principal branch (argument in
    (-pi, pi] halves).  Self-adjoint input yields real eigenvalues.
    """
    zs1 = A.s1.to_complex()
    zs2c = A.s2.to_complex().conjugate()
    # spinor code of the vector product v1*v2 is -conj(c1)*c2
    v1v2 = -A.v1.to_complex().conjugate() * A.v2.to_complex()
    root = cmath.sqrt((zs1 - zs2c) ** 2 + 4.0 * v1v2)
    return (Spinor.from_complex((zs1 + zs2c + root) / 2.0),
            Spinor.from_complex((zs1 + zs2c - root) / 2.0))


def is_positive_definite(A):
    """Whether a self-adjoint SV block has two positive eigenvalues."""
    if not A.is_self_adjoint():
        raise ValueError("positive definiteness needs a self-adjoint block")
    lo, hi = sv_eigenvalues(A)
    return lo.a > 0.0 and hi.a > 0.0


def nearest_unitary(code):
    """Nearest unitary (Frobenius) to each matrix in a stacked code array.

    Accepts any (..., n, n) complex array; returns U @ Vh from the batched
    SVD.  Any valid SVD is accepted when singular values repeat.
    """
    u, _, vh = np.linalg.svd(np.asarray(code, dtype=complex))
    return u @ vh


def project_unitary(A):
    """Nearest unitary SV-block matrix to A in Frobenius distance."""
    return SVBlockMatrix(nearest_unitary(A.code))


def project_unitary_corner(A):
    """Nearest matrix of the form [1] (+) W with W unitary, for m = 4.

    The top-left block becomes the identity SV block, the rest of the first
    block row and column is zeroed, and the trailing 3x3 SV-block submatrix
    is replaced by its nearest unitary.
    """
    if A.m != 4:
        raise ValueError("corner projection is defined for m = 4, got m = %d"
                         % A.m)
    out = np.zeros((8, 8), dtype=complex)
    out[:2, :2] = np.eye(2)
    out[2:, 2:] = nearest_unitary(A.code[2:, 2:])
    return SVBlockMatrix(out)
