"""Arithmetic for the quaternion algebra of the plane.

The algebra has basis {1, e1, e2, e12} with

    e1*e1 = e2*e2 = e12*e12 = e1*e2*e12 = -1,

which fixes the remaining products: e1*e2 = e12 = -e2*e1, e1*e12 = -e2,
e12*e1 = e2, e2*e12 = e1, e12*e2 = -e1.  Elements split into a spinor part
(scalar plus e12 component, a commutative subalgebra isomorphic to the
complex numbers) and a vector part (the e1, e2 components).  The complex
codes used throughout the package are

    spinor  a + b*e12        <->  a + b*i
    vector  v1*e1 + v2*e2    <->  v1 - v2*i   (from v = e1*(v1 - v2*e12))

so spinor products map to complex products and vector codes obey
code(v*w) = -conj(code(v))*code(w).
"""

import math


class Spinor:
    """Element a + b*e12 of the commutative subalgebra."""

    __slots__ = ("a", "b")

    def __init__(self, a=0.0, b=0.0):
        self.a = float(a)
        self.b = float(b)

    def __add__(self, other):
        return Spinor(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Spinor(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Spinor(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, Spinor):
            return Spinor(self.a * other.a - self.b * other.b,
                          self.a * other.b + self.b * other.a)
        return Spinor(self.a * other, self.b * other)

    __rmul__ = __mul__

    def conjugate(self):
        return Spinor(self.a, -self.b)

    def __abs__(self):
        return math.hypot(self.a, self.b)

    def to_complex(self):
        return complex(self.a, self.b)

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, z.imag)

    def as_quaternion(self):
        return Quaternion(self.a, 0.0, 0.0, self.b)

    def __eq__(self, other):
        return (isinstance(other, Spinor)
                and self.a == other.a and self.b == other.b)

    def __repr__(self):
        return "Spinor(%r, %r)" % (self.a, self.b)


class PlaneVector:
    """Element v1*e1 + v2*e2 of the vector grade."""

    __slots__ = ("v1", "v2")

    def __init__(self, v1=0.0, v2=0.0):
        self.v1 = float(v1)
        self.v2 = float(v2)

    def __add__(self, other):
        return PlaneVector(self.v1 + other.v1, self.v2 + other.v2)

    def __sub__(self, other):
        return PlaneVector(self.v1 - other.v1, self.v2 - other.v2)

    def __neg__(self):
        return PlaneVector(-self.v1, -self.v2)

    def __abs__(self):
        return math.hypot(self.v1, self.v2)

    def to_complex(self):
        """Complex code v1 - v2*i of this vector."""
        return complex(self.v1, -self.v2)

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, -z.imag)

    def as_quaternion(self):
        return Quaternion(0.0, self.v1, self.v2, 0.0)

    def __eq__(self, other):
        return (isinstance(other, PlaneVector)
                and self.v1 == other.v1 and self.v2 == other.v2)

    def __repr__(self):
        return "PlaneVector(%r, %r)" % (self.v1, self.v2)


class Quaternion:
    """A full element x0 + x1*e1 + x2*e2 + x12*e12.

    Values are plain 64-bit floats; all operations return new instances.
    Serialized everywhere as the ordered 4-tuple [x0, x1, x2, x12].
    """

    __slots__ = ("x0", "x1", "x2", "x12")

    def __init__(self, x0=0.0, x1=0.0, x2=0.0, x12=0.0):
        self.x0 = float(x0)
        self.x1 = float(x1)
        self.x2 = float(x2)
        self.x12 = float(x12)

    @property
    def components(self):
        return (self.x0, self.x1, self.x2, self.x12)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.x0 + other.x0, self.x1 + other.x1,
                          self.x2 + other.x2, self.x12 + other.x12)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.x0 - other.x0, self.x1 - other.x1,
                          self.x2 - other.x2, self.x12 - other.x12)

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x12)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.x0 * other, self.x1 * other,
                              self.x2 * other, self.x12 * other)
        other = _coerce(other)
        p0, p1, p2, p12 = self.components
        q0, q1, q2, q12 = other.components
        return Quaternion(
            p0 * q0 - p1 * q1 - p2 * q2 - p12 * q12,
            p0 * q1 + p1 * q0 + p2 * q12 - p12 * q2,
            p0 * q2 + p2 * q0 - p1 * q12 + p12 * q1,
            p0 * q12 + p12 * q0 + p1 * q2 - p2 * q1,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return _coerce(other) * self

    def conjugate(self):
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x12)

    def __abs__(self):
        return math.sqrt(self.x0 ** 2 + self.x1 ** 2
                         + self.x2 ** 2 + self.x12 ** 2)

    def spinor_part(self):
        return Spinor(self.x0, self.x12)

    def vector_part(self):
        return PlaneVector(self.x1, self.x2)

    def to_codes(self):
        """Complex pair (spinor code, vector code)."""
        return complex(self.x0, self.x12), complex(self.x1, -self.x2)

    @classmethod
    def from_codes(cls, s, c):
        return cls(s.real, c.real, -c.imag, s.imag)

    @classmethod
    def from_parts(cls, spinor, vector):
        return cls(spinor.a, vector.v1, vector.v2, spinor.b)

    def __eq__(self, other):
        return (isinstance(other, Quaternion)
                and self.components == other.components)

    def __repr__(self):
        return "Quaternion(%r, %r, %r, %r)" % self.components


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, Spinor):
        return value.as_quaternion()
    if isinstance(value, PlaneVector):
        return value.as_quaternion()
    if isinstance(value, (int, float)):
        return Quaternion(value)
    raise TypeError("cannot interpret %r as a quaternion" % (value,))


def multiply(p, q):
    """Product of two quaternions (noncommutative)."""
    return _coerce(p) * _coerce(q)


def split(q):
    """Spinor and vector parts of q, with q = spinor + vector."""
    return q.spinor_part(), q.vector_part()


def wedge(x, y):
    """Wedge product e12*(x1*y2 - x2*y1) of two plane vectors."""
    return Spinor(0.0, x.v1 * y.v2 - x.v2 * y.v1)


def phase(exponent):
    """Unit spinor cos(t) + e12*sin(t) for a pure exponent t*e12.

    The argument must be a Spinor with zero scalar part; anything else is
    rejected because the exponential of a mixed element is not a phase.
    """
    if exponent.a != 0.0:
        raise ValueError("phase exponent must be a pure e12 multiple")
    return Spinor(math.cos(exponent.b), math.sin(exponent.b))


def polar(q):
    """Polar decomposition (magnitude, axis, angle) with q = |q| e^{axis*angle}.

    The axis is a unit pure quaternion and the angle lies in [0, pi]
    (two-argument arctangent of the imaginary magnitude against x0).
    Degenerate inputs use the conventional axis e12: the zero quaternion
    returns (0, e12, 0), and a purely real q returns angle 0 or pi.
    """
    mag = abs(q)
    imag = math.sqrt(q.x1 ** 2 + q.x2 ** 2 + q.x12 ** 2)
    if mag == 0.0:
        return 0.0, Quaternion(0.0, 0.0, 0.0, 1.0), 0.0
    angle = math.atan2(imag, q.x0)
    if imag == 0.0:
        axis = Quaternion(0.0, 0.0, 0.0, 1.0)
    else:
        axis = Quaternion(0.0, q.x1 / imag, q.x2 / imag, q.x12 / imag)
    return mag, axis, angle


def from_polar(mag, axis, angle):
    """Rebuild |q| (cos(angle) + axis sin(angle)) from a polar triple."""
    s = math.sin(angle)
    return Quaternion(mag * math.cos(angle), mag * axis.x1 * s,
                      mag * axis.x2 * s, mag * axis.x12 * s)
