"""Tests for the constraint projectors."""

import numpy as np

from quatwave.algebra import Quaternion
from quatwave.ensembles import (
    Ensemble,
    dense_samples,
    dft_inverse,
    max_consistency_residual,
    symmetrize,
)
from quatwave.projectors import (
    build_problem,
    build_regularity,
    project_constraints,
    project_diagonal,
    project_point_symmetry,
    project_symmetry_pair,
    project_unitary_samples,
    project_unitary_shifted,
    project_vanishing_moments,
    symmetry_phases,
    symmetry_vector,
)
from quatwave.svblocks import nearest_unitary

from reference import (
    code_of_ensemble,
    consistent_ensemble_q,
    d4_coefficients,
    dft_q,
    ensemble_from_coefficients_q,
    expq,
    qmat_ensemble_of_code,
    qmul,
    sigma_apply_q,
)


def random_consistent(rng, eta):
    if eta == 4:
        Uq, _ = consistent_ensemble_q(rng, eta)
        return Ensemble(code_of_ensemble(Uq))
    shape = (eta, eta, 8, 8)
    return symmetrize(rng.uniform(-1, 1, size=shape)
                      + 1j * rng.uniform(-1, 1, size=shape))


def unitarity_residual(code):
    prod = np.einsum("...ij,...ik->...jk", code.conj(), code)
    return np.abs(prod - np.eye(8)).max()


def d4_ensemble():
    return Ensemble(code_of_ensemble(
        ensemble_from_coefficients_q(d4_coefficients(), 4)))


def scaling_values_q(code):
    """m0 at every grid point, as quaternions, read from row-0 slots."""
    eta = code.shape[0]
    Uq = qmat_ensemble_of_code(code)
    return Uq[:, :, 0, 0] + Uq[:, :, 0, 1]


def test_unitary_samples():
    rng = np.random.default_rng(211)
    for eta in (4, 6):
        U = random_consistent(rng, eta)
        V = project_unitary_samples(U)
        assert unitarity_residual(V.code) <= 1e-10
        assert max_consistency_residual(V) <= 1e-13
        again = project_unitary_samples(V)
        assert np.abs(again.code - V.code).max() <= 1e-10

        # corner structure at grid index 0
        c = V.code[0, 0]
        assert np.abs(c[:2, :2] - np.eye(2)).max() <= 1e-12
        assert np.abs(c[:2, 2:]).max() <= 1e-12
        assert np.abs(c[2:, :2]).max() <= 1e-12

        # independent full-grid route: project every entry on its own,
        # with the transported corner at the half-vertex points
        code = U.code
        full = np.empty_like(code)
        corner = np.zeros((8, 8), dtype=complex)
        corner[:2, :2] = np.eye(2)
        corner[2:, 2:] = nearest_unitary(code[0, 0, 2:, 2:])
        half = eta // 2
        for j1 in range(eta):
            for j2 in range(eta):
                full[j1, j2] = nearest_unitary(code[j1, j2])
        for k, (v1, v2) in enumerate(((0, 0), (1, 0), (0, 1), (1, 1))):
            cq = qmat_ensemble_of_code(corner[None, None])[0, 0]
            full[half * v1, half * v2] = code_of_ensemble(
                sigma_apply_q(k, cq)[None, None])[0, 0]
        assert np.abs(V.code - full).max() <= 1e-10


def test_unitary_shifted():
    rng = np.random.default_rng(223)
    for eta, ell in ((4, 1), (4, 2), (4, 3), (6, 2)):
        U = random_consistent(rng, eta)
        V = project_unitary_shifted(U, ell)
        assert unitarity_residual(dense_samples(V, ell).code) <= 1e-10
        assert max_consistency_residual(V) <= 1e-13
        again = project_unitary_shifted(V, ell)
        assert np.abs(again.code - V.code).max() <= 1e-10
    for bad in (0, 4, -1):
        try:
            project_unitary_shifted(U, bad)
        except ValueError:
            pass
        else:
            raise AssertionError("shift index %r must be rejected" % bad)


def test_build_regularity():
    reg = build_regularity(4, 1)
    assert reg.alphas == ((1, 0), (0, 1))
    assert reg.R.shape == (2, 16) and reg.S.shape == (6, 16)
    assert np.array_equal(reg.R[0], np.tile(np.arange(4.0), 4))
    assert np.array_equal(reg.R[1], np.repeat(np.arange(4.0), 4))

    rng = np.random.default_rng(227)
    for eta, mu in ((4, 1), (6, 2)):
        reg = build_regularity(eta, mu)
        assert np.abs(reg.Rtilde @ reg.Rtilde - reg.Rtilde).max() <= 1e-12
        assert np.abs(reg.Stilde @ reg.Stilde - reg.Stilde).max() <= 1e-12
        x = rng.uniform(-1, 1, size=eta * eta)
        assert np.abs(reg.R @ (reg.Rtilde @ x)).max() <= 1e-10
        assert np.abs(reg.S @ (reg.Stilde @ x)).max() <= 1e-10

    assert len(build_regularity(6, 2).alphas) == 5
    try:
        build_regularity(4, 12)
    except ValueError:
        pass
    else:
        raise AssertionError("overdetermined moment system must be rejected")


def coefficient_sums(code, reg):
    """Quaternion norms of all moment sums, via the slow transform."""
    eta = code.shape[0]
    Aq = dft_q(qmat_ensemble_of_code(code), eta, inverse=True)
    k1 = np.arange(eta)[:, None]
    k2 = np.arange(eta)[None, :]
    out = []
    for a1, a2 in reg.alphas:
        weight = (k2.astype(float) ** a1 * k1.astype(float) ** a2)
        for eps in range(4):
            coeff = Aq[:, :, 0, 2 * eps] + Aq[:, :, 0, 2 * eps + 1]
            if eps == 0:
                for sign in ((-1.0) ** k2, (-1.0) ** k1,
                             (-1.0) ** (k1 + k2)):
                    total = (sign * weight)[:, :, None] * coeff
                    out.append(np.linalg.norm(total.sum(axis=(0, 1))))
            else:
                total = weight[:, :, None] * coeff
                out.append(np.linalg.norm(total.sum(axis=(0, 1))))
    return out


def test_vanishing_moments():
    rng = np.random.default_rng(229)
    reg = build_regularity(4, 1)
    U = random_consistent(rng, 4)
    V = project_vanishing_moments(U, reg)
    assert max(coefficient_sums(V.code, reg)) <= 1e-10
    assert max_consistency_residual(V) <= 1e-13
    again = project_vanishing_moments(V, reg)
    assert np.abs(again.code - V.code).max() <= 1e-10

    # the tensor Daubechies-4 bank already satisfies the conditions
    D = d4_ensemble()
    assert np.abs(project_vanishing_moments(D, reg).code - D.code).max() \
        <= 1e-11

    reg6 = build_regularity(6, 2)
    U = random_consistent(rng, 6)
    V = project_vanishing_moments(U, reg6)
    assert max_consistency_residual(V) <= 1e-13
    again = project_vanishing_moments(V, reg6)
    assert np.abs(again.code - V.code).max() <= 1e-10
    # moment sums via the package coefficients
    A = dft_inverse(V)
    Aq = qmat_ensemble_of_code(A.code)
    k1 = np.arange(6).astype(float)[:, None, None]
    k2 = np.arange(6).astype(float)[None, :, None]
    for a1, a2 in reg6.alphas:
        w = k2 ** a1 * k1 ** a2
        for eps in range(1, 4):
            coeff = Aq[:, :, 0, 2 * eps] + Aq[:, :, 0, 2 * eps + 1]
            assert np.linalg.norm((w * coeff).sum(axis=(0, 1))) <= 1e-10

    try:
        project_vanishing_moments(U, reg)
    except ValueError:
        pass
    else:
        raise AssertionError("eta mismatch must be rejected")


def test_symmetry_pair():
    g = (Quaternion(1.0), Quaternion(-1.0))
    p1, p2 = project_symmetry_pair((Quaternion(1.0), Quaternion(0.0)), g)
    assert np.allclose(p1.components, (0.5, 0, 0, 0), atol=1e-15)
    assert np.allclose(p2.components, (0.5, 0, 0, 0), atol=1e-15)

    rng = np.random.default_rng(233)
    for _ in range(50):
        j1, j2 = rng.integers(0, 6, size=2)
        g = symmetry_vector(6, int(j1), int(j2))
        assert abs(abs(g[1]) - 1.0) <= 1e-14
        z = tuple(Quaternion(*c) for c in rng.uniform(-1, 1, size=(2, 4)))
        p = project_symmetry_pair(z, g)
        listen = (g[0].conjugate() * p[0]) + (g[1].conjugate() * p[1])
        assert abs(listen) <= 1e-13
        # fixed point on the constraint set
        q = project_symmetry_pair(p, g)
        assert max(abs(q[i] - p[i]) for i in range(2)) <= 1e-13
        # the correction z - p is orthogonal to the set (real inner product)
        w = tuple(Quaternion(*c) for c in rng.uniform(-1, 1, size=(2, 4)))
        w = project_symmetry_pair(w, g)
        dots = sum(np.dot((z[i] - p[i]).components, w[i].components)
                   for i in range(2))
        assert abs(dots) <= 1e-13


def test_point_symmetry():
    rng = np.random.default_rng(239)
    for eta in (4, 6):
        U = random_consistent(rng, eta)
        V = project_point_symmetry(U)
        assert max_consistency_residual(V) <= 1e-13
        again = project_point_symmetry(V)
        assert np.abs(again.code - V.code).max() <= 1e-12

        # wavelet slots of row 0 untouched; the pair at 0 is vacuous, so
        # the top rows of that entry survive (lower block rows hold samples
        # at shifted points and may move)
        assert np.abs(V.code[:, :, 0, 2:] - U.code[:, :, 0, 2:]).max() \
            <= 1e-15
        assert np.abs(V.code[0, 0, :2] - U.code[0, 0, :2]).max() <= 1e-13

        # residual identity at the quaternion level
        vals = scaling_values_q(V.code)
        phases = symmetry_phases(eta)
        worst = 0.0
        for j1 in range(eta):
            for j2 in range(eta):
                t = float(np.angle(phases[j1, j2]))
                rot = qmul(expq(t), vals[(-j1) % eta, (-j2) % eta])
                worst = max(worst, np.abs(vals[j1, j2] - rot).max())
        assert worst <= 1e-11


def test_point_symmetry_matches_pairwise_route():
    rng = np.random.default_rng(241)
    eta = 4
    U = random_consistent(rng, eta)
    V = project_point_symmetry(U)
    vals_in = scaling_values_q(U.code)
    vals_out = scaling_values_q(V.code)
    for j1 in range(eta):
        for j2 in range(eta):
            z = (Quaternion(*vals_in[j1, j2]),
                 Quaternion(*vals_in[(-j1) % eta, (-j2) % eta]))
            g = symmetry_vector(eta, j1, j2)
            p1, _ = project_symmetry_pair(z, g)
            assert np.allclose(vals_out[j1, j2], p1.components, atol=1e-12)


def test_product_sets():
    rng = np.random.default_rng(251)
    problem = build_problem(4, 1)
    assert problem.r == 5
    assert problem.labels[-1] == "moments"
    assert build_problem(6, 2, symmetric=True).r == 6

    x = tuple(random_consistent(rng, 4) for _ in range(5))
    y = project_constraints(x, problem)
    assert unitarity_residual(y[0].code) <= 1e-10
    for ell in (1, 2, 3):
        assert unitarity_residual(dense_samples(y[ell], ell).code) <= 1e-10
    assert max(coefficient_sums(y[4].code, problem.reg)) <= 1e-10

    try:
        project_constraints(x[:4], problem)
    except ValueError:
        pass
    else:
        raise AssertionError("coordinate count mismatch must be rejected")

    same = project_diagonal((x[0],) * 5)
    assert all(np.abs(c.code - x[0].code).max() <= 1e-15 for c in same)
    B = x[1]
    minus = Ensemble(-B.code)
    zero = project_diagonal((B, minus, Ensemble.zeros(4),
                             Ensemble.zeros(4), Ensemble.zeros(4)))
    assert all(c.norm() <= 1e-15 for c in zero)
    mean = project_diagonal(x)
    want = sum(c.code for c in x) / 5.0
    assert all(np.abs(c.code - want).max() <= 1e-15 for c in mean)
    twice = project_diagonal(mean)
    assert all(np.abs(a.code - b.code).max() <= 1e-15
               for a, b in zip(twice, mean))


def test_d4_bank_is_fixed_by_every_constraint():
    D = d4_ensemble()
    # sanity of the oracle itself
    assert max_consistency_residual(D) <= 1e-12
    assert unitarity_residual(D.code) <= 1e-12

    problem = build_problem(4, 1)
    for i in range(problem.r):
        out = problem.project(i, D)
        assert np.abs(out.code - D.code).max() <= 1e-10, \
            "constraint %s moved the feasible bank" % problem.labels[i]
