import numpy as np
import pytest

from polarlift.bundle import bracket_residual, make_symmetric_pair
from polarlift.classical import (ISOTROPY_SPECS, build_classical, complex_to_real, diagonal_torus,
                                 encode, named_isotropy, real_part_mask)
from polarlift.lie import Subspace

CASES = [
    ("su", "s(u(p)+u(q))", (2, 1), 4),
    ("su", "s(u(p)+u(q))", (2, 2), 7),
    ("su", "so(n)", (3,), 3),
    ("su", "so(n)", (4,), 6),
    ("so", "so(p)+so(q)", (3, 2), 4),
    ("so", "so(p)+so(q)", (4, 1), 6),
    ("so", "u(n)", (3,), 9),
    ("sp", "sp(p)+sp(q)", (1, 1), 6),
    ("sp", "u(n)", (2,), 4),
    ("su+su", "u(1)+u(1)", (2,), 2),
]


@pytest.mark.parametrize("family,spec,params,dim_h", CASES)
def test_isotropy_is_symmetric_subalgebra(family, spec, params, dim_h):
    iso = named_isotropy(family, spec, params)
    pair = make_symmetric_pair(iso.g, iso.h_generators)
    assert pair.h.dim == dim_h
    assert max(pair.residuals.values()) < 1e-10


@pytest.mark.parametrize("family,spec,params,dim_h", CASES)
def test_factors_are_commuting_ideals(family, spec, params, dim_h):
    iso = named_isotropy(family, spec, params)
    g = iso.g
    h = Subspace.from_vectors(iso.h_generators, g.inner)
    subs = {n: Subspace.from_vectors(v, g.inner) for n, v in iso.factors.items()}
    assert sum(s.dim for s in subs.values()) == h.dim
    for name, f in subs.items():
        assert bracket_residual(g, h, f, f) < 1e-10, name
    names = list(subs)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            assert bracket_residual(g, subs[a], subs[b], None) < 1e-10


def test_so4_extra_diagonal_is_not_an_ideal():
    iso = named_isotropy("su", "so(n)", (4,))
    g = iso.g
    h = Subspace.from_vectors(iso.h_generators, g.inner)
    diag = Subspace.from_vectors(iso.extra["so(3)std"], g.inner)
    assert diag.dim == 3
    assert bracket_residual(g, diag, diag, diag) < 1e-10
    assert bracket_residual(g, h, diag, diag) > 1e-2


@pytest.mark.parametrize("family,spec,params", [
    ("su", "s(u(p)+u(q))", (0, 2)),
    ("so", "so(p)+so(q)", (1, 1)),
    ("sp", "u(n)", (1,)),
    ("su", "s(u(p)+u(q))", (2,)),
    ("su", "nonsense", (2, 1)),
    ("e", "so(n)", (4,)),
])
def test_named_isotropy_rejects(family, spec, params):
    with pytest.raises(ValueError):
        named_isotropy(family, spec, params)


def test_every_spec_is_buildable():
    minimal = {1: (3,), 2: (2, 1)}
    for (family, spec), (_, nparams) in ISOTROPY_SPECS.items():
        params = (2,) if family == "su+su" else minimal[nparams]
        if (family, spec) == ("sp", "u(n)"):
            params = (2,)
        iso = named_isotropy(family, spec, params)
        assert iso.g.dim > 0


def test_complex_encoding_is_homomorphism(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs = complex_to_real(A @ B - B @ A)
    ra, rb = complex_to_real(A), complex_to_real(B)
    assert np.abs(lhs - (ra @ rb - rb @ ra)).max() < 1e-12
    assert np.abs(encode("so", A.real) - A.real).max() == 0


def test_sp_sits_in_unitary_symplectic_matrices():
    g = build_classical("sp", 2)
    # X commutes with the quaternionic structure: X J = J conj(X), J = [[0,-I],[I,0]]
    Jc = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    J = complex_to_real(Jc.astype(complex))
    conj = np.diag([1.0] * 4 + [-1.0] * 4)
    for b in g.basis:
        assert np.abs(b + b.T).max() < 1e-12
        assert np.abs(b @ J - J @ conj @ b @ conj).max() < 1e-12


def test_real_part_mask_is_projector():
    g = build_classical("su", 3)
    P = real_part_mask(g, "su")
    assert np.abs(P @ P - P).max() < 1e-12
    assert round(np.trace(P)) == 3  # so(3) inside su(3)


def test_diagonal_torus_rank():
    g = build_classical("su", 4)
    T = diagonal_torus(g, 4)
    assert np.linalg.matrix_rank(T) == 3
