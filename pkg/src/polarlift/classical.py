"""Compact classical Lie algebras in a real matrix encoding.

su(n) is written as real 2n x 2n blocks ``[[Re, -Im], [Im, Re]]``; sp(n) sits
inside su(2n) as the matrices commuting with the quaternionic structure and is
then encoded the same way.  so(n) is used as is.

The isotropy constructions below name their ideal factors, which is how a
corpus entry picks K.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import LieAlgebra, direct_sum

FAMILIES = ("su", "so", "sp")
_MIN_N = {"su": 2, "so": 3, "sp": 2}


def _E(n: int, i: int, j: int, dtype=float) -> np.ndarray:
    m = np.zeros((n, n), dtype=dtype)
    m[i, j] = 1
    return m


def complex_to_real(z: np.ndarray) -> np.ndarray:
    a, b = z.real, z.imag
    return np.block([[a, -b], [b, a]])


def encode(family: str, mat: np.ndarray) -> np.ndarray:
    """Map a defining-representation matrix to the real encoding."""
    if family == "so":
        return np.asarray(mat, dtype=float)
    return complex_to_real(np.asarray(mat, dtype=complex))


def u_spanning(n: int, traceless: bool) -> list[np.ndarray]:
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_E(n, i, j, complex) - _E(n, j, i, complex))
            mats.append(1j * (_E(n, i, j, complex) + _E(n, j, i, complex)))
    if traceless:
        for j in range(n - 1):
            mats.append(1j * (_E(n, j, j, complex) - _E(n, j + 1, j + 1, complex)))
    else:
        for j in range(n):
            mats.append(1j * _E(n, j, j, complex))
    return mats


def so_spanning(n: int) -> list[np.ndarray]:
    return [_E(n, i, j) - _E(n, j, i) for i in range(n) for j in range(i + 1, n)]


def quaternionic(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """The element of sp(n) inside su(2n) with blocks A (in u(n)) and B (symmetric)."""
    return np.block([[A, -B.conj()], [B, A.conj()]])


def sp_spanning(n: int) -> list[np.ndarray]:
    zero = np.zeros((n, n), dtype=complex)
    mats = [quaternionic(A, zero) for A in u_spanning(n, traceless=False)]
    for i in range(n):
        for j in range(i, n):
            S = _E(n, i, j, complex) + _E(n, j, i, complex)
            if i == j:
                S = S / 2
            mats.append(quaternionic(zero, S))
            mats.append(quaternionic(zero, 1j * S))
    return mats


def build_classical(family: str, n: int) -> LieAlgebra:
    """Compact real form su(n), so(n) or sp(n) with orthonormal basis."""
    if family not in FAMILIES:
        raise ValueError(f"unsupported family {family!r}; expected one of {FAMILIES}")
    if int(n) != n or n < _MIN_N[family]:
        raise ValueError(f"{family}({n}): n must be an integer >= {_MIN_N[family]}")
    n = int(n)
    if family == "su":
        mats = u_spanning(n, traceless=True)
    elif family == "so":
        mats = so_spanning(n)
    else:
        mats = sp_spanning(n)
    return LieAlgebra.from_matrices(f"{family}({n})", [encode(family, m) for m in mats])


def defining_coords(g: LieAlgebra, family: str, mats) -> np.ndarray:
    """Coordinates (one column per matrix) of defining-representation matrices."""
    cols = [g.coords(encode(family, m)) for m in mats]
    return np.array(cols).T if cols else np.zeros((g.dim, 0))


def _block(n: int, start: int, m: np.ndarray) -> np.ndarray:
    out = np.zeros((n, n), dtype=m.dtype)
    k = m.shape[0]
    out[start:start + k, start:start + k] = m
    return out


def _sp_block(n: int, start: int, X: np.ndarray) -> np.ndarray:
    """Place an sp(k) element (2k x 2k complex) into sp(n) on quaternionic rows start..start+k."""
    k = X.shape[0] // 2
    A, B = X[:k, :k], X[k:, :k]
    return quaternionic(_block(n, start, A), _block(n, start, B))


@dataclass(frozen=True)
class Isotropy:
    """A realized symmetric pair candidate: algebra, isotropy generators, named subalgebras.

    ``factors`` lists the ideal factors of h in declared order; ``extra`` holds
    named subalgebras of h that are not ideals (used as rejection controls).
    """

    g: LieAlgebra
    family: str
    h_generators: np.ndarray
    factors: dict
    extra: dict


def _pack(g, family, factors, extra=None):
    factors = {k: defining_coords(g, family, v) for k, v in factors.items()}
    extra = {k: defining_coords(g, family, v) for k, v in (extra or {}).items()}
    gens = [c for c in factors.values() if c.shape[1]]
    h = np.hstack(gens) if gens else np.zeros((g.dim, 0))
    return Isotropy(g, family, h, factors, extra)


def _so4_halves(n: int, offset: int = 0):
    def A(i, j):
        return _E(n, offset + i, offset + j) - _E(n, offset + j, offset + i)
    plus = [A(0, 1) + A(2, 3), A(0, 2) - A(1, 3), A(0, 3) + A(1, 2)]
    minus = [A(0, 1) - A(2, 3), A(0, 2) + A(1, 3), A(0, 3) - A(1, 2)]
    std = [A(0, 1), A(0, 2), A(1, 2)]
    return plus, minus, std


def su_s_u_pq(p: int, q: int) -> Isotropy:
    """SU(p+q) / S(U(p) U(q)): factors su(p), su(q), u(1)."""
    n = p + q
    g = build_classical("su", n)
    top = [_block(n, 0, m) for m in u_spanning(p, traceless=True)] if p > 1 else []
    bottom = [_block(n, p, m) for m in u_spanning(q, traceless=True)] if q > 1 else []
    center = 1j * np.diag([q] * p + [-p] * q).astype(complex)
    return _pack(g, "su", {"su(p)": top, "su(q)": bottom, "u(1)": [center]})


def su_so_n(n: int) -> Isotropy:
    """SU(n) / SO(n); for n = 4 the factors are the two so(3) ideals."""
    g = build_classical("su", n)
    if n == 4:
        plus, minus, std = _so4_halves(4)
        to_c = lambda ms: [m.astype(complex) for m in ms]  # noqa: E731
        return _pack(g, "su", {"so(3)+": to_c(plus), "so(3)-": to_c(minus)},
                     {"so(3)std": to_c(std)})
    return _pack(g, "su", {"so(n)": [m.astype(complex) for m in so_spanning(n)]})


def so_so_pq(p: int, q: int) -> Isotropy:
    """SO(p+q) / SO(p) SO(q); an so(4) block is split into its so(3) ideals."""
    n = p + q
    g = build_classical("so", n)
    factors: dict = {}
    for label, size, start in (("so(p)", p, 0), ("so(q)", q, p)):
        if size == 4:
            plus, minus, _ = _so4_halves(n, start)
            factors[label.replace(")", ")+")] = plus
            factors[label.replace(")", ")-")] = minus
        elif size >= 2:
            factors[label] = [_block(n, start, m) for m in so_spanning(size)]
    return _pack(g, "so", factors)


def so_u_n(n: int) -> Isotropy:
    """SO(2n) / U(n) through the complex structure of the real encoding."""
    g = build_classical("so", 2 * n)
    su = [complex_to_real(m) for m in u_spanning(n, traceless=True)]
    center = [complex_to_real(1j * np.eye(n))]
    return _pack(g, "so", {"su(n)": su, "u(1)": center})


def sp_sp_pq(p: int, q: int) -> Isotropy:
    """Sp(p+q) / Sp(p) Sp(q)."""
    n = p + q
    g = build_classical("sp", n)
    top = [_sp_block(n, 0, m) for m in sp_spanning(p)]
    bottom = [_sp_block(n, p, m) for m in sp_spanning(q)]
    return _pack(g, "sp", {"sp(p)": top, "sp(q)": bottom})


def sp_u_n(n: int) -> Isotropy:
    """Sp(n) / U(n): A in u(n), B = 0."""
    g = build_classical("sp", n)
    zero = np.zeros((n, n), dtype=complex)
    su = [quaternionic(A, zero) for A in u_spanning(n, traceless=True)]
    center = [quaternionic(1j * np.eye(n), zero)]
    return _pack(g, "sp", {"su(n)": su, "u(1)": center})


def su_pair_tori(n: int) -> Isotropy:
    """The non-simple control (SU(n) x SU(n)) / (T x T) with T = S(U(n-1) U(1))-centre."""
    a = build_classical("su", n)
    g = direct_sum(a, a, f"su({n})+su({n})")
    center = 1j * np.diag([1] * (n - 1) + [-(n - 1)]).astype(complex)
    ca = a.coords(complex_to_real(center))
    first = np.concatenate([ca, np.zeros(a.dim)])[:, None]
    second = np.concatenate([np.zeros(a.dim), ca])[:, None]
    factors = {"u(1)a": first, "u(1)b": second}
    return Isotropy(g, "su+su", np.hstack([first, second]), factors, {})


# (family, h_spec) -> (builder, number of integer params)
ISOTROPY_SPECS = {
    ("su", "s(u(p)+u(q))"): (su_s_u_pq, 2),
    ("su", "so(n)"): (su_so_n, 1),
    ("so", "so(p)+so(q)"): (so_so_pq, 2),
    ("so", "u(n)"): (so_u_n, 1),
    ("sp", "sp(p)+sp(q)"): (sp_sp_pq, 2),
    ("sp", "u(n)"): (sp_u_n, 1),
    ("su+su", "u(1)+u(1)"): (su_pair_tori, 1),
}


def named_isotropy(family: str, h_spec: str, params) -> Isotropy:
    try:
        builder, nparams = ISOTROPY_SPECS[(family, h_spec)]
    except KeyError:
        raise ValueError(f"no isotropy construction {h_spec!r} for family {family!r}") from None
    if len(params) != nparams:
        raise ValueError(f"{family}/{h_spec} takes {nparams} parameter(s), got {list(params)}")
    if min(params) < 1:
        raise ValueError(f"{family}/{h_spec} parameters must be positive, got {list(params)}")
    return builder(*params)


def diagonal_torus(g: LieAlgebra, n: int) -> np.ndarray:
    """Coordinates of the diagonal maximal torus of su(n)."""
    mats = [1j * (_E(n, j, j, complex) - _E(n, j + 1, j + 1, complex)) for j in range(n - 1)]
    return defining_coords(g, "su", mats)


def real_part_mask(g: LieAlgebra, family: str) -> np.ndarray:
    """Projector onto the elements of g whose defining matrix is real (so(n) inside su(n))."""
    if family != "su":
        raise ValueError("real sections are defined here for su(n) only")
    N = g.matrix_size // 2
    reals = defining_coords(g, "su", [m.astype(complex) for m in so_spanning(N)])
    return reals @ np.linalg.pinv(reals)
