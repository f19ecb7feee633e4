"""
Exact linear algebra over prime fields F_p.

Vectors are rows and matrices act on the right: v -> v @ M.  Arrays are
int64 numpy arrays with entries in [0, p).  FpMatrix and Subspace are thin
immutable wrappers that carry the modulus around.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import MAX_AMBIENT_DIM
from .errors import ModulusError, StructuralError

MAX_PRIME = 2**31


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise StructuralError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p > MAX_PRIME or not is_prime(p):
        raise StructuralError(f"{p} is not a prime <= 2^31")
    return p


@lru_cache(maxsize=32)
def inverse_table(p: int) -> np.ndarray:
    """inv[a] = a^-1 mod p (inv[0] = 0).  Only built for p <= 2^16."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    if p <= 2**16:
        return int(inverse_table(p)[a])
    return pow(a, -1, p)


@dataclass(frozen=True)
class FpScalar:
    residue: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "residue", int(self.residue) % self.p)

    def _other(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ModulusError(f"moduli differ: {self.p} vs {other.p}")
            return other.residue
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FpScalar(self.residue + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FpScalar(self.residue - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return FpScalar(o - self.residue, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return FpScalar(self.residue * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.residue, self.p)

    def inverse(self) -> FpScalar:
        return FpScalar(inv(self.residue, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        return self * FpScalar(o, self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpScalar(pow(self.residue, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, (int, np.integer)):
            return self.residue == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.p})"


# ---------------------------------------------------------------- arrays


def as_array(entries, p: int, ndim=None) -> np.ndarray:
    """Reduce `entries` mod p into an int64 array.  FpScalar grids are
    accepted as long as they all share modulus p."""
    if isinstance(entries, np.ndarray) and entries.dtype != object:
        a = np.asarray(entries, dtype=np.int64) % p
    else:
        a = np.array(entries, dtype=object)
        flat = a.reshape(-1)
        out = np.empty(flat.shape, dtype=np.int64)
        for idx, x in enumerate(flat):
            if isinstance(x, FpScalar):
                if x.p != p:
                    raise ModulusError(f"entry with modulus {x.p} in an F_{p} array")
                out[idx] = x.residue
            else:
                out[idx] = int(x) % p
        a = out.reshape(a.shape)
    if ndim is not None and a.ndim != ndim:
        raise StructuralError(f"expected a {ndim}-dimensional array, got shape {a.shape}")
    return a


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p without overflow.  Uses float BLAS when exact."""
    if a.shape[-1] != b.shape[0]:
        raise StructuralError(f"cannot multiply {a.shape} by {b.shape}")
    inner = max(a.shape[-1], 1)
    bound = inner * (p - 1) ** 2
    if bound < 2**52:
        c = np.rint(a.astype(np.float64) @ b.astype(np.float64))
        return c.astype(np.int64) % p
    if bound < 2**62:
        return (a @ b) % p
    c = (a.astype(object) @ b.astype(object)) % p
    return c.astype(np.int64)


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    r = np.array(a, dtype=np.int64) % p
    if r.ndim != 2:
        raise StructuralError("rref needs a matrix")
    rows, cols = r.shape
    pivots = []
    row = 0
    for c in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, c])[0]
        if nz.size == 0:
            continue
        k = row + nz[0]
        if k != row:
            r[[row, k]] = r[[k, row]]
        r[row] = (r[row] * inv(int(r[row, c]), p)) % p
        col = r[:, c].copy()
        col[row] = 0
        others = np.nonzero(col)[0]
        if others.size:
            r[others] = (r[others] - np.outer(col[others], r[row]) % p) % p
        pivots.append(c)
        row += 1
    return r[:row], tuple(pivots)


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {v : v @ a = 0}, in reduced echelon form."""
    a = np.asarray(a, dtype=np.int64)
    rows = a.shape[0]
    # right null space of a^T
    r, piv = rref(a.T, p)
    free = [j for j in range(rows) if j not in set(piv)]
    basis = np.zeros((len(free), rows), dtype=np.int64)
    for t, j in enumerate(free):
        basis[t, j] = 1
        for i, c in enumerate(piv):
            basis[t, c] = (-r[i, j]) % p
    if basis.shape[0] == 0:
        return basis
    return rref(basis, p)[0]


def inverse_matrix(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise StructuralError("inverse needs a square matrix")
    r, piv = rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    if tuple(piv[:n]) != tuple(range(n)):
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def solve(a: np.ndarray, v: np.ndarray, p: int):
    """Some x with x @ a = v, or None."""
    a = np.asarray(a, dtype=np.int64) % p
    v = np.asarray(v, dtype=np.int64) % p
    m = a.shape[0]
    aug = np.hstack([a.T, v.reshape(-1, 1)])
    r, piv = rref(aug, p)
    if m in piv:
        return None
    x = np.zeros(m, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, m]
    return x


def mat_power(a: np.ndarray, k: int, p: int) -> np.ndarray:
    n = a.shape[0]
    result = np.eye(n, dtype=np.int64) % p
    base = a % p
    while k:
        if k & 1:
            result = matmul(result, base, p)
        k >>= 1
        if k:
            base = matmul(base, base, p)
    return result


def nilpotency_index_array(a: np.ndarray, p: int, bound: int):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructuralError(f"nilpotency index needs a square matrix, got {a.shape}")
    power = np.eye(a.shape[0], dtype=np.int64)
    for k in range(1, bound + 1):
        power = matmul(power, a, p)
        if not power.any():
            return k
    return None


# ---------------------------------------------------------------- wrappers


class FpMatrix:
    """Immutable matrix over F_p."""

    __slots__ = ("arr", "p")

    def __init__(self, entries, p: int):
        p = check_prime(p)
        a = as_array(entries, p)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise StructuralError(f"matrix entries must be 2-dimensional, got shape {a.shape}")
        if max(a.shape) > MAX_AMBIENT_DIM:
            raise StructuralError(f"dimension {max(a.shape)} exceeds the cap {MAX_AMBIENT_DIM}")
        a.setflags(write=False)
        object.__setattr__(self, "arr", a)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def _wrap(cls, arr: np.ndarray, p: int) -> FpMatrix:
        m = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(m, "arr", arr)
        object.__setattr__(m, "p", p)
        return m

    @classmethod
    def identity(cls, n: int, p: int) -> FpMatrix:
        return cls._wrap(np.eye(n, dtype=np.int64), check_prime(p))

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> FpMatrix:
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), check_prime(p))

    @property
    def shape(self):
        return self.arr.shape

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    @property
    def T(self) -> FpMatrix:
        return FpMatrix._wrap(self.arr.T, self.p)

    def _same(self, other: FpMatrix):
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ModulusError(f"moduli differ: {self.p} vs {other.p}")

    def __matmul__(self, other):
        if isinstance(other, np.ndarray):
            return matmul(self.arr, other.astype(np.int64) % self.p, self.p)
        self._same(other)
        return FpMatrix._wrap(matmul(self.arr, other.arr, self.p), self.p)

    def __rmatmul__(self, v):
        """Row vector (or stack of rows) times matrix."""
        return matmul(np.asarray(v, dtype=np.int64) % self.p, self.arr, self.p)

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix._wrap((self.arr + other.arr) % self.p, self.p)

    def __sub__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix._wrap((self.arr - other.arr) % self.p, self.p)

    def __neg__(self):
        return FpMatrix._wrap((-self.arr) % self.p, self.p)

    def __mul__(self, scalar):
        if isinstance(scalar, FpScalar):
            if scalar.p != self.p:
                raise ModulusError("moduli differ")
            scalar = scalar.residue
        return FpMatrix._wrap((self.arr * (int(scalar) % self.p)) % self.p, self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if self.rows != self.cols:
            raise StructuralError("power of a non-square matrix")
        return FpMatrix._wrap(mat_power(self.arr, k, self.p), self.p)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.arr, other.arr)

    def __hash__(self):
        return hash((self.p, self.shape, self.arr.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.arr.tolist()})"

    def is_zero(self) -> bool:
        return not self.arr.any()

    def entry(self, i: int, j: int) -> FpScalar:
        return FpScalar(int(self.arr[i, j]), self.p)

    def rank(self) -> int:
        return rank(self.arr, self.p)

    def rref(self):
        r, piv = rref(self.arr, self.p)
        return FpMatrix._wrap(r, self.p), piv

    def kernel(self) -> Subspace:
        return kernel(self)

    def row_space(self) -> Subspace:
        return Subspace.from_vectors(self.arr, self.cols, self.p)

    def image_of(self, space: Subspace) -> Subspace:
        return space.image(self)


def kernel(m: FpMatrix) -> Subspace:
    """{v : v M = 0} as a canonical Subspace."""
    if not isinstance(m, FpMatrix):
        raise TypeError("kernel expects an FpMatrix")
    return Subspace._from_rref(kernel_basis(m.arr, m.p), m.rows, m.p)


def nilpotency_index(m: FpMatrix, bound: int):
    """Least k <= bound with M^k = 0, else None."""
    return nilpotency_index_array(m.arr, m.p, bound)


class Subspace:
    """Subspace of F_p^n held by its reduced echelon basis."""

    __slots__ = ("basis", "ambient_dim", "p", "pivots")

    def __init__(self, *a, **k):
        raise TypeError("use Subspace.from_vectors / zero / full")

    @classmethod
    def _from_rref(cls, basis: np.ndarray, ambient_dim: int, p: int, pivots=None) -> Subspace:
        s = object.__new__(cls)
        basis = np.ascontiguousarray(basis, dtype=np.int64).reshape(-1, ambient_dim)
        basis.setflags(write=False)
        if pivots is None:
            pivots = tuple(int(np.nonzero(row)[0][0]) for row in basis)
        object.__setattr__(s, "basis", basis)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "p", p)
        object.__setattr__(s, "pivots", tuple(pivots))
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int, p: int) -> Subspace:
        p = check_prime(p)
        if ambient_dim > MAX_AMBIENT_DIM:
            raise StructuralError(f"dimension {ambient_dim} exceeds the cap {MAX_AMBIENT_DIM}")
        v = as_array(vectors, p).reshape(-1, ambient_dim)
        if v.shape[0] == 0:
            return cls.zero(ambient_dim, p)
        r, piv = rref(v, p)
        return cls._from_rref(r, ambient_dim, p, piv)

    @classmethod
    def zero(cls, n: int, p: int) -> Subspace:
        return cls._from_rref(np.zeros((0, n), dtype=np.int64), n, p, ())

    @classmethod
    def full(cls, n: int, p: int) -> Subspace:
        return cls._from_rref(np.eye(n, dtype=np.int64), n, p, tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def _check(self, other: Subspace):
        if other.p != self.p:
            raise ModulusError(f"moduli differ: {self.p} vs {other.p}")
        if other.ambient_dim != self.ambient_dim:
            raise StructuralError("ambient dimensions differ")

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of v modulo this subspace."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.dim == 0:
            return v.copy()
        single = v.ndim == 1
        w = v.reshape(-1, self.ambient_dim).copy()
        coeffs = w[:, list(self.pivots)]
        w = (w - matmul(coeffs, self.basis, self.p)) % self.p
        return w[0] if single else w

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of v in the echelon basis (v must lie in the space)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.contains(v):
            raise StructuralError("vector is not in the subspace")
        return v[..., list(self.pivots)].copy()

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return self.dim == 0 or not other.reduce(self.basis).any()

    def __ge__(self, other: Subspace) -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.from_vectors(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def __and__(self, other: Subspace) -> Subspace:
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        stacked = np.vstack([self.basis, other.basis])
        k = kernel_basis(stacked, self.p)
        vecs = matmul(k[:, : self.dim], self.basis, self.p) if k.shape[0] else k[:, :0]
        return Subspace.from_vectors(vecs.reshape(-1, self.ambient_dim), self.ambient_dim, self.p)

    intersect = __and__

    def image(self, m) -> Subspace:
        arr = m.arr if isinstance(m, FpMatrix) else np.asarray(m, dtype=np.int64)
        if arr.shape[0] != self.ambient_dim:
            raise StructuralError("matrix does not act on this ambient space")
        if self.dim == 0:
            return Subspace.zero(arr.shape[1], self.p)
        return Subspace.from_vectors(matmul(self.basis, arr % self.p, self.p), arr.shape[1], self.p)

    def complement_indices(self):
        """Standard basis positions that complement the space."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


class Quotient:
    """Coordinates on V/K for subspaces K <= V.

    Representatives are picked greedily from V's echelon basis."""

    def __init__(self, V: Subspace, K: Subspace):
        if not K <= V:
            raise StructuralError("K is not contained in V")
        self.V, self.K, self.p = V, K, V.p
        reps = []
        current = K
        for row in V.basis:
            if not current.contains(row):
                reps.append(row)
                current = current + Subspace.from_vectors(row, V.ambient_dim, V.p)
        n = V.ambient_dim
        self.reps = np.array(reps, dtype=np.int64).reshape(-1, n)
        self.dim = self.reps.shape[0]
        m = np.vstack([K.basis, self.reps])
        if m.shape[0] == 0:
            self._proj = np.zeros((n, 0), dtype=np.int64)
            return
        _, piv = rref(m.T, self.p)  # independent columns of m
        cols = list(piv)
        sub_inv = inverse_matrix(m[:, cols], self.p)
        proj = np.zeros((n, self.dim), dtype=np.int64)
        proj[cols, :] = sub_inv[:, K.dim:]
        self._proj = proj

    def coords(self, v) -> np.ndarray:
        """Quotient coordinates of v (or rows of v), assumed to lie in V."""
        return matmul(np.asarray(v, dtype=np.int64) % self.p, self._proj, self.p)

    def lift(self, c) -> np.ndarray:
        return matmul(np.asarray(c, dtype=np.int64) % self.p, self.reps, self.p)
