"""Exact linear algebra over prime fields F_p.

Small dense matrices as lists of lists of ints in [0, p); no floating
point anywhere.  Everything here is plain Gaussian elimination, sized
for desk-scale problems (dimensions in the tens).
"""

from __future__ import annotations


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """Arithmetic mod a prime p, with cached inverses."""

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"field order must be prime, got {p}")
        self.p = p
        self._inv = [0] * p
        for a in range(1, p):
            self._inv[a] = pow(a, p - 2, p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def units(self):
        return list(range(1, self.p))

    def elements(self):
        return list(range(self.p))

    def sign(self, exponent):
        """(-1)^exponent as a field element."""
        return 1 if exponent % 2 == 0 else (self.p - 1)

    def __repr__(self):
        return f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(F, A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    n, k, m = len(A), len(B), len(B[0])
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] = (row[j] + a * Bt[j]) % F.p
    return out


def mat_vec(F, A, v):
    return [sum(a * x for a, x in zip(row, v)) % F.p for row in A]


def row_echelon(F, M):
    """Row-reduce (copy of) M; returns (reduced rows, pivot column list)."""
    R = [row[:] for row in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if R[i][c] % F.p:
                pivot = i
                break
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = F.inv(R[r][c])
        R[r] = [(x * inv) % F.p for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] % F.p:
                f = R[i][c]
                R[i] = [(x - f * y) % F.p for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(F, M):
    if not M or not M[0]:
        return 0
    return len(row_echelon(F, M)[1])


def nullspace(F, M):
    """Basis of the right kernel {v : M v = 0}, as a list of vectors."""
    if not M:
        return []
    cols = len(M[0])
    R, pivots = row_echelon(F, M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-R[r][fc]) % F.p
        basis.append(v)
    return basis


def solve(F, A, b):
    """One solution of A x = b, or None."""
    if not A:
        return [] if not any(b) else None
    cols = len(A[0])
    aug = [row[:] + [bb] for row, bb in zip(A, b)]
    R, pivots = row_echelon(F, aug)
    if cols in pivots:
        return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def image_basis(F, M):
    """Basis of the column span of M (as column vectors)."""
    if not M or not M[0]:
        return []
    T = [list(col) for col in zip(*M)]
    R, pivots = row_echelon(F, T)
    return [R[i] for i in range(len(pivots))]


def in_span(F, basis, v):
    """Is v in the span of the given row vectors?"""
    if not basis:
        return not any(x % F.p for x in v)
    M = [b[:] for b in basis]
    return rank(F, M) == rank(F, M + [list(v)])


def quotient_basis(F, sub, total_dim):
    """Coordinates (indices of unit vectors) completing `sub` to F^total_dim.

    Returns indices i such that e_i projects to a basis of the quotient.
    """
    R, pivots = row_echelon(F, sub) if sub else ([], [])
    return [i for i in range(total_dim) if i not in pivots]


def invertible_matrices(F, n):
    """Yield all of GL(n, F).  Exponential; fine for n <= 3 at small p."""
    from itertools import product

    if n == 0:
        yield []
        return
    for entries in product(F.elements(), repeat=n * n):
        M = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if rank(F, M) == n:
            yield M
