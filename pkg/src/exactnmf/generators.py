"""Benchmark nonnegative matrices with known rank and nonnegative rank.

Families: linear Euclidean distance matrices, slack matrices of regular and
generic n-gons, of the dodecahedron and of the 24-cell, unique-disjointness
cover matrices, random low-rank products, and the two 4-by-4 matrices behind
the Kronecker-product counterexamples.  ``benchmark_registry`` assembles the
18 standard instances with their metadata.

Randomized generators are pure functions of (arguments, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .linalg import as_matrix, numeric_rank

__all__ = [
    "ConstructionError",
    "BenchmarkEntry",
    "ledm",
    "ledm_integer",
    "polygon_slack",
    "regular_ngon_slack",
    "generic_ngon_slack",
    "dodecahedron_slack",
    "cell24_slack",
    "udisj_y",
    "random_product",
    "nested_squares",
    "kronecker_gap_matrix",
    "corr_submatrix",
    "conjectured_ngon_rank",
    "benchmark_registry",
    "registry_entry",
    "registry_names",
    "RND1_SEED",
    "RND3_SEED",
]

# pinned seeds for the two random-product registry instances
RND1_SEED = 101
RND3_SEED = 303

# trigonometric round-off must not leave tiny negatives or break the
# exact zero pattern of slack matrices
ZERO_CLAMP = 1e-12


class ConstructionError(RuntimeError):
    """A generator's build-time self-check failed."""


def ledm(a) -> np.ndarray:
    """Linear Euclidean distance matrix: entry (i, j) is (a_i - a_j)^2."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size < 2:
        raise ValueError("need a 1-d vector with at least two entries")
    d = a[:, None] - a[None, :]
    return d * d


def ledm_integer(n: int) -> np.ndarray:
    """The integer instance with a = (1, ..., n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return ledm(np.arange(1, n + 1, dtype=np.float64))


def _clamp_zeros(S: np.ndarray) -> np.ndarray:
    if S.min() < -ZERO_CLAMP:
        raise ConstructionError(f"slack entry {S.min()} below -{ZERO_CLAMP}")
    S[np.abs(S) < ZERO_CLAMP] = 0.0
    return S


def polygon_slack(angles) -> np.ndarray:
    """Slack matrix of the polygon with vertices on the unit circle.

    ``angles`` must be strictly increasing in [0, 2*pi) with consecutive gaps
    (including the wrap-around) below pi, so the origin is interior.  Row i
    is the edge through vertices i and i+1, normalized to right-hand side 1;
    entry (i, j) is the slack of vertex j against edge i, clamped to 0 when
    within 1e-12.
    """
    theta = np.asarray(angles, dtype=np.float64)
    n = theta.size
    if n < 3:
        raise ValueError("a polygon needs at least three vertices")
    if theta.min() < 0 or theta.max() >= 2 * np.pi:
        raise ValueError("angles must lie in [0, 2*pi)")
    gaps = np.diff(np.append(theta, theta[0] + 2 * np.pi))
    if gaps.min() <= 0:
        raise ValueError("angles must be strictly increasing")
    if gaps.max() >= np.pi:
        raise ValueError("consecutive angular gaps must stay below pi")
    V = np.column_stack([np.cos(theta), np.sin(theta)])
    S = np.empty((n, n))
    for i in range(n):
        j = (i + 1) % n
        # edge through two unit vectors: (v_i + v_j) . x = 1 + cos(gap)
        a = (V[i] + V[j]) / (1.0 + np.cos(gaps[i]))
        S[i] = 1.0 - V @ a
    return _clamp_zeros(S)


def regular_ngon_slack(n: int) -> np.ndarray:
    """Slack matrix of the regular n-gon, n-by-n of rank 3."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return polygon_slack(2 * np.pi * np.arange(n) / n)


def generic_ngon_slack(n: int, seed) -> np.ndarray:
    """Slack matrix of a random n-gon with well-separated vertices.

    The circle is split into n equal arcs and vertex j is drawn uniformly
    from the middle two quarters of arc j, which keeps every pairwise angular
    gap strictly above pi/n and the polygon numerically far from degenerate.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    arc = 2 * np.pi / n
    theta = (np.arange(n) + 0.25 + 0.5 * rng.random(n)) * arc
    return polygon_slack(theta)


def dodecahedron_slack() -> np.ndarray:
    """20-by-12 slack matrix of the regular dodecahedron (rank 4).

    Vertices are the cube corners (+-1, +-1, +-1) together with the cyclic
    permutations of (0, +-1/phi, +-phi); facet normals are the cyclic
    permutations of (0, +-phi, +-1), scaled to right-hand side 1.  Rows are
    vertices, columns facets: every pentagonal facet contains 5 vertices and
    every vertex lies on 3 facets.
    """
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [(sx, sy, sz) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)]
    for s1 in (1, -1):
        for s2 in (1, -1):
            verts += [(0, s1 / phi, s2 * phi),
                      (s1 / phi, s2 * phi, 0),
                      (s1 * phi, 0, s2 / phi)]
    V = np.array(verts, dtype=np.float64)
    normals = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            normals += [(0, s1 * phi, s2),
                        (s1 * phi, s2, 0),
                        (s1, 0, s2 * phi)]
    C = np.array(normals, dtype=np.float64) / (phi + 1.0)  # b = phi^2 = phi + 1
    S = 1.0 - V @ C.T
    return _clamp_zeros(S)


def cell24_slack() -> np.ndarray:
    """24-by-24 slack matrix of the 24-cell (rank 5).

    Vertices are the 24 permutations of (+-1, +-1, 0, 0); the 24 facets are
    c . x <= 1 for c among the 8 signed unit vectors and the 16 vectors
    (+-1/2, +-1/2, +-1/2, +-1/2).  Rows are facets; each octahedral facet
    contains 6 vertices, so every row has exactly 6 zeros.
    """
    verts = []
    for i, j in combinations(range(4), 2):
        for si in (1, -1):
            for sj in (1, -1):
                v = [0.0] * 4
                v[i], v[j] = si, sj
                verts.append(v)
    V = np.array(verts, dtype=np.float64)
    facets = []
    for i in range(4):
        for s in (1, -1):
            c = [0.0] * 4
            c[i] = s
            facets.append(c)
    facets += [list(signs) for signs in product((0.5, -0.5), repeat=4)]
    C = np.array(facets, dtype=np.float64)
    S = 1.0 - C @ V.T
    return _clamp_zeros(S)


def bit_vectors(n: int) -> np.ndarray:
    """All vectors of {0,1}^n as rows, in binary counting order (MSB first)."""
    idx = np.arange(2**n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.float64)


# Local rectangle sums for the unique-disjointness cover.  Coordinates are
# grouped into pairs (plus one leftover when n is odd); per pair the three
# rectangle types {00,01}x{00,10}, {00,10}x{00,01}, {00,11}x{00,11} cover all
# nine locally disjoint bit patterns while keeping every inner product even.
_UDISJ_PAIR_SUM = np.array([[3.0, 1, 1, 1],
                            [1, 0, 1, 0],
                            [1, 1, 0, 0],
                            [1, 0, 0, 1]])
_UDISJ_LEFTOVER_SUM = np.array([[2.0, 1],
                                [1, 0]])


def udisj_y(n: int) -> np.ndarray:
    """Sum of a rectangle cover of the unique-disjointness matrix of order n.

    The 2^n-by-2^n result Y satisfies Y(a,b) = 0 whenever a.b = 1 and
    Y(a,b) >= 1 whenever a.b = 0, and its rank equals the number of
    rectangles in the cover: 3^(n/2) for even n, 2*3^((n-1)/2) for odd n.
    Because the cover is this module's own construction, those properties
    are re-verified at build time and a failure aborts.
    """
    if not 2 <= n <= 7:
        raise ValueError("order n must be between 2 and 7")
    Y = np.ones((1, 1))
    for _ in range(n // 2):
        Y = np.kron(Y, _UDISJ_PAIR_SUM)
    if n % 2:
        Y = np.kron(Y, _UDISJ_LEFTOVER_SUM)
    r = 3 ** (n // 2) * (2 if n % 2 else 1)
    bits = bit_vectors(n)
    inner = bits @ bits.T
    if not np.all(Y[inner == 1] == 0):
        raise ConstructionError(f"order {n}: nonzero entry on an intersecting pair")
    if not np.all(Y[inner == 0] >= 1):
        raise ConstructionError(f"order {n}: uncovered disjoint pair")
    if numeric_rank(Y) != r:
        raise ConstructionError(
            f"order {n}: rank {numeric_rank(Y)} differs from cover size {r}"
        )
    return Y


def random_product(m: int = 50, n: int = 50, r: int = 10, density: float = 0.1,
                   seed=0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random exactly-factorizable X = W H with prescribed nonnegative rank.

    Each column of W starts with a single U[0,1] entry at a random row (so no
    rank-one factor vanishes), then a sparse U[0,1] perturbation is added in
    which every entry is independently nonzero with probability ``density``.
    H is built the same way with rows and columns swapped.  Returns
    (X, W, H).
    """
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    if r >= min(m, n):
        raise ValueError("r must be below min(m, n)")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    W = np.zeros((m, r))
    W[rng.integers(0, m, size=r), np.arange(r)] = rng.random(r)
    W += (rng.random((m, r)) < density) * rng.random((m, r))
    H = np.zeros((r, n))
    H[np.arange(r), rng.integers(0, n, size=r)] = rng.random(r)
    H += (rng.random((r, n)) < density) * rng.random((r, n))
    return W @ H, W, H


def nested_squares(a: float) -> np.ndarray:
    """4-by-4 slack matrix of a square nested inside another square.

    Rows are the outer square's edges, columns the inner square's vertices.
    For sqrt(2) - 1 < a <= 1 the matrix has nonnegative rank 4, and at
    a = sqrt(2) - 0.9 its rank drops to 3 while the Kronecker square admits
    a rank-12 exact factorization.
    """
    if not 0 <= a <= 1:
        raise ValueError("a must lie in [0, 1]")
    p, q = 1.0 + a, 1.0 - a
    return np.array([[p, q, q, p],
                     [q, p, p, q],
                     [p, p, q, q],
                     [q, q, p, p]])


def kronecker_gap_matrix() -> np.ndarray:
    """A 4-by-4 matrix of nonnegative rank 4 whose Kronecker square admits
    a 15-term exact factorization, one below the product of the factors'
    nonnegative ranks.  The value a = 3/8 makes the plain rank drop to 3."""
    a = 3.0 / 8.0
    return np.array([[1.0, 0, 1, a],
                     [0, 1, 0, 1 - a],
                     [0, 0, 1, 1 - a],
                     [1, 1, 0, a]])


def corr_submatrix(n: int) -> np.ndarray:
    """2^n-by-2^n matrix with entry (1 - a.b)^2 over bit-vector indices.

    A submatrix of the slack matrix of the correlation polytope; its rank is
    n(n+1)/2 + 1.
    """
    if not 2 <= n <= 7:
        raise ValueError("order n must be between 2 and 7")
    bits = bit_vectors(n)
    return (1.0 - bits @ bits.T) ** 2


def conjectured_ngon_rank(n: int) -> int:
    """Conjectured nonnegative rank of the regular n-gon's slack matrix.

    2k - 1 for 2^(k-1) < n <= 2^(k-1) + 2^(k-2), else 2k for
    2^(k-1) + 2^(k-2) < n <= 2^k.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    k = max(2, int(np.ceil(np.log2(n))))
    while 2**k < n:  # guard against log2 round-off at powers of two
        k += 1
    while 2 ** (k - 1) >= n:
        k -= 1
    return 2 * k - 1 if n <= 2 ** (k - 1) + 2 ** (k - 2) else 2 * k


@dataclass(frozen=True)
class BenchmarkEntry:
    """One named benchmark instance with its Table-of-record metadata.

    ``nnrank`` is the best known value of the nonnegative rank; when
    ``nnrank_exact`` is False it is only an upper bound believed tight, and
    ``nnrank_lower_bound`` carries the best proven lower bound.
    """

    name: str
    matrix: np.ndarray
    expected_shape: tuple[int, int]
    known_rank: int
    nnrank: int
    nnrank_exact: bool = True
    nnrank_lower_bound: int | None = None
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix, self.name))
        if self.nnrank < self.known_rank:
            raise ValueError(f"{self.name}: nonnegative rank below rank")


def benchmark_registry() -> tuple[BenchmarkEntry, ...]:
    """The 18 standard benchmark instances.

    Random instances use the pinned module seeds so the registry is a fixed
    set of matrices, not a family.
    """
    entries = []
    for n, rp in ((6, 5), (8, 6), (12, 7), (16, 8)):
        entries.append(BenchmarkEntry(
            f"LEDM{n}", ledm_integer(n), (n, n), 3, rp,
            notes="linear EDM on 1..n"))
    entries.append(BenchmarkEntry(
        "LEDM32", ledm_integer(32), (32, 32), 3, 10,
        nnrank_exact=False, nnrank_lower_bound=9,
        notes="linear EDM on 1..32; nonnegative rank 10 is the believed value"))
    for n, rp in ((6, 5), (7, 6), (8, 6), (9, 7), (16, 8), (32, 10)):
        entries.append(BenchmarkEntry(
            f"{n}-G", regular_ngon_slack(n), (n, n), 3, rp,
            notes=f"slack matrix of the regular {n}-gon"))
    entries.append(BenchmarkEntry(
        "20-D", dodecahedron_slack(), (20, 12), 4, 9,
        notes="slack matrix of the dodecahedron"))
    entries.append(BenchmarkEntry(
        "24-C", cell24_slack(), (24, 24), 5, 12,
        nnrank_exact=False, nnrank_lower_bound=10,
        notes="slack matrix of the 24-cell; nonnegative rank 12 is the believed value"))
    for n in (4, 5, 6):
        r = 3 ** (n // 2) * (2 if n % 2 else 1)
        entries.append(BenchmarkEntry(
            f"UDISJ{n}", udisj_y(n), (2**n, 2**n), r, r,
            notes="rectangle-cover unique-disjointness matrix"))
    for label, density, seed in (("RND1", 0.1, RND1_SEED), ("RND3", 0.3, RND3_SEED)):
        X, _, _ = random_product(50, 50, 10, density, seed)
        entries.append(BenchmarkEntry(
            label, X, (50, 50), 10, 10,
            notes=f"random product, density {density}, seed {seed}"))
    return tuple(entries)


def registry_names() -> tuple[str, ...]:
    return tuple(e.name for e in benchmark_registry())


def registry_entry(name: str) -> BenchmarkEntry:
    for e in benchmark_registry():
        if e.name == name:
            return e
    raise KeyError(f"unknown benchmark {name!r}; valid names: {', '.join(registry_names())}")
