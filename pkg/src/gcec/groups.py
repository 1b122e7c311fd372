"""Static catalog of groups and their irreducible representations.

Finite discrete groups are described by generator images and defining
relations; the compact Lie cases (SO3, SU2) are described at the algebra
level by ladder/Cartan triples (L+, L-, Lz).  Cyclic and dihedral groups are
available for any order through the names ``Z<n>`` and ``D<n>``; ``S3`` and
``A4`` are explicit entries.

All matrices are materialized in double precision; roots of unity come from
the complex exponential.  New groups can be registered by extending
``_DISCRETE_BUILDERS`` with a callable returning a :class:`GroupSpec` (see
the existing builders for the expected shape: generator images per irrep,
plus defining relations as pairs of generator words).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionZero, ParityError, UnknownGroup

# A word is a sequence of generator indices; a relation equates two words.
Word = tuple[int, ...]
Relation = tuple[Word, Word]


def _frozen(rows) -> np.ndarray:
    m = np.array(rows, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class Irrep:
    """One irreducible representation, given by its generator images.

    For discrete groups ``generator_matrices`` holds one unitary per group
    generator; for the Lie algebras it holds the triple (L+, L-, Lz).
    """

    index: int
    dim: int
    label: str
    generator_matrices: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class GroupSpec:
    name: str
    kind: str  # "discrete" | "lie"
    num_generators: int
    irreps: tuple[Irrep, ...]
    generator_names: tuple[str, ...] = ()
    relations: tuple[Relation, ...] = ()  # discrete groups only

    def irrep_by_index(self, index: int) -> Irrep:
        for ir in self.irreps:
            if ir.index == index:
                return ir
        from .errors import UnknownIrrepIndex

        raise UnknownIrrepIndex(f"{self.name} has no irrep with index {index}")


@dataclass(frozen=True)
class GroupProps:
    """Catalog lookup payload: restricted irrep list plus the derived counts."""

    group: GroupSpec
    num_generators: int
    num_irreps: int
    irrep_dims: tuple[int, ...]
    num_reps: int


# ---------------------------------------------------------------------------
# discrete-group builders
# ---------------------------------------------------------------------------


def _cyclic(n: int) -> GroupSpec:
    # One generator r with r^n = e; irreps are the n characters r -> e^{2pi i k/n}.
    irreps = tuple(
        Irrep(k, 1, f"q{k}", (_frozen([[np.exp(2j * np.pi * k / n)]]),))
        for k in range(n)
    )
    return GroupSpec(
        name=f"Z{n}",
        kind="discrete",
        num_generators=1,
        irreps=irreps,
        generator_names=("r",),
        relations=(((0,) * n, ()),),
    )


def _symmetric3() -> GroupSpec:
    # Generators: two adjacent transpositions s1, s2 with s1^2 = s2^2 = e and
    # the braid relation s1 s2 s1 = s2 s1 s2.
    s3 = np.sqrt(3.0)
    irreps = (
        Irrep(0, 1, "1", (_frozen([[1.0]]), _frozen([[1.0]]))),
        Irrep(1, 1, "1'", (_frozen([[-1.0]]), _frozen([[-1.0]]))),
        Irrep(
            2,
            2,
            "2",
            (
                _frozen([[1.0, 0.0], [0.0, -1.0]]),
                _frozen([[-0.5, s3 / 2], [s3 / 2, 0.5]]),
            ),
        ),
    )
    return GroupSpec(
        name="S3",
        kind="discrete",
        num_generators=2,
        irreps=irreps,
        generator_names=("s1", "s2"),
        relations=(((0, 0), ()), ((1, 1), ()), ((0, 1, 0), (1, 0, 1))),
    )


def _alternating4() -> GroupSpec:
    # Generators: two 3-cycles g1, g2 with g1^3 = g2^3 = (g1 g2)^2 = e.  The
    # three characters factor through the quotient by the Klein four-group,
    # which forces g2 -> g1^2 on scalars.
    w = np.exp(2j * np.pi / 3)
    g1_3 = _frozen(np.diag([1.0, w, w * w]))
    g2_3 = _frozen(
        (-1.0 / 3.0)
        * np.array(
            [
                [1.0, -2.0 * w * w, 2.0 * w],
                [-2.0, w * w, 2.0 * w],
                [2.0, 2.0 * w * w, w],
            ]
        )
    )
    irreps = (
        Irrep(0, 1, "1", (_frozen([[1.0]]), _frozen([[1.0]]))),
        Irrep(1, 1, "1'", (_frozen([[w]]), _frozen([[w * w]]))),
        Irrep(2, 1, "1''", (_frozen([[w * w]]), _frozen([[w]]))),
        Irrep(3, 3, "3", (g1_3, g2_3)),
    )
    return GroupSpec(
        name="A4",
        kind="discrete",
        num_generators=2,
        irreps=irreps,
        generator_names=("g1", "g2"),
        relations=(((0, 0, 0), ()), ((1, 1, 1), ()), ((0, 1, 0, 1), ())),
    )


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _dihedral(n: int) -> GroupSpec:
    # Generators: a reflection f and the basic rotation r, with
    # f^2 = r^n = (f r)^2 = e.  One-dimensional irreps send both generators to
    # signs; r -> -1 is only consistent when n is even.
    flip = _frozen([[1.0, 0.0], [0.0, -1.0]])
    one_dims: list[tuple[float, float]] = [(1.0, 1.0), (-1.0, 1.0)]
    if n % 2 == 0:
        one_dims += [(1.0, -1.0), (-1.0, -1.0)]
    labels = ["1", "1'", "1''", "1'''"]
    irreps: list[Irrep] = [
        Irrep(i, 1, labels[i], (_frozen([[a]]), _frozen([[b]])))
        for i, (a, b) in enumerate(one_dims)
    ]
    base = len(irreps)
    for k in range(1, (n + 1) // 2 if n % 2 else n // 2):
        irreps.append(
            Irrep(
                base + k - 1,
                2,
                f"2_{k}",
                (flip, _frozen(_rotation(2.0 * np.pi * k / n))),
            )
        )
    return GroupSpec(
        name=f"D{n}",
        kind="discrete",
        num_generators=2,
        irreps=tuple(irreps),
        generator_names=("f", "r"),
        relations=(((0, 0), ()), (((1,) * n), ()), ((0, 1, 0, 1), ())),
    )


_DISCRETE_BUILDERS = {
    "S3": _symmetric3,
    "A4": _alternating4,
}


# ---------------------------------------------------------------------------
# Lie-algebra irreps
# ---------------------------------------------------------------------------


def lie_irrep(algebra: str, dim: int) -> Irrep:
    """Spin-j ladder/Cartan triple (L+, L-, Lz) in dimension ``dim``.

    The basis is ordered by descending magnetic quantum number, so
    Lz = diag(j, j-1, ..., -j) and L+ sits on the superdiagonal with the
    standard raising coefficients sqrt(j(j+1) - m(m+1)).  For so3 the
    dimension must be odd (integer j); su2 admits every dimension.
    """
    if algebra not in ("so3", "su2"):
        raise UnknownGroup(f"unknown Lie algebra {algebra!r} (expected so3 or su2)")
    if dim < 1:
        raise DimensionZero(f"irrep dimension must be >= 1, got {dim}")
    if algebra == "so3" and dim % 2 == 0:
        raise ParityError(f"so3 has no unitary irrep of even dimension {dim}")
    # Exact half-integer arithmetic for the m values avoids spurious rounding
    # in the raising coefficients.
    j = Fraction(dim - 1, 2)
    ms = [j - k for k in range(dim)]
    lz = np.diag([float(m) for m in ms]).astype(complex)
    lp = np.zeros((dim, dim), dtype=complex)
    for col, m in enumerate(ms):
        if m < j:
            lp[col - 1, col] = np.sqrt(float(j * (j + 1) - m * (m + 1)))
    lm = lp.conj().T.copy()
    for mat in (lp, lm, lz):
        mat.setflags(write=False)
    index = (dim - 1) // 2 if algebra == "so3" else dim - 1
    return Irrep(index, dim, str(dim), (lp, lm, lz))


def _lie_group(name: str, max_dim: int) -> GroupSpec:
    algebra = "so3" if name == "SO3" else "su2"
    dims = range(1, max_dim + 1, 2) if algebra == "so3" else range(1, max_dim + 1)
    irreps = tuple(lie_irrep(algebra, m) for m in dims)
    return GroupSpec(
        name=name,
        kind="lie",
        num_generators=3,
        irreps=irreps,
        generator_names=("L+", "L-", "Lz"),
    )


# ---------------------------------------------------------------------------
# catalog lookup
# ---------------------------------------------------------------------------


def _count_multisets(dims: tuple[int, ...], total: int) -> int:
    """Number of multisets of catalog irreps whose dimensions sum to ``total``."""
    counts = [1] + [0] * total
    for dim in dims:
        for j in range(dim, total + 1):
            counts[j] += counts[j - dim]
    return counts[total]


def _lookup(group_name: str) -> GroupSpec | None:
    if group_name in _DISCRETE_BUILDERS:
        return _DISCRETE_BUILDERS[group_name]()
    m = re.fullmatch(r"Z(\d+)", group_name)
    if m and int(m.group(1)) >= 1:
        return _cyclic(int(m.group(1)))
    m = re.fullmatch(r"D(\d+)", group_name)
    if m and int(m.group(1)) >= 2:
        return _dihedral(int(m.group(1)))
    return None


def props(group_name: str, group_kind: str, hilbert_dim: int) -> GroupProps:
    """Catalog lookup: irreps of dimension <= ``hilbert_dim`` plus counts.

    ``num_reps`` counts the multisets of catalog irreps whose dimensions sum
    to ``hilbert_dim`` — the number of inequivalent d-dimensional reps built
    as direct sums.
    """
    if hilbert_dim < 1:
        raise DimensionZero(
            f"hilbert_dim must be >= 1, got {hilbert_dim}: no states exist"
        )
    if group_kind not in ("discrete", "lie"):
        raise UnknownGroup(f"unknown group kind {group_kind!r}")
    if group_name in ("SO3", "SU2"):
        if group_kind != "lie":
            raise UnknownGroup(f"{group_name} is a Lie group; pass kind='lie'")
        full = _lie_group(group_name, hilbert_dim)
    else:
        spec = _lookup(group_name)
        if spec is None:
            raise UnknownGroup(f"no catalog entry for group {group_name!r}")
        if group_kind != "discrete":
            raise UnknownGroup(f"{group_name} is discrete; pass kind='discrete'")
        full = spec
    kept = tuple(ir for ir in full.irreps if ir.dim <= hilbert_dim)
    restricted = GroupSpec(
        name=full.name,
        kind=full.kind,
        num_generators=full.num_generators,
        irreps=kept,
        generator_names=full.generator_names,
        relations=full.relations,
    )
    dims = tuple(ir.dim for ir in kept)
    return GroupProps(
        group=restricted,
        num_generators=full.num_generators,
        num_irreps=len(kept),
        irrep_dims=dims,
        num_reps=_count_multisets(dims, hilbert_dim),
    )


def infer_kind(group_name: str) -> str:
    """Guess the catalog kind for a group name ("lie" for SO3/SU2)."""
    return "lie" if group_name in ("SO3", "SU2") else "discrete"


# ---------------------------------------------------------------------------
# element enumeration (finite groups)
# ---------------------------------------------------------------------------


def word_matrix(irrep: Irrep, word: Word) -> np.ndarray:
    """Product of generator images along ``word`` (empty word -> identity)."""
    out = np.eye(irrep.dim, dtype=complex)
    for g in word:
        out = out @ irrep.generator_matrices[g]
    return out


def element_words(spec: GroupSpec, max_elements: int = 100_000) -> list[Word]:
    """One representative word per group element, by closure of the generators.

    Elements are fingerprinted through the direct sum of all catalog irreps,
    which is faithful for the finite groups stored here (it contains every
    irreducible constituent of the regular representation).
    """
    if spec.kind != "discrete":
        raise UnknownGroup(f"element enumeration needs a finite group, not {spec.name}")
    gens = [
        np.block(
            [
                [
                    ir.generator_matrices[g]
                    if i == k
                    else np.zeros((ir.dim, spec.irreps[k].dim))
                    for k, _ in enumerate(spec.irreps)
                ]
                for i, ir in enumerate(spec.irreps)
            ]
        )
        for g in range(spec.num_generators)
    ]

    def key(mat: np.ndarray) -> bytes:
        return (np.round(mat, 9) + 0.0).tobytes()  # +0.0 folds -0.0 into +0.0

    total = sum(ir.dim for ir in spec.irreps)
    seen = {key(np.eye(total, dtype=complex)): ()}
    frontier: list[tuple[Word, np.ndarray]] = [((), np.eye(total, dtype=complex))]
    while frontier:
        new_frontier = []
        for word, mat in frontier:
            for g, gen in enumerate(gens):
                nxt = mat @ gen
                k = key(nxt)
                if k not in seen:
                    seen[k] = word + (g,)
                    new_frontier.append((word + (g,), nxt))
                    if len(seen) > max_elements:
                        raise UnknownGroup(
                            f"{spec.name}: element closure exceeded {max_elements}"
                        )
        frontier = new_frontier
    return sorted(seen.values(), key=lambda w: (len(w), w))


def character_table(spec: GroupSpec) -> np.ndarray:
    """Characters chi_i(g) over the element list, shape (num_irreps, |G|)."""
    words = element_words(spec)
    return np.array(
        [[np.trace(word_matrix(ir, w)) for w in words] for ir in spec.irreps]
    )
