"""Correlation projectors on the n-particle two-box space.

Every projector here is diagonal in the box basis. They are assembled
from products and sums of embedded single-particle box projectors, not
by enumerating basis labels, so entries stay exactly 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .errors import DimensionMismatchError
from .hilbert import (
    BOX_LABELS,
    DEFAULT_TOLERANCE,
    MAX_PARTICLES,
    SPIN_LABELS,
    Ket,
    Operator,
    UnnormalizedKet,
)

PROJECTOR_KINDS = ("box", "pair_same", "pair_diff", "all_same", "sd")


def _check_particle(index: int, n_particles: int, what: str) -> None:
    if not isinstance(index, int) or isinstance(index, bool):
        raise ValueError(f"{what} must be an integer, got {index!r}")
    if not 1 <= index <= n_particles:
        raise ValueError(f"{what} {index} out of range 1..{n_particles}")


@dataclass(frozen=True)
class ProjectorSpec:
    """A symbolic description of one correlation projector.

    kind
        "box"       one particle sits in a named box
        "pair_same" two particles share a box
        "pair_diff" two particles occupy different boxes
        "all_same"  every particle shares one box
        "sd"        a pair shares a box while a marked third particle
                    occupies the other one
    """

    kind: str
    n_particles: int
    particle: int | None = None
    box: str | None = None
    pair: tuple[int, int] | None = None
    other: int | None = None

    def __post_init__(self):
        if self.kind not in PROJECTOR_KINDS:
            raise ValueError(f"unknown projector kind {self.kind!r}")
        if not isinstance(self.n_particles, int) or not 1 <= self.n_particles <= MAX_PARTICLES:
            raise ValueError(f"n_particles must lie in 1..{MAX_PARTICLES}")
        if self.kind == "box":
            _check_particle(self.particle, self.n_particles, "particle")
            if self.box not in ("L", "R"):
                raise ValueError(f"box must be 'L' or 'R', got {self.box!r}")
        elif self.kind in ("pair_same", "pair_diff", "sd"):
            if self.n_particles < 2:
                raise ValueError(f"{self.kind} needs at least two particles")
            i, j = self.pair
            _check_particle(i, self.n_particles, "pair member")
            _check_particle(j, self.n_particles, "pair member")
            if i == j:
                raise ValueError("pair members must be distinct")
            if i > j:
                object.__setattr__(self, "pair", (j, i))
            else:
                object.__setattr__(self, "pair", (i, j))
            if self.kind == "sd":
                if self.n_particles < 3:
                    raise ValueError("sd needs at least three particles")
                _check_particle(self.other, self.n_particles, "other particle")
                if self.other in self.pair:
                    raise ValueError("the marked particle must differ from the pair")
        elif self.kind == "all_same":
            if self.n_particles < 2:
                raise ValueError("all_same needs at least two particles")

    @classmethod
    def box_occupation(cls, particle: int, box: str, n_particles: int) -> "ProjectorSpec":
        """Particle ``particle`` found in box "L" or "R"."""
        return cls("box", n_particles, particle=particle, box=box)

    @classmethod
    def pair_same(cls, i: int, j: int, n_particles: int) -> "ProjectorSpec":
        """Particles i and j found in one box (either one)."""
        return cls("pair_same", n_particles, pair=(i, j))

    @classmethod
    def pair_diff(cls, i: int, j: int, n_particles: int) -> "ProjectorSpec":
        """Particles i and j found in different boxes."""
        return cls("pair_diff", n_particles, pair=(i, j))

    @classmethod
    def all_same(cls, n_particles: int) -> "ProjectorSpec":
        """Every particle found in one box."""
        return cls("all_same", n_particles)

    @classmethod
    def sd(cls, i: int, j: int, other: int, n_particles: int) -> "ProjectorSpec":
        """Particles i and j share a box while ``other`` occupies the other one."""
        return cls("sd", n_particles, pair=(i, j), other=other)

    def label(self) -> str:
        if self.kind == "box":
            return f"box({self.particle},{self.box})"
        if self.kind == "pair_same":
            return f"pair_same({self.pair[0]},{self.pair[1]})"
        if self.kind == "pair_diff":
            return f"pair_diff({self.pair[0]},{self.pair[1]})"
        if self.kind == "sd":
            return f"sd({self.pair[0]},{self.pair[1]};{self.other})"
        return "all_same"


def _embedded_box(particle: int, box_index: int, n_particles: int) -> np.ndarray:
    # identity on every slot except one single-particle box projector
    single = np.zeros((2, 2))
    single[box_index, box_index] = 1.0
    mats = [single if k == particle else np.eye(2) for k in range(1, n_particles + 1)]
    return reduce(np.kron, mats)


def build_projector(spec: ProjectorSpec) -> Operator:
    """Realize a :class:`ProjectorSpec` as a dense diagonal operator."""
    n = spec.n_particles
    L = {k: _embedded_box(k, 0, n) for k in range(1, n + 1)}
    R = {k: _embedded_box(k, 1, n) for k in range(1, n + 1)}
    if spec.kind == "box":
        m = (L if spec.box == "L" else R)[spec.particle]
    elif spec.kind == "pair_same":
        i, j = spec.pair
        m = L[i] @ L[j] + R[i] @ R[j]
    elif spec.kind == "pair_diff":
        i, j = spec.pair
        m = L[i] @ R[j] + R[i] @ L[j]
    elif spec.kind == "all_same":
        m = reduce(np.matmul, (L[k] for k in range(1, n + 1)))
        m = m + reduce(np.matmul, (R[k] for k in range(1, n + 1)))
    else:  # sd
        i, j = spec.pair
        k = spec.other
        m = L[i] @ L[j] @ R[k] + R[i] @ R[j] @ L[k]
    return Operator(m, BOX_LABELS)


def _format_number(x: float) -> str:
    return str(int(x)) if x == int(x) else format(x, ".6g")


def _format_coefficient(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return _format_number(z.real)
    if z.real == 0.0:
        return f"{_format_number(z.imag)}i"
    sign = "+" if z.imag > 0 else "-"
    return f"({_format_number(z.real)}{sign}{_format_number(abs(z.imag))}i)"


@dataclass(frozen=True)
class HamiltonianSpec:
    """A weighted sum of correlation projectors.

    terms holds (coefficient, projector) pairs; all projectors must act
    on the same particle count, which ``n_particles`` pins down even
    when the term list is empty.
    """

    terms: tuple[tuple[complex, ProjectorSpec], ...]
    n_particles: int

    def __post_init__(self):
        object.__setattr__(
            self, "terms",
            tuple((complex(c), p) for c, p in self.terms))
        if not isinstance(self.n_particles, int) or not 1 <= self.n_particles <= MAX_PARTICLES:
            raise ValueError(f"n_particles must lie in 1..{MAX_PARTICLES}")
        for _, p in self.terms:
            if p.n_particles != self.n_particles:
                raise ValueError(
                    f"term {p.label()} acts on {p.n_particles} particles, expected {self.n_particles}")

    @classmethod
    def of(cls, terms: Iterable[tuple[complex, ProjectorSpec]],
           n_particles: int | None = None) -> "HamiltonianSpec":
        terms = tuple(terms)
        if n_particles is None:
            if not terms:
                raise ValueError("empty term list needs an explicit n_particles")
            n_particles = terms[0][1].n_particles
        return cls(terms, n_particles)

    def label(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for coeff, proj in self.terms:
            if coeff == 1:
                parts.append(proj.label())
            else:
                parts.append(f"{_format_coefficient(coeff)}*{proj.label()}")
        return " + ".join(parts)


def build_hamiltonian(spec: HamiltonianSpec) -> Operator:
    """Realize a weighted projector sum; an empty term list gives the zero operator."""
    total = Operator.zero(spec.n_particles)
    for coeff, proj in spec.terms:
        total = total + coeff * build_projector(proj)
    return total


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def is_hermitian(op: Operator, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether the operator equals its own adjoint, max-entry norm."""
    return _max_abs(op.entries - op.entries.conj().T) <= tol


def idempotency_defect(op: Operator) -> float:
    """Max-entry norm of op@op - op; zero for exact projectors."""
    return _max_abs(op.entries @ op.entries - op.entries)


def is_projector(op: Operator, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Hermitian and idempotent within ``tol`` (max-entry norm on both checks)."""
    return is_hermitian(op, tol) and idempotency_defect(op) <= tol


def are_orthogonal(a: Operator, b: Operator, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether both products a@b and b@a vanish within ``tol``."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"operator dimensions differ: {a.dim} vs {b.dim}")
    return (_max_abs(a.entries @ b.entries) <= tol
            and _max_abs(b.entries @ a.entries) <= tol)


def is_resolution_of_identity(projectors: Iterable[Operator],
                              tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether the operators are mutually orthogonal projectors summing to one.

    Accepts any iterable of operators, including a
    :class:`~twobox.engine.MeasurementSet`.
    """
    ops = list(projectors)
    if not ops:
        raise ValueError("resolution check needs at least one operator")
    dim = ops[0].dim
    for op in ops[1:]:
        if op.dim != dim:
            raise DimensionMismatchError("operators in the set have mixed dimensions")
    if not all(is_projector(op, tol) for op in ops):
        return False
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not are_orthogonal(ops[i], ops[j], tol):
                return False
    total = sum((op.entries for op in ops[1:]), start=ops[0].entries.copy())
    return _max_abs(total - np.eye(dim)) <= tol


def relabel_to_spin(value: Ket | UnnormalizedKet | Operator):
    """Present a box-labeled value in spin language: L as up, R as down,
    the box superpositions as x and y spin states. Amplitudes and entries
    are carried over untouched."""
    if isinstance(value, (Ket, UnnormalizedKet, Operator)):
        return value.with_labels(SPIN_LABELS)
    raise TypeError(f"cannot relabel {type(value).__name__}")
