"""State vectors and dense operators for n particles, each in one of two boxes.

The single-particle space is two dimensional. n particles live on the
2**n dimensional tensor product whose basis states carry letter strings
such as "LRL": particle 1 is the leftmost letter and the most significant
bit of the basis index, with L = 0 and R = 1. Everything is double
precision and immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, UnnormalizableStateError

DEFAULT_TOLERANCE = 1e-12
MAX_PARTICLES = 12


def abs2(z: complex) -> float:
    """Squared magnitude without the square root, so dyadic values stay exact."""
    return z.real * z.real + z.imag * z.imag


@dataclass(frozen=True)
class LabelScheme:
    """Presentation names for the basis letters and the named superpositions.

    Relabeling swaps schemes without touching a single amplitude; two
    values that differ only in scheme describe identical numbers.
    """

    name: str
    letters: tuple[str, str]
    named_states: Mapping[str, str] = field(repr=False)

    def basis_label(self, index: int, n_particles: int) -> str:
        if not 0 <= index < 2**n_particles:
            raise ValueError(f"basis index {index} out of range for {n_particles} particles")
        bits = format(index, f"0{n_particles}b")
        return "".join(self.letters[int(b)] for b in bits)

    def state_display(self, canonical_name: str) -> str:
        return self.named_states[canonical_name]


BOX_LABELS = LabelScheme(
    name="box",
    letters=("L", "R"),
    named_states={"L": "L", "R": "R", "plus": "+", "minus": "-",
                  "plus_i": "+i", "minus_i": "-i"},
)

SPIN_LABELS = LabelScheme(
    name="spin",
    letters=("↑", "⇓"),
    named_states={"L": "↑", "R": "⇓", "plus": "x,+", "minus": "x,-",
                  "plus_i": "y,+", "minus_i": "y,-"},
)

_SCHEMES = {"box": BOX_LABELS, "spin": SPIN_LABELS}


def label_scheme(name: str) -> LabelScheme:
    """Return the scheme registered under ``name`` ("box" or "spin")."""
    try:
        return _SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown label scheme {name!r}") from None


def _as_amplitude_array(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    if arr.ndim != 1:
        raise ValueError("amplitudes must form a one dimensional sequence")
    dim = arr.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ValueError(f"amplitude count {dim} is not a power of two >= 2")
    if n > MAX_PARTICLES:
        raise ValueError(f"{n} particles exceeds the supported maximum of {MAX_PARTICLES}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


class _Vector:
    """Shared plumbing for the normalized and unnormalized state kinds."""

    __slots__ = ("_amplitudes", "_labels")

    def __init__(self, amplitudes: Sequence[complex], labels: LabelScheme = BOX_LABELS):
        object.__setattr__(self, "_amplitudes", _as_amplitude_array(amplitudes))
        object.__setattr__(self, "_labels", labels)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def labels(self) -> LabelScheme:
        return self._labels

    @property
    def dim(self) -> int:
        return self._amplitudes.shape[0]

    @property
    def n_particles(self) -> int:
        return self.dim.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self._amplitudes))

    def basis_labels(self) -> list[str]:
        n = self.n_particles
        return [self._labels.basis_label(i, n) for i in range(self.dim)]

    def with_labels(self, labels: LabelScheme) -> "_Vector":
        return type(self)(self._amplitudes, labels)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self._amplitudes):
            if a == 0:
                continue
            terms.append(f"({complex(a):.5g})|{self._labels.basis_label(i, self.n_particles)}>")
            if len(terms) == 4:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"{type(self).__name__}({body})"


class Ket(_Vector):
    """A normalized n-particle state vector.

    Parameters
    ----------
    amplitudes : sequence of complex
        2**n basis amplitudes in label order; the squared norm must be
        1 within 1e-12. Use :meth:`Ket.normalized` to scale first.
    labels : LabelScheme, optional
        Presentation scheme, box letters by default.
    """

    __slots__ = ()

    def __init__(self, amplitudes, labels: LabelScheme = BOX_LABELS):
        super().__init__(amplitudes, labels)
        norm_sq = float(np.vdot(self._amplitudes, self._amplitudes).real)
        if abs(norm_sq - 1.0) > DEFAULT_TOLERANCE:
            raise ValueError(f"state vector is not normalized (squared norm {norm_sq!r})")

    @classmethod
    def normalized(cls, amplitudes, labels: LabelScheme = BOX_LABELS) -> "Ket":
        """Scale arbitrary amplitudes to a unit state; zero input is rejected."""
        return UnnormalizedKet(amplitudes, labels).normalize()


class UnnormalizedKet(_Vector):
    """A state-shaped vector with no normalization requirement.

    This is what :func:`apply` returns, so projected states are never
    silently rescaled.
    """

    __slots__ = ()

    def normalize(self) -> Ket:
        n = self.norm()
        if n <= DEFAULT_TOLERANCE:
            raise UnnormalizableStateError("unnormalizable state")
        return Ket(self._amplitudes / n, self._labels)


KetLike = Union[Ket, UnnormalizedKet]


class Operator:
    """A dense linear operator on the n-particle space."""

    __slots__ = ("_entries", "_labels")

    def __init__(self, entries, labels: LabelScheme = BOX_LABELS):
        arr = np.array(entries, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("operator entries must form a square matrix")
        dim = arr.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or 2**n != dim:
            raise ValueError(f"operator dimension {dim} is not a power of two >= 2")
        if n > MAX_PARTICLES:
            raise ValueError(f"{n} particles exceeds the supported maximum of {MAX_PARTICLES}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "_entries", arr)
        object.__setattr__(self, "_labels", labels)

    @classmethod
    def identity(cls, n_particles: int, labels: LabelScheme = BOX_LABELS) -> "Operator":
        return cls(np.eye(2**n_particles), labels)

    @classmethod
    def zero(cls, n_particles: int, labels: LabelScheme = BOX_LABELS) -> "Operator":
        return cls(np.zeros((2**n_particles, 2**n_particles)), labels)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def labels(self) -> LabelScheme:
        return self._labels

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def n_particles(self) -> int:
        return self.dim.bit_length() - 1

    def dagger(self) -> "Operator":
        return Operator(self._entries.conj().T, self._labels)

    def diagonal(self) -> np.ndarray:
        return self._entries.diagonal().copy()

    def with_labels(self, labels: LabelScheme) -> "Operator":
        return Operator(self._entries, labels)

    def _require_same_dim(self, other: "Operator") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"operator dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._require_same_dim(other)
        return Operator(self._entries + other._entries, self._labels)

    def __sub__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._require_same_dim(other)
        return Operator(self._entries - other._entries, self._labels)

    def __neg__(self) -> "Operator":
        return Operator(-self._entries, self._labels)

    def __mul__(self, scalar) -> "Operator":
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        return Operator(self._entries * complex(scalar), self._labels)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._require_same_dim(other)
        return Operator(self._entries @ other._entries, self._labels)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    def __repr__(self) -> str:
        return f"Operator(n_particles={self.n_particles}, labels={self._labels.name!r})"


_STATE_ALIASES = {
    "L": "L", "R": "R",
    "plus": "plus", "+": "plus",
    "minus": "minus", "-": "minus",
    "plus_i": "plus_i", "+i": "plus_i",
    "minus_i": "minus_i", "-i": "minus_i",
}

_HALF_SQRT2 = math.sqrt(0.5)

_NAMED_AMPLITUDES = {
    "L": (1.0 + 0.0j, 0.0j),
    "R": (0.0j, 1.0 + 0.0j),
    "plus": (_HALF_SQRT2 + 0.0j, _HALF_SQRT2 + 0.0j),
    "minus": (_HALF_SQRT2 + 0.0j, -_HALF_SQRT2 + 0.0j),
    "plus_i": (_HALF_SQRT2 + 0.0j, _HALF_SQRT2 * 1.0j),
    "minus_i": (_HALF_SQRT2 + 0.0j, -_HALF_SQRT2 * 1.0j),
}


def canonical_state_name(name: str) -> str:
    """Map a state name or its short alias ("+", "-i", ...) to the canonical key."""
    try:
        return _STATE_ALIASES[name]
    except KeyError:
        options = ", ".join(sorted(_STATE_ALIASES))
        raise ValueError(f"unknown state name {name!r}; choose one of {options}") from None


def make_single_particle_state(
    state: str | tuple[complex, complex],
    labels: LabelScheme = BOX_LABELS,
) -> Ket:
    """Build a one-particle state from a name or an explicit coefficient pair.

    Parameters
    ----------
    state : str or (complex, complex)
        One of the names L, R, plus, minus, plus_i, minus_i (short
        aliases "+", "-", "+i", "-i" also work), or an explicit
        (cL, cR) pair which is normalized. A zero pair is rejected
        as an unnormalizable state.
    """
    if isinstance(state, str):
        cL, cR = _NAMED_AMPLITUDES[canonical_state_name(state)]
        return Ket([cL, cR], labels)
    cL, cR = complex(state[0]), complex(state[1])
    norm_sq = abs2(cL) + abs2(cR)
    if not math.isfinite(norm_sq):
        raise ValueError("coefficients must be finite")
    if norm_sq <= 0.0:
        raise UnnormalizableStateError("unnormalizable state")
    scale = math.sqrt(norm_sq)
    return Ket([cL / scale, cR / scale], labels)


def basis_state(label: str, labels: LabelScheme = BOX_LABELS) -> Ket:
    """The computational basis state for a letter string such as "LRL"."""
    n = len(label)
    index = 0
    for letter in label:
        try:
            bit = labels.letters.index(letter)
        except ValueError:
            raise ValueError(f"letter {letter!r} is not part of the {labels.name} scheme") from None
        index = index * 2 + bit
    amplitudes = np.zeros(2**n, dtype=np.complex128)
    amplitudes[index] = 1.0
    return Ket(amplitudes, labels)


def tensor(states: Sequence[KetLike]) -> KetLike:
    """Tensor product of single- or multi-particle states.

    Particle 1 of the first factor stays the leftmost, most significant
    slot of the result. Returns a :class:`Ket` when every factor is one,
    otherwise an :class:`UnnormalizedKet`.
    """
    if len(states) == 0:
        raise ValueError("tensor needs at least one state")
    scheme = states[0].labels
    for s in states[1:]:
        if s.labels.name != scheme.name:
            raise ValueError("tensor factors carry mixed label schemes")
    combined = states[0].amplitudes
    for s in states[1:]:
        combined = np.kron(combined, s.amplitudes)
    if all(isinstance(s, Ket) for s in states):
        return Ket(combined, scheme)
    return UnnormalizedKet(combined, scheme)


def inner(bra: KetLike, ket: KetLike) -> complex:
    """The inner product <bra|ket>, conjugate linear in the first slot."""
    if bra.dim != ket.dim:
        raise DimensionMismatchError(f"state dimensions differ: {bra.dim} vs {ket.dim}")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def apply(op: Operator, ket: KetLike) -> UnnormalizedKet:
    """Apply an operator to a state. The result is deliberately unnormalized."""
    if op.dim != ket.dim:
        raise DimensionMismatchError(f"operator dimension {op.dim} does not match state dimension {ket.dim}")
    return UnnormalizedKet(op.entries @ ket.amplitudes, ket.labels)


def matrix_element(bra: KetLike, op: Operator, ket: KetLike) -> complex:
    """The sandwiched element <bra|op|ket>."""
    return inner(bra, apply(op, ket))


def is_eigenstate(op: Operator, ket: Ket, eigenvalue: complex,
                  tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether op|ket> equals eigenvalue|ket> within ``tol`` (Euclidean norm)."""
    if not isinstance(ket, Ket):
        raise TypeError("is_eigenstate expects a normalized Ket")
    residual = apply(op, ket).amplitudes - complex(eigenvalue) * ket.amplitudes
    return float(np.linalg.norm(residual)) <= tol
