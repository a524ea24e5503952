"""Small complex linear algebra for one- and two-qubit pure states.

Tensor products use a row-major index convention: the first factor is the
high-order index, so ``tensor(a, b)[i * b.dim + j] == a[i] * b[j]`` and
``|0> (x) |1>`` is the second computational basis vector ``(0, 1, 0, 0)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

TOL_NORM = 1e-12
TOL_ORTHO = 1e-12
TOL_ENT = 1e-12

_SQRT1_2 = 1 / np.sqrt(2)


class DimensionError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Ket:
    """An immutable state vector.

    Parameters
    ----------
    amplitudes : sequence of complex
        Components in the computational basis. A read-only copy is stored.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise DimensionError("a ket needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = TOL_NORM) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def scaled(self, factor: complex) -> "Ket":
        return Ket(factor * self.amplitudes)

    def allclose(self, other: "Ket", atol: float = TOL_NORM) -> bool:
        return self.dim == other.dim and np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes]}

    @classmethod
    def from_dict(cls, doc: dict) -> "Ket":
        amps = [complex(re, im) for re, im in doc["amplitudes"]]
        if len(amps) != doc["dim"]:
            raise DimensionError(f"dim is {doc['dim']} but {len(amps)} amplitudes given")
        return cls(amps)

    def __len__(self):
        return self.dim

    def __getitem__(self, i):
        return self.amplitudes[i]

    def __repr__(self):
        return f"Ket({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """A family of kets labelling the outcomes of a projective measurement.

    Construction checks shapes only; use :func:`is_orthonormal_basis` to
    check that the family actually is a measurement.
    """

    vectors: tuple
    labels: tuple = None

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise DimensionError("empty basis")
        dim = vectors[0].dim
        if any(v.dim != dim for v in vectors):
            raise DimensionError("basis vectors have different dimensions")
        if len(vectors) != dim:
            raise DimensionError(f"{len(vectors)} vectors cannot form a complete basis of dimension {dim}")
        labels = tuple(self.labels) if self.labels is not None else tuple(str(i) for i in range(dim))
        if len(labels) != len(vectors):
            raise ValueError("need exactly one label per basis vector")
        if len(set(labels)) != len(labels):
            raise ValueError("outcome labels must be unique")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vectors[0].dim

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i) -> Ket:
        return self.vectors[i]

    def __iter__(self):
        return iter(self.vectors)

    def index(self, label) -> int:
        return self.labels.index(label)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of a ``dim x dim`` array."""
        return np.column_stack([v.amplitudes for v in self.vectors])

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "vectors": [v.to_dict() for v in self.vectors],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MeasurementBasis":
        basis = cls([Ket.from_dict(v) for v in doc["vectors"]], doc.get("labels"))
        if basis.dim != doc["dim"]:
            raise DimensionError(f"dim is {doc['dim']} but vectors have dimension {basis.dim}")
        return basis


@dataclass(frozen=True)
class Effect:
    """A coarse-grained outcome: the union of some outcomes of a basis."""

    dim: int
    member_indices: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(int(i) for i in self.member_indices)
        if not members:
            raise ValueError("an effect must contain at least one outcome")
        if min(members) < 0 or max(members) >= self.dim:
            raise IndexError(f"effect indices {sorted(members)} out of range for dimension {self.dim}")
        object.__setattr__(self, "member_indices", members)


def ket(*amplitudes) -> Ket:
    return Ket(amplitudes)


def basis_ket(dim: int, i: int) -> Ket:
    amps = np.zeros(dim, dtype=complex)
    amps[i] = 1
    return Ket(amps)


ZERO = basis_ket(2, 0)
ONE = basis_ket(2, 1)
PLUS = Ket([_SQRT1_2, _SQRT1_2])
MINUS = Ket([_SQRT1_2, -_SQRT1_2])


def tensor(a: Ket, b: Ket) -> Ket:
    """Product state ``a (x) b`` under the row-major convention."""
    return Ket(np.kron(a.amplitudes, b.amplitudes))


def product_basis(first: MeasurementBasis, second: MeasurementBasis) -> MeasurementBasis:
    """All products ``u (x) v``; labels are ``(first_label, second_label)`` pairs."""
    vectors = [tensor(u, v) for u in first for v in second]
    labels = [(p, q) for p in first.labels for q in second.labels]
    return MeasurementBasis(vectors, labels)


def computational_basis(dim: int) -> MeasurementBasis:
    return MeasurementBasis([basis_ket(dim, i) for i in range(dim)])


def _check_dims(a: Ket, b: Ket):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def inner(a: Ket, b: Ket) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def born_probability(outcome: Ket, state: Ket) -> float:
    """Probability ``|<outcome|state>|**2`` of a rank-one outcome."""
    _check_dims(outcome, state)
    for name, k in (("outcome", outcome), ("state", state)):
        if not k.is_normalized():
            raise NormalizationError(f"{name} is not normalized (norm {k.norm():.15g})")
    return abs(inner(outcome, state)) ** 2


def effect_probability(basis: MeasurementBasis, effect: Effect, state: Ket) -> float:
    if effect.dim != basis.dim:
        raise DimensionError(f"effect of dimension {effect.dim} used with basis of dimension {basis.dim}")
    if max(effect.member_indices) >= len(basis):
        raise IndexError("effect index out of range for basis")
    return sum(born_probability(basis[i], state) for i in sorted(effect.member_indices))


def gram_matrix(vectors: Iterable[Ket]) -> np.ndarray:
    m = np.column_stack([v.amplitudes for v in vectors])
    return m.conj().T @ m


def gram_residual(basis: MeasurementBasis) -> float:
    """Largest entry of ``|G - I|`` for the Gram matrix ``G`` of the basis."""
    g = gram_matrix(basis.vectors)
    return float(np.max(np.abs(g - np.eye(len(basis)))))


def is_orthonormal_basis(basis: MeasurementBasis, tol: float = TOL_ORTHO) -> bool:
    return gram_residual(basis) <= tol


def coefficient_matrix(state: Ket) -> np.ndarray:
    if state.dim != 4:
        raise DimensionError(f"expected a two-qubit state, got dimension {state.dim}")
    return state.amplitudes.reshape(2, 2)


def is_entangled(state: Ket, tol: float = TOL_ENT) -> bool:
    """Schmidt-rank test for a two-qubit pure state.

    A product state has a rank-one coefficient matrix, i.e. vanishing
    determinant.
    """
    if not state.is_normalized():
        raise NormalizationError("entanglement test needs a normalized state")
    c = coefficient_matrix(state)
    return bool(abs(c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]) > tol)


def dumps(obj: Ket | MeasurementBasis, **kwargs) -> str:
    return json.dumps(obj.to_dict(), **kwargs)


def loads(text: str) -> Ket | MeasurementBasis:
    doc = json.loads(text)
    if "vectors" in doc:
        return MeasurementBasis.from_dict(doc)
    return Ket.from_dict(doc)
