"""Antidistinguishing entangled measurement and the one-pair contradiction.

Two single-system preparations, ``|0>`` and ``|+>``, are combined into the
four product preparations ``|00>, |0+>, |+0>, |++>``. The four entangled
vectors built by :func:`build_xi_basis` form a measurement in which outcome
``i`` never occurs on product preparation ``i``. If an ontic state of the
pair lies in the support of every product preparation, and the outcome may
depend only on that ontic state, no outcome is left for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .ontology import OntologicalModel, UnknownLabelError, fraction_in_region, support
from .qlinalg import (
    MINUS,
    ONE,
    PLUS,
    TOL_ORTHO,
    ZERO,
    DimensionError,
    Ket,
    MeasurementBasis,
    born_probability,
    inner,
    tensor,
)

XI_LABELS = ("xi1", "xi2", "xi3", "xi4")

SINGLE_PREPARATIONS = {"0": ZERO, "+": PLUS}
PRODUCT_PREPARATION_LABELS = (("0", "0"), ("0", "+"), ("+", "0"), ("+", "+"))


def _superpose(u: Ket, v: Ket) -> Ket:
    return Ket((u.amplitudes + v.amplitudes) / 2**0.5)


def build_xi_basis() -> MeasurementBasis:
    """The four entangled outcome vectors, in the computational product basis.

    ::

        xi1 = (|0>|1> + |1>|0>) / sqrt2
        xi2 = (|0>|-> + |1>|+>) / sqrt2
        xi3 = (|+>|1> + |->|0>) / sqrt2
        xi4 = (|+>|-> + |->|+>) / sqrt2
    """
    vectors = [
        _superpose(tensor(ZERO, ONE), tensor(ONE, ZERO)),
        _superpose(tensor(ZERO, MINUS), tensor(ONE, PLUS)),
        _superpose(tensor(PLUS, ONE), tensor(MINUS, ZERO)),
        _superpose(tensor(PLUS, MINUS), tensor(MINUS, PLUS)),
    ]
    return MeasurementBasis(vectors, XI_LABELS)


def product_preparations(states: Mapping[str, Ket] = SINGLE_PREPARATIONS) -> dict:
    """Map ``(p, q) -> |p> (x) |q>`` over the four ordered label pairs."""
    return {(p, q): tensor(states[p], states[q]) for p, q in PRODUCT_PREPARATION_LABELS}


@dataclass(frozen=True)
class AntidistinguishabilityCertificate:
    """``pairing[i]`` is the index of a preparation basis vector ``i`` excludes."""

    pairing: Mapping[int, int]
    max_residual: float


def antidistinguishes(
    basis: MeasurementBasis, preparations: Sequence[Ket], tol: float = TOL_ORTHO
) -> AntidistinguishabilityCertificate | None:
    """Check that every outcome is orthogonal to at least one preparation.

    Returns ``None`` if some outcome excludes no preparation. When several
    preparations qualify, the lowest index is paired.
    """
    for k in preparations:
        if k.dim != basis.dim:
            raise DimensionError(f"preparation of dimension {k.dim} for a basis of dimension {basis.dim}")
    pairing = {}
    residual = 0.0
    for i, vec in enumerate(basis):
        overlaps = [abs(inner(vec, k)) for k in preparations]
        hits = [j for j, o in enumerate(overlaps) if o <= tol]
        if not hits:
            return None
        pairing[i] = hits[0]
        residual = max(residual, overlaps[hits[0]])
    return AntidistinguishabilityCertificate(pairing, residual)


@dataclass(frozen=True)
class ContradictionWitness:
    """An ontic state at which every outcome of a measurement is excluded.

    ``forbidden[outcome]`` is ``(preparation, born probability)``: the
    outcome never occurs on that preparation, whose support contains
    ``ontic_label``.
    """

    ontic_label: object
    forbidden: Mapping


def _forbidding_preparation(vec: Ket, candidates, prep_states, tol2):
    for p in candidates:
        prob = born_probability(vec, prep_states[p])
        if prob <= tol2:
            return p, prob
    return None


def find_contradiction_witness(
    model: OntologicalModel,
    basis: MeasurementBasis,
    prep_states: Mapping,
    tol: float = TOL_ORTHO,
) -> ContradictionWitness | None:
    """Search the common support of the preparations for an ontic state with no allowed outcome.

    Each ontic state in the intersection of the supports of all
    ``prep_states`` is examined in ontic-space order. An outcome is
    forbidden there if some preparation gives it Born probability at most
    ``tol**2``: since the outcome can depend only on the ontic state, a
    state reachable by that preparation can never produce it. The first
    ontic state with every outcome forbidden is returned.
    """
    labels = list(prep_states)
    for p in labels:
        model.preparation(p)
        if prep_states[p].dim != basis.dim:
            raise DimensionError(f"state for {p!r} has dimension {prep_states[p].dim}, basis has {basis.dim}")
    if not labels:
        return None
    common = set.intersection(*(support(model.preparation(p)) for p in labels))
    tol2 = tol**2
    for lam in model.space:
        if lam not in common:
            continue
        forbidden = {}
        for out, vec in zip(basis.labels, basis):
            hit = _forbidding_preparation(vec, labels, prep_states, tol2)
            if hit is None:
                break
            forbidden[out] = hit
        else:
            return ContradictionWitness(lam, forbidden)
    return None


def verify_witness(
    witness: ContradictionWitness,
    model: OntologicalModel,
    basis: MeasurementBasis,
    prep_states: Mapping,
    tol: float = TOL_ORTHO,
) -> bool:
    """Recheck a witness from scratch, independently of the search."""
    if set(witness.forbidden) != set(basis.labels):
        return False
    for out, (prep, _) in witness.forbidden.items():
        if witness.ontic_label not in support(model.preparation(prep)):
            return False
        if born_probability(basis[basis.index(out)], prep_states[prep]) > tol**2:
            return False
    return True


def overlap_fraction_affected(model: OntologicalModel, witness_region, preps) -> dict:
    """Fraction of each preparation's ensemble lying in ``witness_region``."""
    region = set(witness_region)
    out = {}
    for p in preps:
        if p not in model.preparations:
            raise UnknownLabelError(f"unknown preparation {p!r}")
        out[p] = fraction_in_region(model, p, region)
    return out
