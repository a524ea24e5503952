"""Finite ontological (hidden-variable) models.

A model has a finite ontic space, one probability distribution over it per
preparation, and one response function per measurement giving the outcome
distribution at every ontic state. Product models describe independently
prepared pairs; their ontic labels are ``(first, second)`` tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

TOL_PROB = 1e-12
ZERO_WEIGHT = 1e-15

Label = Hashable


class UnknownLabelError(KeyError):
    pass


class SpaceMismatchError(ValueError):
    pass


def _freeze(mapping):
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class OnticSpace:
    states: tuple

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("ontic space must be nonempty")
        if len(set(states)) != len(states):
            raise ValueError("ontic labels must be unique")
        object.__setattr__(self, "states", states)

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __contains__(self, label):
        return label in self.states

    def index(self, label) -> int:
        return self.states.index(label)


@dataclass(frozen=True, eq=False)
class EpistemicState:
    """Probability distribution over an ontic space.

    Labels missing from ``weights`` have probability zero.
    """

    space: OnticSpace
    weights: Mapping

    def __post_init__(self):
        for lam, w in self.weights.items():
            if lam not in self.space:
                raise UnknownLabelError(f"{lam!r} is not in the ontic space")
            if w < 0:
                raise ValueError(f"negative weight {w} at {lam!r}")
        total = sum(self.weights.values())
        if abs(total - 1) > TOL_PROB:
            raise ValueError(f"weights sum to {total!r}, not 1")
        full = {lam: float(self.weights.get(lam, 0.0)) for lam in self.space}
        object.__setattr__(self, "weights", _freeze(full))

    def __getitem__(self, lam) -> float:
        return self.weights[lam]

    @classmethod
    def point(cls, space: OnticSpace, lam) -> "EpistemicState":
        return cls(space, {lam: 1.0})

    @classmethod
    def uniform(cls, space: OnticSpace, labels: Iterable | None = None) -> "EpistemicState":
        labels = list(space if labels is None else labels)
        return cls(space, {lam: 1 / len(labels) for lam in labels})


@dataclass(frozen=True, eq=False)
class ResponseFunction:
    """Outcome distribution of one measurement at every ontic state.

    ``table[lam][k]`` is the probability of ``outcomes[k]`` at ``lam``.
    """

    measurement_label: str
    outcomes: tuple
    table: Mapping

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcome labels must be unique")
        rows = {}
        for lam, row in self.table.items():
            row = tuple(float(p) for p in row)
            if len(row) != len(outcomes):
                raise ValueError(f"row for {lam!r} has {len(row)} entries, expected {len(outcomes)}")
            if any(p < 0 for p in row) or abs(sum(row) - 1) > TOL_PROB:
                raise ValueError(f"row for {lam!r} is not a probability distribution: {row}")
            rows[lam] = row
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "table", _freeze(rows))

    @classmethod
    def deterministic(cls, label: str, outcomes: Sequence, assignment: Mapping) -> "ResponseFunction":
        """Build from a map ``ontic label -> outcome``."""
        outcomes = tuple(outcomes)
        table = {lam: [1.0 if k == out else 0.0 for k in outcomes] for lam, out in assignment.items()}
        return cls(label, outcomes, table)

    def probability(self, lam, outcome) -> float:
        try:
            k = self.outcomes.index(outcome)
        except ValueError:
            raise UnknownLabelError(f"{outcome!r} is not an outcome of {self.measurement_label}") from None
        return self.table[lam][k]

    def is_deterministic(self) -> bool:
        return all(max(row) == 1.0 for row in self.table.values())

    def outcome_at(self, lam):
        """The outcome a deterministic response gives at ``lam``."""
        row = self.table[lam]
        if max(row) != 1.0:
            raise ValueError(f"{self.measurement_label} is not deterministic at {lam!r}")
        return self.outcomes[row.index(1.0)]


@dataclass(frozen=True, eq=False)
class OntologicalModel:
    space: OnticSpace
    preparations: Mapping
    measurements: Mapping

    def __post_init__(self):
        for label, mu in self.preparations.items():
            if mu.space != self.space:
                raise SpaceMismatchError(f"preparation {label!r} lives on a different ontic space")
        for label, resp in self.measurements.items():
            if set(resp.table) != set(self.space.states):
                raise SpaceMismatchError(f"measurement {label!r} is not defined on exactly the model's ontic space")
        object.__setattr__(self, "preparations", _freeze(self.preparations))
        object.__setattr__(self, "measurements", _freeze(self.measurements))

    def preparation(self, label) -> EpistemicState:
        try:
            return self.preparations[label]
        except KeyError:
            raise UnknownLabelError(f"unknown preparation {label!r}") from None

    def measurement(self, label) -> ResponseFunction:
        try:
            return self.measurements[label]
        except KeyError:
            raise UnknownLabelError(f"unknown measurement {label!r}") from None

    def is_outcome_deterministic(self) -> bool:
        return all(m.is_deterministic() for m in self.measurements.values())

    def is_psi_epistemic(self) -> bool:
        """True if two distinct preparations have overlapping supports."""
        return bool(overlapping_preparations(self))

    def to_dict(self) -> dict:
        key = _label_key
        return {
            "space": [_label_json(lam) for lam in self.space],
            "preparations": {
                key(p): {key(lam): w for lam, w in mu.weights.items() if w > 0}
                for p, mu in self.preparations.items()
            },
            "measurements": {
                key(m): {
                    "outcomes": list(r.outcomes),
                    "table": {key(lam): list(r.table[lam]) for lam in self.space},
                }
                for m, r in self.measurements.items()
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "OntologicalModel":
        states = [tuple(s) if isinstance(s, list) else s for s in doc["space"]]
        space = OnticSpace(states)
        by_key = {_label_key(lam): lam for lam in space}

        def lookup(k):
            try:
                return by_key[k]
            except KeyError:
                raise UnknownLabelError(f"{k!r} is not in the ontic space") from None

        preps = {
            _parse_key(p): EpistemicState(space, {lookup(k): w for k, w in weights.items()})
            for p, weights in doc["preparations"].items()
        }
        meas = {}
        for m, spec in doc.get("measurements", {}).items():
            label = _parse_key(m)
            table = {lookup(k): row for k, row in spec["table"].items()}
            meas[label] = ResponseFunction(label, spec["outcomes"], table)
        return cls(space, preps, meas)

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def loads(cls, text: str) -> "OntologicalModel":
        return cls.from_dict(json.loads(text))


# Tuple labels (product models) are written as "a,b" keys in JSON objects.
def _label_key(label) -> str:
    if isinstance(label, tuple):
        return ",".join(_label_key(x) for x in label)
    return str(label)


def _label_json(label):
    return [_label_json(x) for x in label] if isinstance(label, tuple) else label


def _parse_key(key: str):
    return tuple(key.split(",")) if "," in key else key


def predicted_probability(model: OntologicalModel, prep, meas, outcome) -> float:
    """Sum over ontic states of ``mu_prep(lam) * response(outcome | lam)``."""
    mu = model.preparation(prep)
    resp = model.measurement(meas)
    return sum(w * resp.probability(lam, outcome) for lam, w in mu.weights.items() if w)


def support(e: EpistemicState) -> set:
    return {lam for lam, w in e.weights.items() if w > ZERO_WEIGHT}


def supports_overlap(a: EpistemicState, b: EpistemicState) -> set:
    if a.space != b.space:
        raise SpaceMismatchError("epistemic states live on different ontic spaces")
    return support(a) & support(b)


def overlapping_preparations(model: OntologicalModel) -> dict:
    """Map ``(prep_a, prep_b) -> shared support`` for every overlapping pair."""
    out = {}
    for p, q in combinations(model.preparations, 2):
        shared = supports_overlap(model.preparations[p], model.preparations[q])
        if shared:
            out[(p, q)] = shared
    return out


def classify(model: OntologicalModel) -> str:
    return "psi-epistemic" if model.is_psi_epistemic() else "psi-ontic"


def lifted_label(meas, position: int) -> str:
    return f"{meas}⊗id" if position == 0 else f"id⊗{meas}"


def product_model(m1: OntologicalModel, m2: OntologicalModel) -> OntologicalModel:
    """Model of independently prepared pairs.

    Preparation ``(p, q)`` has weight ``mu_p(l) * mu_q(l')`` at ``(l, l')``.
    Each local measurement ``M`` of either factor becomes a pair measurement
    ``"M⊗id"`` or ``"id⊗M"`` that reads only its own factor.
    """
    space = OnticSpace(product(m1.space, m2.space))
    preps = {}
    for (p, mu), (q, nu) in product(m1.preparations.items(), m2.preparations.items()):
        weights = {(l1, l2): mu[l1] * nu[l2] for l1, l2 in space if mu[l1] and nu[l2]}
        preps[(p, q)] = EpistemicState(space, weights)
    meas = {}
    for position, factor in enumerate((m1, m2)):
        for label, resp in factor.measurements.items():
            name = lifted_label(label, position)
            table = {pair: resp.table[pair[position]] for pair in space}
            meas[name] = ResponseFunction(name, resp.outcomes, table)
    return OntologicalModel(space, preps, meas)


def marginal(e: EpistemicState, position: int, space: OnticSpace) -> EpistemicState:
    """Distribution of one factor of a distribution on a product space."""
    weights = {lam: 0.0 for lam in space}
    for pair, w in e.weights.items():
        weights[pair[position]] += w
    return EpistemicState(space, weights)


def fraction_in_region(model: OntologicalModel, prep, region: Iterable) -> float:
    mu = model.preparation(prep)
    region = set(region)
    unknown = region - set(model.space.states)
    if unknown:
        raise UnknownLabelError(f"labels not in the ontic space: {sorted(map(str, unknown))}")
    return sum(mu[lam] for lam in region)


def outcome_region(model: OntologicalModel, meas, outcome) -> set:
    """Ontic states at which a deterministic measurement gives ``outcome``."""
    resp = model.measurement(meas)
    return {lam for lam in model.space if resp.outcome_at(lam) == outcome}


@dataclass(frozen=True)
class ValidationRow:
    prep: Label
    meas: Label
    outcome: Label
    predicted: float
    required: float
    passed: bool

    @property
    def error(self) -> float:
        return abs(self.predicted - self.required)


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_error(self) -> float:
        return max((r.error for r in self.rows), default=0.0)


def validate_against_quantum(model: OntologicalModel, targets: Iterable, tol: float = TOL_PROB) -> ValidationReport:
    """Compare model predictions with required (quantum) probabilities.

    ``targets`` holds ``(prep, meas, outcome, probability)`` tuples.
    """
    rows = []
    for prep, meas, outcome, required in targets:
        p = predicted_probability(model, prep, meas, outcome)
        rows.append(ValidationRow(prep, meas, outcome, p, float(required), abs(p - required) <= tol))
    return ValidationReport(tuple(rows), tol)
