"""Cabbolet's four-region toy model and the local joint instructions.

Single systems carry one of four ontic regions ``"0+", "0-", "1+", "1-"``;
region ``"as"`` answers ``a`` to measurement A (z basis, outcomes 0/1) and
``s`` to measurement B (x basis, outcomes +/-). Preparation ``|0>`` spreads
evenly over ``0+`` and ``0-``, preparation ``|+>`` over ``0+`` and ``1+``.

The instructions M1'..M4' measure A or B locally on each half of a pair and
report +1 or -1 from the two local outcomes. :func:`plus_one_effect` gives
the product-basis coarse-graining the +1 outcome actually implements, and
:func:`born_mismatch` compares it with the entangled vector it was meant to
stand for.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .ontology import (
    EpistemicState,
    OnticSpace,
    OntologicalModel,
    ResponseFunction,
    product_model,
)
from .qlinalg import (
    MINUS,
    ONE,
    PLUS,
    ZERO,
    Effect,
    Ket,
    MeasurementBasis,
    born_probability,
    effect_probability,
    product_basis,
)

A_OUTCOMES = ("0", "1")
B_OUTCOMES = ("+", "-")

LOCAL_BASES = {
    "A": MeasurementBasis([ZERO, ONE], A_OUTCOMES),
    "B": MeasurementBasis([PLUS, MINUS], B_OUTCOMES),
}

UNPRIMED_NOTE = (
    "M1..M4 without a parity rule each have four outcomes and no stated link "
    "to a single entangled vector; only the parity versions M1'..M4' are run."
)


@dataclass(frozen=True, order=True)
class Region:
    a_outcome: str
    b_outcome: str

    def __post_init__(self):
        if self.a_outcome not in A_OUTCOMES or self.b_outcome not in B_OUTCOMES:
            raise ValueError(f"no region ({self.a_outcome!r}, {self.b_outcome!r})")

    @property
    def label(self) -> str:
        return self.a_outcome + self.b_outcome

    @classmethod
    def parse(cls, label) -> "Region":
        if isinstance(label, Region):
            return label
        return cls(label[0], label[1:])

    def __str__(self):
        return self.label


REGIONS = tuple(Region(a, s) for a in A_OUTCOMES for s in B_OUTCOMES)
L0P, L0M, L1P, L1M = REGIONS
OVERLAP_PAIR = (L0P.label, L0P.label)


def local_outcome(region: Region, meas: str) -> str:
    region = Region.parse(region)
    if meas == "A":
        return region.a_outcome
    if meas == "B":
        return region.b_outcome
    raise ValueError(f"unknown local measurement {meas!r}")


def build_cabbolet_model() -> OntologicalModel:
    space = OnticSpace([r.label for r in REGIONS])
    preparations = {
        "0": EpistemicState(space, {L0P.label: 0.5, L0M.label: 0.5}),
        "+": EpistemicState(space, {L0P.label: 0.5, L1P.label: 0.5}),
    }
    measurements = {
        m: ResponseFunction.deterministic(m, LOCAL_BASES[m].labels, {r.label: local_outcome(r, m) for r in REGIONS})
        for m in ("A", "B")
    }
    return OntologicalModel(space, preparations, measurements)


def build_cabbolet_pair_model() -> OntologicalModel:
    m = build_cabbolet_model()
    return product_model(m, m)


@dataclass(frozen=True)
class JointInstruction:
    index: int
    first_local: str
    second_local: str
    plus_one_pairs: frozenset

    def __post_init__(self):
        pairs = {(p, q) for p in LOCAL_BASES[self.first_local].labels for q in LOCAL_BASES[self.second_local].labels}
        if not set(self.plus_one_pairs) <= pairs:
            raise ValueError(f"M{self.index}': +1 outcomes {set(self.plus_one_pairs)} are not local outcome pairs")

    @property
    def name(self) -> str:
        return f"M{self.index}'"

    def parity(self, first_out, second_out) -> int:
        return 1 if (first_out, second_out) in self.plus_one_pairs else -1


INSTRUCTIONS = (
    JointInstruction(1, "A", "A", frozenset({("0", "1"), ("1", "0")})),
    JointInstruction(2, "A", "B", frozenset({("0", "-"), ("1", "+")})),
    JointInstruction(3, "B", "A", frozenset({("+", "1"), ("-", "0")})),
    JointInstruction(4, "B", "B", frozenset({("+", "-"), ("-", "+")})),
)


def instruction(index: int) -> JointInstruction:
    return INSTRUCTIONS[index - 1]


def run_instruction(instr: JointInstruction, pair) -> int:
    """Outcome (+1 or -1) of an instruction on a pair of regions."""
    first, second = (Region.parse(r) for r in pair)
    return instr.parity(local_outcome(first, instr.first_local), local_outcome(second, instr.second_local))


def plus_one_effect(instr: JointInstruction) -> tuple[MeasurementBasis, Effect]:
    """Local product basis of an instruction and the effect its +1 outcome selects."""
    basis = product_basis(LOCAL_BASES[instr.first_local], LOCAL_BASES[instr.second_local])
    members = [i for i, lab in enumerate(basis.labels) if lab in instr.plus_one_pairs]
    return basis, Effect(basis.dim, members)


def default_test_state(instr: JointInstruction) -> Ket:
    """First product-basis vector inside the +1 effect (``|01>`` for M1')."""
    basis, effect = plus_one_effect(instr)
    return basis[min(effect.member_indices)]


@dataclass(frozen=True)
class MismatchReport:
    instruction: int
    test_state: Ket
    operational_prob: float
    entangled_born_prob: float

    @property
    def discrepancy(self) -> float:
        return abs(self.operational_prob - self.entangled_born_prob)


def born_mismatch(instr: JointInstruction, xi: Ket, test_state: Ket) -> MismatchReport:
    basis, effect = plus_one_effect(instr)
    return MismatchReport(
        instr.index,
        test_state,
        effect_probability(basis, effect, test_state),
        born_probability(xi, test_state),
    )


def find_discrepant_state(
    instr: JointInstruction, xi: Ket, candidates: Iterable[Ket], tol: float = 1e-12
) -> MismatchReport | None:
    """First candidate on which the +1 effect and ``xi`` give different probabilities."""
    for state in candidates:
        report = born_mismatch(instr, xi, state)
        if report.discrepancy > tol:
            return report
    return None


def exact_plus_one_probability(model: OntologicalModel, prep, instr: JointInstruction) -> float:
    """Probability of +1 by enumerating the pair model's ontic states."""
    mu = model.preparation(prep)
    return sum(w for pair, w in mu.weights.items() if w and run_instruction(instr, pair) == 1)


@dataclass(frozen=True, eq=False)
class EnsembleSample:
    """``n`` ontic states drawn from one preparation; ``indices`` point into ``space``."""

    prep: object
    seed: int
    space: tuple
    indices: np.ndarray

    @property
    def n(self) -> int:
        return int(self.indices.size)

    def labels(self):
        return [self.space[i] for i in self.indices]

    def counts(self) -> dict:
        c = np.bincount(self.indices, minlength=len(self.space))
        return {lam: int(k) for lam, k in zip(self.space, c)}

    def frequencies(self) -> dict:
        return {lam: k / self.n for lam, k in self.counts().items()}


def stream_seed(model: OntologicalModel, prep, seed: int) -> int:
    """Each preparation draws from its own stream, seeded ``seed + prep index``."""
    return seed + list(model.preparations).index(prep)


def draw_ensemble(model: OntologicalModel, prep, n: int, seed: int) -> EnsembleSample:
    """Draw ``n`` independent ontic states from a preparation.

    Uses numpy's PCG64 generator and inverse-CDF lookup of uniform
    doubles, so identical ``(seed, n)`` give identical draws.
    """
    if n < 1:
        raise ValueError(f"sample size must be at least 1, got {n}")
    mu = model.preparation(prep)
    space = model.space.states
    cdf = np.cumsum([mu[lam] for lam in space])
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(stream_seed(model, prep, seed)))
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return EnsembleSample(prep, seed, space, np.minimum(idx, len(space) - 1))


def sample_ensemble(model: OntologicalModel, prep, n: int, seed: int) -> dict:
    """Empirical frequency of every ontic state in ``n`` seeded draws."""
    return draw_ensemble(model, prep, n, seed).frequencies()


def empirical_instruction_stats(instr: JointInstruction, sample: EnsembleSample, region=None) -> float:
    """Fraction of sampled pairs on which ``instr`` gives +1.

    With ``region`` set, only pairs inside it are counted; ``nan`` if the
    sample has none there.
    """
    counts = sample.counts()
    if region is not None:
        region = set(region)
        counts = {lam: k for lam, k in counts.items() if lam in region}
    total = sum(counts.values())
    if total == 0:
        return float("nan")
    return sum(k for lam, k in counts.items() if run_instruction(instr, lam) == 1) / total


def instruction_stats_dict(instr: JointInstruction, sample: EnsembleSample) -> dict:
    return {
        "instruction": instr.index,
        "plus_one_frequency": empirical_instruction_stats(instr, sample),
        "n": sample.n,
        "seed": sample.seed,
    }


def write_sample_csv(sample: EnsembleSample, fp: TextIO):
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["pair_index", "first_region", "second_region"])
    for i, (first, second) in enumerate(sample.labels()):
        writer.writerow([i, first, second])
