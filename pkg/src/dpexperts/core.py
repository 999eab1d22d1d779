"""Shared domain types: loss models, problem instances, mechanism configs, run records."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

# Validation tolerance for probabilities and derived quantities.
PROB_TOL = 1e-12


class InvalidSupport(ValueError):
    """A loss value lies outside [0, 1]."""


class InvalidProbabilities(ValueError):
    """Atom probabilities are negative or do not sum to 1."""


class OutOfRange(ValueError):
    """An input coordinate lies outside its required range."""


def _check_unit_interval(value: float, what: str) -> None:
    if not (0.0 <= value <= 1.0):
        raise InvalidSupport(f"{what} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class PointMass:
    """Loss that is always equal to `value`."""

    value: float

    def __post_init__(self) -> None:
        _check_unit_interval(self.value, "point mass value")

    def mean(self) -> float:
        return self.value

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Inverse-CDF map of uniforms in [0, 1) to losses (degenerate: constant)."""
        return np.full_like(np.asarray(u, dtype=float), self.value)


@dataclass(frozen=True)
class Bernoulli:
    """Loss in {0, 1} with P[loss = 1] = p."""

    p: float

    def __post_init__(self) -> None:
        _check_unit_interval(self.p, "Bernoulli mean")

    def mean(self) -> float:
        return self.p

    def sample(self, u: np.ndarray) -> np.ndarray:
        # Convention: u < p maps to loss 1 so that the loss mean equals p.
        return (np.asarray(u, dtype=float) < self.p).astype(float)


@dataclass(frozen=True)
class FiniteSupport:
    """Loss taking finitely many values; atoms is a tuple of (value, prob)."""

    atoms: tuple

    def __post_init__(self) -> None:
        atoms = tuple((float(v), float(p)) for v, p in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise InvalidProbabilities("finite-support model needs at least one atom")
        for v, p in atoms:
            _check_unit_interval(v, "finite-support value")
            if p < 0.0:
                raise InvalidProbabilities(f"negative atom probability {p!r}")
        total = math.fsum(p for _, p in atoms)
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidProbabilities(f"atom probabilities sum to {total!r}, expected 1")

    def mean(self) -> float:
        return math.fsum(v * p for v, p in self.atoms)

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Inverse CDF over [0, 1) partitioned by atom probabilities in listed order."""
        u = np.asarray(u, dtype=float)
        values = np.array([v for v, _ in self.atoms])
        cum = np.cumsum([p for _, p in self.atoms])
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(values) - 1)
        return values[idx]


LossModel = Union[PointMass, Bernoulli, FiniteSupport]


@dataclass(frozen=True)
class Instance:
    """K actions with loss models and the derived means/gaps.

    Actions keep their given order; gaps are taken against the minimum mean, and
    delta_min is the smallest strictly positive gap (None when all means tie).
    Immutable after construction; safe to share across concurrent trials.
    """

    models: tuple
    means: np.ndarray
    gaps: np.ndarray
    delta_min: Optional[float]

    @property
    def k(self) -> int:
        return len(self.models)


def make_instance(models) -> Instance:
    """Build an Instance from a nonempty list of loss models."""
    models = tuple(models)
    if not models:
        raise OutOfRange("an instance needs at least one action")
    means = np.array([m.mean() for m in models], dtype=float)
    gaps = means - means.min()
    positive = gaps[gaps > 0.0]
    delta_min = float(positive.min()) if positive.size else None
    return Instance(models=models, means=means, gaps=gaps, delta_min=delta_min)


class NoiseKind(str, Enum):
    LAPLACE = "laplace"
    EXPONENTIAL = "exponential"
    GUMBEL = "gumbel"
    NONE = "none"


@dataclass(frozen=True)
class MechanismSpec:
    """Selection-step configuration: resampling bit, noise family, privacy parameter."""

    resample: int
    noise: NoiseKind
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if self.resample not in (0, 1):
            raise OutOfRange(f"resample bit must be 0 or 1, got {self.resample!r}")
        noise = NoiseKind(self.noise)
        object.__setattr__(self, "noise", noise)
        if noise is not NoiseKind.NONE and not self.epsilon > 0.0:
            raise OutOfRange(f"epsilon must be positive for {noise.value} noise")

    def scale(self) -> float:
        """Noise scale: Laplace 2/eps, Exponential 1/eps, Gumbel 2/eps, 0 without noise."""
        if self.noise is NoiseKind.NONE:
            return 0.0
        if self.noise is NoiseKind.EXPONENTIAL:
            return 1.0 / self.epsilon
        return 2.0 / self.epsilon


@dataclass(frozen=True)
class RunRecord:
    """One trajectory: per-epoch selections and the exact pseudoregret contribution."""

    horizon: int
    epoch_actions: tuple  # of (epoch index r, action played through epoch r, length)
    pseudoregret: float
    seed: int

    def __post_init__(self) -> None:
        total = sum(length for _, _, length in self.epoch_actions)
        if total != self.horizon:
            raise OutOfRange(f"epoch lengths sum to {total}, expected horizon {self.horizon}")
        if self.pseudoregret < 0.0:
            raise OutOfRange(f"negative pseudoregret {self.pseudoregret!r}")


@dataclass(frozen=True)
class RegretEstimate:
    """Monte Carlo pseudoregret estimate for one (instance, spec, T) cell."""

    mean: float
    stderr: float
    trials: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise OutOfRange("trials must be >= 1")
        if self.stderr < 0.0:
            raise OutOfRange("stderr must be >= 0")


def model_to_dict(model: LossModel) -> dict:
    if isinstance(model, PointMass):
        return {"kind": "point", "value": model.value}
    if isinstance(model, Bernoulli):
        return {"kind": "bernoulli", "mean": model.p}
    if isinstance(model, FiniteSupport):
        return {"kind": "finite", "atoms": [[v, p] for v, p in model.atoms]}
    raise TypeError(f"unknown loss model {model!r}")


def model_from_dict(doc: dict) -> LossModel:
    kind = doc.get("kind")
    if kind == "point":
        return PointMass(float(doc["value"]))
    if kind == "bernoulli":
        return Bernoulli(float(doc["mean"]))
    if kind == "finite":
        return FiniteSupport(tuple((float(v), float(p)) for v, p in doc["atoms"]))
    raise InvalidSupport(f"unknown loss model kind {kind!r}")


def instance_to_json(instance: Instance) -> str:
    return json.dumps({"models": [model_to_dict(m) for m in instance.models]})


def instance_from_json(text: str) -> Instance:
    doc = json.loads(text)
    return make_instance([model_from_dict(d) for d in doc["models"]])
