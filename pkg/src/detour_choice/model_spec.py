"""Declarative utility specifications.

A specification is an ordered list of terms. Each term names a
coefficient, the design-matrix attribute it multiplies, and the modes
whose utility it enters. Coefficients listed in ``fixed`` are held at the
given value; ``mixing`` turns a coefficient into a normal random
coefficient whose spread is the named sigma parameter.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .core import MODES, N_MODES, Mode
from .errors import SpecificationError

NORMALIZED_ATTRIBUTES = ("asc", "income")


@dataclass(frozen=True)
class Term:
    name: str
    attribute: str
    modes: frozenset[Mode]

    def __init__(self, name: str, attribute: str, modes: Iterable[Mode]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "attribute", attribute)
        object.__setattr__(self, "modes", frozenset(Mode(m) for m in modes))


@dataclass(frozen=True)
class MixingSpec:
    """Normal mixing of one coefficient: beta = mean + sigma * z, z ~ N(0, 1).

    The sigma parameter is estimated unconstrained; only its absolute
    value is the standard deviation.
    """

    sigma: str
    distribution: str = "normal"

    def __post_init__(self):
        if self.distribution != "normal":
            raise SpecificationError("only normal mixing is supported")


@dataclass(frozen=True)
class ModelSpec:
    terms: tuple[Term, ...]
    base_mode: Mode = Mode.WALKING
    fixed: Mapping[str, float] = field(default_factory=dict)
    mixing: Mapping[str, MixingSpec] = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "fixed", dict(self.fixed))
        object.__setattr__(self, "mixing", dict(self.mixing))
        names = [t.name for t in self.terms]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise SpecificationError(f"duplicate coefficient name {dup!r}")
        for t in self.terms:
            if not t.modes:
                raise SpecificationError(f"term {t.name} applies to no mode")
            if t.attribute in NORMALIZED_ATTRIBUTES and self.base_mode in t.modes:
                raise SpecificationError(
                    f"term {t.name}: base mode {self.base_mode.key} must not carry "
                    f"a {t.attribute} term")
        for k in self.fixed:
            if k not in names:
                raise SpecificationError(f"fixed value for unknown coefficient {k!r}")
        sigmas = []
        for k, mix in self.mixing.items():
            if k not in names:
                raise SpecificationError(f"mixing for unknown coefficient {k!r}")
            if k in self.fixed:
                raise SpecificationError(f"coefficient {k!r} cannot be both fixed and mixed")
            if mix.sigma in names or mix.sigma in sigmas:
                raise SpecificationError(f"sigma name {mix.sigma!r} is not unique")
            sigmas.append(mix.sigma)

    @property
    def coefficient_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.terms)

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.terms if t.name not in self.fixed)

    @property
    def sigma_names(self) -> tuple[str, ...]:
        return tuple(m.sigma for m in self.mixing.values())

    @property
    def parameter_names(self) -> tuple[str, ...]:
        """Estimated parameters: free coefficients, then sigmas."""
        return self.free_names + self.sigma_names

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(t.attribute for t in self.terms))

    def term(self, name: str) -> Term:
        for t in self.terms:
            if t.name == name:
                return t
        raise SpecificationError(f"unknown coefficient {name!r}")

    def modes_for(self, attribute: str) -> tuple[Mode, ...]:
        """Modes whose utility contains ``attribute``, in term order."""
        out = []
        for t in self.terms:
            if t.attribute == attribute:
                out.extend(sorted(t.modes - set(out)))
        return tuple(out)

    def without_mixing(self) -> "ModelSpec":
        return ModelSpec(self.terms, self.base_mode, self.fixed, {}, self.name)

    def with_mixing(self, mixing: Mapping[str, MixingSpec], name: str | None = None) -> "ModelSpec":
        return ModelSpec(self.terms, self.base_mode, self.fixed, mixing, name or self.name)

    def vector(self, params: Mapping[str, float]) -> np.ndarray:
        """Order a name->value mapping as the estimated-parameter vector."""
        missing = [n for n in self.parameter_names if n not in params]
        if missing:
            raise SpecificationError(f"missing coefficient {missing[0]!r}")
        vec = np.array([params[n] for n in self.parameter_names], dtype=float)
        if not np.all(np.isfinite(vec)):
            raise SpecificationError("parameter values must be finite")
        return vec

    def full_coefficients(self, params: Mapping[str, float]) -> np.ndarray:
        """All term coefficients (fixed ones included) in term order."""
        out = np.empty(len(self.terms))
        for j, t in enumerate(self.terms):
            if t.name in self.fixed:
                out[j] = self.fixed[t.name]
            elif t.name in params:
                out[j] = params[t.name]
            else:
                raise SpecificationError(f"missing coefficient {t.name!r}")
        return out


def term_tensor(X, spec: ModelSpec) -> np.ndarray:
    """``Z[obs, mode, term]``: the attribute a term multiplies, zero where it does not apply."""
    Z = np.zeros((X.n_obs, N_MODES, len(spec.terms)))
    for j, t in enumerate(spec.terms):
        col = X.attribute(t.attribute)
        for m in t.modes:
            Z[:, m, j] = col[:, m]
    return Z


def load_spec_file(path: str | Path) -> ModelSpec:
    """Read a model specification from an INI-style file.

    Layout::

        [model]
        name = my-model
        base_mode = walking

        [terms]
        ASC_BUS = asc: bus
        DT = time: walking, bike, car

        [fixed]
        DT = -1.0

        [mixing]
        DT = SIGMA_DT
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    cp.read(path, encoding="utf-8")
    unknown = set(cp.sections()) - {"model", "terms", "fixed", "mixing"}
    if unknown:
        raise SpecificationError(f"unknown section [{sorted(unknown)[0]}] in {path}")
    if not cp.has_section("terms"):
        raise SpecificationError(f"{path}: missing [terms] section")
    model = dict(cp.items("model")) if cp.has_section("model") else {}
    bad = set(model) - {"name", "base_mode"}
    if bad:
        raise SpecificationError(f"unknown key {sorted(bad)[0]!r} in [model]")
    terms = []
    for name, value in cp.items("terms"):
        attr, _, modes = value.partition(":")
        if not modes.strip():
            raise SpecificationError(f"term {name}: expected 'attribute: mode, mode'")
        try:
            ms = [Mode.parse(m) for m in modes.split(",") if m.strip()]
        except ValueError as exc:
            raise SpecificationError(f"term {name}: {exc}") from None
        terms.append(Term(name, attr.strip(), ms))
    fixed = {k: float(v) for k, v in cp.items("fixed")} if cp.has_section("fixed") else {}
    mixing = ({k: MixingSpec(v.strip()) for k, v in cp.items("mixing")}
              if cp.has_section("mixing") else {})
    return ModelSpec(
        terms=tuple(terms),
        base_mode=Mode.parse(model.get("base_mode", "walking")),
        fixed=fixed, mixing=mixing, name=model.get("name", path.stem),
    )
