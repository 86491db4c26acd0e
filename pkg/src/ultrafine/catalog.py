"""Named observable pairs used throughout the examples and tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import I2, SX, SZ, BipartiteOperator, ProductObservable

Observable = Union[ProductObservable, BipartiteOperator]

NAMES = ("xxzz", "qutrit-counterexample", "ququart-counterexample",
         "noisy-pauli-povm", "theorem1-counterexample")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    C: Observable
    L: Observable
    metadata: dict = field(default_factory=dict)


def noisy_effects():
    """``E+^C = (1 + X/sqrt2)/2`` and ``E+^L = (1 + Z/sqrt2)/2``."""
    r = 1 / np.sqrt(2)
    return (I2 + r * SX) / 2, (I2 + r * SZ) / 2


def catalog(name: str) -> CatalogEntry:
    if name == "xxzz":
        return CatalogEntry(name, ProductObservable(SZ, SZ), ProductObservable(SX, SX),
                            {"note": "C = Z(x)Z and L = X(x)X commute globally"})
    if name == "qutrit-counterexample":
        C = ProductObservable(np.diag([1.0, 2.0, 4.0]), np.diag([0.5, 1.5, 5 / 3]))
        L = ProductObservable(np.array([[1, 0, 0], [0, 0, 2], [0, 2, 0]], dtype=float),
                              np.array([[0, 0.5, 0], [0.5, 0, 0], [0, 0, 1]], dtype=float))
        return CatalogEntry(name, C, L, {"useful": False})
    if name == "ququart-counterexample":
        C = ProductObservable(SZ, np.diag([2.0, 1 / 3, -1.0, 4.0]))
        L = ProductObservable(SX, np.array([[3, 0, 0, 0], [0, 0, 1, 0],
                                            [0, 1, 0, 0], [0, 0, 0, 3]], dtype=float))
        return CatalogEntry(name, C, L, {"useful": False})
    if name == "noisy-pauli-povm":
        EC, EL = noisy_effects()
        r = 1 / np.sqrt(2)
        return CatalogEntry(name, ProductObservable(EC, EC), ProductObservable(EL, EL),
                            {"c": 0.6, "g_c": 0.5223, "hyperplane_min": -0.016,
                             "blochC": [float(r), 0.0, 0.0], "blochL": [0.0, 0.0, float(r)]})
    if name == "theorem1-counterexample":
        C = BipartiteOperator((2, 2), np.diag([1.0, 0.0, 0.0, -1.0]))
        L = BipartiteOperator((2, 2), np.diag([1.0, 0.0, 0.0, 1.0]))
        return CatalogEntry(name, C, L, {"note": "rank-2 optimum beats every pure product state"})
    raise KeyError(f"unknown catalog entry {name!r}; choose from {', '.join(NAMES)}")
