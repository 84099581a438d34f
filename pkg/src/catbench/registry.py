"""Foreign-function and meta-relation registry, plus evaluator configuration.

One numeric namespace backs both the oracle-style `cff1`/`cff2` forms and the
word-guarded `op`/`arith` machine primitives; only the transition rules
differ.  Registries are immutable: `register` returns an extended copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Literal, Mapping


class RegistryError(Exception):
    pass


UnaryFn = Callable[[int], int]
BinaryFn = Callable[[int, int], int]
BinaryRel = Callable[[int, int], bool]
TernaryRel = Callable[[int, int, int], bool]

Kind = Literal["unary", "binary", "rel2", "rel3"]


def _frozen(d: Mapping) -> Mapping:
    return MappingProxyType(dict(d))


@dataclass(frozen=True)
class FFIRegistry:
    unary: Mapping[str, UnaryFn] = field(default_factory=dict)
    binary: Mapping[str, BinaryFn] = field(default_factory=dict)
    rel2: Mapping[str, BinaryRel] = field(default_factory=dict)
    rel3: Mapping[str, TernaryRel] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "unary", _frozen(self.unary))
        object.__setattr__(self, "binary", _frozen(self.binary))
        object.__setattr__(self, "rel2", _frozen(self.rel2))
        object.__setattr__(self, "rel3", _frozen(self.rel3))

    def lookup_unary(self, name: str) -> UnaryFn:
        try:
            return self.unary[name]
        except KeyError:
            raise RegistryError(f"unregistered unary function {name!r}") from None

    def lookup_binary(self, name: str) -> BinaryFn:
        try:
            return self.binary[name]
        except KeyError:
            raise RegistryError(f"unregistered binary function {name!r}") from None

    def lookup_rel2(self, name: str) -> BinaryRel:
        try:
            return self.rel2[name]
        except KeyError:
            raise RegistryError(f"unregistered binary relation {name!r}") from None

    def lookup_rel3(self, name: str) -> TernaryRel:
        try:
            return self.rel3[name]
        except KeyError:
            raise RegistryError(f"unregistered ternary relation {name!r}") from None

    def apply_unary(self, name: str, m: int) -> int:
        return _check_result(name, self.lookup_unary(name)(m))

    def apply_binary(self, name: str, m: int, n: int) -> int:
        return _check_result(name, self.lookup_binary(name)(m, n))


def _check_result(name: str, r) -> int:
    # Registered functions must map naturals to naturals; checked on use.
    if not isinstance(r, int) or isinstance(r, bool) or r < 0:
        raise RegistryError(f"function {name!r} produced a non-natural: {r!r}")
    return r


def register(reg: FFIRegistry, kind: Kind, name: str, fn) -> FFIRegistry:
    """Extend a registry; duplicate names for a kind are rejected."""
    table = dict(getattr(reg, _FIELD[kind]))
    if name in table:
        raise RegistryError(f"{kind} name {name!r} already registered")
    table[name] = fn
    return replace(reg, **{_FIELD[kind]: table})


_FIELD = {"unary": "unary", "binary": "binary", "rel2": "rel2", "rel3": "rel3"}


def _div(m: int, n: int) -> int:
    if n == 0:
        raise RegistryError("division by zero")
    return m // n


def _mod(m: int, n: int) -> int:
    if n == 0:
        raise RegistryError("modulus by zero")
    return m % n


def _gcd_prop(d: int, m: int, n: int) -> bool:
    return d == math.gcd(m, n)


def default_registry() -> FFIRegistry:
    """Arithmetic on naturals (subtraction truncated at 0) plus the stock relations."""
    return FFIRegistry(
        unary={},
        binary={
            "+": lambda m, n: m + n,
            "-": lambda m, n: max(m - n, 0),
            "*": lambda m, n: m * n,
            "/": _div,
            "%": _mod,
            "max": max,
        },
        rel2={
            "<": lambda m, n: m < n,
            "<=": lambda m, n: m <= n,
            "=": lambda m, n: m == n,
        },
        rel3={"gcdProp": _gcd_prop},
    )


Mode = Literal["seq", "par"]


@dataclass(frozen=True)
class EvalConfig:
    """Word size (exclusive bound on op/arith operands), mode, and fuel."""

    word_size: int = 2**31
    mode: Mode = "seq"
    fuel: int = 10**7
    trace: bool = False

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")
        if self.mode not in ("seq", "par"):
            raise ValueError(f"unknown mode {self.mode!r}")
