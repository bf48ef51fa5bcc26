"""Declarative basis descriptors and their text notation.

Grammar (whitespace-insensitive)::

    node      := leaf | power | composite
    leaf      := "lagrange" "(" INT ")" | "dg" "(" INT ")"
    power     := "power" "(" node "," INT "," STRATEGY ")"
    composite := "composite" "(" node ("," node)* "," STRATEGY ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .indexing import MergingStrategy
from .localfe import MAX_DEGREE

MAX_DESCRIPTOR_DEPTH = 4


class DescriptorError(ValueError):
    pass


class DescriptorSyntaxError(DescriptorError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Lagrange:
    degree: int
    continuous: bool = True

    def __post_init__(self):
        if not 0 <= self.degree <= MAX_DEGREE:
            raise DescriptorError(
                f"Lagrange degree out of range: {self.degree} (allowed 0..{MAX_DEGREE})"
            )


@dataclass(frozen=True)
class Power:
    child: "BasisDescriptor"
    exponent: int
    strategy: MergingStrategy

    def __post_init__(self):
        if self.exponent < 1:
            raise DescriptorError(f"power exponent must be >= 1, got {self.exponent}")
        if self.strategy is MergingStrategy.BLOCKED_BY_ENTITY and not (
            isinstance(self.child, Lagrange) and self.child.continuous
        ):
            raise DescriptorError("blockedByEntity needs a power of a continuous Lagrange leaf")


@dataclass(frozen=True)
class Composite:
    children: tuple
    strategy: MergingStrategy

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise DescriptorError("composite node needs at least one child")
        if self.strategy.power_only:
            raise DescriptorError(f"{self.strategy.value} is only allowed on power nodes")


BasisDescriptor = Union[Lagrange, Power, Composite]


def children_of(desc: BasisDescriptor) -> tuple:
    if isinstance(desc, Power):
        return (desc.child,) * desc.exponent
    if isinstance(desc, Composite):
        return desc.children
    return ()


def descriptor_depth(desc: BasisDescriptor) -> int:
    kids = children_of(desc)
    return 1 + (max(descriptor_depth(c) for c in kids) if kids else 0)


def sub_descriptor(desc: BasisDescriptor, path) -> BasisDescriptor:
    node = desc
    for pos, d in enumerate(path):
        kids = children_of(node)
        if not 0 <= d < len(kids):
            raise IndexError(f"tree path {tuple(path)} invalid at position {pos}")
        node = kids[d]
    return node


def leaf_paths(desc: BasisDescriptor, prefix: tuple = ()) -> list[tuple]:
    """Tree paths of all leaves in depth-first pre-order."""
    kids = children_of(desc)
    if not kids:
        return [prefix]
    return [p for i, c in enumerate(kids) for p in leaf_paths(c, prefix + (i,))]


def validate(desc: BasisDescriptor) -> BasisDescriptor:
    if descriptor_depth(desc) > MAX_DESCRIPTOR_DEPTH:
        raise DescriptorError(
            f"descriptor depth {descriptor_depth(desc)} exceeds {MAX_DESCRIPTOR_DEPTH}"
        )
    return desc


def format_descriptor(desc: BasisDescriptor) -> str:
    if isinstance(desc, Lagrange):
        return f"{'lagrange' if desc.continuous else 'dg'}({desc.degree})"
    if isinstance(desc, Power):
        return f"power({format_descriptor(desc.child)},{desc.exponent},{desc.strategy.value})"
    inner = ",".join(format_descriptor(c) for c in desc.children)
    return f"composite({inner},{desc.strategy.value})"


# convenience factories mirroring the text notation
def lagrange(k: int) -> Lagrange:
    return Lagrange(k, True)


def dg(k: int) -> Lagrange:
    return Lagrange(k, False)


def power(child, n: int, strategy) -> Power:
    if isinstance(strategy, str):
        strategy = MergingStrategy.from_name(strategy)
    return Power(child, n, strategy)


def composite(*args) -> Composite:
    *kids, strategy = args
    if isinstance(strategy, str):
        strategy = MergingStrategy.from_name(strategy)
    return Composite(tuple(kids), strategy)


def taylor_hood(dim: int = 2, velocity_strategy=MergingStrategy.BLOCKED_INTERLEAVED) -> Composite:
    """P2^dim velocity and P1 pressure, blocked lexicographically at the root."""
    return composite(
        power(lagrange(2), dim, velocity_strategy), lagrange(1), MergingStrategy.BLOCKED_LEXICOGRAPHIC
    )


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<punct>[(),]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise DescriptorSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", "", len(self.text))

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise DescriptorSyntaxError(f"expected {want}, got {got}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.node()
        tok = self.peek()
        if tok[0] != "end":
            raise DescriptorSyntaxError(f"trailing input {tok[1]!r}", tok[2])
        return node

    def strategy(self):
        _, name, offset = self.take("name")
        try:
            return MergingStrategy.from_name(name)
        except ValueError:
            raise DescriptorSyntaxError(f"unknown strategy {name!r}", offset) from None

    def node(self):
        _, name, start = self.take("name")
        self.take("punct", "(")
        try:
            if name in ("lagrange", "dg"):
                _, k, _ = self.take("int")
                self.take("punct", ")")
                return Lagrange(int(k), name == "lagrange")
            if name == "power":
                child = self.node()
                self.take("punct", ",")
                _, n, _ = self.take("int")
                self.take("punct", ",")
                strategy = self.strategy()
                self.take("punct", ")")
                return Power(child, int(n), strategy)
            if name == "composite":
                kids = [self.node()]
                while True:
                    self.take("punct", ",")
                    if self.peek()[0] == "name" and self.peek()[1] not in (
                        "lagrange", "dg", "power", "composite"
                    ):
                        strategy = self.strategy()
                        break
                    kids.append(self.node())
                self.take("punct", ")")
                return Composite(tuple(kids), strategy)
        except DescriptorSyntaxError:
            raise
        except DescriptorError as exc:
            raise DescriptorSyntaxError(str(exc), start) from None
        raise DescriptorSyntaxError(f"unknown node type {name!r}", start)


def parse_descriptor(text: str) -> BasisDescriptor:
    desc = _Parser(text).parse()
    try:
        return validate(desc)
    except DescriptorError as exc:
        raise DescriptorSyntaxError(str(exc), 0) from None
