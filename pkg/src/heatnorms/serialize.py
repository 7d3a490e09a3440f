"""Human-readable text form for test-function trees.

Schema: ``kind(param=value, ..., child, child)`` where values are numbers or
``[v1, v2, ...]`` vectors and children are nested nodes.  Examples::

    gaussian(sigma=1.0, center=0.5, amplitude=2)
    indicator(lo=[-1, -1], hi=[1, 1], d=2)
    dilated(factor=2, gaussian(sigma=1))
    tensor(gaussian(sigma=1), indicator(lo=0.25, hi=1.25))
    anisotropic(lam=2, mu=4, tensor(gaussian(sigma=1), indicator(lo=0, hi=1)))

Used by the CLI config format; round-trips through ``to_text``/``from_text``.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import UsageError
from .testfunctions import (AnisotropicDilated, Dilated, Gaussian, Indicator,
                            PowerWeight, Scaled, SpaceTimeTestFunction, Sum,
                            Tensor, TestFunction, Translated)

__all__ = ["to_text", "from_text"]

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\[|\]|\(|\)|=|,|"
                    r"[-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)")


def _fmt(v) -> str:
    if isinstance(v, (tuple, list, np.ndarray)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    f = float(v)
    return repr(int(f)) if f.is_integer() and abs(f) < 1e15 else repr(f)


def to_text(node) -> str:
    """Serialize a (space-time) test function to the text schema."""
    if isinstance(node, Gaussian):
        return (f"gaussian(d={node.d}, sigma={_fmt(node.sigma)}, "
                f"center={_fmt(node.center)}, amplitude={_fmt(node.amplitude)})")
    if isinstance(node, Indicator):
        return (f"indicator(d={node.d}, lo={_fmt(node.lo)}, hi={_fmt(node.hi)}, "
                f"amplitude={_fmt(node.amplitude)})")
    if isinstance(node, PowerWeight):
        radius = "" if node.trunc_radius is None else \
            f", radius={_fmt(node.trunc_radius)}"
        return (f"power_weight(d={node.d}, exponent={_fmt(node.exponent)}"
                f"{radius}, amplitude={_fmt(node.amplitude)})")
    if isinstance(node, Sum):
        return "sum(" + ", ".join(to_text(c) for c in node.children) + ")"
    if isinstance(node, Scaled):
        return f"scaled(factor={_fmt(node.factor)}, {to_text(node.child)})"
    if isinstance(node, Dilated):
        return f"dilated(factor={_fmt(node.lam)}, {to_text(node.child)})"
    if isinstance(node, Translated):
        return f"translated(shift={_fmt(node.shift)}, {to_text(node.child)})"
    if isinstance(node, Tensor):
        return f"tensor({to_text(node.spatial)}, {to_text(node.temporal)})"
    if isinstance(node, AnisotropicDilated):
        return (f"anisotropic(lam={_fmt(node.lam)}, mu={_fmt(node.mu)}, "
                f"{to_text(node.child)})")
    raise UsageError(f"cannot serialize node of type {type(node).__name__}")


class _Parser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise UsageError(f"bad token at: {text[pos:pos + 20]!r}")
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise UsageError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def value(self):
        tok = self.take()
        if tok == "[":
            vals = []
            while self.peek() != "]":
                vals.append(float(self.take()))
                if self.peek() == ",":
                    self.take(",")
            self.take("]")
            return tuple(vals)
        return float(tok)

    def node(self):
        kind = self.take()
        self.take("(")
        kwargs, children = {}, []
        while self.peek() != ")":
            if (self.i + 1 < len(self.tokens)
                    and self.tokens[self.i + 1] == "="):
                key = self.take()
                self.take("=")
                kwargs[key] = self.value()
            else:
                children.append(self.node())
            if self.peek() == ",":
                self.take(",")
        self.take(")")
        return _build(kind, kwargs, children)


def _vec(v):
    return v if isinstance(v, tuple) else (float(v),)


def _build(kind: str, kw: dict, children: list):
    d = int(kw.get("d", 1))
    amp = float(kw.get("amplitude", 1.0))
    if kind == "gaussian":
        return Gaussian(d=d, sigma=float(kw.get("sigma", 1.0)),
                        center=_vec(kw.get("center", 0.0)), amplitude=amp)
    if kind == "indicator":
        return Indicator(d=d, lo=_vec(kw.get("lo", -1.0)),
                         hi=_vec(kw.get("hi", 1.0)), amplitude=amp)
    if kind == "power_weight":
        radius = kw.get("radius")
        return PowerWeight(d=d, exponent=float(kw.get("exponent", 0.5)),
                           trunc_radius=None if radius is None else float(radius),
                           amplitude=amp)
    if kind == "sum":
        return Sum(tuple(children))
    if kind == "scaled":
        return Scaled(float(kw["factor"]), children[0])
    if kind == "dilated":
        return Dilated(float(kw["factor"]), children[0])
    if kind == "translated":
        return Translated(_vec(kw["shift"]), children[0])
    if kind == "tensor":
        return Tensor(children[0], children[1])
    if kind == "anisotropic":
        return AnisotropicDilated(float(kw["lam"]), float(kw["mu"]), children[0])
    raise UsageError(f"unknown test-function kind {kind!r}")


def from_text(text: str):
    """Parse the text schema back into a test-function tree."""
    parser = _Parser(text)
    node = parser.node()
    if parser.peek() is not None:
        raise UsageError(f"trailing tokens after the node: {parser.tokens[parser.i:]}")
    return node
