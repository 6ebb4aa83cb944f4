"""Exact samplers for final populations, coalescent trees and MRCA pairs.

Coalescent times are the points of a Poisson process which becomes unit
rate in the coordinate

    g(s) = x / beta(s; |alpha|) - x / beta(t; |alpha|)   (FixedT1)
    g(s) = x / beta(s; |alpha|)                          (InfT1, UnifT1)

so the k-th time comes from the k-th arrival of a unit-rate process by
inverting ``1/beta``.  No rejection is used.

Random numbers come from numpy's Philox counter-based generator, which is
platform independent for a given seed.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import kernel
from .densities.regimes import FixedT1, InfT1, UnifT1
from .errors import DomainError

DEFAULT_DEPTH = 50
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class LargeX:
    """Large-population limit of a supercritical population; times are shifted."""

    tag = "large-x"


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Philox-backed generator; ``None`` means :data:`DEFAULT_SEED`."""
    seed = DEFAULT_SEED if seed is None else int(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def spawn(rng: np.random.Generator, n: int) -> List[np.random.Generator]:
    """Independent child streams, e.g. one per worker."""
    return [np.random.Generator(np.random.Philox(s))
            for s in rng.bit_generator.seed_seq.spawn(n)]


# ---------------------------------------------------------------------------
# final population


def final_pop_quantile(u, regime: FixedT1, p):
    """Inverse CDF of the exponential final population, ``-beta(t) log(1 - u)``."""
    if not isinstance(regime, FixedT1):
        raise DomainError("final population sampling needs FixedT1")
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise DomainError("u must lie in [0, 1)")
    v = -kernel.beta(regime.t, kernel.as_alpha(p)) * np.log1p(-u)
    return float(v) if v.ndim == 0 else v


def sample_final_pop(regime: FixedT1, p, rng: np.random.Generator, size=None):
    return final_pop_quantile(rng.random(size), regime, p)


# ---------------------------------------------------------------------------
# coalescent times and trees


def _check_x(x):
    x = float(x)
    if not (x > 0 and np.isfinite(x)):
        raise DomainError(f"x must be positive and finite, got {x}")
    return x


def times_from_arrivals(gam, x, regime, p):
    """Map unit-rate arrival times ``gam`` to coalescent times by inverting ``g``."""
    a = abs(kernel.as_alpha(p))
    gam = np.asarray(gam, dtype=float)
    v = gam / x
    if isinstance(regime, FixedT1):
        v = v + kernel.inv_beta(regime.t, a)
    elif not isinstance(regime, (InfT1, UnifT1)):
        raise DomainError(f"coalescent trees are not defined for {regime!r}")
    return kernel.time_at_inv_beta(v, a)


def sample_coalescent_times(regime, x, p, rng: np.random.Generator,
                            depth: int = DEFAULT_DEPTH, size=None):
    """The first ``depth`` random coalescent times, decreasing along the last axis.

    FixedT1 and InfT1 give ``T_2, ..., T_{depth+1}``; UnifT1 gives
    ``T_1, ..., T_depth``.
    """
    x = _check_x(x)
    depth = int(depth)
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    shape = (depth,) if size is None else tuple(np.atleast_1d(size)) + (depth,)
    gam = np.cumsum(rng.standard_exponential(shape), axis=-1)
    return times_from_arrivals(gam, x, regime, p)


@dataclass
class CoalescentTree:
    """Coalescent times ``T_first > T_first+1 > ...`` with a lineage-splitting topology.

    ``splits[j]`` is the index of the extant lineage that splits at
    ``times[j]``; the first entry is 0.  When ``first == 1`` the root is
    the single founder at ``times[0]`` with one lineage below it.
    """

    times: np.ndarray
    first: int = 2
    splits: np.ndarray = field(default=None)
    depth: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or self.times.size == 0:
            raise DomainError("a tree needs at least one coalescent time")
        if np.any(np.diff(self.times) >= 0) or np.any(self.times <= 0):
            raise DomainError("coalescent times must be positive and strictly decreasing")
        if self.first not in (1, 2):
            raise DomainError("first must be 1 or 2")
        if self.splits is None:
            self.splits = np.zeros(self.times.size, dtype=np.int64)
        self.splits = np.asarray(self.splits, dtype=np.int64)
        if self.splits.shape != self.times.shape:
            raise DomainError("splits and times must have equal length")
        before = self.lineages_above()
        if np.any(self.splits < 0) or np.any(self.splits >= np.maximum(before, 1)):
            raise DomainError("split index out of range")

    def lineages_above(self) -> np.ndarray:
        """Number of lineages just before (older than) each coalescent time."""
        k = np.arange(self.times.size) + self.first
        return np.where(k == 1, 0, k - 1)

    @property
    def leaves(self) -> int:
        return self.first + self.times.size - 1

    def __eq__(self, other):
        if not isinstance(other, CoalescentTree):
            return NotImplemented
        return (self.first == other.first and np.array_equal(self.times, other.times)
                and np.array_equal(self.splits, other.splits))

    def allclose(self, other, rtol=1e-12) -> bool:
        return (self.first == other.first and self.times.shape == other.times.shape
                and np.allclose(self.times, other.times, rtol=rtol, atol=0)
                and np.array_equal(self.splits, other.splits))


def sample_tree(regime, x, p, rng: np.random.Generator, depth: int = DEFAULT_DEPTH
                ) -> CoalescentTree:
    """One truncated whole-population tree.

    FixedT1 trees start at the known founder time ``t``; each coalescence
    splits a uniformly chosen extant lineage.
    """
    times = sample_coalescent_times(regime, x, p, rng, depth)
    if isinstance(regime, FixedT1):
        times = np.concatenate(([regime.t], times))
    first = 2 if isinstance(regime, InfT1) else 1
    k = np.arange(times.size) + first
    splits = np.zeros(times.size, dtype=np.int64)
    m = k >= 2
    splits[m] = np.floor(rng.random(m.sum()) * (k[m] - 1)).astype(np.int64)
    if first == 2:
        splits[0] = 0
    return CoalescentTree(times=times, first=first, splits=splits, depth=int(depth))


def sample_mrca(regime, x, p, rng: np.random.Generator, size=None):
    """Draw ``(T2, X_MRCA)``; for :class:`LargeX` the time is the shifted time.

    InfT1: ``x / beta(T2)`` is Exp(1) and ``X_MRCA | T2`` is Gamma(2, rate mu(T2)).
    UnifT1: ``x / beta(T2)`` is Gamma(2) and ``X_MRCA | T2`` is Exp(rate mu(T2)).
    LargeX: ``alpha T2~`` is standard Gumbel and ``2 alpha X_MRCA`` is Gamma(2),
    independently.
    """
    alpha = kernel.as_alpha(p)
    if isinstance(regime, LargeX):
        if not alpha > 0:
            raise DomainError("the large-x limit needs alpha > 0")
        s = rng.gumbel(size=size) / alpha
        z = rng.standard_gamma(2.0, size=size) / (2.0 * alpha)
        return s, z
    x = _check_x(x)
    a = abs(alpha)
    if isinstance(regime, InfT1):
        g = rng.standard_exponential(size)
        shape_z = 2.0
    elif isinstance(regime, UnifT1):
        g = rng.standard_gamma(2.0, size=size)
        shape_z = 1.0
    else:
        raise DomainError(f"sample_mrca supports InfT1, UnifT1 and LargeX, not {regime!r}")
    s = kernel.time_at_inv_beta(g / x, a)
    z = rng.standard_gamma(shape_z, size=size) / kernel.mu(s, a)
    return s, z


# ---------------------------------------------------------------------------
# Newick


def leaf_label(i: int) -> str:
    """Spreadsheet-style labels: A..Z, AA, AB, ..."""
    letters = string.ascii_uppercase
    out = ""
    i += 1
    while i > 0:
        i, r = divmod(i - 1, 26)
        out = letters[r] + out
    return out


def _label_index(label: str) -> int:
    i = 0
    for ch in label:
        i = i * 26 + (ord(ch) - 64)
    return i - 1


class _Node:
    __slots__ = ("time", "children", "label")

    def __init__(self, time, children=(), label=None):
        self.time = time
        self.children = list(children)
        self.label = label


def _fmt(v: float) -> str:
    return repr(float(v))


def _build(tree: CoalescentTree) -> _Node:
    """Grow the tree from the root; leaves are labelled in lineage order."""
    times, splits = tree.times, tree.splits
    root = _Node(times[0], [None] * tree.first)
    holders = [(root, slot) for slot in range(len(root.children))]
    for j in range(1, times.size):
        i = int(splits[j])
        node = _Node(times[j], [None, None])
        parent, slot = holders[i]
        parent.children[slot] = node
        holders[i] = (node, 0)
        holders.append((node, 1))
    for idx, (parent, slot) in enumerate(holders):
        parent.children[slot] = _Node(0.0, label=leaf_label(idx))
    return root


def to_newick(tree: CoalescentTree) -> str:
    """Newick text with leaves at time 0 and branch lengths from the coalescent times.

    A root with a single child (FixedT1 and UnifT1 trees) is written as a
    unary node, e.g. ``((A:0.5,B:0.5):0.5);`` for ``T1 = 1, T2 = 0.5``.
    """
    if tree is None or tree.times.size == 0:
        raise DomainError("cannot serialize an empty tree")
    root = _build(tree)

    def rec(node, parent_time):
        length = _fmt(parent_time - node.time)
        if not node.children:
            return f"{node.label}:{length}"
        inner = ",".join(rec(c, node.time) for c in node.children)
        return f"({inner}):{length}"

    inner = ",".join(rec(c, root.time) for c in root.children)
    return f"({inner});"


def _parse(text: str):
    text = text.strip()
    if not text.endswith(";"):
        raise DomainError("Newick text must end with ';'")
    pos = 0
    s = text[:-1]

    def node():
        nonlocal pos
        children = []
        label = None
        if s[pos] == "(":
            pos += 1
            while True:
                children.append(node())
                if s[pos] == ",":
                    pos += 1
                    continue
                if s[pos] == ")":
                    pos += 1
                    break
                raise DomainError(f"unexpected {s[pos]!r} at {pos}")
        start = pos
        while pos < len(s) and s[pos] not in ",():":
            pos += 1
        label = s[start:pos] or None
        length = 0.0
        if pos < len(s) and s[pos] == ":":
            pos += 1
            start = pos
            while pos < len(s) and s[pos] not in ",()":
                pos += 1
            length = float(s[start:pos])
        return [label, length, children]

    try:
        root = node()
    except IndexError as exc:
        raise DomainError("truncated Newick text") from exc
    if pos != len(s):
        raise DomainError(f"trailing text at {pos}")
    return root


def parse_newick(text: str) -> CoalescentTree:
    """Inverse of :func:`to_newick` for trees written by this module."""
    root = _parse(text)

    # heights: leaves sit at time 0
    def height(nd):
        label, _, children = nd
        if not children:
            return 0.0
        return max(height(c) + c[1] for c in children)

    internal = []  # (time, node)

    def collect(nd):
        if nd[2]:
            internal.append((height(nd), nd))
            for c in nd[2]:
                collect(c)

    collect(root)
    unary = len(root[2]) == 1
    first = 1 if unary else 2
    internal.sort(key=lambda tn: -tn[0])
    times = np.array([tn[0] for tn in internal])
    # replay splits bottom-up: position of the older child in the lineage list
    leaves = {}

    def gather(nd):
        if not nd[2]:
            leaves[_label_index(nd[0])] = id(nd)
        for c in nd[2]:
            gather(c)

    gather(root)
    lineages = [leaves[i] for i in range(len(leaves))]
    splits = np.zeros(times.size, dtype=np.int64)
    for j in range(times.size - 1, 0, -1):
        nd = internal[j][1]
        if len(nd[2]) != 2:
            raise DomainError("internal nodes below the root must be binary")
        c0, c1 = id(nd[2][0]), id(nd[2][1])
        if lineages[-1] != c1:
            raise DomainError("tree layout does not match the lineage-splitting convention")
        lineages.pop()
        i = lineages.index(c0)
        lineages[i] = id(nd)
        splits[j] = i
    return CoalescentTree(times=times, first=first, splits=splits)
