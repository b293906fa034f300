"""Bounded materialization of the inverse Collatz tree.

The full tree is infinite in both directions (every non-leaf vertex has
infinitely many children, and levels never stop), so any materialization
happens inside an explicit truncation box: a depth limit, a value bound, and
optionally a cap on the sibling index.  A node is stored iff its value is
within the bound and its depth within the limit; children of stored leaves
are never attempted.  Because sibling streams ascend strictly, the value
bound is a sound cutoff: nothing below the bound is missed *within a given
sibling set* (a value below the bound can still be unreachable if its parent
lies above the bound).

The root is 1 at depth 0.  The self-edge of 1 onto itself is never stored, so
level 1 starts at 5.  Duplicate values abort construction loudly: node
identity is the integer value, and a silent merge would mask exactly the
uniqueness property the build exists to witness.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import BinaryIO, NamedTuple

from .core import _require_odd_positive
from .errors import (
    CapacityError,
    DuplicateVertexError,
    InconsistencyError,
    MissingVertexError,
    NonEdgeError,
)
from .forward import trajectory
from .inverse import g_branch, iter_siblings

__all__ = [
    "TruncationConfig",
    "NodeInfo",
    "TruncatedArborescence",
    "CoverageReport",
    "build",
    "path_to",
    "classify_edge",
    "coverage",
    "export",
    "EXPORT_FORMATS",
    "DEFAULT_MAX_NODES",
]

ROOT = 1
DEFAULT_MAX_NODES = 10_000_000
EXPORT_FORMATS = ("jsonl", "dot", "csv")

_FIELDS = ("value", "depth", "parent", "sibling_index", "residue", "is_leaf")


@dataclass(frozen=True)
class TruncationConfig:
    """Explicit finite box for tree construction.

    At least one of max_depth / value_bound must be finite; an unbounded
    value range additionally needs a sibling cap, or a single expansion would
    never terminate.  max_nodes is a hard budget: exceeding it raises
    CapacityError instead of exhausting memory.
    """

    max_depth: int | None = None
    value_bound: int | None = None
    sibling_cap: int | None = None
    max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self) -> None:
        if self.max_depth is None and self.value_bound is None:
            raise ValueError("at least one of max_depth / value_bound must be set")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.value_bound is not None and self.value_bound < 1:
            raise ValueError(f"value_bound must be >= 1, got {self.value_bound}")
        if self.value_bound is None and self.sibling_cap is None:
            raise ValueError("an unbounded value range requires a sibling_cap")
        if self.sibling_cap is not None and self.sibling_cap < 1:
            raise ValueError(f"sibling_cap must be >= 1, got {self.sibling_cap}")
        if self.max_nodes < 1:
            raise ValueError(f"max_nodes must be >= 1, got {self.max_nodes}")


class NodeInfo(NamedTuple):
    depth: int
    parent: int | None
    sibling_index: int | None
    residue: int
    is_leaf: bool


@dataclass
class TruncatedArborescence:
    """Node store keyed by value, plus per-depth level lists in build order."""

    config: TruncationConfig
    nodes: dict[int, NodeInfo]
    levels: dict[int, list[int]]

    def __contains__(self, value: int) -> bool:
        return value in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def max_depth(self) -> int:
        return max(self.levels)

    def node(self, value: int) -> NodeInfo:
        try:
            return self.nodes[value]
        except KeyError:
            raise MissingVertexError(f"{value} is not stored in this truncation") from None

    def parents(self) -> list[int]:
        """Stored non-leaf vertices, in (depth, position) order."""
        return [v for k in sorted(self.levels) for v in self.levels[k]
                if not self.nodes[v].is_leaf]

    def records(self):
        """Node records in deterministic (depth, level-position) order."""
        for k in sorted(self.levels):
            for v in self.levels[k]:
                yield v, self.nodes[v]


def _children_in_box(parent: int, config: TruncationConfig):
    """(n, child) pairs the truncation admits, ascending; trivial cycle skipped."""
    first = 2 if parent == ROOT else 1
    for n, v in iter_siblings(parent, first_index=first):
        if config.sibling_cap is not None and n > config.sibling_cap:
            return
        if config.value_bound is not None and v > config.value_bound:
            return
        yield n, v


def build(config: TruncationConfig) -> TruncatedArborescence:
    """Breadth-first expansion from the root inside the truncation box.

    Deterministic: each level is ordered by parent position, then sibling
    index.  A repeated value raises DuplicateVertexError (it would falsify
    uniqueness); overrunning max_nodes raises CapacityError.
    """
    if config.value_bound is not None and config.value_bound < ROOT:
        raise ValueError("value_bound excludes the root")
    nodes: dict[int, NodeInfo] = {ROOT: NodeInfo(0, None, None, ROOT % 3, False)}
    levels: dict[int, list[int]] = {0: [ROOT]}
    frontier = [ROOT]
    depth = 0
    while frontier and (config.max_depth is None or depth < config.max_depth):
        depth += 1
        level: list[int] = []
        for parent in frontier:
            for n, child in _children_in_box(parent, config):
                prior = nodes.get(child)
                if prior is not None:
                    raise DuplicateVertexError(child, prior.parent if prior.parent is not None else ROOT, parent)
                if len(nodes) >= config.max_nodes:
                    raise CapacityError(
                        f"node budget {config.max_nodes} exhausted at depth {depth}"
                    )
                r = child % 3
                nodes[child] = NodeInfo(depth, parent, n, r, r == 0)
                level.append(child)
        if level:
            levels[depth] = level
        frontier = [v for v in level if v % 3 != 0]
    return TruncatedArborescence(config, nodes, levels)


def path_to(tree: TruncatedArborescence, target: int) -> list[int]:
    """Root-to-target vertex list, verified against the forward orbit of target.

    The reversed path must equal the forward trajectory of target exactly;
    a mismatch raises InconsistencyError.  Absent targets raise
    MissingVertexError (absence under truncation proves nothing).
    """
    _require_odd_positive(target, "target")
    if target not in tree.nodes:
        raise MissingVertexError(f"{target} is not stored in this truncation")
    path = [target]
    v = target
    while v != ROOT:
        parent = tree.nodes[v].parent
        if parent is None:
            raise InconsistencyError(f"non-root {v} has no parent link")
        path.append(parent)
        v = parent
    path.reverse()
    orbit = trajectory(target, max_steps=len(path)).values
    if list(reversed(orbit)) != path:
        raise InconsistencyError(
            f"path to {target} is not the reversed forward orbit: {path} vs {orbit}"
        )
    return path


def _edge_index(parent: int, child: int) -> int:
    """Sibling index n with child the n-th branch of parent, else NonEdgeError."""
    _require_odd_positive(parent, "parent")
    _require_odd_positive(child, "child")
    if parent % 3 == 0:
        raise NonEdgeError(f"{parent} is a leaf and has no outgoing edges")
    t = 3 * child + 1
    if t % parent:
        raise NonEdgeError(f"3*{child} + 1 is not a multiple of {parent}")
    q = t // parent
    if q < 2 or q & (q - 1):
        raise NonEdgeError(f"3*{child} + 1 = {q} * {parent} with {q} not a power of two")
    e = q.bit_length() - 1
    r = parent % 3
    if r == 1:
        if e % 2:
            raise NonEdgeError(f"class-1 parent {parent} cannot spend an odd exponent {e}")
        n = e // 2
    else:
        if e % 2 == 0:
            raise NonEdgeError(f"class-2 parent {parent} cannot spend an even exponent {e}")
        n = (e + 1) // 2
    return n


def classify_edge(parent: int, child: int) -> str:
    """"ascending", "descending", or "lateral" (the self-loop of 1 only).

    For initial children (n = 1) of non-root parents the direction is forced
    by the parent's class: class 1 ascends, class 2 descends.  That rule is
    asserted here; later children always ascend past the parent regardless
    of class.
    """
    n = _edge_index(parent, child)
    if child > parent:
        kind = "ascending"
    elif child < parent:
        kind = "descending"
    else:
        kind = "lateral"
    if n == 1 and parent > ROOT:
        expect_ascending = parent % 3 == 1
        if (kind == "ascending") != expect_ascending:
            raise InconsistencyError(
                f"initial edge ({parent}, {child}) violates the class direction rule"
            )
    return kind


@dataclass(frozen=True)
class CoverageReport:
    """Which odd values up to a bound the truncated tree reaches.

    bitmap has bit i set iff value 2i + 1 is present; first_depth maps each
    covered value to the depth where it appears; level_sizes counts covered
    values per depth.  covered_count + len(missing) always equals the number
    of odd values within the bound.
    """

    bound: int
    covered_count: int
    bitmap: int
    missing: tuple[int, ...]
    first_depth: dict[int, int] = field(repr=False)
    level_sizes: dict[int, int]

    def covers(self, value: int) -> bool:
        if value < 1 or value > self.bound or value % 2 == 0:
            return False
        return bool(self.bitmap >> ((value - 1) // 2) & 1)


def coverage(tree: TruncatedArborescence, bound: int) -> CoverageReport:
    """Coverage of the odd values <= bound; the root counts at depth 0."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    if tree.config.value_bound is not None and bound > tree.config.value_bound:
        raise ValueError(
            f"report bound {bound} exceeds the tree's value bound {tree.config.value_bound}"
        )
    bitmap = 0
    first_depth: dict[int, int] = {}
    level_sizes: dict[int, int] = {}
    for value, info in tree.nodes.items():
        if value <= bound:
            bitmap |= 1 << ((value - 1) // 2)
            first_depth[value] = info.depth
            level_sizes[info.depth] = level_sizes.get(info.depth, 0) + 1
    missing = tuple(x for x in range(1, bound + 1, 2) if not bitmap >> ((x - 1) // 2) & 1)
    return CoverageReport(
        bound=bound,
        covered_count=len(first_depth),
        bitmap=bitmap,
        missing=missing,
        first_depth=first_depth,
        level_sizes=dict(sorted(level_sizes.items())),
    )


def _jsonl_record(value: int, info: NodeInfo) -> str:
    return json.dumps(
        {
            "value": value,
            "depth": info.depth,
            "parent": info.parent,
            "sibling_index": info.sibling_index,
            "residue": info.residue,
            "is_leaf": info.is_leaf,
        }
    )


def export(tree: TruncatedArborescence, fmt: str, sink: BinaryIO) -> None:
    """Serialize the tree to a byte sink: jsonl, dot, or csv.

    Output is deterministic for a given tree: nodes in (depth, level-position)
    order, integers in decimal.  The DOT digraph is named collatz_arbor with
    leaves drawn as boxes.
    """
    if fmt == "jsonl":
        for value, info in tree.records():
            sink.write(_jsonl_record(value, info).encode("ascii"))
            sink.write(b"\n")
    elif fmt == "csv":
        text = io.StringIO(newline="")
        writer = csv.writer(text, lineterminator="\n")
        writer.writerow(_FIELDS)
        for value, info in tree.records():
            writer.writerow(
                [
                    value,
                    info.depth,
                    "" if info.parent is None else info.parent,
                    "" if info.sibling_index is None else info.sibling_index,
                    info.residue,
                    "true" if info.is_leaf else "false",
                ]
            )
        sink.write(text.getvalue().encode("ascii"))
    elif fmt == "dot":
        sink.write(b"digraph collatz_arbor {\n")
        for value, info in tree.records():
            if info.is_leaf:
                sink.write(f"    {value} [shape=box];\n".encode("ascii"))
            else:
                sink.write(f"    {value};\n".encode("ascii"))
        for value, info in tree.records():
            if info.parent is not None:
                sink.write(f"    {info.parent} -> {value};\n".encode("ascii"))
        sink.write(b"}\n")
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {EXPORT_FORMATS}")
