"""Executable checks for the structural claims behind the inverse tree.

Every check runs inside an explicit finite box (a parent bound, a sibling
count, an index offset range, a truncation config) and produces a
VerificationReport that embeds that box, so a "pass" can never be read as
more than evidence on the stated range.  A failed check always carries a
counterexample with enough data to replay it.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .arbor import ROOT, TruncatedArborescence, TruncationConfig, build
from .core import z_term
from .forward import DEFAULT_MAX_STEPS, f_step
from .inverse import (
    adjacent_initials,
    g_branch,
    initial_vertex,
    iter_siblings,
    multiples_sequence,
)

__all__ = [
    "VerificationReport",
    "CollisionProbe",
    "check_residue_cycle",
    "check_collision_parity",
    "check_closed_forms",
    "check_multiples",
    "check_uniqueness",
    "check_parent_pointers",
    "check_covering",
    "check_covering_templates",
    "check_initial_vertex_partition",
    "check_convergence",
    "residue_cycle_sweep",
    "multiples_sweep",
    "closed_forms_sweep",
    "adjacent_initials_sweep",
    "gaps_sweep",
    "collision_parity_sweep",
    "run_suite",
    "SUITE_NAMES",
    "SUITE_ALIASES",
    "INITIAL_RESIDUE_TEMPLATES",
    "DEFAULT_PARENT_BOUND",
    "DEFAULT_SIBLING_COUNT",
    "DEFAULT_MAX_OFFSET",
    "DEFAULT_PARTNERS",
]

# Default boxes: seconds-scale runtime with arbitrary precision.
DEFAULT_PARENT_BOUND = 10_000
DEFAULT_SIBLING_COUNT = 64
DEFAULT_MAX_OFFSET = 64
DEFAULT_PARTNERS = 1_000

# Per-parent residue patterns of a child family, keyed by
# (parent mod 3, parent-multiple mod 3) -> (modulus, first residue, cycle).
# The first child carries `first`; from the second child on the residues
# cycle with period 3.
INITIAL_RESIDUE_TEMPLATES: dict[tuple[int, int], tuple[int, int, tuple[int, int, int]]] = {
    (1, 0): (24, 1, (5, 21, 13)),
    (1, 1): (24, 17, (21, 13, 5)),
    (1, 2): (24, 9, (13, 5, 21)),
    (2, 0): (12, 7, (5, 9, 1)),
    (2, 1): (12, 3, (1, 5, 9)),
    (2, 2): (12, 11, (9, 1, 5)),
}


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check: the box it ran in, pass/fail, and statistics."""

    check_name: str
    parameters: dict
    passed: bool
    counterexample: dict | None
    statistics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.passed and self.counterexample is None:
            raise ValueError("a failed report must carry a counterexample")

    def as_dict(self, include_elapsed: bool = True) -> dict:
        stats = dict(self.statistics)
        if not include_elapsed:
            stats.pop("elapsed_s", None)
        return {
            "check_name": self.check_name,
            "parameters": self.parameters,
            "passed": self.passed,
            "counterexample": self.counterexample,
            "statistics": stats,
        }


def _finish(name: str, params: dict, passed: bool, counterexample: dict | None,
            cases: int, t0: float, **extra) -> VerificationReport:
    stats = {"cases": cases, "elapsed_s": round(time.perf_counter() - t0, 6)}
    stats.update(extra)
    return VerificationReport(name, params, passed, counterexample, stats)


def _parents_up_to(bound: int) -> Iterator[int]:
    """Odd non-multiples of 3 up to bound (the valid parents)."""
    for u in range(1, bound + 1, 2):
        if u % 3:
            yield u


def _template_for(parent: int) -> tuple[int, int, tuple[int, int, int]]:
    return INITIAL_RESIDUE_TEMPLATES[(parent % 3, (parent // 3) % 3)]


def _template_residue(template: tuple[int, int, tuple[int, int, int]], n: int) -> int:
    _, first, cycle = template
    return first if n == 1 else cycle[(n - 2) % 3]


# ---------------------------------------------------------------------------
# per-object checks


def check_residue_cycle(u: int, count: int) -> VerificationReport:
    """Sibling residues mod 3 must step +1 cyclically from the first child's class."""
    t0 = time.perf_counter()
    params = {"u": u, "count": count}
    first = None
    for n, v in iter_siblings(u):
        if n > count:
            break
        if first is None:
            first = v % 3
        expected = (first + n - 1) % 3
        if v % 3 != expected:
            return _finish("residue_cycle", params, False,
                           {"u": u, "n": n, "value": v,
                            "expected_residue": expected, "observed_residue": v % 3},
                           n, t0)
    return _finish("residue_cycle", params, True, None, count, t0)


@dataclass(frozen=True)
class CollisionProbe:
    """A hypothetical equal-children collision between distinct parents.

    `d` is the positive offset between the two sibling indices.  For the
    mixed-class case the partner multiple plays the class-2 role and must be
    odd; for the same-class case it plays a class-1 role and must be even.
    """

    d: int
    partner_multiple: int
    same_class: bool

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.partner_multiple < 0:
            raise ValueError(f"partner_multiple must be >= 0, got {self.partner_multiple}")
        want_even = self.same_class
        if (self.partner_multiple % 2 == 0) != want_even:
            kind = "even" if want_even else "odd"
            raise ValueError(
                f"partner_multiple must be {kind} for this case, got {self.partner_multiple}"
            )


def check_collision_parity(probe: CollisionProbe) -> tuple[int, bool]:
    """The class-1 multiple a collision would force, and whether it is odd.

    A collision at offset d requires mu = 2^(2d-1) * partner + z_d (mixed
    classes) or mu = 2^(2d) * partner + z_d (same class).  Both are odd for
    every valid probe, while a genuine class-1 multiple is even; oddness here
    is the witness that the collision cannot happen.
    """
    shift = 2 * probe.d if probe.same_class else 2 * probe.d - 1
    required = (1 << shift) * probe.partner_multiple + z_term(probe.d)
    return required, required % 2 == 1


def collision_parity_sweep(max_d: int = DEFAULT_MAX_OFFSET,
                           partners_per_class: int = DEFAULT_PARTNERS) -> VerificationReport:
    """Every probe over the box must force an odd (hence impossible) multiple."""
    t0 = time.perf_counter()
    params = {"max_d": max_d, "partners_per_class": partners_per_class}
    cases = 0
    for d in range(1, max_d + 1):
        for i in range(partners_per_class):
            for same_class, partner in ((False, 2 * i + 1), (True, 2 * i)):
                probe = CollisionProbe(d, partner, same_class)
                required, is_odd = check_collision_parity(probe)
                cases += 1
                if not is_odd:
                    return _finish("collision_parity", params, False,
                                   {"d": d, "partner_multiple": partner,
                                    "same_class": same_class, "required_multiple": required},
                                   cases, t0)
    return _finish("collision_parity", params, True, None, cases, t0)


def check_closed_forms(u: int, count: int) -> VerificationReport:
    """Direct division, recurrence from v_1, and partial-sum form must agree."""
    t0 = time.perf_counter()
    params = {"u": u, "count": count}
    r = u % 3
    v1 = g_branch(u, 1)
    rec = v1
    acc = 0
    for n in range(1, count + 1):
        if n > 1:
            rec = 1 + 4 * rec
            acc += 1 << (2 * (n - 1) if r == 1 else 2 * (n - 1) - 1)
        direct = g_branch(u, n)
        summed = u * acc + v1
        if not direct == rec == summed:
            return _finish("closed_forms", params, False,
                           {"u": u, "n": n, "direct": direct,
                            "recurrence": rec, "summation": summed},
                           n, t0)
    return _finish("closed_forms", params, True, None, count, t0)


def check_multiples(u: int, count: int) -> VerificationReport:
    """Child multiples must ascend strictly and match their piecewise closed form."""
    t0 = time.perf_counter()
    params = {"u": u, "count": count}
    seq = multiples_sequence(u, count)
    for i, ok in enumerate(seq.matches):
        if not ok:
            return _finish("multiples", params, False,
                           {"u": u, "n": i + 1, "direct": seq.terms[i],
                            "closed_form": seq.closed_form[i],
                            "first_child_residue": seq.first_child_residue},
                           count, t0)
    for i in range(len(seq.terms) - 1):
        if not seq.terms[i] < seq.terms[i + 1]:
            return _finish("multiples", params, False,
                           {"u": u, "n": i + 2, "previous": seq.terms[i],
                            "term": seq.terms[i + 1], "reason": "not ascending"},
                           count, t0)
    return _finish("multiples", params, True, None, count, t0)


# ---------------------------------------------------------------------------
# tree checks


def _expansion_parents(tree: TruncatedArborescence) -> Iterator[int]:
    """Stored vertices the build rule expands, in deterministic order."""
    k_limit = tree.config.max_depth
    for value, info in tree.records():
        if info.is_leaf:
            continue
        if k_limit is not None and info.depth >= k_limit:
            continue
        yield value


def check_uniqueness(tree: TruncatedArborescence) -> VerificationReport:
    """Re-derive every child of every stored parent and demand distinct values.

    Independent of the build: children are recomputed by direct branch
    evaluation rather than the recurrence the builder uses, and occurrences
    are counted rather than aborting on first repeat.
    """
    t0 = time.perf_counter()
    cfg = tree.config
    params = {"max_depth": cfg.max_depth, "value_bound": cfg.value_bound,
              "sibling_cap": cfg.sibling_cap}
    counts: Counter[int] = Counter()
    cases = 0
    for parent in _expansion_parents(tree):
        n = 2 if parent == ROOT else 1
        while cfg.sibling_cap is None or n <= cfg.sibling_cap:
            child = g_branch(parent, n)
            if cfg.value_bound is not None and child > cfg.value_bound:
                break
            counts[child] += 1
            cases += 1
            n += 1
    duplicates = sorted(v for v, c in counts.items() if c > 1)
    stored = set(tree.nodes) - {ROOT}
    derived = set(counts)
    if duplicates:
        v = duplicates[0]
        return _finish("uniqueness", params, False,
                       {"value": v, "occurrences": counts[v]}, cases, t0)
    if derived != stored:
        off = sorted(derived.symmetric_difference(stored))
        return _finish("uniqueness", params, False,
                       {"value": off[0],
                        "reason": "derived child set differs from stored nodes"},
                       cases, t0)
    return _finish("uniqueness", params, True, None, cases, t0)


def check_parent_pointers(tree: TruncatedArborescence) -> VerificationReport:
    """Every stored child must be reproduced by its recorded (parent, index)."""
    t0 = time.perf_counter()
    params = {"nodes": len(tree)}
    cases = 0
    for value, info in tree.records():
        if info.parent is None:
            continue
        cases += 1
        if g_branch(info.parent, info.sibling_index) != value:
            return _finish("parent_pointers", params, False,
                           {"value": value, "parent": info.parent,
                            "sibling_index": info.sibling_index},
                           cases, t0)
        if info.parent not in tree.nodes:
            return _finish("parent_pointers", params, False,
                           {"value": value, "parent": info.parent,
                            "reason": "parent not stored"},
                           cases, t0)
    return _finish("parent_pointers", params, True, None, cases, t0)


def check_covering(tree: TruncatedArborescence) -> VerificationReport:
    """Residue-class structure of the stored tree.

    (a) children of class-1 parents only ever land on {1, 5, 9} mod 12;
    (b) children of class-2 parents realize all six odd classes mod 12
        within the sample;
    (c) every stored child sits on the residue its parent's template
        predicts for its sibling index (mod 24 for class-1 parents, mod 12
        for class-2);
    (d) the two child populations share no value.

    Parents of template keys absent from the tree are reported as warnings
    in the statistics, not failures.
    """
    if tree.max_depth < 3:
        raise ValueError(f"tree depth {tree.max_depth} is too shallow; need >= 3")
    t0 = time.perf_counter()
    cfg = tree.config
    params = {"max_depth": cfg.max_depth, "value_bound": cfg.value_bound}
    class1: set[int] = set()
    class2: set[int] = set()
    seen_keys: set[tuple[int, int]] = set()
    cases = 0
    for value, info in tree.records():
        if info.parent is None:
            continue
        cases += 1
        parent_class = info.parent % 3
        key = (parent_class, (info.parent // 3) % 3)
        seen_keys.add(key)
        modulus, first, cycle = INITIAL_RESIDUE_TEMPLATES[key]
        expected = first if info.sibling_index == 1 else cycle[(info.sibling_index - 2) % 3]
        if value % modulus != expected:
            return _finish("covering_patterns", params, False,
                           {"value": value, "parent": info.parent,
                            "sibling_index": info.sibling_index,
                            "expected_mod": expected, "modulus": modulus,
                            "observed": value % modulus},
                           cases, t0)
        if parent_class == 1:
            class1.add(value)
        else:
            class2.add(value)
    bad1 = sorted(v for v in class1 if v % 12 not in (1, 5, 9))
    if bad1:
        return _finish("covering_patterns", params, False,
                       {"value": bad1[0], "observed_mod_12": bad1[0] % 12,
                        "reason": "class-1 child outside {1, 5, 9} mod 12"},
                       cases, t0)
    realized = {v % 12 for v in class2}
    if realized != {1, 3, 5, 7, 9, 11}:
        return _finish("covering_patterns", params, False,
                       {"missing_classes_mod_12": sorted({1, 3, 5, 7, 9, 11} - realized)},
                       cases, t0)
    overlap = class1 & class2
    if overlap:
        return _finish("covering_patterns", params, False,
                       {"value": min(overlap), "reason": "value in both partitions"},
                       cases, t0)
    warnings = [f"no parent with template key {key}" for key in
                sorted(set(INITIAL_RESIDUE_TEMPLATES) - seen_keys)]
    return _finish("covering_patterns", params, True, None, cases, t0,
                   class1_sample=len(class1), class2_sample=len(class2),
                   warnings=warnings)


def check_covering_templates(parent_bound: int = DEFAULT_PARENT_BOUND,
                             count: int = 8) -> VerificationReport:
    """Every parent's first `count` children must follow its residue template."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound, "count": count}
    cases = 0
    for u in _parents_up_to(parent_bound):
        template = _template_for(u)
        modulus = template[0]
        for n, v in iter_siblings(u):
            if n > count:
                break
            cases += 1
            expected = _template_residue(template, n)
            if v % modulus != expected:
                return _finish("covering_templates", params, False,
                               {"u": u, "n": n, "value": v, "modulus": modulus,
                                "expected": expected, "observed": v % modulus},
                               cases, t0)
    return _finish("covering_templates", params, True, None, cases, t0)


def check_initial_vertex_partition(parent_bound: int) -> VerificationReport:
    """First children split cleanly: 1 mod 8 from class-1 parents, 3 mod 4 from class-2."""
    if parent_bound < 7:
        raise ValueError(f"parent_bound must be >= 7, got {parent_bound}")
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound}
    from_class1: set[int] = set()
    from_class2: set[int] = set()
    cases = 0
    for u in _parents_up_to(parent_bound):
        v1 = initial_vertex(u)
        cases += 1
        if u % 3 == 1:
            if v1 % 8 != 1:
                return _finish("initial_vertex_partition", params, False,
                               {"u": u, "v1": v1, "observed_mod_8": v1 % 8},
                               cases, t0)
            from_class1.add(v1)
        else:
            if v1 % 4 != 3:
                return _finish("initial_vertex_partition", params, False,
                               {"u": u, "v1": v1, "observed_mod_4": v1 % 4},
                               cases, t0)
            from_class2.add(v1)
    overlap = from_class1 & from_class2
    if overlap:
        return _finish("initial_vertex_partition", params, False,
                       {"v1": min(overlap), "reason": "initial vertex in both forms"},
                       cases, t0)
    return _finish("initial_vertex_partition", params, True, None, cases, t0)


def check_convergence(bound: int, max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Every odd start up to bound must reach 1, with each step reversible.

    For each forward step x -> y with exponent a, the start x must reappear
    as the child of y at the index the exponent implies (a = 2n for class-1
    y, a = 2n - 1 for class-2).  Reports the largest step count and the
    largest excursion seen.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    t0 = time.perf_counter()
    params = {"bound": bound, "max_steps": max_steps}
    cases = 0
    max_len = 0
    max_peak = 1
    for x0 in range(1, bound + 1, 2):
        cases += 1
        x = x0
        steps = 0
        while x != 1:
            if steps >= max_steps:
                return _finish("convergence", params, False,
                               {"start": x0, "reason": "step budget exhausted",
                                "reached": x},
                               cases, t0,
                               max_steps_observed=max_len, max_excursion=max_peak)
            y, a = f_step(x)
            ry = y % 3
            if ry == 0 or a % 2 != (0 if ry == 1 else 1):
                return _finish("convergence", params, False,
                               {"start": x0, "x": x, "image": y, "exponent": a,
                                "reason": "image class incompatible with exponent"},
                               cases, t0,
                               max_steps_observed=max_len, max_excursion=max_peak)
            n = a // 2 if ry == 1 else (a + 1) // 2
            if g_branch(y, n) != x:
                return _finish("convergence", params, False,
                               {"start": x0, "x": x, "image": y, "exponent": a,
                                "branch_index": n,
                                "reason": "reverse branch does not recover x"},
                               cases, t0,
                               max_steps_observed=max_len, max_excursion=max_peak)
            x = y
            steps += 1
            if x > max_peak:
                max_peak = x
        if x0 > max_peak:
            max_peak = x0
        if steps > max_len:
            max_len = steps
    return _finish("convergence", params, True, None, cases, t0,
                   max_steps_observed=max_len, max_excursion=max_peak)


# ---------------------------------------------------------------------------
# sweeps over parent ranges


def residue_cycle_sweep(parent_bound: int = DEFAULT_PARENT_BOUND,
                        count: int = DEFAULT_SIBLING_COUNT) -> VerificationReport:
    """Residue cycling for every valid parent up to the bound."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound, "count": count}
    cases = 0
    for u in _parents_up_to(parent_bound):
        first = None
        for n, v in iter_siblings(u):
            if n > count:
                break
            cases += 1
            if first is None:
                first = v % 3
            if v % 3 != (first + n - 1) % 3:
                return _finish("residue_cycle", params, False,
                               {"u": u, "n": n, "value": v,
                                "expected_residue": (first + n - 1) % 3,
                                "observed_residue": v % 3},
                               cases, t0)
    return _finish("residue_cycle", params, True, None, cases, t0)


def multiples_sweep(parent_bound: int = DEFAULT_PARENT_BOUND,
                    count: int = DEFAULT_SIBLING_COUNT) -> VerificationReport:
    """Multiples ascent and closed-form agreement for every parent up to the bound."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound, "count": count}
    cases = 0
    for u in _parents_up_to(parent_bound):
        report = check_multiples(u, count)
        cases += count
        if not report.passed:
            return _finish("multiples", params, False, report.counterexample, cases, t0)
    return _finish("multiples", params, True, None, cases, t0)


def closed_forms_sweep(parent_bound: int = DEFAULT_PARENT_BOUND,
                       count: int = DEFAULT_SIBLING_COUNT) -> VerificationReport:
    """Route agreement (direct / recurrence / summation) for every parent."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound, "count": count}
    cases = 0
    for u in _parents_up_to(parent_bound):
        report = check_closed_forms(u, count)
        cases += count
        if not report.passed:
            return _finish("closed_forms", params, False, report.counterexample, cases, t0)
    return _finish("closed_forms", params, True, None, cases, t0)


def adjacent_initials_sweep(parent_bound: int = DEFAULT_PARENT_BOUND) -> VerificationReport:
    """Chained initial-vertex identities for every class-1 parent up to the bound."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound}
    cases = 0
    for u in _parents_up_to(parent_bound):
        if u % 3 != 1:
            continue
        cases += 1
        v1, v1_next = adjacent_initials(u)
        successor = 1 + 4 * u
        if v1 != g_branch(u, 1) or v1_next != g_branch(successor, 1):
            return _finish("adjacent_initials", params, False,
                           {"u": u, "v1": v1, "v1_next": v1_next},
                           cases, t0)
    return _finish("adjacent_initials", params, True, None, cases, t0)


def gaps_sweep(parent_bound: int = DEFAULT_PARENT_BOUND,
               count: int = DEFAULT_SIBLING_COUNT) -> VerificationReport:
    """Consecutive-sibling gaps must equal 2^(2n) u (class 1) / 2^(2n-1) u (class 2)."""
    t0 = time.perf_counter()
    params = {"parent_bound": parent_bound, "count": count}
    cases = 0
    for u in _parents_up_to(parent_bound):
        r = u % 3
        prev = None
        for n, v in iter_siblings(u):
            if n > count + 1:
                break
            if prev is not None:
                cases += 1
                gap = (1 << (2 * (n - 1))) * u if r == 1 else (1 << (2 * (n - 1) - 1)) * u
                if v - prev != gap:
                    return _finish("sibling_gaps", params, False,
                                   {"u": u, "n": n - 1, "expected_gap": gap,
                                    "observed_gap": v - prev},
                                   cases, t0)
            prev = v
    return _finish("sibling_gaps", params, True, None, cases, t0)


# ---------------------------------------------------------------------------
# suites

SUITE_NAMES = (
    "residue-cycle",
    "multiples",
    "closed-forms",
    "adjacent-initials",
    "gaps",
    "collision",
    "uniqueness",
    "covering",
    "partition",
    "convergence",
)

SUITE_ALIASES = {
    "lemma1": "residue-cycle",
    "lemma2": "multiples",
    "lemma3": "closed-forms",
    "lemma4": "adjacent-initials",
    "lemma5": "collision",
}


def run_suite(name: str, *,
              parent_bound: int = DEFAULT_PARENT_BOUND,
              count: int = DEFAULT_SIBLING_COUNT,
              max_d: int = DEFAULT_MAX_OFFSET,
              partners: int = DEFAULT_PARTNERS,
              tree_depth: int = 6,
              tree_bound: int = 10**6,
              convergence_bound: int = DEFAULT_PARENT_BOUND,
              max_steps: int = DEFAULT_MAX_STEPS,
              tree: TruncatedArborescence | None = None) -> list[VerificationReport]:
    """Run one named suite (or "all") and return its reports in order."""
    name = SUITE_ALIASES.get(name, name)
    if name != "all" and name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}")

    def _tree() -> TruncatedArborescence:
        nonlocal tree
        if tree is None:
            tree = build(TruncationConfig(max_depth=tree_depth, value_bound=tree_bound))
        return tree

    reports: list[VerificationReport] = []
    wanted = SUITE_NAMES if name == "all" else (name,)
    for suite in wanted:
        if suite == "residue-cycle":
            reports.append(residue_cycle_sweep(parent_bound, count))
        elif suite == "multiples":
            reports.append(multiples_sweep(parent_bound, count))
        elif suite == "closed-forms":
            reports.append(closed_forms_sweep(parent_bound, count))
        elif suite == "adjacent-initials":
            reports.append(adjacent_initials_sweep(parent_bound))
        elif suite == "gaps":
            reports.append(gaps_sweep(parent_bound, count))
        elif suite == "collision":
            reports.append(collision_parity_sweep(max_d, partners))
        elif suite == "uniqueness":
            reports.append(check_uniqueness(_tree()))
            reports.append(check_parent_pointers(_tree()))
        elif suite == "covering":
            reports.append(check_covering_templates(parent_bound, min(count, 8)))
            reports.append(check_covering(_tree()))
        elif suite == "partition":
            reports.append(check_initial_vertex_partition(parent_bound))
        elif suite == "convergence":
            reports.append(check_convergence(convergence_bound, max_steps))
    return reports
