"""Exact linear feasibility over the rationals.

Every fitter in this package reduces to one question: does a finite
system of weak/strict linear inequalities with rational coefficients
have a solution?  Floating-point LP cannot certify strict inequalities,
so this module implements a small two-phase simplex on ``Fraction``
arithmetic.  Strict relations are handled with a shared gap variable g:
each ``lhs > rhs`` becomes ``lhs >= rhs + g``, g is capped at 1 and then
maximized; the system is feasible exactly when the optimum is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exceptions import RefdepError

_ZERO = Fraction(0)
_ONE = Fraction(1)

RELATIONS = ("<=", "<", ">=", ">", "=")


@dataclass(frozen=True)
class Constraint:
    """``sum(coeffs[v] * v) relation rhs`` with exact rational data."""

    coeffs: tuple  # tuple[(str, Fraction), ...] sorted by variable name
    relation: str
    rhs: Fraction

    def holds(self, assignment: Mapping) -> bool:
        lhs = sum((c * assignment[v] for v, c in self.coeffs), _ZERO)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == "<":
            return lhs < self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        if self.relation == ">":
            return lhs > self.rhs
        return lhs == self.rhs


def constraint(coeffs: Mapping, relation: str, rhs) -> Constraint:
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if Fraction(c) != 0))
    return Constraint(items, relation, Fraction(rhs))


@dataclass
class LinearFeasibilityProblem:
    constraints: list = field(default_factory=list)

    def add(self, coeffs: Mapping, relation: str, rhs) -> None:
        self.constraints.append(constraint(coeffs, relation, rhs))

    def variables(self):
        names = set()
        for con in self.constraints:
            names.update(v for v, _ in con.coeffs)
        return sorted(names)


@dataclass(frozen=True)
class Feasible:
    assignment: dict

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    reason: str = ""

    def __bool__(self):
        return False


def solve_linear_feasibility(problem: LinearFeasibilityProblem):
    """Return ``Feasible(assignment)`` or ``Infeasible``.

    The assignment is exact and, when strict constraints are present, is
    taken at the vertex maximizing the strictness gap, so every strict
    inequality holds with room to spare.
    """
    names = problem.variables()
    strict = any(c.relation in ("<", ">") for c in problem.constraints)
    # Free variable v is split as v = pos_v - neg_v with pos, neg >= 0.
    index = {}
    for name in names:
        index[("+", name)] = len(index)
        index[("-", name)] = len(index)
    gap = None
    if strict:
        gap = len(index)
        index[("g", None)] = gap
    nvars = len(index)

    rows = []  # (coeff vector, bound) meaning  coeffs . x <= bound

    def emit_le(vec, bound):
        rows.append((vec, bound))

    def vector(con: Constraint):
        vec = [_ZERO] * nvars
        for v, c in con.coeffs:
            vec[index[("+", v)]] += c
            vec[index[("-", v)]] -= c
        return vec

    for con in problem.constraints:
        vec = vector(con)
        if con.relation == "<=":
            emit_le(vec, con.rhs)
        elif con.relation == ">=":
            emit_le([-c for c in vec], -con.rhs)
        elif con.relation == "=":
            emit_le(list(vec), con.rhs)
            emit_le([-c for c in vec], -con.rhs)
        elif con.relation == "<":
            vec = list(vec)
            vec[gap] += _ONE
            emit_le(vec, con.rhs)
        else:  # ">"
            vec = [-c for c in vec]
            vec[gap] += _ONE
            emit_le(vec, -con.rhs)
    if strict:
        cap = [_ZERO] * nvars
        cap[gap] = _ONE
        emit_le(cap, _ONE)

    objective = [_ZERO] * nvars
    if strict:
        objective[gap] = _ONE

    solution = _simplex_maximize(rows, objective)
    if solution is None:
        return Infeasible("weak relaxation is infeasible")
    values, objective_value = solution
    if strict and objective_value <= 0:
        return Infeasible("strict inequalities only satisfiable with zero gap")
    assignment = {}
    for name in names:
        assignment[name] = values[index[("+", name)]] - values[index[("-", name)]]
    result = Feasible(assignment)
    for con in problem.constraints:  # exactness is cheap to guarantee
        if not con.holds(assignment):
            raise RefdepError("internal error: simplex returned a bad vertex")
    return result


def _simplex_maximize(rows, objective):
    """Maximize ``objective . x`` s.t. ``rows`` (Ax <= b), x >= 0.

    Dictionary simplex with Bland's rule.  Returns (values, optimum) or
    None when infeasible.  Raises on an unbounded objective (callers cap
    their objectives, so this indicates a bug).
    """
    n = len(objective)
    m = len(rows)
    # Dictionary: basic[i] = b[i] - sum_j a[i][j] * nonbasic_j
    a = [list(vec) for vec, _ in rows]
    b = [bound for _, bound in rows]
    c = list(objective)
    v = _ZERO
    nonbasic = list(range(n))
    basic = list(range(n, n + m))

    def pivot(li, ei):
        # basic[li] leaves, nonbasic[ei] enters
        piv = a[li][ei]
        b[li] = b[li] / piv
        row = a[li]
        for j in range(n):
            row[j] = row[j] / piv
        row[ei] = _ONE / piv
        for i in range(m):
            if i == li:
                continue
            factor = a[i][ei]
            if factor == 0:
                continue
            b[i] -= factor * b[li]
            arow = a[i]
            for j in range(n):
                if j == ei:
                    arow[j] = -factor * row[j]
                else:
                    arow[j] -= factor * row[j]
        nonlocal v
        factor = c[ei]
        if factor != 0:
            v += factor * b[li]
            for j in range(n):
                if j == ei:
                    c[j] = -factor * row[j]
                else:
                    c[j] -= factor * row[j]
        basic[li], nonbasic[ei] = nonbasic[ei], basic[li]

    def run():
        nonlocal v
        while True:
            ei = None
            for j in sorted(range(n), key=lambda j: nonbasic[j]):
                if c[j] > 0:
                    ei = j
                    break
            if ei is None:
                return
            li = None
            best = None
            for i in range(m):
                if a[i][ei] > 0:
                    ratio = b[i] / a[i][ei]
                    if best is None or ratio < best or (
                            ratio == best and basic[i] < basic[li]):
                        best = ratio
                        li = i
            if li is None:
                raise RefdepError("unbounded objective in simplex")
            pivot(li, ei)

    if any(bound < 0 for bound in b):
        # Phase 1 with an auxiliary variable (id beyond slacks).
        aux = n + m
        n_aux = n + 1
        for row in a:
            row.append(Fraction(-1))
        c_save = c
        c = [_ZERO] * n + [Fraction(-1)]
        nonbasic.append(aux)
        n, n_real = n_aux, n
        li = min(range(m), key=lambda i: (b[i], basic[i]))
        pivot(li, nonbasic.index(aux))
        run()
        if v != 0:
            return None
        if aux in basic:
            li = basic.index(aux)
            # Degenerate: pivot x0 out on any eligible column.
            ei = next(j for j in range(n) if a[li][j] != 0)
            pivot(li, ei)
        drop = nonbasic.index(aux)
        for row in a:
            del row[drop]
        del nonbasic[drop]
        n = n_real
        # Restore the real objective in terms of the current nonbasics.
        v = _ZERO
        coef = {j: c_save[j] for j in range(len(c_save))}
        c = [_ZERO] * n
        for pos, var in enumerate(nonbasic):
            if var < len(c_save):
                c[pos] += coef.get(var, _ZERO)
        for i, var in enumerate(basic):
            if var < len(c_save) and coef.get(var, _ZERO) != 0:
                factor = coef[var]
                v += factor * b[i]
                for j in range(n):
                    c[j] -= factor * a[i][j]
    run()

    values = [_ZERO] * len(objective)
    for i, var in enumerate(basic):
        if var < len(objective):
            values[var] = b[i]
    return values, v
