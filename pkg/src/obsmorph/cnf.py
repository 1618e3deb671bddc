"""3-CNF formulas, DIMACS text and a small DPLL solver."""
from __future__ import annotations

from dataclasses import dataclass


class CnfError(ValueError):
    """Malformed formula or DIMACS text."""


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise CnfError("variable count must be non-negative")
        for i, c in enumerate(self.clauses):
            if len(c) != 3:
                raise CnfError(f"clause {i + 1} has {len(c)} literals; 3-CNF required")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.n:
                    raise CnfError(f"clause {i + 1}: literal {lit!r} out of range 1..{self.n}")

    @classmethod
    def of(cls, n: int, clauses) -> "CnfFormula":
        return cls(n, tuple(tuple(int(x) for x in c) for c in clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, a: "Assignment") -> bool:
        return all(any(a.value(lit) for lit in c) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]  # values[i] is variable i+1

    @classmethod
    def from_map(cls, n: int, mapping) -> "Assignment":
        missing = [v for v in range(1, n + 1) if v not in mapping]
        if missing:
            raise CnfError(f"assignment is not total; missing variables {missing}")
        return cls(tuple(bool(mapping[v]) for v in range(1, n + 1)))

    def value(self, lit: int) -> bool:
        v = self.values[abs(lit) - 1]
        return v if lit > 0 else not v

    def to_json(self) -> dict:
        return {str(i + 1): v for i, v in enumerate(self.values)}


UNSAT = "UNSAT"


def parse_dimacs(text: str) -> CnfFormula:
    n = m = None
    clauses = []
    cur: list[int] = []
    cur_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):  # SATLIB end marker
            break
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise CnfError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfError(f"line {lineno}: non-integer counts in problem line") from None
            if n < 0 or m < 0:
                raise CnfError(f"line {lineno}: negative counts in problem line")
            continue
        if n is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
            if not cur:
                cur_line = lineno
            if lit == 0:
                if len(cur) != 3:
                    raise CnfError(f"line {cur_line}: clause has {len(cur)} literals; 3-CNF required")
                clauses.append(tuple(cur))
                cur = []
                continue
            if abs(lit) > n:
                raise CnfError(f"line {lineno}: literal {lit} exceeds declared variable count {n}")
            cur.append(lit)
    if n is None:
        raise CnfError("missing 'p cnf' problem line")
    if cur:
        if len(cur) != 3:
            raise CnfError(f"line {cur_line}: clause has {len(cur)} literals; 3-CNF required")
        clauses.append(tuple(cur))
    if len(clauses) != m:
        raise CnfError(f"problem line declares {m} clauses but {len(clauses)} were given")
    return CnfFormula(n, tuple(clauses))


def serialize_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.n} {f.m}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def dpll_solve(f: CnfFormula) -> Assignment | str:
    """A satisfying assignment, or UNSAT.  Unassigned variables default to true."""
    clauses = [frozenset(c) for c in f.clauses]

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = c - {-lit}
                if not c:
                    return None
            out.append(c)
        return out

    def solve(cls, assign):
        cls = list(cls)
        while True:
            unit = next((c for c in cls if len(c) == 1), None)
            if unit is None:
                break
            (lit,) = unit
            assign[abs(lit)] = lit > 0
            cls = simplify(cls, lit)
            if cls is None:
                return None
        if not cls:
            return assign
        # pure literals
        lits = {x for c in cls for x in c}
        pure = [x for x in lits if -x not in lits]
        if pure:
            for x in pure:
                assign[abs(x)] = x > 0
                cls = simplify(cls, x)
            return solve(cls, assign)
        counts: dict[int, int] = {}
        for c in cls:
            for x in c:
                counts[x] = counts.get(x, 0) + 1
        lit = max(sorted(counts), key=lambda x: counts[x])
        for choice in (lit, -lit):
            sub = simplify(cls, choice)
            if sub is not None:
                a = dict(assign)
                a[abs(choice)] = choice > 0
                res = solve(sub, a)
                if res is not None:
                    return res
        return None

    res = solve(clauses, {})
    if res is None:
        return UNSAT
    a = Assignment(tuple(res.get(v, True) for v in range(1, f.n + 1)))
    assert f.satisfied_by(a)
    return a


SAMPLE_FORMULA = CnfFormula(3, ((2, 1, -3), (-1, 3, 2), (-3, -2, -1)))
ALL_SIGNS_UNSAT = CnfFormula(3, tuple((a * 1, b * 2, c * 3) for a in (1, -1) for b in (1, -1) for c in (1, -1)))


def random_formula(rng, n: int, m: int) -> CnfFormula:
    """m clauses of three literals over variables 1..n (repeats allowed), drawn from rng."""
    if n < 1 and m > 0:
        raise CnfError("clauses need at least one variable")
    return CnfFormula(n, tuple(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3))
                               for _ in range(m)))
