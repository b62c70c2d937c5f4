"""3-CNF formulas: representation, DIMACS I/O, evaluation and a brute-force oracle."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    ClauseArity,
    DimacsError,
    DuplicateLiteral,
    LengthMismatch,
    MalformedHeader,
    TooFewVars,
    TooLarge,
    VarOutOfRange,
)

DEFAULT_EXHAUSTIVE_LIMIT = 24


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise VarOutOfRange(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        if lit == 0:
            raise VarOutOfRange("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def complement(self) -> Literal:
        return Literal(self.var, not self.negated)

    def value(self, a: Assignment) -> bool:
        return a[self.var] != self.negated

    def __str__(self):
        return f"~x{self.var}" if self.negated else f"x{self.var}"


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(self.literals)
        object.__setattr__(self, "literals", lits)
        if len(lits) != 3:
            raise ClauseArity(f"clause must have exactly 3 literals, got {len(lits)}")
        if len(set(lits)) != 3:
            raise DuplicateLiteral(f"repeated literal in clause {[l.to_int() for l in lits]}")

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> Clause:
        return cls(tuple(Literal.from_int(x) for x in lits))

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, i: int) -> Literal:
        return self.literals[i]

    def satisfied_by(self, a: Assignment) -> bool:
        return any(lit.value(a) for lit in self.literals)


@dataclass(frozen=True)
class Assignment:
    """Truth values for variables 1..V; index with the 1-based variable number."""

    values: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    def __getitem__(self, var: int) -> bool:
        if var < 1:
            raise IndexError(var)
        return self.values[var - 1]

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_true_vars(cls, num_vars: int, true_vars: Iterable[int]) -> Assignment:
        on = set(true_vars)
        return cls(tuple(i in on for i in range(1, num_vars + 1)))

    def lines(self) -> list[str]:
        return [f"x{i}={'true' if v else 'false'}" for i, v in enumerate(self.values, 1)]


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.num_vars < 1:
            raise MalformedHeader("formula needs at least one variable")
        if not self.clauses:
            raise MalformedHeader("formula needs at least one clause")
        for c in self.clauses:
            for lit in c:
                if lit.var > self.num_vars:
                    raise VarOutOfRange(f"literal {lit.to_int()} exceeds num_vars={self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> CnfInstance:
        return cls(num_vars, tuple(Clause.from_ints(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> list[list[int]]:
        return [[lit.to_int() for lit in c] for c in self.clauses]


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Optional[Assignment] = None


def parse_dimacs(text: str) -> CnfInstance:
    """Parse DIMACS CNF text into a :class:`CnfInstance` of 3-literal clauses."""
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise MalformedHeader(f"line {lineno}: second problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedHeader(f"line {lineno}: expected 'p cnf V C', got {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedHeader(f"line {lineno}: non-integer counts in {line!r}") from None
            if header[0] < 1 or header[1] < 1:
                raise MalformedHeader(f"line {lineno}: V and C must be positive")
            continue
        if header is None:
            raise MalformedHeader(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
    if header is None:
        raise MalformedHeader("missing 'p cnf V C' header")

    num_vars, num_clauses = header
    clauses = []
    current: list[int] = []
    for lit in tokens:
        if lit != 0:
            if abs(lit) > num_vars:
                raise VarOutOfRange(f"literal {lit} out of range 1..{num_vars}")
            current.append(lit)
            continue
        if len(current) != 3:
            raise ClauseArity(f"clause {len(clauses) + 1} has {len(current)} literals, expected 3")
        clauses.append(Clause.from_ints(current))
        current = []
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise MalformedHeader(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfInstance(num_vars, tuple(clauses))


def to_dimacs(cnf: CnfInstance, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {cnf.num_vars} {cnf.num_clauses}")
    lines.extend(" ".join(str(x) for x in c) + " 0" for c in cnf.to_ints())
    return "\n".join(lines) + "\n"


def evaluate(cnf: CnfInstance, a: Assignment) -> bool:
    if len(a) != cnf.num_vars:
        raise LengthMismatch(f"assignment has {len(a)} values, formula has {cnf.num_vars} variables")
    return all(c.satisfied_by(a) for c in cnf.clauses)


def brute_force_sat(cnf: CnfInstance, limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> SatResult:
    """Try all 2^V assignments, all-false first, x1 most significant."""
    if cnf.num_vars > limit:
        raise TooLarge(f"{cnf.num_vars} variables exceeds exhaustive limit {limit}")
    clauses = [[(lit.var - 1, lit.negated) for lit in c] for c in cnf.clauses]
    for values in itertools.product((False, True), repeat=cnf.num_vars):
        if all(any(values[i] != neg for i, neg in c) for c in clauses):
            return SatResult(True, Assignment(values))
    return SatResult(False)


def random_cnf(num_vars: int, num_clauses: int, seed: int) -> CnfInstance:
    """Uniform random 3-CNF: each clause uses 3 distinct variables with random signs."""
    if num_vars < 3:
        raise TooFewVars(f"need at least 3 variables, got {num_vars}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(Clause(tuple(Literal(v, rng.random() < 0.5) for v in vs)))
    return CnfInstance(num_vars, tuple(clauses))
