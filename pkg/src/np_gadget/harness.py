"""Round-trip harness: every reduction's verdict must match the SAT oracle."""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .certs import SearchStats
from .cnf import CnfInstance, brute_force_sat, evaluate, random_cnf, to_dimacs
from .fixtures import B, U3
from .flow import flow_build, flow_extract, flow_from_assignment, flow_solve, flow_verify
from .rst import rst_build, rst_extract, rst_solve, rst_verify
from .vvsp import path_from_assignment, vvsp_build, vvsp_extract, vvsp_solve, vvsp_verify

PROBLEMS = ("rst", "flow", "vvsp")


def fingerprint(cnf: CnfInstance) -> str:
    return hashlib.sha256(to_dimacs(cnf).encode()).hexdigest()[:12]


@dataclass
class ReductionResult:
    verdict: bool
    extraction_ok: Optional[bool] = None  # None when there was nothing to extract
    verified: Optional[bool] = None
    seconds: float = 0.0
    nodes: int = 0


@dataclass
class RoundtripRow:
    index: int
    name: str
    cnf: CnfInstance
    fingerprint: str
    oracle: bool
    results: dict[str, ReductionResult] = field(default_factory=dict)
    constructive_ok: Optional[bool] = None

    @property
    def passed(self) -> bool:
        for r in self.results.values():
            if r.verdict != self.oracle:
                return False
            if r.verdict and not (r.verified and r.extraction_ok):
                return False
        return True

    def format(self) -> str:
        cells = " ".join(
            f"{p}={'Y' if r.verdict else 'N'}{'' if r.extraction_ok in (None, True) else '!'}"
            for p, r in self.results.items()
        )
        return (f"{self.index:4d} {self.name:<10} V={self.cnf.num_vars} C={self.cnf.num_clauses} "
                f"{self.fingerprint} oracle={'SAT' if self.oracle else 'UNSAT'} {cells} "
                f"{'PASS' if self.passed else 'FAIL'}")


@dataclass
class RoundtripReport:
    rows: list[RoundtripRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[RoundtripRow]:
        return [r for r in self.rows if not r.passed]

    def format(self) -> str:
        lines = [r.format() for r in self.rows]
        n_fail = len(self.failures())
        lines.append(f"{len(self.rows)} rows, {len(self.rows) - n_fail} pass, {n_fail} fail")
        return "\n".join(lines)


def check_instance(index: int, name: str, cnf: CnfInstance, node_limit: Optional[int] = None) -> RoundtripRow:
    """Run the oracle and all three reductions on one formula."""
    sat = brute_force_sat(cnf)
    row = RoundtripRow(index, name, cnf, fingerprint(cnf), sat.satisfiable)

    pipelines = {
        "rst": (rst_build, rst_solve, rst_verify, rst_extract),
        "flow": (flow_build, flow_solve, flow_verify, flow_extract),
        "vvsp": (vvsp_build, vvsp_solve, vvsp_verify, vvsp_extract),
    }
    for problem, (build, solve, verify, extract) in pipelines.items():
        t0 = time.perf_counter()
        inst, labels = build(cnf)
        stats = SearchStats()
        cert = solve(inst, node_limit=node_limit, stats=stats)
        result = ReductionResult(cert is not None, nodes=stats.nodes)
        if cert is not None:
            result.verified = verify(inst, cert).accepted
            try:
                result.extraction_ok = evaluate(cnf, extract(labels, cert, cnf.num_vars))
            except ValueError:
                result.extraction_ok = False
        result.seconds = time.perf_counter() - t0
        row.results[problem] = result

    if sat.satisfiable:
        f_inst, _ = flow_build(cnf)
        v_inst, _ = vvsp_build(cnf)
        row.constructive_ok = (
            flow_verify(f_inst, flow_from_assignment(cnf, sat.witness)).accepted
            and vvsp_verify(v_inst, path_from_assignment(cnf, sat.witness)).accepted
        )
    return row


def sweep_instances(
    vars_range: tuple[int, int],
    clauses_range: tuple[int, int],
    count: int,
    seed: int,
    fixtures: bool = False,
) -> list[tuple[str, CnfInstance]]:
    """Seeded random formulas followed by the fixtures B and (when in range or forced) U3."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        v = rng.randint(*vars_range)
        c = rng.randint(*clauses_range)
        out.append((f"rand{k}", random_cnf(v, c, rng.getrandbits(64))))
    out.append(("B", B))
    if fixtures or clauses_range[0] <= U3.num_clauses <= clauses_range[1]:
        out.append(("U3", U3))
    return out


def _check(args):
    return check_instance(*args)


def roundtrip(
    instances: Sequence[tuple[str, CnfInstance]],
    node_limit: Optional[int] = None,
    workers: int = 1,
) -> RoundtripReport:
    jobs = [(i, name, cnf, node_limit) for i, (name, cnf) in enumerate(instances)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_check, jobs))
    else:
        rows = [_check(j) for j in jobs]
    rows.sort(key=lambda r: r.index)
    return RoundtripReport(rows)
