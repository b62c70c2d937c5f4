"""Executable 3-SAT reductions to restricted spanning tree, all-or-nothing flow
and vector-weighted shortest path, with verifiers, exact solvers and
certificate-to-assignment extraction."""

from .certs import FlowCertificate, PathCertificate, Reason, SearchStats, TreeCertificate, VerifyReport
from .baselines import dijkstra, edmonds_karp, prim_mst
from .cnf import (
    Assignment,
    Clause,
    CnfInstance,
    Literal,
    SatResult,
    brute_force_sat,
    evaluate,
    parse_dimacs,
    random_cnf,
    to_dimacs,
)
from .flow import (
    FlowInstance,
    FlowLabels,
    flow_build,
    flow_extract,
    flow_from_assignment,
    flow_solve,
    flow_verify,
)
from .rst import RstInstance, RstLabels, canonical_tree, rst_build, rst_extract, rst_solve, rst_verify
from .vvsp import (
    VvspInstance,
    VvspLabels,
    path_cost2,
    path_from_assignment,
    vvsp_build,
    vvsp_extract,
    vvsp_min_cost2,
    vvsp_solve,
    vvsp_verify,
)

__version__ = "0.1.0"
