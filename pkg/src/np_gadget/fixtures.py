"""Hand-written formulas used throughout the tests, the harness and the CLI.

Variables are numbered x=1, y=2, z=3, w=4.
"""

import itertools

from .cnf import Assignment, CnfInstance

# (x | y | z) & (~x | z | w) & (~x | ~y | w) & (y | ~z | ~w)
B = CnfInstance.from_ints(4, [[1, 2, 3], [-1, 3, 4], [-1, -2, 4], [2, -3, -4]])

# x=F, y=T, z=T, w=F
B_WITNESS = Assignment((False, True, True, False))

# (x | y | ~z) & (~x | ~y | ~z) & (x | ~y | z), satisfied by x=z=T, y=F
E = CnfInstance.from_ints(3, [[1, 2, -3], [-1, -2, -3], [1, -2, 3]])
E_WITNESS = Assignment((True, False, True))

# every sign pattern over {x, y, z}: each assignment falsifies exactly one clause
U3 = CnfInstance.from_ints(
    3,
    [[sx * 1, sy * 2, sz * 3] for sx, sy, sz in itertools.product((1, -1), repeat=3)],
)

SINGLE = CnfInstance.from_ints(3, [[1, 2, 3]])

FIXTURES = {"B": B, "U3": U3, "E": E, "single": SINGLE}
