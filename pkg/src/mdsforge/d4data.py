"""Hard-coded data for the explicit cubic-moment rational function.

Z(z1, z2, z3, z4; q) = N / D with N the term table below (entries
(e1, e2, e3, e4, qexp, coef) meaning coef * q**qexp * z**e) and D the
product of the twelve unit factors in DEN_FACTORS (entries (qexp,
(e1, e2, e3, e4)) meaning 1 - q**qexp * z**e).  The diagram-symmetric
variables are z1, z2, z3; z4 is attached to the central node.
"""

NUM_TERMS = (
    (0, 0, 0, 0, 0, 1), (0, 0, 1, 1, 2, -1), (0, 1, 0, 1, 2, -1),
    (0, 1, 1, 1, 3, 1), (1, 0, 0, 1, 2, -1), (1, 0, 1, 1, 3, 1),
    (1, 1, 0, 1, 3, 1), (1, 1, 1, 1, 4, -1), (0, 1, 1, 2, 3, 1),
    (0, 1, 2, 2, 4, -1), (0, 2, 1, 2, 4, -1), (1, 0, 1, 2, 3, 1),
    (1, 0, 2, 2, 4, -1), (1, 1, 0, 2, 3, 1), (1, 1, 1, 2, 4, -2),
    (1, 1, 2, 2, 4, 1), (1, 1, 2, 2, 5, 1), (1, 2, 0, 2, 4, -1),
    (1, 2, 1, 2, 4, 1), (1, 2, 1, 2, 5, 1), (1, 2, 2, 2, 5, -1),
    (2, 0, 1, 2, 4, -1), (2, 1, 0, 2, 4, -1), (2, 1, 1, 2, 4, 1),
    (2, 1, 1, 2, 5, 1), (2, 1, 2, 2, 5, -1), (2, 2, 1, 2, 5, -1),
    (0, 2, 2, 3, 6, 1), (1, 1, 1, 3, 5, -1), (1, 1, 2, 3, 6, 1),
    (1, 1, 3, 3, 6, -1), (1, 2, 1, 3, 6, 1), (1, 2, 2, 3, 6, -1),
    (1, 2, 2, 3, 7, -1), (1, 2, 3, 3, 7, 1), (1, 3, 1, 3, 6, -1),
    (1, 3, 2, 3, 7, 1), (2, 0, 2, 3, 6, 1), (2, 1, 1, 3, 6, 1),
    (2, 1, 2, 3, 6, -1), (2, 1, 2, 3, 7, -1), (2, 1, 3, 3, 7, 1),
    (2, 2, 0, 3, 6, 1), (2, 2, 1, 3, 6, -1), (2, 2, 1, 3, 7, -1),
    (2, 2, 2, 3, 7, 3), (2, 2, 3, 3, 8, -1), (2, 3, 1, 3, 7, 1),
    (2, 3, 2, 3, 8, -1), (3, 1, 1, 3, 6, -1), (3, 1, 2, 3, 7, 1),
    (3, 2, 1, 3, 7, 1), (3, 2, 2, 3, 8, -1), (1, 3, 3, 4, 8, -1),
    (2, 2, 2, 4, 8, 1), (2, 2, 3, 4, 8, -1), (2, 2, 4, 4, 9, 1),
    (2, 3, 2, 4, 8, -1), (2, 3, 3, 4, 9, 1), (2, 4, 2, 4, 9, 1),
    (3, 1, 3, 4, 8, -1), (3, 2, 2, 4, 8, -1), (3, 2, 3, 4, 9, 1),
    (3, 3, 1, 4, 8, -1), (3, 3, 2, 4, 9, 1), (3, 3, 3, 4, 9, -1),
    (4, 2, 2, 4, 9, 1), (1, 3, 3, 5, 9, 1), (2, 2, 2, 5, 9, -1),
    (2, 2, 3, 5, 9, 1), (2, 2, 4, 5, 10, -1), (2, 3, 2, 5, 9, 1),
    (2, 3, 3, 5, 10, -1), (2, 4, 2, 5, 10, -1), (3, 1, 3, 5, 9, 1),
    (3, 2, 2, 5, 9, 1), (3, 2, 3, 5, 10, -1), (3, 3, 1, 5, 9, 1),
    (3, 3, 2, 5, 10, -1), (3, 3, 3, 5, 10, 1), (4, 2, 2, 5, 10, -1),
    (2, 3, 3, 6, 10, -1), (2, 3, 4, 6, 11, 1), (2, 4, 3, 6, 11, 1),
    (2, 4, 4, 6, 12, -1), (3, 2, 3, 6, 10, -1), (3, 2, 4, 6, 11, 1),
    (3, 3, 2, 6, 10, -1), (3, 3, 3, 6, 11, 3), (3, 3, 4, 6, 11, -1),
    (3, 3, 4, 6, 12, -1), (3, 3, 5, 6, 12, 1), (3, 4, 2, 6, 11, 1),
    (3, 4, 3, 6, 11, -1), (3, 4, 3, 6, 12, -1), (3, 4, 4, 6, 12, 1),
    (3, 5, 3, 6, 12, 1), (4, 2, 3, 6, 11, 1), (4, 2, 4, 6, 12, -1),
    (4, 3, 2, 6, 11, 1), (4, 3, 3, 6, 11, -1), (4, 3, 3, 6, 12, -1),
    (4, 3, 4, 6, 12, 1), (4, 4, 2, 6, 12, -1), (4, 4, 3, 6, 12, 1),
    (4, 4, 4, 6, 13, -1), (5, 3, 3, 6, 12, 1), (3, 3, 4, 7, 13, -1),
    (3, 4, 3, 7, 13, -1), (3, 4, 4, 7, 13, 1), (3, 4, 4, 7, 14, 1),
    (3, 4, 5, 7, 14, -1), (3, 5, 4, 7, 14, -1), (4, 3, 3, 7, 13, -1),
    (4, 3, 4, 7, 13, 1), (4, 3, 4, 7, 14, 1), (4, 3, 5, 7, 14, -1),
    (4, 4, 3, 7, 13, 1), (4, 4, 3, 7, 14, 1), (4, 4, 4, 7, 14, -2),
    (4, 4, 5, 7, 15, 1), (4, 5, 3, 7, 14, -1), (4, 5, 4, 7, 15, 1),
    (5, 3, 4, 7, 14, -1), (5, 4, 3, 7, 14, -1), (5, 4, 4, 7, 15, 1),
    (4, 4, 4, 8, 14, -1), (4, 4, 5, 8, 15, 1), (4, 5, 4, 8, 15, 1),
    (4, 5, 5, 8, 16, -1), (5, 4, 4, 8, 15, 1), (5, 4, 5, 8, 16, -1),
    (5, 5, 4, 8, 16, -1), (5, 5, 5, 9, 18, 1),
)

DEN_FACTORS = (
    (1, (1, 0, 0, 0)), (1, (0, 1, 0, 0)), (1, (0, 0, 1, 0)), (1, (0, 0, 0, 1)),
    (3, (2, 0, 0, 2)), (3, (0, 2, 0, 2)), (3, (0, 0, 2, 2)),
    (4, (2, 2, 0, 2)), (4, (2, 0, 2, 2)), (4, (0, 2, 2, 2)),
    (5, (2, 2, 2, 2)), (6, (2, 2, 2, 4)),
)

