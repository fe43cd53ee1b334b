"""Exact dense rank over a small prime field.

The engine consumes columns in blocks, keeps an accumulating basis in
Jordan-normalized generations, and does the bulk arithmetic in float64
matrix products that are exact because every intermediate stays below
2^52.  Ranks over Z_P lower-bound ranks in characteristic zero, which is
the one-sided guarantee the whole verification rests on.
"""

import numpy as np

from chowdefect import from_columns, rank_mod_p

P = 8191
rng = np.random.default_rng(7)

eye = from_columns(list(np.eye(5, dtype=np.int64)), P)
print("identity_5 rank:", rank_mod_p(eye))

dup = from_columns([np.array([1, 2, 3]), np.array([2, 4, 6])], P)
print("proportional columns rank:", rank_mod_p(dup))

low = (rng.integers(0, P, (300, 12)) @ rng.integers(0, P, (12, 450))) % P
m = from_columns(list(low.T), P, rows=300)
print("300 x 450 product of rank-12 factors:", rank_mod_p(m))

perm = low[rng.permutation(300)][:, rng.permutation(450)]
print("after row/column shuffles:", rank_mod_p(from_columns(list(perm.T), P, rows=300)))
