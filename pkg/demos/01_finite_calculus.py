"""Quasipolynomial point counts and their backward differences.

The two point-count functions s1 and s2 = s1 + 1 are quadratic on each
residue class mod 27, built so that s2(t) = ceil(C(t+3,3) / (3t+1)):
s2(t) points are just enough to expect the span of their tangent spaces
to fill the space of degree-t quaternary forms, and s1(t) is the largest
count expected to stay independent.
"""

from chowdefect import backward_diff, binomial, make_proof_functions, newton_reconstruct

s1, s2 = make_proof_functions()
N = lambda t: binomial(t + 3, 3)
m = lambda t: 3 * t + 1

print("t    N(t)=C(t+3,3)  m(t)  s1(t)  s2(t)  ceil(N/m)")
for t in (1, 2, 5, 27, 28, 55, 82):
    print(f"{t:<4} {N(t):<14} {m(t):<5} {s1(t):<6} {s2(t):<6} {-(-N(t) // m(t))}")

print("\nBackward differences with step 27 (the induction step):")
for order in range(4):
    vals = {t: backward_diff(s1, order, t, 27) for t in (82, 120, 200)}
    print(f"  diff^{order} s1 at t=82,120,200 -> {list(vals.values())}")
print("degree 2 means diff^2 is the constant 2 * 27^2 / 18 = 81 and diff^3 vanishes.")

print("\nNewton reconstruction (an identity, used as a test oracle):")
for t in (60, 82, 150):
    assert newton_reconstruct(s1, 3, t, 27) == s1(t)
    print(f"  sum of binomially-weighted differences at t={t} rebuilds s1(t) = {s1(t)}")
