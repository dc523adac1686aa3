"""The maximal Canard of the visible-invisible fold and its explosion.

For a visible-invisible fold-fold of focus type the smoothed system is a
genuine slow-fast system: an attracting slow manifold over x < 0 and a
repelling one over x > 0.  Along a line alpha = delta_C * eps in the
parameter plane they connect through the fold region - the maximal Canard -
and a large periodic orbit is born or destroyed exponentially close to it.

delta_C has a closed form built from five constants of the inner equation;
here we also recover it numerically by continuing both manifolds to x = 0
and closing their gap, and we check the predicted gap-versus-delta slope.
"""
import math

import foldfold as ff
from foldfold.canard import inner_solution, manifold_gap

fam = ff.get_scenario("vi-basic").family()

for phi in ("quintic-b", "cubic", "linear"):
    rep = ff.canard_constants(fam, phi)
    print(f"=== vi-basic + {phi} ===")
    print(f"  inner constants M0..M4 = {rep.M0:+.4f}, {rep.M1:+.4f}, "
          f"{rep.M2:+.4f}, {rep.M3:+.4f}, {rep.M4:+.4f}")
    print(f"  vbar = {rep.vbar:.5f}   delta_C = {rep.delta_C:.6f}")
    for eps in (4e-3, 1e-3):
        dc = ff.numeric_canard(fam, phi, eps)
        print(f"  eps={eps:<7g}: numeric delta_C(eps) = {dc:.6f} "
              f"(|diff| = {abs(dc - rep.delta_C):.2e})")
    eps = 1e-3
    for ddelta in (-0.2, 0.2):
        gap = manifold_gap(fam, phi, rep.delta_C + ddelta, eps)
        print(f"  gap(delta_C{ddelta:+.1f}) = {gap:+.6f} "
              f"(predicted {math.sqrt(eps) * rep.gap_slope_C * ddelta:+.6f})")
    print()

print("Inner solutions: at delta = delta_C both tails collapse onto the line")
rep = ff.canard_constants(fam, "cubic")
for r in (-3.0, 0.0, 3.0):
    s_minus = inner_solution(rep, "minus", r)
    s_plus = inner_solution(rep, "plus", r)
    print(f"  r={r:+.1f}: s0-(r) = {s_minus:+.6f}, s0+(r) = {s_plus:+.6f}")
off = rep.delta_C + 0.4
print(f"away from it (delta = delta_C + 0.4) a gap opens at r = 0: "
      f"{inner_solution(rep, 'minus', 0.0, off) - inner_solution(rep, 'plus', 0.0, off):+.6f}")

print()
print("Linear transition: the slow system reduces to the classical canard")
print("normal form, which pins the canard relative to the Hopf line:")
red = ff.linear_ks_reduction(fam)
print(f"  delta_H = {red.delta_H:.6f}, delta_C = {red.delta_C:.6f}, "
      f"Abar = {red.Abar:+.6f}, A_KS = {red.A_KS:+.6f}")
side = "left (supercritical)" if red.Abar < 0 else "right (subcritical)"
print(f"  the canard line sits {side} of the Hopf line")
