"""Locating limit cycles with the displacement (Melnikov) function.

Scaling x by sqrt(eps) with alpha = delta*eps turns the regularized system
into a perturbed center around (0, v*): energy u^2/2 + V(v) is conserved at
leading order and one turn of the return map displaces v by
sqrt(eps)*M(v0, delta).  Zeros of M in v0 are limit cycles (negative slope
attracting), double zeros are saddle-node bifurcations of cycles, and the
curvature at v* decides whether the Hopf bifurcation is super- or
subcritical.
"""
import foldfold as ff
from foldfold import build_profile, cycle_zeros, potential, saddle_node
from foldfold.errors import NoSaddleNodeError

fam = ff.get_scenario("ii-basic").family()

for phi in ("cubic", "quintic"):
    prof = build_profile(fam, phi)
    print(f"=== ii-basic + {phi} ===")
    print(f"  v* = {prof.vstar}, delta_H = {prof.delta_H:.4f}, "
          f"V''(v*) = {prof.Vpp_star:.4f}")
    print(f"  Hopf criticality: {ff.hopf_criticality(prof)}")

    print("  potential well (symmetric for this scenario):")
    for v in (0.3, 0.6, 0.9):
        print(f"    V({v:+.1f}) = {potential(prof, v):.6f}"
              f"   V({-v:+.1f}) = {potential(prof, -v):.6f}")

    for ddelta in (-0.3, 0.0, 0.3):
        delta = prof.delta_H + ddelta
        zs = cycle_zeros(prof, delta, n_grid=200)
        labels = [f"v0={v:.4f} ({'stable' if s < 0 else 'unstable'})" for v, s in zs]
        print(f"  delta = delta_H{ddelta:+.1f}: zeros {labels or 'none'}")

    try:
        v_s, delta_s = saddle_node(prof)
        print(f"  saddle-node of cycles at v = {v_s:.4f}, delta_S = {delta_s:.4f}")
        print(f"    at eps = 0.006 that is alpha_S = {delta_s * 0.006:.5f}")
    except NoSaddleNodeError:
        print("  no saddle-node: the cycle family dies at the Hopf point")
    print()

print("Subcritical visible-invisible case (vi-basic + cubic):")
prof = build_profile(ff.get_scenario("vi-basic").family(), "cubic")
v_s, delta_s = saddle_node(prof)
print(f"  delta_H = {prof.delta_H:.5f}, saddle node at delta_S = {delta_s:.5f}")
print(f"  at eps = 0.01 the two cycles merge near alpha = {delta_s * 0.01:.6f}")
