"""The (alpha, eps) bifurcation chart of a regularized fold-fold.

Smoothing the switching line with a transition phi(y/eps) turns the
pseudo-equilibrium of the unfolding into a genuine critical point
P(alpha, eps).  Two curves organize its type: a parabola D (eps ~ D*alpha^2)
where node turns into focus, and a line H (alpha ~ delta_H * eps) where the
focus flips stability in a Hopf bifurcation.  Both leading coefficients are
rational in the data at the fold-fold point - for the invisible-invisible
scenario with the cubic transition they are exactly 3/32 and 4/3.
"""
import foldfold as ff
from foldfold import RegularizedSystem

fam = ff.get_scenario("ii-basic").family()

for phi in ("cubic", "quintic"):
    ch = ff.chart(fam, phi, numeric_eps=(1e-3, 3e-3, 6e-3, 1e-2))
    print(f"=== ii-basic + {phi} ===")
    print(f"  v* = {ch.vstar:+.4f}, x* = {ch.xstar:+.4f}, xbar = {ch.xbar:+.4f}")
    print(f"  M(Z) = {ch.M_of_Z:+.4f}, N(Z, Zt) = {ch.N_of_ZZt:+.4f}")
    print(f"  D: eps = {ch.D_coeff:.6f} * alpha^2")
    print(f"  H: alpha = {ch.delta_H:.6f} * eps   ({ch.hopf_criticality})")
    print("  numeric Hopf samples (root of the trace at the continued point):")
    for eps, alpha_h in ch.numeric_H:
        print(f"    eps={eps:7.4f}: alpha_H = {alpha_h:.8f}"
              f"   (leading order {ch.delta_H * eps:.8f})")
    print()

print("Walking alpha through the chart at eps = 0.006 (cubic):")
ch = ff.chart(fam, "cubic", numeric_eps=())
for alpha in (-0.3, -0.1, 0.006, 0.01, 0.3):
    predicted = ff.classify_region(ch, alpha, 0.006)
    reg = RegularizedSystem(fam, "cubic", alpha, 0.006)
    actual = ff.find_critical_point(reg)
    print(f"  alpha={alpha:+.3f}: chart says {predicted:<15} "
          f"Jacobian says {actual.kind:<15} P=({actual.x:+.4f}, {actual.v:+.4f})")
