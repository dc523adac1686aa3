"""Classifying fold-fold singularities of the built-in scenarios.

A planar Filippov system switches between an upper field X and a lower
field Y across the line y = 0.  When both fields are quadratically tangent
to the line at the same point we have a fold-fold, and everything that
happens nearby is controlled by a handful of numbers evaluated at that
point: the fold visibilities, the horizontal directions X1, Y1, the slope
(det Z)_x(0), the return-map coefficient mu_Z and the sliding speed gamma.

This script prints the diagnosis record for each built-in scenario and
spells out what each entry says about the local phase portrait.
"""
import foldfold as ff

for scenario_id in ("ii-basic", "vi-basic", "b-field", "ex1"):
    sc = ff.get_scenario(scenario_id)
    family = sc.family()
    d = ff.diagnose(family)
    print(f"=== {scenario_id} ===")
    print(f"  visibility       X: {d.visX:<10} Y: {d.visY}")
    print(f"  sign X1*Y1(0)    {d.sign_X1Y1:+d}")
    print(f"  (det Z)_x(0)     {d.detZx0:+.4f}")
    if d.gamma is not None:
        print(f"  gamma = Zs(0)    {d.gamma:+.4f}   (sliding field extends to the fold-fold)")
    else:
        print("  gamma            undefined: the line is crossing near the origin")
    if d.muZ is not None:
        stability = "attracting" if d.muZ > 0 else "repelling"
        print(f"  mu_Z             {d.muZ:+.4f}   (return map makes the point {stability})")
    print(f"  beta_X, beta_Y   {d.betaX:+.4f}, {d.betaY:+.4f}")
    versal = "versal" if abs(d.versal_margin) > 1e-10 else "NOT versal"
    print(f"  unfolding        margin {d.versal_margin:+.4f} -> {versal}")
    print(f"  case             ({d.case})")
    print()

print("Moving the unfolding parameter apart splits the double tangency in two:")
fam = ff.get_scenario("ii-basic").family()
for alpha in (-0.02, 0.0, 0.02):
    tx, ty = ff.unfolding_tangencies(fam, alpha)
    print(f"  alpha={alpha:+.3f}: T_X = {tx:+.4f}, T_Y = {ty:+.4f}")

print()
print("On the cycle side the nonsmooth return map picks up a crossing cycle:")
for alpha in (0.005, 0.01, 0.02):
    fp = ff.unfolding_return_fixed_point(fam, alpha)
    print(f"  alpha={alpha:.3f}: crossing cycle through x = {fp:+.5f}")
print("  alpha=-0.01:", ff.unfolding_return_fixed_point(fam, -0.01), "(no cycle on this side)")
