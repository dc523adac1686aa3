"""Trajectories, periodic-orbit shooting and the big-orbit diagnostics.

Everything is integrated in the fast chart (x' = eps*F1, v' = F2), which is
never stiff: inside the band the transition does the work, outside it the
chart is just the upper or lower field in stretched coordinates.
"""
import foldfold as ff
from foldfold import RegularizedSystem

fam = ff.get_scenario("ii-basic").family()

print("One trajectory through the band (ii-basic, alpha=0, eps=0.006):")
reg = RegularizedSystem(fam, "cubic", 0.0, 0.006)
traj = ff.integrate(reg, (-0.3, 1.0), 80.0)
for e in traj.events[:6]:
    arrow = "down" if e.direction < 0 else "up"
    print(f"  t={e.t:7.2f}: crosses {e.which} going {arrow} at x = {e.x:+.4f}")

print()
print("Shooting the small stable cycle after the Hopf bifurcation:")
reg = RegularizedSystem(fam, "cubic", 0.01, 0.006)
cert = ff.find_periodic_orbit(reg, 0.9, bracket_width=0.3)
print(f"  section point (x, v) = ({cert.section_point[0]:+.5f}, {cert.section_point[1]:.5f})")
print(f"  period {cert.period:.3f} (fast time), divergence integral {cert.floquet_log:+.4f}"
      f" -> {cert.stability}")

print()
print("Fixed alpha, shrinking eps: the orbit converges to the nonsmooth cycle")
alpha = 0.05
f_alpha = ff.unfolding_return_fixed_point(fam, alpha)
print(f"  crossing cycle of the unfolding: x = {f_alpha:+.6f}")
for eps, x_cross, flog in ff.fixed_alpha_limit(fam, "cubic", alpha, (4e-3, 2e-3, 1e-3)):
    print(f"  eps={eps:<7g}: orbit crosses v=1 at x = {x_cross:+.6f} "
          f"(gap {abs(x_cross - f_alpha):.2e}, floquet {flog:+.3f})")

print()
print("Big-orbit stability after the canard explosion (b-field scenario):")
bf = ff.get_scenario("b-field").family()
for phi in ("septic", "cubic"):
    b = ff.B_coefficient(bf, phi)
    side = ff.big_orbit_side(bf, phi)
    r = ff.way_in_way_out(bf, phi, 0.1)
    print(f"  {phi:<7}: B = {b:+.3f} -> {side}; R(0.1) = {r:+.6f}")

print()
print("A stable big orbit right of the canard line (septic, delta = -2.0):")
eps = 2e-3
reg = RegularizedSystem(bf, "septic", -2.0 * eps, eps)
cert = ff.find_periodic_orbit(reg, 0.58, bracket_width=0.1)
print(f"  section v = {cert.section_point[1]:.5f}, {cert.stability} "
      f"(floquet {cert.floquet_log:+.3f})")
