"""
A commutator in the figure eight
================================

The commutator of the two circles of S1 v S1 is a nontrivial element of a
free group, so the loop cannot be shrunk in the space itself.  Its loop of
point evaluations can be filled in.  A single circle cannot: collapsing the
other circle turns it into the identity loop of S1, where the winding
obstruction applies.
"""

from qnull.constructor import build_wedge_commutator_certificate, pushforward_certificate
from qnull.spaces import map_loop, wedge_branch_loop
from qnull.verifier import fabricated_certificates, verify
from qnull.words import loop_word

cert = build_wedge_commutator_certificate(1, 1)
print("boundary word:", loop_word(cert.boundary_loop), "(reduced, nonempty)")
for layer in cert.construction_log:
    print(f"  {layer['layer']:<12} {layer['rows']:>4} rows")
print("verifier:", verify(cert, tol=1e-9).verdict)

# both collapse maps carry the certificate to a valid one over S1
for g in ("collapseA", "collapseB"):
    rep = verify(pushforward_certificate(cert, g))
    print(f"{g}: {rep.verdict}, ring windings all {set(rep.ring_windings)}")

# one circle alone
alpha = wedge_branch_loop("A", 1, 256)
print("\nalpha word:", loop_word(alpha))
print("collapseB(alpha) is the identity loop:", map_loop("collapseB", alpha).samples[:3].round(3))
for name, fake in fabricated_certificates(alpha).items():
    over_wedge = verify(fake).verdict
    over_circle = verify(pushforward_certificate(fake, "collapseB"))
    print(f"  {name:<18} wedge {over_wedge}, after collapse {over_circle.verdict} "
          f"(boundary winding {over_circle.ring_windings[-1]})")
