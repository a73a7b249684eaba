"""Build barrier functions and verify them against simulations.

Two constructions are demonstrated.  For sublinear problems an explicit
exponential profile dominates every solution; for superlinear problems
with integrable forcing a product barrier caps solutions that start below
the small-data threshold.  Both are checked the same way: discrete
residuals of the defining inequalities, then pointwise domination of an
actual run.
"""

from dataclasses import replace

from memheat import (CoefficientSpec, InitialSpec, Scenario, SolverControls,
                     build_th00_supersolution, build_th2_supersolution,
                     check_domination, run, small_data_threshold,
                     verify_supersolution, z_profile)

one = CoefficientSpec.constant(1.0)

print("sublinear barrier: p = q = 1/2, c = k = 1 on [0, 50]")
scn = Scenario(length=1.0, p=0.5, q=0.5, c=one, k=one,
               u0=InitialSpec("constant", 1.0),
               controls=SolverControls(t_max=50.0, blowup_threshold=1e200,
                                       snapshot_every=5.0))
spec = build_th00_supersolution(scn, 50.0)
print("  shape d e^{bt}(2 - sin(pi x / L)) with d=%g, b=%.4f"
      % (spec.params["d"], spec.params["b"]))
res = verify_supersolution(spec, scn, 50.0)
print("  residual mins (interior, boundary, initial): %.3e %.3e %.3e"
      % res.mins, "tol %.2e" % res.tol_res, "PASS" if res.passed else "FAIL")
out = run(scn)
dom = check_domination(spec, out, scn)
print("  run status %s, dominated at every snapshot: %s"
      % (out.status, dom.holds))

print("\nsmall-data barrier: p = q = 2, c = (1+t)^-2, k = (1+t)^-3")
c, k = CoefficientSpec.power(1.0, 2.0), CoefficientSpec.power(1.0, 3.0)
seed = Scenario(length=1.0, p=2.0, q=2.0, c=c, k=k,
                u0=InitialSpec("constant", 0.0),
                controls=SolverControls(t_max=200.0, snapshot_every=2.0))
spec2 = build_th2_supersolution(seed, 200.0)
alpha, big_y = spec2.params["alpha"], spec2.params["Y"]
thr = small_data_threshold(2.0, alpha, big_y, c)
print("  alpha=%.4f, auxiliary bound Y=%.4f, threshold=%.4f"
      % (alpha, big_y, thr))
scn2 = replace(seed, u0=InitialSpec("constant", 0.5 * thr))
out2 = run(scn2)
bound = alpha * big_y * z_profile(2.0, alpha, big_y, c, 200.0)
print("  run from u0 = threshold/2: %s, sup %.4f stays under alpha*Y*z = %.4f"
      % (out2.status, out2.trace.sup_norm.max(), bound))
res2 = verify_supersolution(spec2, scn2, 200.0)
dom2 = check_domination(spec2, out2, scn2)
print("  residuals %s, domination %s"
      % ("PASS" if res2.passed else "FAIL", dom2.holds))
