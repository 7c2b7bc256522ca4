"""Machine verification of the four explicit quotient constructions.

Run each built-in example verification and print its checks: an
imaginary-type torus quotient, a real-type lattice and its homothety
failure, a failed 3-dimensional attempt, and the removed-fixed-points
quotient with its finitely-self-adjacent region.
"""

from cwgeom import verify_example

for name in ("imaginary-torus", "real-lattice", "failed-3d",
             "removed-fixed-points"):
    report = verify_example(name)
    status = "PASS" if report.passed else "FAIL"
    print(f"== {name} [{status}] ==")
    for check in report.checks:
        mark = "ok " if check.passed else "BAD"
        print(f"  {mark} {check.name:32s} residual={check.residual:.2e}")
    if report.commentary:
        print(f"  note: {report.commentary}")
    print()
