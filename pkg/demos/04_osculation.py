"""Osculation: measuring how fast the tangent group approximates the frame.

In the frame's own Carnot coordinates, the chart at a nearby base point y
is compared against the group translation (-y) . x; rescaled residuals
must vanish identically (group frames) or decay with log-log slope >= 1.

Run:  python3 demos/04_osculation.py
"""

import random
from fractions import Fraction

from carnotkit.groups import catalog
from carnotkit.verify import numeric_chart_report, osculation_report


def show(name, report):
    print("%s: passed=%s" % (name, report.passed))
    for entry in report.entries:
        r, rt = entry.r_track, entry.rt_track
        def describe(track):
            if track.exact:
                return "exact (residual identically zero)"
            return "slope %.3f" % track.slope
        print("  direction x0=%s y0=%s" % (
            tuple(str(v) for v in entry.direction[0]),
            tuple(str(v) for v in entry.direction[1])))
        print("    chart vs translation:         %s" % describe(r))
        print("    inverse chart vs translation: %s" % describe(rt))
    print()


def main():
    rng = random.Random(2026)

    # On a group's own frame the Carnot chart IS the translation.
    h3 = catalog("heisenberg_3").frame
    show("heisenberg_3", osculation_report(h3, n_directions=2, rng=rng))

    # On a perturbed frame the residual decays at the expected rate.
    ph = catalog("perturbed_heisenberg_3").frame
    show("perturbed_heisenberg_3",
         osculation_report(ph, n_directions=2, rng=rng))

    # The same decay law classifies numerically sampled canonical charts:
    # first-kind coordinates are Carnot (residual raises weight by one).
    directions = [(Fraction(1), Fraction(1), Fraction(1)),
                  (Fraction(-1), Fraction(1, 2), Fraction(1, 3))]
    report = numeric_chart_report(ph, "first", m=1, directions=directions)
    print("numeric first-kind chart residual: passed=%s slopes=%s"
          % (report.passed,
             [None if s is None else round(s, 3) for s in report.slopes()]))

    # Second-kind coordinates are only privileged: weight is preserved
    # (m=0 passes) but not raised (m=1 fails).
    report1 = numeric_chart_report(h3, "second", m=1, directions=directions)
    report0 = numeric_chart_report(h3, "second", m=0, directions=directions)
    print("numeric second-kind chart: m=1 passed=%s, m=0 passed=%s"
          % (report1.passed, report0.passed))


if __name__ == "__main__":
    main()
