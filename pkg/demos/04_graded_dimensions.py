"""
Four ways to count the same graded pieces
=========================================

For n = 2 the invariants, the span of characteristic coefficients, the image
of Gamma_n and its abelianization all have the same dimension in every degree.
"""

from polylaw.suites import RunConfig, graded_table

for gens in [("x",), ("x", "y")]:
    print("generators:", ",".join(gens))
    for row in graded_table(RunConfig(n=2, gens=gens, maxdeg=4)):
        cols = [row[k] for k in ("invariant_dim", "e_span_rank", "pi_rank", "ab_rank")]
        print(f"  {str(tuple(row['multidegree'])):<8}", *cols)
