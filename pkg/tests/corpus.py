"""Shared symbol corpus for report-invariant checks (50 entries)."""

CORPUS = [
    # affine
    "x", "x+1", "x-1", "-x", "-x+3", "2*x", "x/2", "2*x+1", "-2*x+1", "-x/2+1",
    # polynomials
    "x^2+1", "x^2", "x^3+2", "x^2+x+1", "x^3", "x^4+x^2+1", "x^4-x+1", "x^2-x+1",
    "-x^2+1", "x^5+1", "x^3+x", "-x^3", "-x^3-x", "x^6+2", "x^2/2+1", "x^4+1/4",
    "x^2-3", "2*x^2+x", "-x^4-1", "x^3-x",
    # monotone, non-polynomial
    "x+exp(-x^2)", "x+1+exp(-x^2)", "x+sin(x)/2", "x+2+sin(x)", "2*x+sin(x)",
    "x-1-exp(-x^2)", "x+cos(x)/3", "-x-sin(x)/2", "-x+3+cos(x)/4", "-2*x+cos(x)",
    # involutions built from even functions
    "involution[3]", "involution[cos(x)/2]", "involution[exp(-x^2)/2]",
    # general
    "sqrt(x^2+1)", "sqrt(x^2+4)", "exp(x^2+1)", "x^2+cos(x)+2", "sqrt(x^2+1)+1",
    "x^2+sin(x)", "x^2*exp(-x^2)+x^2+1",
]

# the golden table: symbol -> (power_bounded, mean_ergodic, expected rule ids)
GOLDEN = {
    "x^2+1": ("yes", "yes", {"R2.even_no_fixed_points"}),
    "x^2": ("no", "no", {"R2.fixed_point"}),
    "x^3+2": ("no", "no", {"R2.odd_degree"}),
    "x^2+x+1": ("yes", "yes", {"R2.even_no_fixed_points"}),
    "x": ("yes", "yes", {"R1.affine", "R1.monotone"}),
    "x+1": ("no", "no", {"R1.affine", "R1.monotone"}),
    "2*x": ("no", "no", {"R1.affine", "R1.monotone"}),
    "-x": ("yes", "yes", {"R1.affine", "R1.decreasing"}),
    "-x+3": ("yes", "yes", {"R1.affine", "R1.decreasing"}),
    "x+exp(-x^2)": ("unknown", "unknown", {"R3.open_case"}),
}
