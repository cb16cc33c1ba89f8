# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Classifying symbols
#
# `classify` runs the rule cascade on a symbol: exact rules for affine maps and
# polynomials first, then the monotone rules, then witness search for
# everything else. Each report lists the rules that fired.

# %%
from compop import classify, parse_symbol
from compop.cli import load_symbol

symbols = ["x^2+1", "x^2+x+1", "x^3+2", "x+1", "-x+3", "2*x", "x+exp(-x^2)",
           "x+2+sin(x)", "-x+3+cos(x)/4", "involution[cos(x)/2]", "sqrt(x^2+1)"]
for s in symbols:
    r = classify(load_symbol(s))
    print(f"{s:22s} pb={r.power_bounded:8s} me={r.mean_ergodic:8s} {', '.join(r.rule_ids)}")

# %% [markdown]
# Polynomial verdicts are exact. The fixed points of `x^2-3` come from Sturm
# isolation over the rationals; the report carries one as a witness.

# %%
r = classify(parse_symbol("x^2-3"))
print(r.shape)
print(r.witnesses[0].to_dict())

# %% [markdown]
# An increasing symbol that stays a fixed distance from the diagonal gets a
# bounded-image witness: points `x_n` with `|x_n|^k >= n` whose `n`-th iterate
# lands near the origin.

# %%
r = classify(parse_symbol("x+2+sin(x)"))
w = r.witnesses[-1]
print(w.kind, w.data["k"], w.data["triples"][:5])

# %% [markdown]
# Symbol conditions: `exp(-x^2)` is bounded, so it cannot dominate any root of
# `|x|` and is rejected with a concrete point.

# %%
from compop import check_symbol_conditions
print(check_symbol_conditions(parse_symbol("exp(-x^2)")).counterexample)
