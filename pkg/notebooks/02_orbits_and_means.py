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
# # Orbits, seminorms and Cesaro means
#
# The seminorm `pi_n(f)` is the max over `0 <= j <= n` of
# `sup (1+x^2)^n |f^(j)(x)|`. Iterates `f∘phi_k` are differentiated with jets,
# so the seminorms use exact derivatives on the grid.

# %%
import numpy as np

from compop import parse_symbol
from compop.dynamics import cesaro_mean, cesaro_seminorm, orbit_seminorm_profile
from compop.grid import GridSpec
from compop.schwartz import gaussian, odd_gaussian

grid = GridSpec(L=30, N=2048)
g = gaussian()

# %% [markdown]
# For `sqrt(x^2+1)` the orbit of the gaussian shrinks and the profile never grows.
# For the translation `x+1` the weight `(1+x^2)^n` catches the shifted bump and
# the profile grows polynomially.

# %%
root = orbit_seminorm_profile(parse_symbol("sqrt(x^2+1)"), g, 3, 40, grid)
shift = orbit_seminorm_profile(parse_symbol("x+1"), g, 3, 40, grid)
for n in (1, 5, 10, 20, 40):
    print(f"n={n:3d}  sqrt: {root.values[n - 1]:.3e}   shift: {shift.values[n - 1]:.3e}")
print("growth flags:", root.growth_flag, shift.growth_flag)

# %% [markdown]
# Cesaro means `T_[N] f = (1/N) sum_{k<=N} f∘phi_k`.

# %%
print("sqrt, sup |T_200 g|  :", cesaro_mean(parse_symbol("sqrt(x^2+1)"), g, 200, grid).sup_norm)
print("-x, sup |T_200 odd| :", cesaro_mean(parse_symbol("-x"), odd_gaussian(), 200, grid).sup_norm)
for N in (20, 50, 100, 200):
    print(f"x+1, pi_2(T_{N} g) =", cesaro_seminorm(parse_symbol("x+1"), g, N, 2, grid).value)

# %% [markdown]
# Orbit limits of increasing symbols: points are pushed to the nearest fixed
# point ahead of them, or to infinity.

# %%
from compop.dynamics import phi_star
for x in (-3.0, 0.0, 0.5, 2.0):
    print(x, phi_star(parse_symbol("x^3"), x), phi_star(parse_symbol("x/2+1"), x))
