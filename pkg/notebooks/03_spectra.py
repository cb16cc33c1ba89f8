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
# # Spectral constructions
#
# ## Eigenfunctions of `sqrt(x^2+1)`
#
# The iterates are `sqrt(x^2+n)`, so the intervals `(sqrt(1/16+n), sqrt(1/4+n))`
# are disjoint images of `(1/4, 1/2)`. Placing `lam^n psi(sqrt(x^2-n))` on the
# `n`-th one gives an eigenfunction for any `|lam| < 1`.

# %%
import numpy as np

from compop import parse_symbol
from compop.schwartz import gaussian
from compop.spectral import (dilation_nonsurjectivity_witness, eigenfunction_sqrt, injective_point_spectrum,
                             neumann_resolvent, power_bounded_resolvent, sqrt_symbol,
                             translation_spectrum_witness, zak_fourier)

for lam in (0.5, -0.5, 0.3 + 0.4j, 0.7j, 0.9):
    r = eigenfunction_sqrt(lam)
    print(f"lam={lam!s:10s} depth={r.depth:3d} residual={r.residual:.1e} sup={r.sup_abs:.3f}")

# %% [markdown]
# ## Resolvents
#
# Outside the closed disc the Neumann series converges; on the unit circle the
# series for `sqrt(x^2+1)` still converges because the iterates push mass out
# fast enough, while for the translation the decay check fails.

# %%
print(neumann_resolvent(parse_symbol("x+1"), 2, gaussian()).residual)
print(neumann_resolvent(sqrt_symbol(), 1.5, gaussian(), trunc=80).residual)
pb = power_bounded_resolvent(sqrt_symbol(), 1j, gaussian())
print(pb.residual, pb.terms, pb.decay.ratios)

# %% [markdown]
# ## Zak transform and the translation
#
# Integrating the Zak transform against `e^{-2 pi i x w}` over one period gives
# the Fourier transform; a nonzero value certifies `e^{2 pi i w}` in the spectrum
# of the translation.

# %%
w = np.linspace(-1, 1, 5)
print(np.abs(zak_fourier(gaussian(), w) - np.exp(-np.pi * w**2)).max())
t = translation_spectrum_witness(gaussian(), 0.25)
print(t.status, t.lam, abs(t.zak), t.error)

# %% [markdown]
# ## Dilations and point spectra

# %%
for a, lam in [(2, 1), (2, 3), (2, 0.5)]:
    d = dilation_nonsurjectivity_witness(a, lam, jmax=4)
    print(a, lam, d.case, "j =", d.j, [round(v, 3) for v in d.sequence[:6]])
for s in ("x", "x+1", "-x", "2*x", "x+exp(-x^2)"):
    rep = injective_point_spectrum(parse_symbol(s))
    print(f"{s:12s} point spectrum {rep.point_spectrum:8s} spectrum: {rep.spectrum}")
