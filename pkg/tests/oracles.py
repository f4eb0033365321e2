"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the closed forms under test: overlaps and
expectation values come from grid quadrature (FFT spectral derivatives for
momentum and kinetic energy), visibilities from located extrema of sampled
curves, and sampling checks from binned chi-square statistics.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.stats import chi2 as chi2_dist

from hbtsim.states import Gaussian, evaluate, norm_constant


def numeric_overlap(bra, ket, extent=40.0, n=200001):
    """1-D trapezoid quadrature of conj(bra) * ket with normalized factors."""
    x = np.linspace(-extent, extent, n)
    fa = evaluate(bra, x) * norm_constant(bra)
    fb = evaluate(ket, x) * norm_constant(ket)
    return np.trapz(np.conj(fa) * fb, x)


def labeled_expectation_quadrature(state, op, n=1024):
    """Expectation of a summed one-body operator on the labeled 2-D wavefunction.

    Builds A(x1)B(x2) + eta B(x1)A(x2) on a grid with L2-normalized factors and
    integrates; derivatives are spectral (FFT), so the result is accurate to
    well below 1e-10 for the packet parameters used in the tests.
    """
    left, right = state.left, state.right
    assert isinstance(left, Gaussian) and isinstance(right, Gaussian)
    span = max(abs(left.center), abs(right.center)) + 10.0 * max(left.width, right.width)
    x = np.linspace(-span, span, n, endpoint=False)
    dx = x[1] - x[0]
    fa = evaluate(left, x) * norm_constant(left)
    fb = evaluate(right, x) * norm_constant(right)
    psi = fa[:, None] * fb[None, :] + state.eta * fb[:, None] * fa[None, :]
    dens = np.abs(psi) ** 2
    norm = dens.sum() * dx * dx

    name = op.value
    if name == "position":
        val = ((x[:, None] + x[None, :]) * dens).sum() * dx * dx
        return float(val / norm)
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    d1 = np.fft.ifft(1j * k[:, None] * np.fft.fft(psi, axis=0), axis=0)
    d2 = np.fft.ifft(1j * k[None, :] * np.fft.fft(psi, axis=1), axis=1)
    if name == "momentum":
        val = (np.conj(psi) * (-1j) * (d1 + d2)).sum() * dx * dx
        return float(val.real / norm)
    val = 0.5 * ((np.abs(d1) ** 2 + np.abs(d2) ** 2).sum()) * dx * dx
    return float(val / norm)


def refined_extrema(u, f):
    """(positions, values, kinds) of interior extrema with parabolic refinement."""
    positions, values, kinds = [], [], []
    for i in range(1, len(f) - 1):
        if f[i] >= f[i - 1] and f[i] >= f[i + 1] and (f[i] > f[i - 1] or f[i] > f[i + 1]):
            kind = "max"
        elif f[i] <= f[i - 1] and f[i] <= f[i + 1] and (f[i] < f[i - 1] or f[i] < f[i + 1]):
            kind = "min"
        else:
            continue
        denom = f[i - 1] - 2.0 * f[i] + f[i + 1]
        shift = 0.0 if denom == 0 else 0.5 * (f[i - 1] - f[i + 1]) / denom
        du = u[1] - u[0]
        positions.append(u[i] + shift * du)
        values.append(f[i] - 0.25 * (f[i - 1] - f[i + 1]) * shift)
        kinds.append(kind)
    return np.array(positions), np.array(values), kinds


def three_point_visibility(u, f, target):
    """Fringe contrast near `target` from one maximum and its two flanking minima.

    Averaging the two minima cancels the linear drift of the envelope across
    one fringe period, leaving only curvature bias.
    """
    pos, val, kinds = refined_extrema(u, f)
    maxima = [i for i, k in enumerate(kinds) if k == "max"]
    minima = [i for i, k in enumerate(kinds) if k == "min"]
    if not maxima or len(minima) < 2:
        raise ValueError("window contains too few extrema")
    im = min(maxima, key=lambda i: abs(pos[i] - target))
    left = [i for i in minima if pos[i] < pos[im]]
    right = [i for i in minima if pos[i] > pos[im]]
    if not left or not right:
        raise ValueError("maximum is not flanked by minima")
    il = max(left, key=lambda i: pos[i])
    ir = min(right, key=lambda i: pos[i])
    peak = val[im]
    trough = 0.5 * (val[il] + val[ir])
    return (peak - trough) / (peak + trough), pos[im]


def chi2_vs_pdf_2d(samples, pdf, lo, hi, cells=32, min_expected=10.0):
    """Binned chi-square p-value of 2-D samples against a normalized density.

    Cell probabilities come from 5-point Gauss-Legendre quadrature per axis;
    cells below `min_expected` expected counts are pooled with the
    out-of-range remainder.
    """
    samples = np.asarray(samples)
    n = len(samples)
    edges = np.linspace(lo, hi, cells + 1)
    counts = np.histogram2d(samples[:, 0], samples[:, 1], bins=[edges, edges])[0]

    nodes, weights = leggauss(5)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    pts = (mids[:, None] + half * nodes[None, :]).ravel()
    w = half * weights
    dens = pdf(pts[:, None], pts[None, :]).reshape(cells, 5, cells, 5)
    probs = np.einsum("iajb,a,b->ij", dens, w, w)

    expected = n * probs
    keep = expected >= min_expected
    chi2 = float(((counts[keep] - expected[keep]) ** 2 / expected[keep]).sum())
    dof = int(keep.sum())
    rest_expected = n * (1.0 - probs[keep].sum())
    rest_count = n - counts[keep].sum()
    if rest_expected >= min_expected:
        chi2 += (rest_count - rest_expected) ** 2 / rest_expected
        dof += 1
    return float(chi2_dist.sf(chi2, dof - 1)), chi2, dof - 1


def bin_expectations(marginal, edges, n_samples, order=8):
    """Expected histogram counts via Gauss-Legendre quadrature per bin."""
    nodes, weights = leggauss(order)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    pts = mids[:, None] + half * nodes[None, :]
    vals = marginal(pts.ravel()).reshape(pts.shape)
    return n_samples * half * vals @ weights
