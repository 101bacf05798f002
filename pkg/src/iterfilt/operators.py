"""Structured smoothing operators and their spectral machinery.

A symmetric filter plus a boundary rule induces an n x n operator: Toeplitz
for zero, circulant for periodic, Toeplitz-plus-Hankel for reflective and
the anti-reflective algebra for anti-reflective extension. The operator is
applied matrix-free (extend, then convolve); dense materialization built
from the matrix structure serves as an independent oracle. Closed-form
eigenvalues, the eigenvectors of eigenvalue one, the diagonalizing
transforms and a k-step power application through the eigenbasis live here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryKind, extend
from .filters import Filter

__all__ = [
    "StructuredOperator",
    "Spectrum",
    "unit_eigenvectors",
    "transform_apply",
    "diagonalized_power_apply",
]

DENSE_GUARD = 4096
_MULT_TOL = 1e-10

# kinds with a diagonalizing transform and closed-form eigenvalues
TRANSFORM_KINDS = (BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE, BoundaryKind.ANTIREFLECTIVE)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with unit/zero multiplicities.

    Multiplicities are counted with absolute tolerance 1e-10, which matters
    because wide filters cluster eigenvalues near one.
    """

    eigenvalues: np.ndarray
    unit_multiplicity: int
    zero_multiplicity: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> "Spectrum":
        vals = np.sort(np.asarray(values, dtype=float))[::-1]
        return cls(
            eigenvalues=vals,
            unit_multiplicity=int(np.count_nonzero(np.abs(vals - 1.0) <= _MULT_TOL)),
            zero_multiplicity=int(np.count_nonzero(np.abs(vals) <= _MULT_TOL)),
        )


@dataclass(frozen=True)
class StructuredOperator:
    """The smoothing operator W induced by a filter and a boundary rule."""

    filter: Filter
    kind: BoundaryKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", BoundaryKind(self.kind))
        if self.n < 3:
            raise ValueError("operator dimension must be at least 3")
        if self.filter.length > (self.n - 1) // 2:
            raise ValueError(
                f"filter length {self.filter.length} exceeds floor((n-1)/2) = {(self.n - 1) // 2}"
            )

    def apply(self, x) -> np.ndarray:
        """Matrix-free product W x: extend x by the filter length, convolve.

        Equals y_i = sum_{j=i-l}^{i+l} x_ext(j) w_|i-j| with x_ext the
        boundary extension of x.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        ext = extend(x, self.kind, self.filter.length).values
        # symmetric taps make convolution equal to correlation
        return np.convolve(ext, self.filter.full(), mode="valid")

    def to_dense(self) -> np.ndarray:
        """Materialize W from its matrix structure (oracle path).

        Built directly from the Toeplitz / circulant / Toeplitz-plus-Hankel /
        anti-reflective block templates, independently of :meth:`apply`.
        """
        n, l = self.n, self.filter.length
        if n > DENSE_GUARD:
            raise ValueError(f"dense materialization limited to n <= {DENSE_GUARD}")
        w = np.zeros(2 * n + 2)
        w[: l + 1] = self.filter.half_weights
        i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")

        if self.kind is BoundaryKind.ZERO:
            return w[np.abs(i - j)]

        if self.kind is BoundaryKind.PERIODIC:
            symbol = np.zeros(n)
            symbol[: l + 1] = self.filter.half_weights
            symbol[n - l:] += self.filter.half_weights[:0:-1]
            return symbol[(i - j) % n]

        if self.kind is BoundaryKind.REFLECTIVE:
            # Hankel corrections w_{i+j+1} (top-left) and w_{2n-1-i-j} (bottom-right)
            return w[np.abs(i - j)] + w[i + j + 1] + w[2 * n - 1 - i - j]

        # anti-reflective: zero first/last rows except unit diagonal corners,
        # ramp first/last columns, interior Toeplitz minus Hankel block
        half = self.filter.half_weights
        z = 2.0 * np.concatenate([np.cumsum(half[::-1])[::-1], [0.0, 0.0]])
        W = np.zeros((n, n))
        W[0, 0] = z[1] + half[0]
        W[n - 1, n - 1] = z[1] + half[0]
        rows = np.arange(1, l + 1)
        W[rows, 0] = half[1:] + z[2: l + 2]
        W[n - 1 - rows, n - 1] = W[rows, 0]
        ii = i[: n - 2, : n - 2]
        jj = j[: n - 2, : n - 2]
        W[1: n - 1, 1: n - 1] = w[np.abs(ii - jj)] - w[ii + jj + 2] - w[2 * n - 4 - ii - jj]
        return W

    def eigenvalues(self) -> Spectrum:
        """Closed-form spectrum for periodic, reflective or anti-reflective.

        * periodic:        w_0 + 2 sum_j w_j cos(2 j i pi / n),   i = 0..n-1
        * reflective:      w_0 + 2 sum_j w_j cos(j i pi / n),     i = 0..n-1
        * anti-reflective: {1, 1} and w_0 + 2 sum_j w_j cos(j i pi / (n-1)),
          i = 1..n-2

        Raises ValueError for the zero kind, which has no closed form; use
        :meth:`dense_spectrum` there instead.
        """
        return Spectrum.from_values(self._transform_eigenvalues())

    def dense_spectrum(self) -> Spectrum:
        """Numerical spectrum of the dense materialization (oracle path)."""
        dense = self.to_dense()
        if self.kind is BoundaryKind.ANTIREFLECTIVE:
            vals = np.linalg.eigvals(dense)
            if np.abs(vals.imag).max() > 1e-8:
                raise ValueError("anti-reflective spectrum unexpectedly non-real")
            return Spectrum.from_values(vals.real)
        return Spectrum.from_values(np.linalg.eigvalsh(dense))

    # -- internal ---------------------------------------------------------

    def _symbol(self, theta: np.ndarray) -> np.ndarray:
        """Filter frequency response w_0 + 2 sum_j w_j cos(j theta)."""
        w = self.filter.half_weights
        j = np.arange(1, w.size)
        return w[0] + 2.0 * (w[1:] * np.cos(np.multiply.outer(theta, j))).sum(axis=-1)

    def _transform_eigenvalues(self) -> np.ndarray:
        """Eigenvalues ordered to match the diagonalizing transform's basis."""
        n = self.n
        if self.kind is BoundaryKind.PERIODIC:
            return self._symbol(2.0 * np.pi * np.arange(n) / n)
        if self.kind is BoundaryKind.REFLECTIVE:
            return self._symbol(np.pi * np.arange(n) / n)
        if self.kind is BoundaryKind.ANTIREFLECTIVE:
            inner = self._symbol(np.pi * np.arange(1, n - 1) / (n - 1))
            return np.concatenate([[1.0], inner, [1.0]])
        raise ValueError("no closed-form eigenvalues for zero boundary conditions")


def unit_eigenvectors(kind: BoundaryKind, n: int) -> list[np.ndarray]:
    """Eigenvectors of eigenvalue one, valid for every admissible filter.

    Periodic and reflective share the constant vector; anti-reflective has
    the two boundary ramps. The zero kind has no unit eigenvalue.
    """
    kind = BoundaryKind(kind)
    if kind in (BoundaryKind.PERIODIC, BoundaryKind.REFLECTIVE):
        return [np.ones(n)]
    if kind is BoundaryKind.ANTIREFLECTIVE:
        ramp = np.arange(n, dtype=float)
        return [ramp, ramp[::-1].copy()]
    raise ValueError("zero boundary conditions have no unit eigenvalue")


# -- trigonometric transforms ------------------------------------------------


def _dft_matrix(n: int) -> np.ndarray:
    """Unitary inverse-DFT matrix exp(2 pi i jk / n) / sqrt(n)."""
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


def _dct3_matrix(n: int) -> np.ndarray:
    """Orthogonal matrix sqrt((2 - delta_i0)/n) cos(i (2j+1) pi / (2n))."""
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return np.sqrt((2.0 - (i == 0)) / n) * np.cos(i * (2 * j + 1) * np.pi / (2 * n))


def _dst1_matrix(m: int) -> np.ndarray:
    """Symmetric self-inverse matrix sqrt(2/(m+1)) sin((i+1)(j+1) pi / (m+1))."""
    i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    return np.sqrt(2.0 / (m + 1)) * np.sin((i + 1) * (j + 1) * np.pi / (m + 1))


def _ramps(n: int) -> tuple[np.ndarray, np.ndarray, float]:
    eta = float(np.sqrt(np.sum(np.arange(n, dtype=float) ** 2)))
    up = np.arange(n, dtype=float)
    return up[::-1].copy(), up, eta


def _art_apply(c: np.ndarray) -> np.ndarray:
    """Anti-reflective transform: two normalized ramp columns around an
    embedded sine-transform block."""
    n = c.size
    down, up, eta = _ramps(n)
    y = np.zeros(n)
    y[0] = c[0] * (n - 1) / eta
    y[-1] = c[-1] * (n - 1) / eta
    y[1:-1] = (
        _dst1_matrix(n - 2) @ c[1:-1]
        + c[0] * down[1:-1] / eta
        + c[-1] * up[1:-1] / eta
    )
    return y


def _art_inverse_apply(y: np.ndarray) -> np.ndarray:
    """Invert the anti-reflective transform.

    The first and last rows have a single nonzero entry, which pins the two
    ramp coefficients; subtracting the ramp contribution from the interior
    leaves a plain sine-transform problem, and that transform is its own
    inverse.
    """
    n = y.size
    down, up, eta = _ramps(n)
    c = np.zeros(n)
    c[0] = eta * y[0] / (n - 1)
    c[-1] = eta * y[-1] / (n - 1)
    t = y[1:-1] - c[0] * down[1:-1] / eta - c[-1] * up[1:-1] / eta
    c[1:-1] = _dst1_matrix(n - 2) @ t
    return c


def transform_apply(which: str, x, *, fast: bool = False) -> np.ndarray:
    """Apply one of the diagonalizing transforms to a vector.

    Parameters
    ----------
    which : {'dft', 'dct3', 'dst1', 'art', 'art_inverse'}
        Transform to apply. 'dft' is the unitary transform diagonalizing
        circulants (complex output); 'dct3' the orthogonal cosine transform
        for the reflective algebra; 'dst1' the self-inverse sine transform
        (acts on vectors of length n-2); 'art' / 'art_inverse' the
        non-orthogonal anti-reflective transform and its inverse.
    fast : bool
        Use an FFT for 'dft' instead of the direct O(n^2) product. Only
        supported there.
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("transform input must be a nonempty vector")
    if fast and which != "dft":
        raise ValueError("the fast path is only available for 'dft'")
    if which == "dft":
        if fast:
            return np.fft.ifft(x) * np.sqrt(x.size)
        return _dft_matrix(x.size) @ x
    xf = np.asarray(x, dtype=float)
    if which == "dct3":
        return _dct3_matrix(xf.size) @ xf
    if which == "dst1":
        return _dst1_matrix(xf.size) @ xf
    if which in ("art", "art_inverse"):
        if xf.size < 3:
            raise ValueError("anti-reflective transform needs length >= 3")
        return _art_apply(xf) if which == "art" else _art_inverse_apply(xf)
    raise ValueError(f"unknown transform {which!r}")


def _to_eigenbasis(op: StructuredOperator, s: np.ndarray, fast: bool) -> np.ndarray:
    if op.kind is BoundaryKind.PERIODIC:
        if fast:
            return np.fft.fft(s) / np.sqrt(op.n)
        return np.conj(_dft_matrix(op.n)) @ s
    if op.kind is BoundaryKind.REFLECTIVE:
        return _dct3_matrix(op.n) @ s
    return _art_inverse_apply(s)


def _from_eigenbasis(op: StructuredOperator, c: np.ndarray, fast: bool) -> np.ndarray:
    if op.kind is BoundaryKind.PERIODIC:
        if fast:
            return (np.fft.ifft(c) * np.sqrt(op.n)).real
        return (_dft_matrix(op.n) @ c).real
    if op.kind is BoundaryKind.REFLECTIVE:
        return _dct3_matrix(op.n).T @ c
    return _art_apply(c)


def diagonalized_power_apply(op: StructuredOperator, s, k: int, *, fast: bool = False) -> np.ndarray:
    """Compute (I - W)^k s through the operator's eigenbasis.

    One transform round-trip regardless of k, so the cost is independent of
    the iteration count. Only the kinds with a diagonalizing transform are
    supported (periodic, reflective, anti-reflective); ``fast`` switches the
    periodic kind to FFTs.

    Notes
    -----
    The cosine-transform matrix of the reflective algebra has the
    eigenvectors as rows, so that round trip is Q^T diag(...) Q; for
    periodic and anti-reflective the transforms' columns are the
    eigenvectors and the round trip is Q diag(...) Q^{-1}.
    """
    kind = BoundaryKind(op.kind)
    if kind not in TRANSFORM_KINDS:
        raise ValueError(f"no diagonalizing transform for kind {kind.value!r}")
    if fast and kind is not BoundaryKind.PERIODIC:
        raise ValueError("the fast path is only available for the periodic kind")
    if k < 0:
        raise ValueError("power must be nonnegative")
    s = np.asarray(s, dtype=float)
    if s.shape != (op.n,):
        raise ValueError(f"expected vector of length {op.n}, got shape {s.shape}")
    if k == 0:
        return s.copy()
    z = 1.0 - op._transform_eigenvalues()
    c = _to_eigenbasis(op, s, fast)
    return _from_eigenbasis(op, z**k * c, fast)
