import numpy as np
import pytest

from iterfilt import Filter, convolve_self


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_filter(rng, l):
    """Random symmetric decreasing positive filter of half length l."""
    raw = np.sort(rng.uniform(0.05, 1.0, l + 1))[::-1]
    total = raw[0] + 2.0 * raw[1:].sum()
    return Filter(raw / total)


def random_doubled_filter(rng, n):
    """Random self-convolved filter admissible for dimension n."""
    cap = (n - 1) // 4
    l_base = int(rng.integers(1, max(cap, 1) + 1))
    return convolve_self(random_filter(rng, l_base))


def sine_trend(n, period, amplitude=1.0, trend=1.5, phase=0.4):
    """Sine of an integer sample period plus a constant, with the exact
    oscillatory component returned alongside."""
    j = np.arange(n)
    exact = amplitude * np.sin(2.0 * np.pi * j / period + phase)
    return exact + trend, exact
