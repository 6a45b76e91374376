import math

import numpy as np
import pytest

from zlab.duality import (
    Peak,
    SampledCurve,
    best_polarity_match,
    detect_peaks,
    match_peaks,
    primes_to_zeros_sum,
    uniform_grid,
    zeros_to_primes_sum,
)
from zlab.errors import DomainError


def test_grid():
    g = uniform_grid(10, 40, 0.01)
    assert g.size == 3001 and g[0] == 10 and g[-1] == pytest.approx(40)
    with pytest.raises(DomainError):
        uniform_grid(0, 1, 0)


def test_primes_to_zeros_cutoff_three():
    c = primes_to_zeros_sum(np.array([0.0]), 3)
    assert c.ys[0] == pytest.approx(math.log(2) / math.sqrt(2) + math.log(3) / math.sqrt(3), abs=1e-12)
    assert c.ys[0] == pytest.approx(1.1244132, abs=1e-6)


def test_primes_to_zeros_cutoff_two():
    th = np.linspace(0, 50, 77)
    c = primes_to_zeros_sum(th, 2)
    assert np.allclose(c.ys, math.log(2) / math.sqrt(2) * np.cos(th * math.log(2)), atol=1e-14)
    with pytest.raises(DomainError):
        primes_to_zeros_sum(th, 1.5)


def test_primes_to_zeros_peaks_near_zeros(table_100):
    c = primes_to_zeros_sum((10, 40, 0.01), 1000)
    m = best_polarity_match(c, table_100.gammas[:5], 0.5, 0.5)
    assert m.report.matched >= 4


def test_pole_removal_sharpens(table_100):
    targets = table_100.gammas[:5]
    raw = best_polarity_match(primes_to_zeros_sum((10, 40, 0.01), 1000), targets, 0.5, 0.5)
    clean = best_polarity_match(primes_to_zeros_sum((10, 40, 0.01), 1000, remove_pole_term=True),
                                targets, 0.5, 0.5)
    assert clean.report.matched == 5
    assert clean.report.mean_offset < raw.report.mean_offset


def test_even_symmetry(table_100):
    th = uniform_grid(0.0, 30.0, 0.05)
    a = primes_to_zeros_sum(th, 100)
    b = primes_to_zeros_sum(-th, 100)
    assert a.ys.tobytes() == b.ys.tobytes()
    s = np.exp(th[1:] / 10)
    x = zeros_to_primes_sum(s, 50, table_100)
    # cos(gamma log s) is even in log s: s and 1/s give the same sum
    ls = np.log(s)
    mirrored = sum(np.cos(g * -ls) for g in table_100.gammas[:50])
    assert np.allclose(x.ys, mirrored, atol=1e-9)


def test_zeros_to_primes_basic(table_100):
    c = zeros_to_primes_sum((1.5, 3.0, 0.1), 0, table_100)
    assert np.all(c.ys == 0)
    with pytest.raises(DomainError):
        zeros_to_primes_sum((1.5, 3.0, 0.1), 101, table_100)
    with pytest.raises(DomainError):
        zeros_to_primes_sum(np.array([1.0, 2.0]), 5, table_100)


def test_zeros_to_primes_prime_powers(zeros_2000):
    c = zeros_to_primes_sum((1.5, 10.5, 0.005), 1000, zeros_2000)
    m = best_polarity_match(c, [2, 3, 4, 5, 7, 8, 9], 0.05, 5.0)
    assert m.report.matched == 7
    assert any(abs(p.x - 2.0) <= 0.05 for p in m.peaks)
    # excess at prime powers, measured on the polarity that peaks there
    ys = m.polarity * c.ys
    med = np.median(ys)
    for s in (2, 3, 4, 5, 7, 8, 9):
        assert np.interp(s, c.xs, ys) > med


def test_detect_peaks_simple():
    c = SampledCurve(np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 0.0]), "primes_to_zeros", 0)
    peaks = detect_peaks(c, 0.1)
    assert len(peaks) == 1 and peaks[0].x == pytest.approx(1.0)
    mono = SampledCurve(np.arange(10.0), np.arange(10.0), "primes_to_zeros", 0)
    assert detect_peaks(mono, 0.1) == []
    with pytest.raises(DomainError):
        detect_peaks(c, 0)


def test_parabolic_refinement_exact_for_parabola():
    xs = np.arange(0, 2, 0.1)
    c = SampledCurve(xs, 3 - (xs - 0.937) ** 2, "primes_to_zeros", 0)
    (p,) = detect_peaks(c, 0.01)
    assert p.x == pytest.approx(0.937, abs=1e-12)
    assert p.y == pytest.approx(3.0, abs=1e-12)


def test_match_examples():
    r = match_peaks([14.1], [14.134725], 0.5)
    assert r.matched == 1 and r.fraction == 1.0
    assert r.mean_offset == pytest.approx(0.034725)
    r = match_peaks([1.0, 2.0], [5.0, 6.0], 0.1)
    assert r.matched == 0 and math.isnan(r.mean_offset)
    r = match_peaks([Peak(1.0, 0, 1), Peak(1.05, 0, 1)], [1.04], 0.5)
    assert r.pairs == [(1.05, 1.04)]
    with pytest.raises(DomainError):
        match_peaks([1.0], [1.0], 0)


def test_thread_independence(monkeypatch, zeros_2000):
    grid = (1.5, 30.0, 0.001)
    monkeypatch.setenv("ZLAB_THREADS", "1")
    a = zeros_to_primes_sum(grid, 300, zeros_2000)
    monkeypatch.setenv("ZLAB_THREADS", "3")
    b = zeros_to_primes_sum(grid, 300, zeros_2000)
    assert a.ys.tobytes() == b.ys.tobytes()
    assert a.to_csv() == b.to_csv()
