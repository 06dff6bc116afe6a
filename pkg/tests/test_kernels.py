"""Generator, shuffle and enumeration kernels (both backends)."""

import itertools

import numpy as np
import pytest
from scipy import stats

from permsaddle import _backend, _fallback, _rng

BACKENDS = _backend.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def kern(request):
    return BACKENDS[request.param]


class TestSplitMix:
    def test_reference_sequence(self):
        # SplitMix64 seeded with state 0
        assert [_rng.word(0, c) for c in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_vector_matches_scalar(self):
        key = _rng.derive_key(99, 3)
        c = np.arange(500)
        assert _rng.word_array(key, c).tolist() == [_rng.word(key, int(i)) for i in c]

    @pytest.mark.parametrize("bound", [1, 2, 7, 1000, 3 * 2**30])
    def test_bounded_vector_matches_scalar(self, bound):
        # 3 * 2**30 rejects about a quarter of raw draws
        key = _rng.derive_key(5)
        c = np.arange(2000)
        got = _rng.bounded_array(key, c, bound)
        assert got.tolist() == [_rng.bounded(key, int(i), bound) for i in c]
        assert got.min() >= 0 and got.max() < bound

    def test_derive_key_separates_labels(self):
        keys = {_rng.derive_key(1), _rng.derive_key(2), _rng.derive_key(1, 0), _rng.derive_key(1, 1)}
        assert len(keys) == 4

    def test_negative_seed(self):
        with pytest.raises(ValueError):
            _rng.derive_key(-1)


class TestMonteCarloKernel:
    def test_shuffle_is_uniform(self, kern):
        # a-scores are powers of ten, so each permutation has its own statistic
        a = np.array([1.0, 10.0, 100.0, 1000.0])
        b = np.array([0.0, 1.0, 2.0, 3.0])
        out = kern.mc_statistics(a, b, _rng.derive_key(2024), 0, 240_000)
        _, counts = np.unique(out, return_counts=True)
        assert counts.size == 24
        assert stats.chisquare(counts).pvalue > 1e-3

    def test_backends_bit_identical(self):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=13), rng.normal(size=13)
        key = _rng.derive_key(77)
        outs = [k.mc_statistics(a, b, key, 5, 20_000) for k in BACKENDS.values()]
        for o in outs[1:]:
            assert np.array_equal(o, outs[0])

    def test_chunking_invariant(self, kern):
        a = b = np.arange(1.0, 9.0)
        key = _rng.derive_key(3)
        whole = kern.mc_statistics(a, b, key, 0, 1000)
        parts = np.concatenate([kern.mc_statistics(a, b, key, 0, 300), kern.mc_statistics(a, b, key, 300, 700)])
        assert np.array_equal(whole, parts)

    def test_values_are_attainable(self, kern):
        a = b = np.arange(1.0, 6.0)
        out = kern.mc_statistics(a, b, _rng.derive_key(0), 0, 5000)
        assert out.min() >= 35 and out.max() <= 55
        assert np.all(out == np.round(out))


class TestEnumerationKernel:
    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_lexicographic_order(self, kern, n):
        rng = np.random.default_rng(n)
        a, b = rng.normal(size=n), rng.normal(size=n)
        expect = [sum(a[k] * b[p[k]] for k in range(n)) for p in itertools.permutations(range(n))]
        got = kern.all_statistics(a, b)
        np.testing.assert_allclose(got, expect, rtol=0, atol=1e-12)

    def test_backends_bit_identical(self):
        rng = np.random.default_rng(8)
        a, b = rng.normal(size=8), rng.normal(size=8)
        outs = [k.all_statistics(a, b) for k in BACKENDS.values()]
        for o in outs[1:]:
            assert np.array_equal(o, outs[0])

    def test_fallback_lex_permutations(self):
        perms = _fallback._lex_permutations(4)
        assert perms.tolist() == [list(p) for p in itertools.permutations(range(4))]


def test_backend_selection_env(monkeypatch):
    monkeypatch.setenv("PERMSADDLE_PURE_PYTHON", "1")
    assert _backend._select() is _fallback
