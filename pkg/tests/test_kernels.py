import numpy as np
import pytest

from markovcycles import _kernels_py, kernels


@pytest.fixture(scope="module")
def pole_data():
    rng = np.random.RandomState(42)
    nodes = np.exp(1j * np.linspace(np.pi / 3, 2 * np.pi / 3, 96))
    w = rng.uniform(1.0, 4.0, 300)
    wt = rng.uniform(0.0, 1.0, 300)
    return nodes, w, wt


class TestPoleSums:
    def test_backends_agree(self, pole_data):
        nodes, w, wt = pole_data
        a = kernels.pole_pair_sums(nodes, w, wt)
        b = _kernels_py.pole_pair_sums(nodes, w, wt)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_against_mpmath(self, pole_data):
        import mpmath

        nodes, w, wt = pole_data
        got = kernels.pole_pair_sums(nodes[:4], w[:40], wt[:40])
        with mpmath.workdps(40):
            for k in range(4):
                z = mpmath.mpc(nodes[k])
                ref = sum(
                    1 / (z - mpmath.mpf(wi)) - 1 / (z - mpmath.mpf(wti))
                    for wi, wti in zip(w[:40], wt[:40])
                )
                assert abs(complex(ref) - got[k]) < 1e-13

    def test_mismatched_lengths(self, pole_data):
        nodes, w, wt = pole_data
        with pytest.raises(ValueError):
            kernels.pole_pair_sums(nodes, w, wt[:-1])

    def test_kahan_stability_long_cycle(self):
        # many terms: compensated summation keeps the error near one ulp
        nodes = np.array([np.exp(1j * np.pi / 2)])
        w = np.linspace(1.0, 4.0, 20001)
        wt = np.linspace(0.001, 0.999, 20001)
        a = kernels.pole_pair_sums(nodes, w, wt)
        b = _kernels_py.pole_pair_sums(nodes, w, wt)
        assert abs(a[0] - b[0]) / abs(a[0]) < 1e-13


class TestEisenstein:
    def test_backends_agree(self):
        rng = np.random.RandomState(3)
        q = (rng.uniform(-1, 1, 64) + 1j * rng.uniform(-1, 1, 64)) * 0.004
        s3 = np.array([float(x) for x in range(1, 40)]) ** 3
        s5 = np.array([float(x) for x in range(1, 40)]) ** 5
        a4, a6 = kernels.eisenstein_pair(q, s3, s5, 30)
        b4, b6 = _kernels_py.eisenstein_pair(q, s3, s5, 30)
        assert np.max(np.abs(a4 - b4)) < 1e-14
        assert np.max(np.abs(a6 - b6)) < 1e-14

    def test_truncation_guard(self):
        q = np.array([0.001 + 0j])
        with pytest.raises(ValueError):
            kernels.eisenstein_pair(q, np.ones(5), np.ones(5), 10)

    def test_scalar_series_value(self):
        # E4(q) at q = 0.01 against a direct python sum
        from markovcycles.modfun import divisor_sums

        s3 = np.array(divisor_sums(3, 64), dtype=float)
        s5 = np.array(divisor_sums(5, 64), dtype=float)
        q = np.array([0.01 + 0j])
        e4, e6 = kernels.eisenstein_pair(q, s3, s5, 64)
        ref4 = 1 + 240 * sum(s3[n - 1] * 0.01**n for n in range(1, 65))
        ref6 = 1 - 504 * sum(s5[n - 1] * 0.01**n for n in range(1, 65))
        assert e4[0] == pytest.approx(ref4, rel=1e-14)
        assert e6[0] == pytest.approx(ref6, rel=1e-14)


class TestSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("compiled", "python")

    def test_fallback_importable(self):
        assert callable(_kernels_py.pole_pair_sums)
        assert callable(_kernels_py.eisenstein_pair)
