"""Modified Bessel evaluations across the series, integral, and asymptotic
regions, pinned against mpmath and against a hand-rolled series."""
import numpy as np
import pytest
from mpmath import mp

from btriple import OverflowGuard, bessel_eval, bessel_i, bessel_j, bessel_k

from .oracles import (
    I0_AT_1,
    I1_AT_1,
    J0_ZERO1_SQ,
    K0_AT_1,
    K1_AT_1,
    iv_series_partial,
    mp_iv,
    mp_iv_prime,
    mp_kv,
    mp_kv_prime,
)


class TestFrozenValues:
    def test_i0_i1_at_one(self):
        v0, d0 = bessel_i(0, 1.0)
        assert abs(v0 - I0_AT_1) < 1e-12
        assert abs(d0 - I1_AT_1) < 1e-12  # I_0' = I_1

    def test_k0_k1_at_one(self):
        v0, d0 = bessel_k(0, 1.0)
        assert abs(v0 - K0_AT_1) < 1e-12
        assert abs(d0 + K1_AT_1) < 1e-12  # K_0' = -K_1

    def test_small_order_small_z_limits(self):
        v0, _ = bessel_i(0, 1e-8)
        assert abs(v0 - 1.0) < 1e-15
        v3, _ = bessel_i(3, 1e-4)
        # leading term (z/2)^3 / 3!
        assert v3 == pytest.approx((5e-5) ** 3 / 6.0, rel=1e-10)

    def test_against_truncated_series(self):
        for k in (0, 1, 4):
            for z in (0.3, 1.7 + 0.4j, 2.0 - 1.0j):
                got, _ = bessel_i(k, z)
                want = iv_series_partial(k, z, terms=30)
                assert abs(got - want) < 1e-13 * max(1.0, abs(want))


class TestAgainstMpmath:
    @pytest.mark.parametrize("z", [
        0.5,                 # I series, K series
        1.9 + 0.3j,          # K series edge
        7.0,                 # K Laplace integral
        12.0 - 5.0j,         # K integral, complex
        25.0 + 9.0j,         # K integral outer edge
        80.0,                # K asymptotic, I series for small k
        300.0 + 40.0j,       # asymptotic, complex
        650.0,               # near the overflow guard
    ])
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 11])
    def test_i_and_k_with_derivatives(self, k, z):
        vi, dvi = bessel_i(k, z)
        vk, dvk = bessel_k(k, z)
        wi = complex(mp_iv(k, z))
        wdi = complex(mp_iv_prime(k, z))
        wk = complex(mp_kv(k, z))
        wdk = complex(mp_kv_prime(k, z))
        assert abs(vi - wi) < 1e-10 * abs(wi)
        assert abs(dvi - wdi) < 1e-10 * abs(wdi)
        assert abs(vk - wk) < 1e-9 * abs(wk)
        assert abs(dvk - wdk) < 1e-9 * abs(wdk)

    def test_i_large_order_series_region(self):
        # k^2 + 2k pushes the series crossover out for big orders
        k = 16
        z = 200.0 + 10.0j
        vi, _ = bessel_i(k, z)
        wi = complex(mp_iv(k, z))
        assert abs(vi - wi) < 1e-10 * abs(wi)


class TestWronskian:
    def test_random_orders_and_arguments(self):
        # I_k(z) K_k'(z) - I_k'(z) K_k(z) = -1/z
        rng = np.random.default_rng(77)
        for _ in range(50):
            k = int(rng.integers(0, 17))
            z = complex(rng.uniform(0.3, 20.0), rng.uniform(-10.0, 10.0))
            vi, dvi = bessel_i(k, z)
            vk, dvk = bessel_k(k, z)
            w = vi * dvk - dvi * vk
            assert abs(w + 1.0 / z) < 1e-10 * abs(1.0 / z), f"k={k}, z={z}"


class TestDomainGuards:
    def test_overflow_radius(self):
        with pytest.raises(OverflowGuard):
            bessel_i(0, 701.0)
        with pytest.raises(OverflowGuard):
            bessel_k(0, 800.0)

    def test_k_needs_right_half_plane(self):
        with pytest.raises(ValueError):
            bessel_k(0, -1.0)
        with pytest.raises(ValueError):
            bessel_k(2, 0.0 + 3.0j)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            bessel_i(-1, 1.0)
        with pytest.raises(ValueError):
            bessel_k(-2, 1.0)

    def test_nonfinite_argument(self):
        with pytest.raises(ValueError):
            bessel_i(0, complex(np.nan, 0.0))


class TestBesselJ:
    def test_against_mpmath(self):
        for k in (0, 1, 3, 6):
            for x in (0.5, 2.7, 5.3, 9.8):
                v, d = bessel_j(k, x)
                assert abs(v - float(mp.besselj(k, x))) < 1e-11
                if k == 0:
                    wd = -float(mp.besselj(1, x))
                else:
                    wd = 0.5 * float(mp.besselj(k - 1, x) - mp.besselj(k + 1, x))
                assert abs(d - wd) < 1e-11

    def test_first_zero_of_j0(self):
        v, _ = bessel_j(0, np.sqrt(J0_ZERO1_SQ))
        assert abs(v) < 1e-12

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            bessel_j(0, -1.0)


class TestBesselEval:
    def test_fields_match_components(self):
        ev = bessel_eval(3, 2.0 + 1.0j)
        vi, dvi = bessel_i(3, 2.0 + 1.0j)
        vk, dvk = bessel_k(3, 2.0 + 1.0j)
        assert ev.order == 3
        assert ev.argument == 2.0 + 1.0j
        assert ev.value_i == vi
        assert ev.value_iprime == dvi
        assert ev.value_k == vk
        assert ev.value_kprime == dvk
