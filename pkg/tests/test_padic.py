from kuengine.padic import nu, r, r_prime, table35_row, w_degree

import pytest


def test_nu_basics():
    assert nu(2, 1) == 0
    assert nu(2, 12) == 2
    assert nu(5, 125) == 3
    assert nu(3, 7) == 0
    with pytest.raises(ValueError):
        nu(2, 0)


def test_r_small_values():
    assert [r(2, j) for j in range(5)] == [1, 2, 4, 7, 13]
    # r'(2) = p^3 - p^2 + p - 2 (closed form for the j = 2 case)
    for p in (2, 3, 5):
        assert r_prime(p, 2) == p**3 - p**2 + p - 2
    assert r_prime(5, 2) == 103
    assert r(3, 2) + r_prime(3, 2) == 27


def test_recurrence_identities():
    for p in (2, 3, 5):
        assert r(p, 0) == 1 and r(p, 1) == p
        assert r_prime(p, 0) == p - 1 and r_prime(p, 1) == p * p - p
        for j in range(31):
            assert r(p, j + 2) == r(p, j) + p ** (j + 1) * (p - 1) + 1
            assert r_prime(p, j + 2) == r_prime(p, j) + p ** (j + 2) * (p - 1) - 1
            assert r(p, j) + r_prime(p, j) == p ** (j + 1)
            assert r(p, j + 2) + r_prime(p, j) == p ** (j + 2) + 1
            if j >= 1:
                assert r(p, j) - r_prime(p, j - 1) == j
                assert (p - 1) * (r(p, j - 1) + j - 1) < p**j
                assert p ** (j + 1) - p**j <= r_prime(p, j) < p ** (j + 1) - p ** (j - 1)


def test_w_degrees():
    assert w_degree(2, 1) == 9
    assert w_degree(2, 2) == 17
    for p in (2, 3, 5):
        assert w_degree(p, 1) == 2 * p * p + 1
        for j in range(1, 8):
            assert w_degree(p, j + 2) == w_degree(p, j) + 2 * (p - 1) * (
                p**j + p ** (j + 2) + 1
            )


def test_table35_spot_rows():
    assert table35_row(0, 1) == (6, 26, 10)
    assert table35_row(1, 3) == (626, 1126, 714)
    assert table35_row(0, 4) == (626, 3126, 1050)
