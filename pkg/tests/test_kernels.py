import os
import subprocess
import sys

import numpy as np
import pytest

from cutfree import _kernels as k

needs_numba = pytest.mark.skipif(not k.HAVE_NUMBA, reason="numba not installed")


def _random_rel(rng, n, p=0.2):
    return rng.random((n, n)) < p


def test_closure_numpy_matches_reference():
    rng = np.random.default_rng(0)
    for n in range(1, 9):
        rel = _random_rel(rng, n)
        want = rel | np.eye(n, dtype=bool)
        for _ in range(n):
            want = want | ((want.astype(int) @ want.astype(int)) > 0)
        assert np.array_equal(k.closure_numpy(rel), want)


@needs_numba
def test_closure_paths_agree():
    rng = np.random.default_rng(1)
    for n in (1, 5, 20):
        rel = _random_rel(rng, n)
        assert np.array_equal(k.closure_numpy(rel), k.closure_numba(rel))


def _chain(n):
    return np.fromfunction(lambda i, j: i <= j, (n, n), dtype=int)


def test_maps_into_chain_count_monotone_maps():
    # two incomparable generators into a 3-chain: 9 maps; a <= b: 6
    free = np.zeros((2, 2), dtype=bool)
    np.fill_diagonal(free, True)
    none = np.zeros(2, dtype=bool)
    assert k.maps_numpy(free, none, none, _chain(3), 0, 2).shape == (9, 2)
    linked = free.copy()
    linked[0, 1] = True
    rows = k.maps_numpy(linked, none, none, _chain(3), 0, 2)
    assert rows.shape == (6, 2)
    assert (rows[:, 0] <= rows[:, 1]).all()


def test_maps_respect_markers():
    gen = np.eye(2, dtype=bool)
    rows = k.maps_numpy(gen, np.array([True, False]), np.array([False, True]), _chain(3), 0, 2)
    assert rows.tolist() == [[0, 2]]


@needs_numba
def test_maps_paths_agree():
    rng = np.random.default_rng(2)
    car = _chain(4)
    for _ in range(20):
        g = k.closure_numpy(_random_rel(rng, 4, 0.15))
        bot = rng.random(4) < 0.1
        top = (rng.random(4) < 0.1) & ~bot
        a = k.maps_numpy(g, bot, top, car, 0, 3)
        b = k.maps_numba(g, bot, top, car, 0, 3)
        assert np.array_equal(a, b)


def _chain_psc(n):
    meet = np.minimum.outer(np.arange(n), np.arange(n))
    pcomp = np.array([n - 1] + [0] * (n - 1))
    return meet, pcomp


def test_violations_empty_for_chain():
    meet, pcomp = _chain_psc(4)
    assert len(k.violations_numpy(meet, pcomp, 0, 3)) == 0


def test_violations_flag_broken_pseudocomplement():
    meet, pcomp = _chain_psc(3)
    pcomp = pcomp.copy()
    pcomp[1] = 1
    laws = {int(row[0]) for row in k.violations_numpy(meet, pcomp, 0, 2)}
    assert k.PSEUDOCOMPLEMENT in laws


@needs_numba
def test_violations_paths_agree():
    rng = np.random.default_rng(3)
    for _ in range(30):
        meet = rng.integers(0, 4, (4, 4))
        pcomp = rng.integers(0, 4, 4)
        a = np.asarray(k.violations_numpy(meet, pcomp, 0, 3))
        b = np.asarray(k.violations_numba(meet, pcomp, 0, 3))
        assert sorted(map(tuple, a.tolist())) == sorted(map(tuple, b.tolist()))


def test_env_flag_disables_numba():
    code = "from cutfree import _kernels as k; print(k.USE_NUMBA)"
    env = dict(os.environ, CUTFREE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
