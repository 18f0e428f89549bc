import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hardy_lab import _accel

from conftest import random_state, random_unitary

needs_numba = pytest.mark.skipif(_accel.nb is None, reason="numba not installed")


@needs_numba
def test_single_qubit_kernels_agree(rng):
    for _ in range(300):
        m = int(rng.integers(1, 9))
        psi, g = random_state(rng, m), random_unitary(rng)
        site = int(rng.integers(1, m + 1))
        np.testing.assert_allclose(_accel.apply_1q_numba(psi, m, site, g), _accel.apply_1q_numpy(psi, m, site, g),
                                   atol=1e-15)


@needs_numba
def test_mcx_kernels_agree(rng):
    for _ in range(300):
        m = int(rng.integers(2, 9))
        psi = random_state(rng, m)
        sites = rng.permutation(np.arange(1, m + 1))
        target, controls = int(sites[0]), sorted(int(s) for s in sites[1:1 + int(rng.integers(1, m))])
        assert np.array_equal(_accel.mcx_numba(psi, m, controls, target), _accel.mcx_numpy(psi, m, controls, target))


@needs_numba
def test_popcount_kernels_agree():
    for m in range(1, 13):
        assert np.array_equal(_accel.popcount_numba(m), _accel.popcount_numpy(m))
    assert list(_accel.popcount_numpy(3)) == [0, 1, 1, 2, 1, 2, 2, 3]


def test_kernels_do_not_mutate_input(rng):
    psi = random_state(rng, 4)
    before = psi.copy()
    _accel.apply_1q(psi, 4, 2, random_unitary(rng))
    _accel.mcx(psi, 4, [1, 3], 4)
    assert np.array_equal(psi, before)


def _selected(env_value):
    env = {**os.environ, "HARDY_LAB_DISABLE_NUMBA": env_value}
    code = "from hardy_lab import _accel; print(_accel.USE_NUMBA, _accel.apply_1q.__name__)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                          check=True).stdout.split()


def test_env_flag_selects_numpy_path():
    assert _selected("1") == ["False", "apply_1q_numpy"]
    assert _selected("true") == ["False", "apply_1q_numpy"]


@needs_numba
def test_numba_is_default_when_available():
    assert _selected("0") == ["True", "apply_1q_numba"]


def test_numpy_path_reproduces_histogram():
    code = ("import json; from hardy_lab import circuit as c; h = c.run_exact(c.build_circuit_for_A(4, 0.8, 'full-cd'));"
            "print(json.dumps(h.probs.tolist()))")
    outs = []
    for flag in ("0", "1"):
        env = {**os.environ, "HARDY_LAB_DISABLE_NUMBA": flag}
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                   check=True).stdout)
    a, b = (np.array(json.loads(o)) for o in outs)
    np.testing.assert_allclose(a, b, atol=1e-15)
