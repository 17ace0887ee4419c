import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdioph import _kernels_py, kernels

compiled = pytest.importorskip("hdioph._kernels")

SHIFT = 40
coord = st.integers(0, (1 << SHIFT) - 1)


@settings(max_examples=25, deadline=None)
@given(coord, coord, coord, st.sampled_from([(1, 2), (1, 1), (3, 7)]))
def test_carnot_dists_parity(X, Y, T, lam):
    a = compiled.carnot_dists(X, Y, T, SHIFT, lam[0], lam[1], 3000)
    b = _kernels_py.carnot_dists(X, Y, T, SHIFT, lam[0], lam[1], 3000)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("K", [1, 2, 50, 997, 5000])
def test_gauss_sieve_parity(K):
    pa, ma = compiled.gauss_sieve(K)
    pb, mb = _kernels_py.gauss_sieve(K)
    np.testing.assert_array_equal(pa, pb)
    np.testing.assert_array_equal(ma, mb)


@settings(max_examples=15, deadline=None)
@given(
    st.floats(-1, 1, allow_nan=False),
    st.floats(-1, 1, allow_nan=False),
    st.floats(-2, 2, allow_nan=False),
    st.sampled_from([(1.0, 1.0), (0.5, 1.25), (0.05, 0.0)]),
)
def test_siegel_scan_parity(ure, uim, vim, ca):
    C, alpha = ca
    ra, da = compiled.siegel_scan(ure, uim, vim, C, alpha, 30)
    rb, db = _kernels_py.siegel_scan(ure, uim, vim, C, alpha, 30)
    np.testing.assert_array_equal(ra, rb)
    np.testing.assert_array_equal(da, db)


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def _run(env_extra, code):
    env = dict(os.environ, **env_extra)
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True).stdout


def test_pure_python_switch():
    out = _run({"HDIOPH_PURE_PYTHON": "1"}, "from hdioph import kernels; print(kernels.BACKEND)")
    assert out.strip() == "python"


def test_cli_identical_across_backends():
    code = (
        "from hdioph import cli; "
        "cli.run(['count', 'siegel', '--samples', '2', '--Nnorm', '25', '--C', '1', '--alpha', '1'])"
    )
    fast = _run({"HDIOPH_PURE_PYTHON": "0"}, code)
    slow = _run({"HDIOPH_PURE_PYTHON": "1"}, code)
    assert fast == slow
