import numpy as np

from kasteleyn import _backend, _pykernels, quadrature
from kasteleyn.analytic import ModelParams
from kasteleyn.verify import run


def test_invariant_suite_passes():
    report = run()
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert report["passed"], failed
    assert {c["module"] for c in report["checks"]} >= {
        "analytic_core", "exact_kernels", "asymptotic_kernels", "finite_oracle",
        "correlation_engine"}


def test_backends_agree_on_power_sums():
    try:
        from kasteleyn import _ckernels
    except ImportError:
        import pytest
        pytest.skip("compiled kernels not built")
    p = ModelParams(0.5)
    t = quadrature.circle_table(p.c, 512)
    ks = np.arange(1, 41, dtype=np.int64)
    ls = ks + 2
    sh = np.linspace(0, 3, len(ks))
    args = (t.logg, t.logg1, t.weight, ks, ls, sh)
    assert np.allclose(_ckernels.power_sums(*args), _pykernels.power_sums(*args),
                       rtol=1e-13, atol=1e-300)


def test_backend_name():
    assert _backend.NAME in ("python", "cython")
