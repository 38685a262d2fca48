"""Smoke test for the krydim Python extension.

Build and install first:

    pip install ./crates/python --no-build-isolation
"""

import json
import math
import os
import tempfile

import krydim


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    x = krydim.gen_signal_data(200, 2000, [20.0, 15.0, 10.0, 8.0, 6.0], 1.0, seed=7)
    assert (x.p, x.n) == (200, 2000)
    assert not x.is_sparse

    result = krydim.estimate_dimension(x, 1.0, seed=7)
    assert result.q_hat == 5, result
    assert len(result.ic_trace) >= 6
    assert all(len(row) == result.q_hat for row in result.subspace)
    report = json.loads(result.to_json())
    assert report["q_hat"] == 5 and "timings" not in report

    spectrum = x.spectrum()
    top = krydim.topk_spectrum(x, 5, m=10)[0]
    assert all(close(a, b, 1e-6 * spectrum[0]) for a, b in zip(top, spectrum))
    assert krydim.mdl_estimate(spectrum, x.n) == 5

    q, trace = krydim.ic_full_spectrum([9.0, 7.0, 1.0, 1.0, 1.0, 1.0], 1.0, 100)
    assert q == 2 and len(trace) == 6

    cn = math.log(400)
    assert close(krydim.overestimation_threshold(1.0, cn, 400, 200, 5), 2.7046, 1e-4)
    assert close(krydim.cn_lower_bound(200, 400, 5), 7.556, 1e-3)
    assert close(krydim.tracy_widom_edge(1.0, 200, 400), (1 + math.sqrt(0.5)) ** 2, 1e-12)
    details = json.loads(krydim.detection_report(1.0, cn, 400, 200, 5))
    assert details["satisfied"]["cn_sufficient"] is False

    sparse = krydim.gen_sparse_lowrank(300, 3, 5.0, 0.0, density=0.2, seed=1)
    assert sparse.is_sparse
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "x.mtx")
        sparse.save(path)
        again = krydim.ObservationMatrix.load(path)
        assert again.nnz == sparse.nnz

    try:
        krydim.estimate_dimension(x, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative sigma accepted")

    print(f"krydim {krydim.__version__}: smoke test passed (q_hat={result.q_hat})")


if __name__ == "__main__":
    main()
