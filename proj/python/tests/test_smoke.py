import numpy as np
import pytest

import sepnmf


def test_two_by_three():
    m = np.array([[1.0, 0.0, 0.5], [0.0, 1.0, 0.5]])
    res = sepnmf.extract(m, r=2)
    assert sorted(res["indices"]) == [0, 1]
    assert sepnmf.extract(m, r=2, fast=True)["indices"] == res["indices"]


def test_worked_example_robust():
    m = np.array([[2, 2, 2.5], [0, 1, 0.5], [2, 2, 2], [1, 2, 1.5], [0, 1, 0.5]], dtype=float)
    assert sorted(sepnmf.extract(m, r=2, selector="robust:1")["indices"]) == [0, 1]


def test_c_and_fortran_order_agree():
    rng = np.random.default_rng(0)
    m = rng.random((12, 30))
    a = sepnmf.extract(np.ascontiguousarray(m), r=5)["indices"]
    b = sepnmf.extract(np.asfortranarray(m), r=5)["indices"]
    assert a == b


def test_generate_and_recover():
    inst = sepnmf.generate(2, delta=0.0, seed=3, m=40, r=8)
    assert inst["M"].shape == (40, 96)
    np.testing.assert_allclose(inst["M"], inst["W"] @ inst["H"] + inst["N"], atol=1e-12)
    idx = sepnmf.extract(inst["M"], r=8)["indices"]
    assert {inst["pure_column_map"][j] for j in idx} == set(range(8))
    for alg in (sepnmf.vca, sepnmf.sivm):
        assert len(alg(inst["M"], 8)["indices"]) == 8
    assert len(sepnmf.ppi(inst["M"], 8, seed=1)["indices"]) == 8


def test_bound_and_linalg():
    eps, err = sepnmf.theorem_bound(np.eye(2))
    assert eps == pytest.approx(1 / 324)
    assert err == pytest.approx(81)
    a = np.random.default_rng(1).standard_normal((9, 4))
    np.testing.assert_allclose(sepnmf.singular_values(a), np.linalg.svd(a, compute_uv=False), rtol=1e-12)
    np.testing.assert_allclose(sepnmf.simplex_project([0.8, 0.6, -1.0]), [0.6, 0.4, 0.0])


def test_outliers_toy():
    m = np.array([[1, 0, 0, 0.5], [0, 1, 0, 0.5], [0, 0, 1, 0]], dtype=float)
    res = sepnmf.extract_with_outliers(m, r=2, t=1)
    assert sorted(res["indices"]) == [0, 1]
    assert [s for _, s in res["scores"]] == pytest.approx([1.5, 1.5, 1.0])


def test_errors():
    with pytest.raises(ValueError):
        sepnmf.extract(np.eye(3), r=4)
    with pytest.raises(ValueError):
        sepnmf.extract(np.eye(3), r=2, selector="l1")
    with pytest.raises(sepnmf.RankDeficiency):
        sepnmf.extract(np.array([[1.0, 2.0], [1.0, 2.0]]), r=2)
