"""Smoke test for the pylyapoly extension module.

Build and install first:

    pip install --no-build-isolation -e crates/python
    python python/smoke_test.py
"""

import json
import math
from pathlib import Path

import pylyapoly as lp

DATA = Path(__file__).resolve().parent.parent / "data"


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def single_matrix():
    a = [[-1.0, 0.4], [0.3, -0.5]]
    s = lp.spectral_abscissa(a)
    b = lp.analyze(lp.Family([a]), 0.5)
    close(b.beta, s, 1e-10)
    close(b.alpha, s, 1e-3)
    assert b.verdict == "stable"


def general_2d():
    fam = lp.Family.load(str(DATA / "general_2d.json"))
    assert fam.dim == 2 and len(fam) == 2 and not fam.is_metzler
    b = lp.analyze(fam, 1.0)
    close(b.beta, 0.373463076, 1e-8)
    assert b.terminated and b.invariance_excess <= 1e-8
    assert b.alpha >= b.beta
    poly = b.polytope
    assert poly.hull == "symmetric"
    assert b.vertex_count == 2 * len(poly)
    assert all(poly.membership(v) <= 1 + 1e-9 for v in poly.vertices)
    assert poly.boundary_2d() is not None
    json.loads(b.to_json())
    print(lp.render([b]))


def stabilizability_2d():
    fam = lp.Family.load(str(DATA / "positive_2d.json"))
    assert fam.is_metzler
    b = lp.analyze(fam, 1.0, mode="stabilizability", delta=0.1, delta_check=False)
    close(b.beta, 1.793310513, 1e-8)
    close(b.averaged_rho, 6.009313489, 1e-8)
    assert b.hull == "infinite"
    assert b.alpha <= b.beta


def products_and_linalg():
    e = lp.mat_exp([[0.0, 1.0], [-1.0, 0.0]], math.pi / 2)
    close(e[0][1], 1.0, 1e-12)
    close(lp.spectral_radius([[2.0, 1.0], [0.0, -3.0]]), 3.0, 1e-12)
    word, rho = lp.search_product([[[1.0, 1.0], [0.0, 1.0]], [[1.0, 0.0], [1.0, 1.0]]], 6)
    assert sorted(word) == [0, 1]
    close(rho, math.sqrt((3 + math.sqrt(5)) / 2), 1e-12)


def fibrillation():
    fam = lp.Family.load(str(DATA / "nilpotent_pair.json"))
    rows, flagged = lp.fibrillation_scan(fam, [0.5, 0.25, 0.125], max_word_len=6)
    assert flagged
    for tau, length, beta, _ in rows:
        exact = math.log(math.sqrt((tau * tau + math.sqrt(tau * tau + 4) * tau + 2) / 2)) / tau
        assert length == 2
        close(beta, exact, 1e-10)


def random_family():
    a = lp.random_metzler(4, count=3, seed=11)
    b = lp.random_metzler(4, count=3, seed=11)
    assert a.to_json() == b.to_json() and a.is_metzler
    assert lp.Family.from_json(a.to_json()).matrices() == a.matrices()


def errors():
    try:
        lp.Family([])
    except lp.LyapolyError as e:
        assert "nonempty" in str(e)
    else:
        raise AssertionError("empty family accepted")
    try:
        lp.analyze(lp.Family([[[0.0, 2.0], [-2.0, 0.0]]]), 1.0, mode="stabilizability")
    except lp.LyapolyError as e:
        assert "Metzler" in str(e)
    else:
        raise AssertionError("non-Metzler family accepted")


if __name__ == "__main__":
    for check in (single_matrix, general_2d, stabilizability_2d, products_and_linalg,
                  fibrillation, random_family, errors):
        check()
        print(f"ok  {check.__name__}")
