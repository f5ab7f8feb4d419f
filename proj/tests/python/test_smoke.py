import json
import math
import pathlib

import numpy as np
import pytest

import fkt

DATA = pathlib.Path(__file__).resolve().parent.parent / "cli" / "data"


def test_fk_determinant():
    assert fkt.fk_determinant([(1, 1.0)], [np.diag([4.0, 9.0])]) == pytest.approx(36.0, rel=1e-14)
    # two factors with weights 1/4 (size 2) and 1/2 (size 1)
    det = fkt.fk_determinant([(2, 0.25), (1, 0.5)], [np.diag([4.0, 1.0]), np.array([[9.0]])])
    assert det == pytest.approx(4.0**0.25 * 9.0**0.5, rel=1e-14)


def test_canonical_trace():
    assert fkt.canonical_trace([(1, 1.0)], [np.diag([4.0, 9.0])]) == pytest.approx(13.0)


def test_randol_constants():
    c = fkt.torsion_constant_C()
    assert abs(c + 0.338) < 0.005
    assert abs(2 * c - fkt.randol_zeta_prime0(2)) < 1e-12
    assert fkt.randol_zeta(0.0, 2) == pytest.approx(-1.0 / 3.0, rel=1e-12)
    assert fkt.surface_torsion_scalar(2, 0) * fkt.surface_torsion_scalar(2, 1) == pytest.approx(1.0)


def test_errors_raise():
    with pytest.raises(fkt.FktError):
        fkt.randol_zeta(1.5, 2)


def test_torsion_on_instance():
    instance = json.loads((DATA / "complex.json").read_text())
    assert fkt.validate(instance)
    t0 = fkt.torsion(instance, 0.0)
    t1 = fkt.torsion(instance, 0.5)
    assert t0["torsion_coeff"] > 0
    assert t0["betti"] == pytest.approx(t1["betti"])
    # log rho changes by -c u along an exponential family
    assert math.log(t1["torsion_coeff"]) - math.log(t0["torsion_coeff"]) == pytest.approx(-0.5 * t0["anomaly"], abs=1e-9)
    v = fkt.variation(instance, 0.2, 1e-4)
    assert v["gap"] < 1e-6


def test_acyclic_torsion_is_det():
    instance = {
        "algebra": {"factors": [[1, 1.0]]},
        "degrees": [[1], [1]],
        "diffs": [[[2.0]]],
    }
    assert fkt.torsion(instance)["torsion_coeff"] == pytest.approx(2.0, rel=1e-14)
