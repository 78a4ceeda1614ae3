import json

import numpy as np
import pytest

from iepg.certificate import CertificationError, certify, nowhere_zero_margin, verify
from iepg.graphcore import cycle, path
from iepg.realize import generic_realize, jacobi_from_spectrum


def _round_trip(cert):
    return json.loads(cert.dumps())


def test_certify_rejects_bad_matrix():
    with pytest.raises(CertificationError):
        certify("x", np.diag([0.0, 1.0]), path(2), [0, 1])
    with pytest.raises(CertificationError):
        certify("x", jacobi_from_spectrum([0, 1]), path(2), [0, 2])


def test_margin_is_normalised():
    u = np.eye(2)
    assert nowhere_zero_margin(u, [[3, 4]]) == pytest.approx(0.6)


def test_verify_fresh_and_tampered():
    _, _, cert = generic_realize(cycle(5), [1, 2, 3, 4, 5])
    data = _round_trip(cert)
    assert verify(data).ok
    bad = _round_trip(cert)
    bad["matrix"]["rows"][0][1] = bad["matrix"]["rows"][1][0] = 0.0
    rep = verify(bad)
    assert not rep.checks["pattern"]["ok"]
    bad = _round_trip(cert)
    bad["matrix"]["rows"][2][2] += 1e-3
    rep = verify(bad)
    assert not rep.checks["spectrum"]["ok"]


def test_verify_ignores_stored_claims():
    _, _, cert = generic_realize(path(3), [0, 1, 2])
    data = _round_trip(cert)
    data["spectral_residual"] = 0.0
    data["nowhere_zero_margin"] = 1.0
    data["matrix"]["rows"][0][0] += 0.1
    assert not verify(data).ok


def test_dumps_is_deterministic():
    a = generic_realize(cycle(4), [0, 1, 2, 3], seed=4)[2].dumps()
    b = generic_realize(cycle(4), [0, 1, 2, 3], seed=4)[2].dumps()
    assert a == b
