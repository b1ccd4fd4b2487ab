import pytest

from frobhier.algebra import Polynomial
from frobhier.errors import InvalidDimension
from frobhier.fay import (
    bkp_dl_check,
    bkp_dl_report,
    bkp_log_report,
    d_reduction_report,
    fay_report,
    kp_fay_check,
    kp_fay_report,
    kp_log_report,
)
from frobhier.potentials import a_potential


@pytest.mark.parametrize("N", [2, 3, 4])
def test_kp(N):
    assert kp_fay_check(N)
    assert kp_log_report(N).ok


def test_kp_detects_corruption():
    F = a_potential(4).F + Polynomial.var(2) ** 2 * Polynomial.var(3)
    rep = kp_fay_report(4, F)
    assert not rep.ok
    assert rep.mismatch["key"]


def test_kp_report_lists_every_key():
    rep = kp_fay_report(3)
    assert rep.cap == 5
    assert len(rep.checked) == sum(k + 1 for k in range(6))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_bkp(N):
    assert bkp_dl_check(N)
    assert bkp_log_report(N).ok


def test_bkp_caps():
    assert bkp_dl_report(3).cap == 6
    assert bkp_dl_report(3, 8).ok
    with pytest.raises(ValueError):
        bkp_dl_report(3, 9)


def test_d_reduction_subchecks():
    rep = d_reduction_report(4)
    assert [s.name for s in rep.subchecks] == ["2bkp-1dl", "red2bkp-3dl", "2bkp-3dl", "2bkp-2dl", "2bkp-4dl"]
    assert rep.ok


def test_report_json():
    obj = fay_report("B", 3).to_json_obj()
    assert obj["ok"] is True
    assert obj["mismatch"] is None
    assert obj["subchecks"][0]["name"]


def test_dimensions():
    with pytest.raises(InvalidDimension):
        kp_fay_report(1)
    with pytest.raises(InvalidDimension):
        d_reduction_report(3)
