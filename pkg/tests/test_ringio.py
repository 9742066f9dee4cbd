import numpy as np
import pytest

from nilorbit import ringio
from nilorbit.battery import appendix_h2_ring
from nilorbit.families import strict_upper_algebra
from nilorbit.liering import heisenberg_ring

HEIS_TEXT = """liering p=3 dim=3
bracket 1 2 = 3:1
"""


def test_parse_heisenberg():
    ring = ringio.parse_liering(HEIS_TEXT)
    assert ring.p == 3 and ring.dim == 3
    assert ring.nilpotence_class() == 2


def test_roundtrip_liering():
    for ring in (heisenberg_ring(5), appendix_h2_ring(5)):
        text = ringio.emit_liering(ring)
        back = ringio.parse_liering(text)
        assert (back.constants == ring.constants).all()
        assert ringio.emit_liering(back) == text  # bit-exact


def test_roundtrip_with_frobenius():
    from nilorbit.families import fake_heisenberg

    ring = fake_heisenberg(3, 2)
    ring.parsed_frobenius = ring.fq.frobenius_matrix
    text = ringio.emit_liering(ring)
    back = ringio.parse_liering(text)
    assert (back.parsed_frobenius == ring.fq.frobenius_matrix).all()
    assert ringio.emit_liering(back) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ringio.ParseError):
        ringio.parse_liering("nonsense")
    # non-Jacobi constants are rejected with the failing identity
    bad = """liering p=5 dim=3
bracket 1 2 = 3:1
bracket 1 3 = 1:1
"""
    with pytest.raises(ringio.ParseError) as e:
        ringio.parse_liering(bad)
    assert "jacobi" in str(e.value)
    with pytest.raises(ringio.ParseError):
        ringio.parse_liering("liering p=3 dim=2\nbracket 1 5 = 1:1\n")
    with pytest.raises(ringio.ParseError):
        ringio.parse_liering("liering p=3 dim=2\nbracket 1 2 = x\n")


def test_algebra_roundtrip():
    A = strict_upper_algebra(3, 3)
    text = ringio.emit_algebra(A)
    back = ringio.parse_algebra(text)
    assert (back.constants == A.constants).all()
    assert ringio.emit_algebra(back) == text


def test_algebra_rejects_nonassociative():
    bad = """algebra p=5 dim=2
prod 1 1 = 2:1
prod 2 1 = 1:1
"""
    with pytest.raises(ringio.ParseError):
        ringio.parse_algebra(bad)


def test_matrix_roundtrip():
    M = np.array([[1, 2], [0, 1]], dtype=np.int64)
    assert (ringio.parse_matrix(ringio.emit_matrix(M)) == M).all()


def test_parse_spec_dispatch():
    assert ringio.parse_spec(HEIS_TEXT).dim == 3
    A = strict_upper_algebra(2, 3)
    assert ringio.parse_spec(ringio.emit_algebra(A)).dim == 1
    with pytest.raises(ringio.ParseError):
        ringio.parse_spec("widget p=3\n")
