import pytest

from services import MblParams, VblParams


@pytest.fixture
def vbl_witness():
    """Sub-KT VBL operating point."""
    return VblParams(sigma0=1.0, sigma1=1.2, v_th=4.0)


@pytest.fixture
def mbl_reference():
    return MblParams(mu=2.0, sigma0=1.0, sigma1=1.0, v_th=1.0)
