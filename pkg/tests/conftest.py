import pytest

from swipt_twr import ChannelState, SystemConfig


@pytest.fixture
def unit_cfg():
    return SystemConfig(p_tot=2.0, eta=1.0)


@pytest.fixture
def sym_channel():
    return ChannelState(1.0, 1.0)
