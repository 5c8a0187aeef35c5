import pytest

from fertisim.config import default_config


@pytest.fixture(scope="session")
def cfg():
    return default_config()


@pytest.fixture(scope="session")
def camera(cfg):
    return cfg.camera()


@pytest.fixture(scope="session")
def growth_params(cfg):
    return cfg.growth_params()
