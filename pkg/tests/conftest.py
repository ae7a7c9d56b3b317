import pytest

from brightsqueeze.spectra import FrequencyGrid


@pytest.fixture
def grid():
    return FrequencyGrid.log(1e3, 1e6, 20)
