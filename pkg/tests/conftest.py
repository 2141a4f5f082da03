import pytest

from wavecho.flume import FlumeConfig, synthesize_series


@pytest.fixture(scope="session")
def sea_2_10():
    """Developed [2 m, 10 s] gauge series covering 900 s train + 600 s eval."""
    return synthesize_series(2.0, 10.0, FlumeConfig(duration=1560.0), seed=42)


@pytest.fixture(scope="session")
def sea_1_10():
    """Developed [1 m, 10 s] gauge series covering 900 s train + 600 s eval."""
    return synthesize_series(1.0, 10.0, FlumeConfig(duration=1560.0), seed=42)
