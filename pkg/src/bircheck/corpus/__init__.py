from .fixtures import fixture, fixture_names, fixture_config, UnknownFixture

__all__ = ["fixture", "fixture_names", "fixture_config", "UnknownFixture"]
