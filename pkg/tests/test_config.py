import argparse
from pathlib import Path

import pytest

from modules.config import CACHE_ENV, DEFAULT_CONFIG, RunConfig, from_namespace, parse_int_list
from modules.errors import EXIT_CONFIG_ERROR, ConfigError


def namespace(**kwargs):
    defaults = dict(quiver=None, dim=None, primes=None, seed=0, format="text", max_total_dim=4,
                    workers=1, cache=None, progress=False)
    defaults.update(kwargs)
    return argparse.Namespace(**defaults)


def test_defaults():
    config = RunConfig()
    assert config.primes == DEFAULT_CONFIG["primes"]
    assert config.output_format == "text"
    assert config.cache_dir is None


def test_primes_are_sorted_and_checked():
    assert RunConfig(primes=(7, 2, 3)).primes == (2, 3, 7)
    for primes in [(2, 3, 4), (2, 3, 3, 5), (2, 3)]:
        with pytest.raises(ConfigError):
            RunConfig(primes=primes)


@pytest.mark.parametrize("field,value", [("output_format", "xml"), ("workers", 0), ("max_total_dim", 0)])
def test_invalid_fields(field, value):
    with pytest.raises(ConfigError):
        RunConfig(**{field: value})


def test_config_error_exit_status():
    assert ConfigError("x").exit_status == EXIT_CONFIG_ERROR


def test_parse_int_list():
    assert parse_int_list("1,2,0", "--dim") == (1, 2, 0)
    assert parse_int_list(" 2, 3 ,5", "--primes") == (2, 3, 5)
    with pytest.raises(ConfigError):
        parse_int_list("1,x", "--dim")
    with pytest.raises(ConfigError):
        parse_int_list("1,-1", "--dim")


def test_require_dim():
    with pytest.raises(ConfigError):
        RunConfig().require_dim()
    assert RunConfig(dim=(1, 1)).require_dim() == (1, 1)


def test_from_namespace():
    config = from_namespace(namespace(quiver="quivers/A2.txt", dim="2,1", primes="3,2,5,7", format="json"),
                            environ={})
    assert config.quiver_path == Path("quivers/A2.txt")
    assert config.dim == (2, 1)
    assert config.primes == (2, 3, 5, 7)
    assert config.output_format == "json"


def test_cache_directory_from_environment(tmp_path):
    config = from_namespace(namespace(), environ={CACHE_ENV: str(tmp_path)})
    assert config.cache_dir == tmp_path
    explicit = from_namespace(namespace(cache=str(tmp_path / "x")), environ={CACHE_ENV: str(tmp_path)})
    assert explicit.cache_dir == tmp_path / "x"
    assert from_namespace(namespace(), environ={}).cache_dir is None
