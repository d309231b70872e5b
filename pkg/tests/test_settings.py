from pathlib import Path

import pytest

from tandem_net.errors import ConfigError
from tandem_net.runner.settings import load_settings, parse_settings

FIGURE_TWO = """\
experiment:
  kind: design
  traces: true
model:
  M: 2
  snr_db: -10
  bins: 128
network:
  N_list: 1-20
  rates: [3]
  K: 3
  eta: 1e-6
  seed: 42
output:
  dir: results/figure2
  prefix: fig2
"""


def test_parses_full_file():
    settings = parse_settings(FIGURE_TWO, "fig2.yaml")
    assert settings.kind == "design"
    assert settings.traces is True
    assert settings.n_list == tuple(range(1, 21))
    assert settings.rates == (3,)
    assert settings.eta == 1e-6
    assert settings.snr_db == (-10.0,)
    assert settings.seed == 42
    assert settings.out_dir == Path("results/figure2")
    assert settings.echo["network"]["K"] == 3
    assert len(settings.config_sha256) == 64


def test_defaults_for_empty_file():
    settings = parse_settings("", "empty.yaml")
    assert settings.kind == "design"
    assert settings.n_list == (1,)
    assert settings.series == ()
    assert settings.record_timings is False


def test_snr_list_and_overrides():
    settings = parse_settings("model:\n  snr_db: [-10, -5, 0]\n")
    assert settings.snr_db == (-10.0, -5.0, 0.0)
    changed = settings.overridden(kind="baseline", seed=7)
    assert (changed.kind, changed.seed, changed.snr_db) == ("baseline", 7, settings.snr_db)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("experiment:\n  kind: sweep\n", 2, "experiment.kind"),
        ("model:\n  M: 2\nfigures: {}\n", 3, "unknown section"),
        ("network:\n  rates: [3]\n  K: 0\n", 3, "network.K"),
        ("network:\n  eta: -1\n", 2, "must be positive"),
        ("network:\n  N_list: [1, two]\n", 2, "network.N_list"),
        ("montecarlo:\n  trials: 500\n", 2, "montecarlo.trials"),
        ("experiment:\n  series: [swaszek]\nmodel:\n  M: 3\n", 2, "M = 2 only"),
        ("model:\n  snr_db: [-10, loud]\n", 2, "model.snr_db"),
        ("output:\n  record_timings: maybe\n", 2, "true or false"),
        ("network:\n  N_list: [4]\n  rate: [3]\n", 3, "unknown key"),
        ("output:\n  directory: out\n", 2, "output.directory"),
        ("network:\n  N_list: 20-1\n", 2, "runs backwards"),
        ("network:\n  N_list: []\n", 2, "at least one entry"),
        ("model:\n  snr_db: [-10, -5, -10]\n", 2, "repeated values"),
    ],
)
def test_errors_point_at_the_offending_line(text, line, fragment):
    with pytest.raises(ConfigError) as excinfo:
        parse_settings(text, "bad.yaml")
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"bad.yaml:{line}: ")
    assert fragment in str(excinfo.value)


def test_yaml_syntax_error_has_line():
    with pytest.raises(ConfigError) as excinfo:
        parse_settings("model:\n  M: [2\nnetwork: {}\n", "broken.yaml")
    assert excinfo.value.line is not None
    assert str(excinfo.value).startswith("broken.yaml:")


def test_load_settings_reads_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(FIGURE_TWO, encoding="utf-8")
    assert load_settings(path).source == str(path)
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "missing.yaml")


@pytest.mark.parametrize(
    "path", sorted((Path(__file__).parents[1] / "configs").glob("*.yaml")), ids=lambda p: p.stem
)
def test_shipped_configs_are_valid(path):
    settings = load_settings(path)
    assert settings.n_list
    assert settings.rates or settings.series
