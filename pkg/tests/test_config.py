import importlib.util
import sys

import pytest

import dunklkit.config
from dunklkit.config import ExperimentConfig, QuadratureBudget, Tolerances, area_budget, bundled_config
from dunklkit.errors import ConfigError

KERNEL_TOML = """
experiment = "kernel_bounds"
name = "tiny"

[grid]
x = [0.0, 0.5]
t = [0.5, 1.0]
y = [0.5]
"""


@pytest.mark.parametrize("name", ["fatou_indicator", "fatou_kernel", "kernel_bounds", "area_sweep"])
def test_bundled_configs_round_trip(name):
    config = ExperimentConfig.load(bundled_config(name))
    assert config.name
    again = ExperimentConfig.from_toml(config.to_toml())
    assert again == config


def test_defaults_are_documented():
    config = ExperimentConfig.from_toml(KERNEL_TOML)
    assert config.root_system.kind == "Z2d"
    assert config.root_system.lambdas == [0.5]
    assert config.tolerances == Tolerances()
    assert config.quadrature.n_jacobi == 64
    assert config.output.formats == ["json", "csv"]


def test_scalar_points_become_vertices():
    config = ExperimentConfig.from_toml(
        'experiment = "fatou"\n[field]\nkind = "polynomial"\npolynomial = "y"\n[grid]\npoints = [-0.5, 0.5]\n'
    )
    assert config.grid.points == [[-0.5], [0.5]]


def test_malformed_toml_reports_position():
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_toml('experiment = "fatou"\nname = \n')
    assert info.value.line == 2
    assert "line 2" in str(info.value)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('experiment = "fatou"\n[field]\nkind = "polynomial"\npolynomial = "y"\n', "empty grid"),
        ('experiment = "kernel_bounds"\n[grid]\nx = [0.0]\nt = [1.0]\n', "empty grid"),
        ('experiment = "fatou"\n[grid]\npoints = [0.0]\n', "field"),
        ('experiment = "sideways"\n', "experiment"),
        ('experiment = "kernel_bounds"\ncolour = "red"\n', "colour"),
        ('experiment = "fatou"\n[field]\nkind = "poisson"\n[grid]\npoints = [0.0]\n', "datum"),
        ('experiment = "fatou"\n[cone]\na = -1.0\n', "cone.a"),
    ],
)
def test_invalid_configs(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        ExperimentConfig.from_toml(text)


def test_missing_files(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "absent.toml")
    with pytest.raises(ConfigError):
        bundled_config("absent")


def test_area_budget_follows_config():
    budget = area_budget(QuadratureBudget(levels=5, n_y=4), Tolerances(delta_rel=1e-3))
    assert budget.levels == 5
    assert budget.n_y == 4
    assert budget.rel_tol == 1e-3
    assert budget.divergence_ratio == 0.9


def test_config_reads_toml_without_tomllib(monkeypatch):
    tomli = pytest.importorskip("tomli")
    monkeypatch.setitem(sys.modules, "tomllib", None)
    spec = importlib.util.spec_from_file_location("dunklkit._config_tomli", dunklkit.config.__file__)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    assert module.tomllib is tomli
    assert module.ExperimentConfig.from_toml(KERNEL_TOML).grid.t == [0.5, 1.0]
    with pytest.raises(ConfigError) as info:
        module.ExperimentConfig.from_toml('experiment = "fatou"\nname = \n')
    assert info.value.line == 2


def test_fatou_indicator_grid_covers_the_jumps():
    points = [p[0] for p in ExperimentConfig.load(bundled_config("fatou_indicator")).grid.points]
    assert -1.0 in points and 1.0 in points
    assert 0.0 in points
    assert len(points) == 41


def test_nt_thresholds_have_defaults():
    tol = Tolerances()
    assert (tol.nt_bound_ratio, tol.nt_window, tol.nt_refinement) == (2.0, 3, 0.05)
    assert tol.maximum_principle == 1e-6
    with pytest.raises(ConfigError):
        ExperimentConfig.from_toml(KERNEL_TOML + "\n[tolerances]\nnt_window = 0\n")
