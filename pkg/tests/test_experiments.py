import pytest

from dunklkit.config import ExperimentConfig, FieldSpec, RootSystemSpec
from dunklkit.errors import DomainError
from dunklkit.experiments import AREA_SWEEP_COLUMNS, KERNEL_BOUND_COLUMNS, build_field, run_experiment

KERNEL_TOML = """
experiment = "kernel_bounds"
name = "tiny_kernel"

[grid]
x = [0.0, 0.5]
t = [0.5, 1.0]
y = [0.5]
"""


def test_kernel_bounds_skips_diagonal():
    result = run_experiment(ExperimentConfig.from_toml(KERNEL_TOML))
    assert result.columns == KERNEL_BOUND_COLUMNS
    assert [(r["x"], r["t"]) for r in result.rows] == [([0.0], [0.5]), ([0.0], [1.0]), ([0.5], [1.0])]
    assert result.passed
    assert result.summary["finite_positive"]
    assert all(r["lower"] > 0 and r["upper"] > 0 for r in result.rows)


def test_rows_do_not_depend_on_threads():
    config = ExperimentConfig.from_toml(KERNEL_TOML)
    assert run_experiment(config, threads=1).rows == run_experiment(config, threads=2).rows


def test_seed_override():
    result = run_experiment(ExperimentConfig.from_toml(KERNEL_TOML), seed=11)
    assert result.seed == 11
    assert result.to_dict()["seed"] == 11


def test_kernel_bounds_rejects_other_systems():
    config = ExperimentConfig.from_toml(KERNEL_TOML + '\n[root_system]\nkind = "Z2d"\nlambdas = [0.5, 0.5]\n')
    with pytest.raises(DomainError):
        run_experiment(config)


def test_build_field():
    config = ExperimentConfig.from_toml(KERNEL_TOML)
    rs = RootSystemSpec(kind="Z2d", lambdas=[0.5]).build()
    u = build_field(FieldSpec(kind="polynomial", polynomial="x1*y"), rs, config)
    assert u.is_polynomial
    assert u.name == "x1*y"
    a1 = RootSystemSpec(kind="A", lambdas=None, rank=1, kappa=1.0).build()
    spec = FieldSpec(kind="poisson", datum={"kind": "constant"})
    with pytest.raises(DomainError):
        build_field(spec, a1, config)


@pytest.mark.slow
def test_area_sweep_is_ordered():
    config = ExperimentConfig.from_toml(
        'experiment = "area_sweep"\n[field]\nkind = "polynomial"\npolynomial = "x1*y"\n'
        "[grid]\npoints = [0.4]\napertures = [1.0]\n"
    )
    result = run_experiment(config)
    assert result.columns == AREA_SWEEP_COLUMNS
    assert result.summary == {"points": 1, "ordered": 1}
    assert result.passed


@pytest.mark.slow
def test_fatou_away_from_the_jump():
    config = ExperimentConfig.from_toml(
        'experiment = "fatou"\n[field]\nkind = "poisson"\n[field.datum]\nkind = "indicator_box"\n'
        "lo = [-1.0]\nhi = [1.0]\n[grid]\npoints = [-0.5, 0.5]\n"
    )
    result = run_experiment(config, threads=2)
    assert result.summary["decided"] == 2
    assert result.passed


@pytest.mark.slow
def test_fatou_thresholds_come_from_tolerances():
    text = (
        'experiment = "fatou"\n[field]\nkind = "polynomial"\npolynomial = "x1*y"\n'
        "[grid]\npoints = [-0.5, 0.5]\n"
    )
    assert all(row["bounded"] for row in run_experiment(ExperimentConfig.from_toml(text)).rows)
    strict = run_experiment(
        ExperimentConfig.from_toml(text + "[tolerances]\ntol_nt = 0.0\nnt_bound_ratio = 0.0\n")
    )
    assert not any(row["bounded"] for row in strict.rows)
    assert not strict.passed
