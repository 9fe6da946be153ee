import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tscrub.errors import (
    AllMissing,
    ChildFailed,
    ContractViolation,
    DuplicateId,
    TooFewObserved,
)
from tscrub.imputation import (
    default_registry,
    external_method,
    impute_interpolation,
    impute_locf,
    impute_moving_average,
    register_external_methods,
    MethodRegistry,
)

NAN = np.nan


def arr(*xs):
    return np.array(xs, dtype=np.float64)


class TestInterpolation:
    def test_simple_gap(self):
        assert list(impute_interpolation(arr(1, NAN, 3))) == [1, 2, 3]

    def test_leading_extension(self):
        assert list(impute_interpolation(arr(NAN, 2, 4))) == [2, 2, 4]

    def test_trailing_extension(self):
        assert list(impute_interpolation(arr(1, 3, NAN))) == [1, 3, 3]

    def test_equal_spacing(self):
        assert list(impute_interpolation(arr(1, NAN, NAN, 4))) == [1, 2, 3, 4]

    def test_all_missing(self):
        with pytest.raises(AllMissing):
            impute_interpolation(arr(NAN, NAN))


class TestLocf:
    def test_carry_forward(self):
        assert list(impute_locf(arr(1, NAN, NAN, 4))) == [1, 1, 1, 4]

    def test_leading_backfill(self):
        assert list(impute_locf(arr(NAN, 2))) == [2, 2]

    def test_no_gaps_identity(self):
        x = arr(5, 6, 7)
        assert list(impute_locf(x)) == [5, 6, 7]

    def test_all_missing(self):
        with pytest.raises(AllMissing):
            impute_locf(arr(NAN))


# Hand-computed LOCF / moving-average expectations (10 cases).
LOCF_CASES = [
    (arr(1, NAN, 3), [1, 1, 3]),
    (arr(1, NAN, NAN, 4), [1, 1, 1, 4]),
    (arr(NAN, 2), [2, 2]),
    (arr(NAN, NAN, 3), [3, 3, 3]),
    (arr(1, 2, 3), [1, 2, 3]),
    (arr(7, NAN), [7, 7]),
    (arr(1, NAN, 2, NAN, 3), [1, 1, 2, 2, 3]),
    (arr(0, NAN, NAN, NAN, 0), [0, 0, 0, 0, 0]),
    (arr(NAN, 5, NAN), [5, 5, 5]),
    (arr(2.5, NAN, NAN, 2.5), [2.5, 2.5, 2.5, 2.5]),
]

MA_CASES = [
    (arr(1, NAN, 3), 1, [1, 2, 3]),
    (arr(10, NAN, NAN, NAN, 20), 1, [10, 10, 15, 20, 20]),
    (arr(1, 2, 3), 4, [1, 2, 3]),
    (arr(NAN, 2, 4), 1, [2, 2, 4]),
    (arr(1, NAN, NAN, 4), 1, [1, 1, 4, 4]),
    (arr(1, NAN, NAN, 4), 2, [1, 2.5, 2.5, 4]),
    (arr(2, 4, NAN, 6, 8), 1, [2, 4, 5, 6, 8]),
    (arr(2, 4, NAN, 6, 8), 4, [2, 4, 5, 6, 8]),
    (arr(NAN, NAN, 9), 1, [9, 9, 9]),
    (arr(5, NAN, 7, NAN, 9), 2, [5, 6, 7, 8, 9]),
]


@pytest.mark.parametrize("values,expected", LOCF_CASES)
def test_locf_table(values, expected):
    assert list(impute_locf(values)) == expected


@pytest.mark.parametrize("values,k,expected", MA_CASES)
def test_moving_average_table(values, k, expected):
    assert list(impute_moving_average(values, k=k)) == expected


class TestMovingAverage:
    def test_window_doubles_until_covered(self):
        out = impute_moving_average(arr(10, NAN, NAN, NAN, 20), k=1)
        assert out[2] == 15.0

    def test_all_missing(self):
        with pytest.raises(AllMissing):
            impute_moving_average(arr(NAN, NAN))

    def test_bad_k(self):
        with pytest.raises(ValueError):
            impute_moving_average(arr(1.0), k=0)


@st.composite
def gapped_series(draw):
    n = draw(st.integers(min_value=2, max_value=40))
    values = draw(st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        min_size=n, max_size=n,
    ))
    gap_mask = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    if all(gap_mask):
        gap_mask[draw(st.integers(0, n - 1))] = False
    out = np.array(values, dtype=np.float64)
    out[np.array(gap_mask, dtype=bool)] = np.nan
    return out


@settings(max_examples=60, deadline=None)
@given(values=gapped_series())
@pytest.mark.parametrize("method_id", ["na_interpolation", "na_locf", "na_ma", "na_kalman"])
def test_method_contract(method_id, values):
    registry = default_registry()
    observed = ~np.isnan(values)
    if method_id == "na_kalman" and observed.sum() < 3 and np.ptp(values[observed]) != 0:
        # the state-space fit needs 3 observed points (constants shortcut it)
        with pytest.raises(TooFewObserved):
            registry.fill(method_id, values)
        return
    out = registry.fill(method_id, values)
    assert len(out) == len(values)
    assert not np.isnan(out).any()
    assert np.array_equal(out[observed], values[observed])


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(min_value=-100, max_value=100, allow_nan=False),
    b=st.floats(min_value=-10, max_value=10, allow_nan=False),
    n=st.integers(min_value=3, max_value=50),
    data=st.data(),
)
def test_interpolation_exact_on_affine(a, b, n, data):
    truth = a + b * np.arange(n)
    gaps = data.draw(st.lists(st.integers(1, n - 2), unique=True, max_size=n - 2))
    values = truth.copy()
    values[gaps] = np.nan
    out = impute_interpolation(values)
    assert np.allclose(out, truth, rtol=0, atol=1e-9 * (1 + abs(a) + abs(b) * n))


class TestRegistry:
    def test_register_and_use(self):
        registry = default_registry()
        registry.register("mean_fill", lambda v: np.where(
            np.isnan(v), np.nanmean(v), v
        ))
        assert "mean_fill" in registry
        assert len(registry.ids()) == 5

    def test_duplicate_id(self):
        registry = default_registry()
        with pytest.raises(DuplicateId):
            registry.register("na_locf", impute_locf)

    def test_contract_wrong_length(self):
        registry = MethodRegistry()
        registry.register("bad", lambda v: v[:-1])
        with pytest.raises(ContractViolation):
            registry.fill("bad", arr(1, NAN, 3))

    def test_contract_leftover_gap(self):
        registry = MethodRegistry()
        registry.register("lazy", lambda v: v)
        with pytest.raises(ContractViolation):
            registry.fill("lazy", arr(1, NAN, 3))

    def test_contract_changed_observed(self):
        registry = MethodRegistry()
        registry.register("vandal", lambda v: np.zeros_like(v))
        with pytest.raises(ContractViolation):
            registry.fill("vandal", arr(1, NAN, 3))

    def test_unknown_method(self):
        with pytest.raises(KeyError):
            MethodRegistry().fill("nope", arr(1.0))


class TestExternalMethod:
    def test_cat_is_identity_on_gap_free(self):
        registry = MethodRegistry()
        registry.register("echo", external_method("cat"))
        out = registry.fill("echo", arr(1.5, 2.5))
        assert list(out) == [1.5, 2.5]

    def test_wrong_length_violates_contract(self):
        cmd = f'{sys.executable} -c "print(1.0)"'
        registry = MethodRegistry()
        registry.register("short", external_method(cmd))
        with pytest.raises(ContractViolation):
            registry.fill("short", arr(1, 2, 3))

    def test_nonzero_exit(self):
        cmd = f'{sys.executable} -c "import sys; sys.exit(3)"'
        fill = external_method(cmd)
        with pytest.raises(ChildFailed):
            fill(arr(1.0))

    def test_missing_binary(self):
        fill = external_method("/no/such/binary")
        with pytest.raises(ChildFailed):
            fill(arr(1.0))

    def test_filling_child(self):
        script = (
            "import sys\n"
            "prev = '0.0'\n"
            "for line in sys.stdin.read().splitlines():\n"
            "    tok = line.strip() or prev\n"
            "    prev = tok\n"
            "    print(tok)\n"
        )
        cmd = [sys.executable, "-c", script]
        registry = MethodRegistry()
        registry.register("child_locf", external_method(cmd))
        out = registry.fill("child_locf", arr(1, NAN, 3))
        assert list(out) == [1, 1, 3]

    def test_cli_spec_parsing(self):
        registry = MethodRegistry()
        register_external_methods(registry, ["echo=cat"])
        assert "echo" in registry
        with pytest.raises(ValueError):
            register_external_methods(registry, ["neither-nor"])
