import numpy as np
import pytest

from sparechain.inventory import (
    DemandLaw,
    SQPolicy,
    expected_shortage,
    expected_shortage_series,
    fill_rate,
    mean_stock,
)

# Anchors from a 50-digit direct tail summation.
ES_REFS = [
    (2, 1.0, 0.10363832351432696),
    (0, 1.0, 1.0),
    (5, 2.3, 0.04274818585534965),
    (10, 0.01, 2.48442215448682e-30),
    (1, 0.5, 0.10653065971263342),
    (3, 4.0, 1.3479971388859495),
    (8, 11.454, 3.676062923229941),
    (0, 0.25, 0.25),
    (6, 6.0, 0.9637388462878802),
    (2, 11.4545, 9.454642640029526),
]


@pytest.mark.parametrize("s,m,ref", ES_REFS)
def test_expected_shortage_anchors(s, m, ref):
    assert expected_shortage(s, m) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_closed_form_matches_series_on_grid():
    # two independent routes to the same quantity
    for s in range(0, 30):
        for m in (1e-6, 0.01, 0.3, 1.0, 2.7, 5.0, 9.99, 17.3, 40.0):
            a = expected_shortage(s, m)
            b = expected_shortage_series(s, m)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-10), (s, m)


def test_expected_shortage_vectorized():
    s = 3
    ms = np.array([0.5, 1.0, 4.0])
    out = expected_shortage(s, ms)
    assert out.shape == (3,)
    for i, m in enumerate(ms):
        assert out[i] == pytest.approx(expected_shortage(s, float(m)), rel=0)


def test_expected_shortage_scalar_type_and_edges():
    assert isinstance(expected_shortage(4, 2.0), float)
    assert expected_shortage(0, 3.7) == pytest.approx(3.7, rel=1e-14)
    assert expected_shortage(5, 0.0) == 0.0
    # never negative even when the two cdf terms nearly cancel
    assert expected_shortage(200, 1.0) >= 0.0


def test_expected_shortage_monotonicity():
    # decreasing in s, increasing in m
    for m in (0.5, 3.0, 12.0):
        values = [expected_shortage(s, m) for s in range(0, 25)]
        assert all(x >= y for x, y in zip(values, values[1:]))
    for s in (0, 2, 7):
        values = [expected_shortage(s, m) for m in (0.1, 0.5, 1.0, 3.0, 8.0)]
        assert all(x <= y for x, y in zip(values, values[1:]))


def test_fill_rate():
    assert fill_rate(0.0, 5) == 1.0
    assert fill_rate(5.0, 5) == 0.0
    assert fill_rate(0.10363832351432696, 4) == pytest.approx(0.9740904191214182, rel=1e-12)
    # shortages beyond one batch clamp at zero
    assert fill_rate(7.2, 5) == 0.0
    with pytest.raises(ValueError):
        fill_rate(-0.1, 5)
    with pytest.raises(ValueError):
        fill_rate(1.0, 0)


def test_mean_stock():
    policy = SQPolicy(reorder_point_s=3, order_quantity_q=4)
    # Q/2 + s - demand over the lead + 1/2
    assert mean_stock(policy, 0.9) == pytest.approx(2.0 + 3.0 - 0.9 + 0.5, rel=0)
    # deeply backordered systems may go negative; value is reported raw
    assert mean_stock(policy, 20.0) < 0.0


def test_policy_and_demand_validation():
    with pytest.raises(ValueError):
        SQPolicy(reorder_point_s=-1, order_quantity_q=4)
    with pytest.raises(ValueError):
        SQPolicy(reorder_point_s=0, order_quantity_q=0)
    with pytest.raises(ValueError):
        DemandLaw(rate_per_day=0.0)
    assert DemandLaw(rate_per_day=0.2).rate_per_day == 0.2
