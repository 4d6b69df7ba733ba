import pytest

from cvks.records import SweepRecord, csv_text, fmt, json_text, parallel_map, thread_count


def test_abs_error_requires_oracle():
    SweepRecord(1.0, 5.0, oracle_value=5.0, abs_error=0.0)
    with pytest.raises(ValueError):
        SweepRecord(1.0, 5.0, abs_error=0.1)
    with pytest.raises(ValueError):
        SweepRecord(1.0, 5.0, correlators=(1.0, 2.0))


def test_formatting():
    assert fmt(None) == ""
    assert fmt(0.1) == "0.10000000000000001"
    assert csv_text(["a", "b"], [(1.0, None)]) == "a,b\n1,\n"


def test_json_is_strict():
    with pytest.raises(ValueError):
        json_text({"x": float("nan")})


def test_thread_env(monkeypatch):
    monkeypatch.setenv("CVKS_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("CVKS_THREADS", "0")
    with pytest.raises(ValueError):
        thread_count()


def test_parallel_map_preserves_order():
    assert parallel_map(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]
