import threading

import pytest

from plotwire.errors import UnknownNameError
from plotwire.registry import TableRegistry
from plotwire.table import ColumnTable, column_stats, make_column


def test_loads_csv_and_pwct_by_stem(tmp_path):
    (tmp_path / "alpha.csv").write_text("v\n1\n2\n")
    from plotwire.pwct import save_columnar
    save_columnar(
        ColumnTable("beta", (make_column("w", "int64", [9]),)),
        tmp_path / "beta.pwct",
    )
    reg = TableRegistry(tmp_path)
    assert reg.load_all() == ["alpha", "beta"]
    assert reg.get("alpha").row_count == 2
    assert reg.get("beta").column("w").values[0] == 9


def test_path_escape_rejected(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    outside = tmp_path / "secret.csv"
    outside.write_text("v\n1\n")
    reg = TableRegistry(data)
    with pytest.raises(UnknownNameError, match="outside"):
        reg.load_file(data / ".." / "secret.csv")
    with pytest.raises(UnknownNameError, match="outside"):
        reg.load_file(outside)


def test_unknown_table(tmp_path):
    reg = TableRegistry(tmp_path)
    with pytest.raises(UnknownNameError):
        reg.get("ghost")


def test_unsupported_suffix(tmp_path):
    (tmp_path / "t.fits").write_bytes(b"SIMPLE")
    reg = TableRegistry(tmp_path)
    with pytest.raises(UnknownNameError, match="suffix"):
        reg.load_file(tmp_path / "t.fits")


def test_last_completed_load_wins(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("v\n1\n")
    reg = TableRegistry(tmp_path)
    reg.load_file(path)
    path.write_text("v\n1\n2\n3\n")
    reg.load_file(path)
    assert reg.get("t").row_count == 3


def test_concurrent_loads_serialize(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("v\n" + "\n".join(map(str, range(2000))) + "\n")
    reg = TableRegistry(tmp_path)
    errors = []

    def load():
        try:
            reg.load_file(path)
        except Exception as e:  # noqa: BLE001 - collecting for assertion
            errors.append(e)

    threads = [threading.Thread(target=load) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert reg.get("t").row_count == 2000


def test_int64_column_stats():
    t = ColumnTable("t", (
        make_column("n", "int64", [5, -2, 9], nulls=[False, False, True]),
    ))
    assert column_stats(t, "n") == {"countValid": 2, "min": -2.0, "max": 5.0}
