import pytest

from anfsat.bench import BenchRun, aggregate, format_table, parse_config, run_bench
from anfsat.solver import SolveResult


def fake(status, conflicts, t):
    return SolveResult(status=status, conflicts=conflicts, nodes=conflicts + 1, propagations=0, time_s=t,
                       xg_mode="xg", order="default", models=[(1,)] if status == "SAT" else [])


def test_parse_config():
    assert parse_config("xg-ext+mvc") == ("xg_ext", True)
    assert parse_config("off") == ("off", False)
    for bad in ("xg+foo", "on", "mvc"):
        with pytest.raises(ValueError):
            parse_config(bad)


def test_aggregate_orders_sat_first_and_averages():
    runs = [BenchRun("a", "xg", fake("UNSAT", 4, 1.0)), BenchRun("b", "xg", fake("UNSAT", 8, 3.0)),
            BenchRun("c", "xg", fake("SAT", 2, 0.5)), BenchRun("c", "off", fake("SAT", 6, 0.1))]
    rows = aggregate(runs, ["off", "xg"])
    assert [(r.config, r.status) for r in rows] == [("off", "SAT"), ("xg", "SAT"), ("xg", "UNSAT")]
    u = rows[-1]
    assert (u.runs, u.mean_conflicts, u.mean_time_s, u.mean_nodes, u.stdev_conflicts) == (2, 6, 2.0, 7, 2)
    lines = format_table(rows).splitlines()
    assert lines[-1] == "xg,UNSAT,2,2.000000,6.00,7.00,2.00"


def test_runs_roundtrip_through_stats(tmp_path):
    p = tmp_path / "x.anf"
    p.write_text("p anf 3 2\n1.2 3 T 0\n2 3 0\n")
    runs = run_bench([str(p)], ["off", "xg+mvc"])
    assert len(runs) == 2 and all(r.roundtrips() for r in runs)
