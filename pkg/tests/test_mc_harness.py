"""Harness: experiment grid, summaries, variance probe, file writers."""

from __future__ import annotations

import math

import pytest

from survsplit import (
    EmptyGroup,
    ExperimentConfig,
    Method,
    ReplicateRecord,
    preset_config,
    run_experiment,
    summarize,
    variance_probe,
)
from survsplit.mc_harness import (
    HIST_BINS,
    HISTOGRAM_HEADER,
    RECORDS_HEADER,
    STATUS_NO_CUT,
    STATUS_OK,
    SUMMARY_HEADER,
    VARIANCE_HEADER,
    VarianceRow,
    write_histogram_csv,
    write_records_csv,
    write_summary_csv,
    write_variance_csv,
)

SMALL = ExperimentConfig(n_list=(50,), reps=3, a_fixed=(50.0,), a_adaptive=True,
                         master_seed=99, grid_points=256)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(reps=0)
    with pytest.raises(ValueError):
        ExperimentConfig(edge_eps=0.6)
    with pytest.raises(ValueError):
        ExperimentConfig(a_fixed=(0.5,))
    with pytest.raises(ValueError):
        ExperimentConfig(n_list=())


def test_presets():
    null = preset_config("paper-null")
    weak = preset_config("paper-weak")
    assert null.n_list == (50, 100, 500, 1000)
    assert null.reps == 500
    assert null.beta0 == 1.0 and null.beta1 == 0.0 and null.c0 == 0.5
    assert null.a_fixed == (50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
    assert null.a_adaptive
    assert weak.beta1 == -0.1
    assert preset_config("paper-null", reps=7).reps == 7
    with pytest.raises(ValueError):
        preset_config("nope")


def test_a_values_adaptive_first_dedup():
    cfg = ExperimentConfig(n_list=(2500,), a_fixed=(50.0, 60.0), a_adaptive=True)
    assert cfg.a_values(2500) == (50.0, 60.0)  # sqrt(2500) collides with fixed 50
    assert cfg.a_values(100) == (10.0, 50.0, 60.0)


def test_counting_contract_one_rep():
    cfg = ExperimentConfig(n_list=(50,), reps=1, a_fixed=(50.0, 100.0),
                           a_adaptive=True, master_seed=5, grid_points=128)
    records, summaries = run_experiment(cfg)
    gs = [r for r in records if r.method is Method.GS]
    sss = [r for r in records if r.method is Method.SSS]
    assert len(gs) == 1
    assert len(sss) == 3
    assert sorted(r.a for r in sss) == sorted((math.sqrt(50), 50.0, 100.0))
    assert len(summaries) == 4


def _strip_runtime(records):
    # runtime_us is measured wall time, in-memory only; the determinism
    # contract covers everything else
    import dataclasses

    return [dataclasses.replace(r, runtime_us=0) for r in records]


def test_records_sorted_and_deterministic():
    r1, _ = run_experiment(SMALL)
    r2, _ = run_experiment(SMALL)
    assert _strip_runtime(r1) == _strip_runtime(r2)
    keys = [(r.method.value, r.n, -1.0 if r.a is None else r.a, r.rep) for r in r1]
    assert keys == sorted(keys)


def test_parallel_matches_inline():
    inline, _ = run_experiment(SMALL, max_workers=1)
    pooled, _ = run_experiment(SMALL, max_workers=2)
    assert _strip_runtime(inline) == _strip_runtime(pooled)


def test_pairing_checksums_in_debug_mode():
    records, _ = run_experiment(SMALL, debug=True)
    by_rep = {}
    for r in records:
        by_rep.setdefault((r.n, r.rep), set()).add(r.dataset_checksum)
    for checksums in by_rep.values():
        assert len(checksums) == 1  # GS and all SSS variants saw one dataset
        assert None not in checksums


def test_stat_matches_direct_search():
    from survsplit import SigmoidParams, build_risk_table, greedy_search, sss_search
    from survsplit.datagen import HazardModel, SeedSpec, generate_dataset

    records, _ = run_experiment(SMALL)
    model = HazardModel(SMALL.beta0, SMALL.beta1, SMALL.c0)
    data = generate_dataset(model, 50, SeedSpec(SMALL.master_seed, 1))
    rt = build_risk_table(data)
    gs = greedy_search(rt, data, min_child=SMALL.min_child)
    got = [r for r in records if r.method is Method.GS and r.rep == 1][0]
    assert got.c_hat == gs.c_hat and got.stat == gs.stat
    soft = sss_search(rt, data, SigmoidParams(a=50.0), grid_points=SMALL.grid_points)
    got = [r for r in records if r.method is Method.SSS and r.a == 50.0 and r.rep == 1][0]
    assert got.c_hat == soft.c_hat and got.stat == soft.stat


def _mk_record(c_hat, method=Method.GS, n=50, a=None, rep=0, status=STATUS_OK):
    return ReplicateRecord(method=method, n=n, a=a, rep=rep, c_hat=c_hat,
                           stat=1.0, runtime_us=10, status=status)


def test_summarize_trivial_cases():
    recs = [_mk_record(0.5, rep=i) for i in range(8)]
    (s,) = summarize(recs, 0.05)
    assert s.edge_fraction == 0.0
    assert s.median_c == 0.5
    assert s.iqr_c == 0.0
    assert sum(s.histogram) == 8
    recs = [_mk_record(0.001, rep=i) for i in range(4)]
    (s,) = summarize(recs, 0.05)
    assert s.edge_fraction == 1.0


def test_summarize_counts_only_ok_records():
    recs = [_mk_record(0.5, rep=0), _mk_record(float("nan"), rep=1, status=STATUS_NO_CUT)]
    (s,) = summarize(recs, 0.05)
    assert sum(s.histogram) == 1
    with pytest.raises(EmptyGroup):
        summarize([_mk_record(float("nan"), status=STATUS_NO_CUT)], 0.05)
    with pytest.raises(EmptyGroup):
        summarize([], 0.05)


def test_summarize_edge_is_two_sided():
    recs = [_mk_record(c, rep=i) for i, c in enumerate([0.01, 0.99, 0.5, 0.3])]
    (s,) = summarize(recs, 0.05)
    assert s.edge_fraction == pytest.approx(0.5)


def test_flagged_records_survive_to_file(tmp_path, monkeypatch):
    import survsplit.mc_harness as mh

    def boom(*args, **kwargs):
        from survsplit.errors import NoAdmissibleCut
        raise NoAdmissibleCut("forced")

    monkeypatch.setattr(mh, "greedy_search", boom)
    records, summaries = run_experiment(SMALL, max_workers=1)
    flagged = [r for r in records if r.status == STATUS_NO_CUT]
    assert len(flagged) == SMALL.reps
    assert all(r.method is Method.GS for r in flagged)
    assert all(m.method is Method.SSS for m in summaries)
    path = tmp_path / "records.csv"
    write_records_csv(records, path)
    lines = path.read_text().splitlines()
    no_cut = [ln for ln in lines if ",no_cut," in ln]
    assert len(no_cut) == SMALL.reps
    assert no_cut[0].split(",")[4] == ""  # c_hat empty for flagged rows


def test_records_csv_schema(tmp_path):
    records, summaries = run_experiment(SMALL)
    p = tmp_path / "records.csv"
    write_records_csv(records, p)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(RECORDS_HEADER)
    first = lines[1].split(",")
    assert first[0] == "GS" and first[2] == ""  # a empty for GS
    assert first[7] == "0"                      # runtime column pinned
    sss_line = next(ln for ln in lines if ln.startswith("SSS")).split(",")
    assert float(sss_line[2]) > 0
    assert len(lines) == 1 + len(records)


def test_summary_and_histogram_csv_schema(tmp_path):
    records, summaries = run_experiment(SMALL)
    ps, ph = tmp_path / "summary.csv", tmp_path / "histogram.csv"
    write_summary_csv(summaries, ps)
    write_histogram_csv(summaries, ph)
    s_lines = ps.read_text().splitlines()
    assert s_lines[0] == ",".join(SUMMARY_HEADER)
    assert len(s_lines) == 1 + len(summaries)
    h_lines = ph.read_text().splitlines()
    assert h_lines[0] == ",".join(HISTOGRAM_HEADER)
    assert len(h_lines) == 1 + HIST_BINS * len(summaries)
    # conservation: per-group histogram counts equal non-flagged replicates
    for s in summaries:
        assert sum(s.histogram) == SMALL.reps


def test_no_temp_files_left(tmp_path):
    records, summaries = run_experiment(SMALL)
    write_records_csv(records, tmp_path / "records.csv")
    write_summary_csv(summaries, tmp_path / "summary.csv")
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []


def test_variance_probe_rows_and_se_flag():
    rows = variance_probe(100, [50.0], [0.2, 0.5], reps=40, seed=31)
    assert len(rows) == 4
    methods = {(r.method, r.a) for r in rows}
    assert methods == {(Method.GS, None), (Method.SSS, 50.0)}
    for r in rows:
        assert r.reps <= 40
        assert math.isfinite(r.var_q) and r.var_q > 0
        assert math.isfinite(r.se_var)
    tiny = variance_probe(100, [], [0.5], reps=2, seed=32)
    assert math.isinf(tiny[0].se_var)  # degenerate sample-variance case


def test_variance_probe_rejects_bad_grid():
    with pytest.raises(ValueError):
        variance_probe(100, [50.0], [0.0, 0.5], reps=5, seed=1)


def test_variance_csv_schema(tmp_path):
    rows = [VarianceRow(n=100, c=0.5, method=Method.GS, a=None,
                        var_q=1.01, se_var=math.inf, reps=2)]
    p = tmp_path / "variance.csv"
    write_variance_csv(rows, p)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(VARIANCE_HEADER)
    assert lines[1] == "100,0.5,GS,,1.01,inf,2"
