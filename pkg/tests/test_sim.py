import json
from fractions import Fraction

import numpy as np
import pytest

from qpolar.channel import qsc, table_channel
from qpolar.code import PolarCode
from qpolar.gf import default_field
from qpolar.oracle import exact_average_ser
from qpolar.sim import (
    BerReport,
    ExperimentConfig,
    chi2_homogeneity,
    ebno_to_channel,
    export_report,
    plot_script,
    run_experiment,
)

F2 = default_field(2)


def test_ebno_conversion_values():
    ch = ebno_to_channel(2.0, 0.5)
    assert ch.sigma2 == pytest.approx(10 ** -0.2)
    assert ch.sigma2 == pytest.approx(0.63096, abs=1e-4)
    assert ebno_to_channel(0.0, 1.0).sigma2 == pytest.approx(0.5)
    assert ebno_to_channel(60.0, 0.5).sigma2 < 1e-5
    with pytest.raises(ValueError):
        ebno_to_channel(2.0, 0.0)


def test_noiseless_experiment_all_zero():
    ident = table_channel(F2, [[1, 0], [0, 1]])
    code = PolarCode(F2, 3, [3, 5, 6, 7])
    cfg = ExperimentConfig(code, ident, trials=500, seed=1)
    report = run_experiment(cfg)
    assert report.message_errors == (0,) * 8
    assert report.codeword_errors == (0,) * 8


def test_shard_and_batch_invariance():
    ch = qsc(F2, Fraction(1, 10))
    code = PolarCode(F2, 3, [3, 5, 6, 7])
    base = run_experiment(ExperimentConfig(code, ch, trials=20_000, seed=11))
    for shards in (2, 5):
        rep = run_experiment(ExperimentConfig(code, ch, trials=20_000, seed=11,
                                              shards=shards))
        assert rep.message_errors == base.message_errors
        assert rep.codeword_errors == base.codeword_errors
    threaded = run_experiment(ExperimentConfig(code, ch, trials=20_000, seed=11,
                                               shards=4), threads=4)
    assert threaded.codeword_errors == base.codeword_errors
    small = run_experiment(ExperimentConfig(code, ch, trials=20_000, seed=11,
                                            batch=777))
    assert small.codeword_errors == base.codeword_errors


def test_experiment_matches_oracle_n4():
    ch = qsc(F2, Fraction(1, 10))
    code = PolarCode(F2, 2, [1, 2, 3])
    trials = 200_000
    report = run_experiment(ExperimentConfig(code, ch, trials=trials, seed=3))
    exact = exact_average_ser(code, ch).per_index
    for est, truth in zip(report.codeword_ber, exact):
        p = float(truth)
        se = (p * (1 - p) / trials) ** 0.5
        assert abs(est - p) <= 4 * se


def test_random_message_mode_agrees():
    # message invariance, empirically: random messages give the same rates
    ch = qsc(F2, Fraction(1, 10))
    code = PolarCode(F2, 2, [1, 2, 3])
    trials = 150_000
    fixed = run_experiment(ExperimentConfig(code, ch, trials=trials, seed=21))
    rand = run_experiment(ExperimentConfig(code, ch, trials=trials, seed=22,
                                           random_message=True))
    for a, b in zip(fixed.codeword_ber, rand.codeword_ber):
        se = (a * (1 - a) / trials) ** 0.5
        assert abs(a - b) <= 5 * max(se, 1e-4)


def test_frozen_positions_never_err():
    ch = qsc(F2, Fraction(3, 10))
    code = PolarCode(F2, 3, [7])
    report = run_experiment(ExperimentConfig(code, ch, trials=5000, seed=2,
                                             random_message=True))
    for i in range(8):
        if i not in code.info_set:
            assert report.message_errors[i] == 0
    report.validate()


def test_tally_conservation_and_validation():
    report = BerReport(info_set=(1,), trials=100,
                       message_errors=(0, 7), codeword_errors=(3, 7))
    report.validate()
    frozen_errs = BerReport(info_set=(1,), trials=100,
                            message_errors=(5, 0), codeword_errors=(0, 0))
    with pytest.raises(RuntimeError):
        frozen_errs.validate()
    overflow = BerReport(info_set=(1,), trials=100,
                         message_errors=(0, 0), codeword_errors=(101, 0))
    with pytest.raises(RuntimeError):
        overflow.validate()


def test_chi2_homogeneity_behaviour():
    rng = np.random.default_rng(0)
    trials = 50_000
    equal = rng.binomial(trials, 0.01, size=64)
    stat, p = chi2_homogeneity(equal, trials)
    assert p > 0.001
    skewed = np.concatenate([rng.binomial(trials, 0.01, size=32),
                             rng.binomial(trials, 0.03, size=32)])
    _, p_bad = chi2_homogeneity(skewed, trials)
    assert p_bad < 1e-6
    assert chi2_homogeneity(np.zeros(8), trials) == (0.0, 1.0)


def test_export_round_trip(tmp_path):
    ch = qsc(F2, Fraction(1, 10))
    code = PolarCode(F2, 2, [1, 2, 3])
    report = run_experiment(ExperimentConfig(code, ch, trials=2000, seed=5))

    jpath = tmp_path / "report.json"
    export_report(report, jpath, fmt="json")
    back = BerReport.from_json(json.loads(jpath.read_text()))
    assert back.message_errors == report.message_errors
    assert back.codeword_errors == report.codeword_errors
    assert back.config == report.config

    cpath = tmp_path / "report.csv"
    export_report(report, cpath, fmt="csv")
    lines = cpath.read_text().splitlines()
    assert lines[0].startswith("# qpolar-report ")
    assert json.loads(lines[0].removeprefix("# qpolar-report "))["seed"] == 5
    assert len(lines) == 2 + code.n  # header comment + columns + one row per index

    export_report(report, tmp_path / "again.csv", fmt="csv")
    assert (tmp_path / "again.csv").read_bytes() == cpath.read_bytes()


def test_plot_script_references_both_panels():
    script = plot_script("report.csv")
    assert "message symbol error rate" in script
    assert "codeword symbol error rate" in script
    assert script.count("report.csv") == 2
