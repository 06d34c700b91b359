"""Corpus service, eval grids and parameter sweeps."""

import numpy as np
import pandas as pd
import pytest

from src.errors import ConfigurationError
from src.predictors.committee import parse_predictor_spec
from src.predictors.predictor import PredictorConfig
from src.services.corpus_service import CorpusService, Sentence, synthesize_ar, synthesize_pulse_train
from src.services.evaluation_service import (
    EVAL_COLUMNS,
    SWEEP_PRESETS,
    EvaluationService,
    ExperimentSpec,
    SweepRange,
)

from .conftest import AR2_COEFFICIENTS


@pytest.fixture
def service():
    return EvaluationService(show_progress=False)


class TestSweepRange:
    def test_spread_default(self):
        values = SWEEP_PRESETS["spread-s50"].range.values()
        assert len(values) == 49
        assert values[0] == 0.011
        assert values[-1] == pytest.approx(0.491)

    def test_neuron_default(self):
        assert SWEEP_PRESETS["neurons-rbf1"].range.values() == [float(v) for v in range(5, 101, 5)]

    def test_wide_spread(self):
        assert len(SWEEP_PRESETS["spread-s20"].range.values()) == 119

    def test_parse(self):
        assert SweepRange.parse("1:12:1").values() == [float(v) for v in range(1, 13)]

    @pytest.mark.parametrize("text", ["1:2", "1:5:0", "5:1:1", "a:b:c"])
    def test_rejected(self, text):
        with pytest.raises(ConfigurationError):
            SweepRange.parse(text)


class TestCorpus:
    def test_desk_corpus_is_deterministic(self):
        first = CorpusService().desk_corpus(count=3, seed=4, duration_s=0.1)
        second = CorpusService().desk_corpus(count=3, seed=4, duration_s=0.1)
        assert [s.name for s in first] == ["desk01", "desk02", "desk03"]
        assert all(a.signal == b.signal for a, b in zip(first, second))
        assert first[0].signal != first[1].signal

    def test_sentences_are_normalized(self):
        for sentence in CorpusService().desk_corpus(count=2, seed=4, duration_s=0.1):
            assert np.max(np.abs(sentence.signal.samples)) == 1.0
            assert len(sentence.signal) == 800

    def test_written_corpus_loads_back(self, corpus_manifest):
        service = CorpusService()
        sentences = service.load_corpus(corpus_manifest)
        assert [s.name for s in sentences] == ["desk01", "desk02"]
        assert all(len(s.signal) == 2000 for s in sentences)
        assert service.load_sentence(corpus_manifest.parent / "desk01.wav") is sentences[0]

    def test_manifest_comments_and_blank_lines(self, tmp_path, corpus_manifest):
        manifest = tmp_path / "m.txt"
        manifest.write_text(f"# header\n\n{corpus_manifest.parent / 'desk02.wav'}  # second\n")
        assert [p.name for p in CorpusService().load_manifest(manifest)] == ["desk02.wav"]

    def test_empty_manifest(self, tmp_path):
        manifest = tmp_path / "m.txt"
        manifest.write_text("# nothing\n")
        with pytest.raises(ConfigurationError):
            CorpusService().load_manifest(manifest)

    def test_pulse_train_is_periodic(self):
        signal = synthesize_pulse_train(50, 1000, seed=1, noise_level=0.0)
        np.testing.assert_allclose(signal.samples[600:650], signal.samples[650:700], atol=1e-6)


class TestEval:
    def test_single_sentence_single_config(self, service, short_sentence):
        spec = ExperimentSpec(sentences=(short_sentence,), predictors=(PredictorConfig(kind="lpc"),), nq_list=(4,))
        table = service.run_eval(spec)
        assert list(table.columns) == EVAL_COLUMNS
        assert len(table) == 2
        data, aggregate = table.iloc[0], table.iloc[1]
        assert aggregate["sentence"] == "ALL"
        assert aggregate["segsnr_mean_db"] == pytest.approx(data["segsnr_mean_db"])
        assert aggregate["segsnr_std_db"] == 0.0

    @pytest.mark.slow
    def test_grid_structure_and_consistency(self, service, short_sentence):
        second = Sentence("other", CorpusService().synthesize_sentence(1, seed=11, duration_s=0.25))
        predictors = tuple(
            parse_predictor_spec(text, order=6, neurons=6)
            for text in ("rbf1:spread=0.22", "rbf1:spread=0.4", "rbf2")
        )
        spec = ExperimentSpec(
            sentences=(short_sentence, second),
            predictors=predictors,
            nq_list=(2, 3, 4, 5),
            delta_modes=(False, True),
        )
        table = service.run_eval(spec)
        data = table[table["sentence"] != "ALL"]
        aggregate = table[table["sentence"] == "ALL"]
        assert len(aggregate) == 24
        assert len(data) == 48

        for _, row in aggregate.iterrows():
            group = data[
                (data["predictor"] == row["predictor"]) & (data["delta"] == row["delta"]) & (data["nq"] == row["nq"])
            ]["segsnr_mean_db"].to_numpy()
            assert row["segsnr_mean_db"] == pytest.approx(group.mean(), abs=1e-9)
            assert row["segsnr_std_db"] == pytest.approx(group.std(ddof=0), abs=1e-9)

    @pytest.mark.slow
    def test_committee_grid(self, service, short_sentence):
        spec = ExperimentSpec(
            sentences=(short_sentence,),
            predictors=(parse_predictor_spec("rbf1:spread=0.22+rbf2", order=6, neurons=6),),
            delta_modes=(False, True),
        )
        aggregate = service.run_eval(spec).query("sentence == 'ALL'")
        assert len(aggregate) == 8
        assert set(aggregate["predictor"]) == {"rbf1(spread=0.22,S=6)+rbf2(S=6)"}

    def test_csv_is_reproducible(self, service, short_sentence, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            spec = ExperimentSpec(
                sentences=(short_sentence,),
                predictors=(parse_predictor_spec("rbf2", order=4, neurons=5),),
                nq_list=(3,),
                output_csv=path,
                seed=9,
            )
            service.run_eval(spec)
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert paths[0].read_text().splitlines()[0] == ",".join(EVAL_COLUMNS)
        assert len(pd.read_csv(paths[0])) == 2


class TestSweep:
    def test_neuron_sweep_rows(self, service, short_sentence):
        spec = ExperimentSpec(
            sentences=(short_sentence,),
            predictors=(PredictorConfig(kind="rbf2", order=4),),
            nq_list=(4,),
            axis="neurons",
            sweep_range=SweepRange(2, 6, 2),
        )
        table = service.run_sweep(spec)
        assert list(table.columns) == ["axis_value", "segsnr_mean_db"]
        assert table["axis_value"].tolist() == [2.0, 4.0, 6.0]

    @pytest.mark.slow
    def test_order_sweep_plateaus_on_ar2(self, service):
        sentence = Sentence("ar2", synthesize_ar(AR2_COEFFICIENTS, 8000, seed=21))
        spec = ExperimentSpec(
            sentences=(sentence,),
            predictors=(PredictorConfig(kind="lpc"),),
            nq_list=(4,),
            axis="order",
            sweep_range=SweepRange(1, 8, 1),
        )
        snr = service.run_sweep(spec).set_index("axis_value")["segsnr_mean_db"]
        assert snr[2.0] > snr[1.0] + 0.5
        assert snr.loc[2.0:].max() - snr.loc[2.0:].min() < 1.0

    def test_spread_sweep_needs_rbf1(self, service, short_sentence):
        spec = ExperimentSpec(
            sentences=(short_sentence,),
            predictors=(PredictorConfig(kind="lpc"),),
            axis="spread",
            sweep_range=SweepRange(0.1, 0.2, 0.1),
        )
        with pytest.raises(ConfigurationError):
            service.run_sweep(spec)

    def test_axis_needs_range(self, short_sentence):
        with pytest.raises(ConfigurationError):
            ExperimentSpec(sentences=(short_sentence,), predictors=(PredictorConfig(),), axis="order")


@pytest.mark.slow
class TestDeskCorpusTrends:
    def test_deltas_do_not_hurt_rbf2(self, service, desk_sentences):
        spec = ExperimentSpec(
            sentences=tuple(desk_sentences),
            predictors=(PredictorConfig(kind="rbf2", neurons=20, em_epochs=10),),
            delta_modes=(False, True),
        )
        aggregate = service.run_eval(spec).query("sentence == 'ALL'")
        means = aggregate.pivot(index="nq", columns="delta", values="segsnr_mean_db")
        assert list(means.index) == [2, 3, 4, 5]
        for nq, row in means.iterrows():
            assert row[1] >= row[0] - 0.5, f"Nq={nq}: x {row[0]:.2f} dB, x+d {row[1]:.2f} dB"

    def test_spread_sweep_peaks_inside_the_range(self, service, desk_sentences):
        spec = ExperimentSpec(
            sentences=tuple(desk_sentences[:2]),
            predictors=(PredictorConfig(kind="rbf1", neurons=20),),
            nq_list=(4,),
            axis="spread",
            sweep_range=SweepRange(0.011, 1.211, 0.1),
        )
        snr = service.run_sweep(spec)["segsnr_mean_db"].to_numpy()
        assert len(snr) == 13
        assert snr[1:-1].max() > max(snr[0], snr[-1])

    def test_pitch_period_shows_in_order_sweep(self, service):
        sentence = Sentence("pulses", synthesize_pulse_train(40, 4000, seed=5))
        spec = ExperimentSpec(
            sentences=(sentence,),
            predictors=(PredictorConfig(kind="lpc"),),
            nq_list=(4,),
            axis="order",
            sweep_range=SweepRange(30, 44, 1),
        )
        snr = service.run_sweep(spec).set_index("axis_value")["segsnr_mean_db"]
        assert snr.loc[38.0:42.0].max() > snr.loc[30.0:37.0].max() + 3.0
