import math

import pandas as pd
import pytest

from src.framework.data import ResultsCollector


@pytest.fixture
def collector(tmp_path):
    collector = ResultsCollector(str(tmp_path / 'results.duckdb'))
    yield collector
    collector.close()


def _report(label_rmse):
    return {
        'height': 4, 'width': 5, 'mean_rmse': label_rmse, 'mean_gfc': 0.99,
        'mean_delta_e': 1.5, 'highlight_fraction': 0.05,
    }


def test_run_lifecycle(collector):
    run_id = collector.start_run('evaluate', {'seed': 3, 'method': 'linear'})
    assert collector.current_run_id == run_id
    run = collector.get_run()
    assert run['status'] == 'running'
    assert run['config'] == {'method': 'linear', 'seed': 3}

    collector.end_run()
    assert collector.current_run_id is None
    run = collector.get_run(run_id)
    assert run['status'] == 'completed'
    assert run['ended_at'] is not None


def test_runs_get_increasing_ids(collector):
    first = collector.start_run('fit')
    collector.end_run('failed')
    second = collector.start_run('fit')
    collector.end_run()
    assert second > first
    runs = collector.get_runs()
    assert list(runs['status']) == ['failed', 'completed']


def test_recording_needs_a_run(collector):
    with pytest.raises(ValueError):
        collector.record_metric_report('image', _report(0.1))
    with pytest.raises(ValueError):
        collector.get_metric_reports()


def test_metric_reports(collector):
    collector.start_run('evaluate')
    collector.record_metric_report('a', _report(0.1))
    collector.record_metric_report('b', _report(0.2))
    frame = collector.get_metric_reports()
    assert set(frame['label']) == {'a', 'b'}
    assert frame.set_index('label').loc['b', 'mean_rmse'] == pytest.approx(0.2)


def test_search_candidates(collector):
    collector.start_run('search-train')
    collector.record_search_candidates(pd.DataFrame([
        {'step': 'step2', 'id': '5%[0]', 'k': 10, 'score': 0.03, 'winner': False},
        {'step': 'step3', 'id': '5%[0]+10%[1]', 'k': 30, 'score': 0.02, 'winner': True},
        {'step': 'step3', 'id': '5%[1]', 'k': 10, 'score': float('nan'), 'winner': False},
    ]))
    frame = collector.get_search_candidates()
    assert len(frame) == 3
    step3 = frame[frame['step'] == 'step3']
    assert step3.iloc[0]['candidate_id'] == '5%[0]+10%[1]'
    assert bool(step3.iloc[0]['winner'])
    assert step3.iloc[1]['score'] is None or math.isnan(step3.iloc[1]['score'])


def test_pipeline_stats(collector):
    collector.start_run('video')
    collector.record_pipeline_stats({
        'frames_in': 4, 'frames_estimated': 3, 'frames_skipped': 1,
        'mean_frame_ms': 2.5, 'throughput_fps': 20.0, 'wall_seconds': 0.2,
    })
    (stats,) = collector.get_pipeline_stats()
    assert stats['frames_skipped'] == 1
    assert stats['throughput_fps'] == pytest.approx(20.0)


def test_export_to_csv(collector, tmp_path):
    collector.start_run('evaluate')
    collector.record_metric_report('image', _report(0.1))
    collector.end_run()
    out = tmp_path / 'csv'
    collector.export_to_csv(str(out))
    for table in ('runs', 'metric_reports', 'search_candidates', 'pipeline_stats'):
        assert (out / f'{table}.csv').exists()
    assert len(pd.read_csv(out / 'metric_reports.csv')) == 1


def test_missing_sql_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        ResultsCollector(str(tmp_path / 'x.duckdb'), sql_dir=str(tmp_path / 'nowhere'))
