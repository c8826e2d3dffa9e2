import numpy as np
import pytest

from src.config import Config
from src.utils.cache_manager import DictionaryCache
from src.utils.logger import Logger
from src.utils.monitor import SolveMonitor


@pytest.fixture
def quiet_logger():
    return Logger(log_level='WARNING', enable_console=False, enable_file=False)


class TestSolveMonitor:
    def test_healthy(self, quiet_logger):
        monitor = SolveMonitor(quiet_logger, solve_time_alert_ms=100.0, non_optimal_rate_alert=0.5)
        for _ in range(4):
            monitor.record_solve('dpc', 'optimal', 2.0, 15)
        health = monitor.get_health_status()
        assert health['status'] == 'healthy'
        assert health['metrics']['dpc']['solves'] == 4
        assert health['metrics']['dpc']['iterations_avg'] == 15

    def test_alerts(self, quiet_logger):
        monitor = SolveMonitor(quiet_logger, solve_time_alert_ms=1.0, non_optimal_rate_alert=0.1)
        monitor.record_solve('mpc', 'optimal', 5.0, 10)
        monitor.record_solve('mpc', 'max-iterations', 7.0, 50000)
        health = monitor.get_health_status()
        assert health['status'] == 'degraded'
        assert {alert['type'] for alert in health['alerts']} == {'solve_time_ms', 'non_optimal_rate'}

    def test_window(self, quiet_logger):
        monitor = SolveMonitor(quiet_logger, metrics_window=2)
        for ms in (1.0, 2.0, 3.0):
            monitor.record_solve('dpc', 'optimal', ms, 1)
        assert monitor.get_current_metrics()['dpc']['solve_ms_avg'] == pytest.approx(2.5)


class TestDictionaryCache:
    def test_miss_then_hit(self, tmp_path, example1_dictionary, quiet_logger):
        cache = DictionaryCache(str(tmp_path / 'cache'), quiet_logger)
        recipe = dict(example1_dictionary.recipe)
        assert cache.get(recipe) is None
        cache.set(recipe, example1_dictionary)
        hit = cache.get(recipe)
        np.testing.assert_array_equal(hit.y.values, example1_dictionary.y.values)
        assert cache.get_stats()['total_entries'] == 1

    def test_key_depends_on_recipe(self, tmp_path, example1_dictionary):
        cache = DictionaryCache(str(tmp_path / 'cache'))
        recipe = dict(example1_dictionary.recipe)
        other = {**recipe, 'seed': recipe['seed'] + 1}
        assert cache.key_for(recipe) != cache.key_for(other)
        assert cache.key_for(recipe).startswith('lpv-io_')

    def test_corrupt_entry_dropped(self, tmp_path, example1_dictionary):
        cache = DictionaryCache(str(tmp_path / 'cache'))
        recipe = dict(example1_dictionary.recipe)
        cache.set(recipe, example1_dictionary)
        path = tmp_path / 'cache' / f"{cache.key_for(recipe)}.csv"
        path.write_text('garbage\n', encoding='utf-8')
        assert cache.get(recipe) is None
        assert not path.exists()


def test_config_snapshot():
    settings = Config.as_dict()
    assert settings['QP_TOL'] == Config.QP_TOL
    assert 'OUTPUT_ROOT' in settings
    assert Config.get_output_dir('example1').name == 'example1'
