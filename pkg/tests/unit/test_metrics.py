from prometheus_client import generate_latest

from app.metrics import (
    get_metrics,
    increment_check_failures,
    increment_instances_processed,
    observe_instance_duration,
    set_instances_in_queue,
    write_metrics,
)
from app.models import InstanceStatus


def test_increment_instances_processed_completed():
    """Тест increment_instances_processed для статуса completed"""
    increment_instances_processed(InstanceStatus.COMPLETED.value)

    metrics_text = generate_latest().decode('utf-8')
    assert 'instances_processed_total' in metrics_text
    assert 'status="completed"' in metrics_text


def test_increment_instances_processed_failed():
    """Тест increment_instances_processed для статуса failed"""
    increment_instances_processed(InstanceStatus.FAILED.value)

    metrics_text = generate_latest().decode('utf-8')
    assert 'status="failed"' in metrics_text


def test_observe_instance_duration():
    observe_instance_duration(0.05)

    metrics_text = generate_latest().decode('utf-8')
    assert 'instance_duration_seconds_bucket' in metrics_text


def test_increment_check_failures():
    increment_check_failures("bound:nu_at_least_p2_p_1")

    metrics_text = generate_latest().decode('utf-8')
    assert 'check_failures_total' in metrics_text
    assert 'check="bound:nu_at_least_p2_p_1"' in metrics_text


def test_set_instances_in_queue():
    set_instances_in_queue(3)

    metrics_text = generate_latest().decode('utf-8')
    assert 'instances_in_queue 3.0' in metrics_text


def test_get_metrics_format():
    """Тест формата вывода get_metrics"""
    metrics = get_metrics()
    assert isinstance(metrics, bytes)
    assert '# HELP' in metrics.decode('utf-8')


def test_write_metrics(tmp_path):
    path = tmp_path / "sylow.prom"
    increment_instances_processed(InstanceStatus.COMPLETED.value)
    write_metrics(path)
    assert 'instances_processed_total' in path.read_text()


def test_write_metrics_to_stderr(capsys):
    """Путь "-" печатает метрики в stderr, stdout остается пустым"""
    increment_instances_processed(InstanceStatus.COMPLETED.value)
    write_metrics("-")
    captured = capsys.readouterr()
    assert 'instances_processed_total' in captured.err
    assert captured.out == ""
