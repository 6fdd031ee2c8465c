from pathlib import Path
from typing import Union
import logging
import sys

from prometheus_client import REGISTRY, Counter, Gauge, Histogram, generate_latest, write_to_textfile

logger = logging.getLogger(__name__)

# Метрики Prometheus
instances_processed_total = Counter(
    'instances_processed_total',
    'Общее количество обработанных экземпляров G = N x| P',
    ['status']
)

instance_duration_seconds = Histogram(
    'instance_duration_seconds',
    'Время анализа одного экземпляра в секундах',
    buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0]
)

check_failures_total = Counter(
    'check_failures_total',
    'Количество проваленных проверок (находок)',
    ['check']
)

instances_in_queue = Gauge(
    'instances_in_queue',
    'Количество экземпляров, ожидающих анализа при сканировании'
)


def get_metrics() -> bytes:
    """Возвращает метрики в формате Prometheus"""
    return generate_latest()


def increment_instances_processed(status: str):
    instances_processed_total.labels(status=status).inc()


def observe_instance_duration(duration_seconds: float):
    instance_duration_seconds.observe(duration_seconds)


def increment_check_failures(check: str):
    check_failures_total.labels(check=check).inc()


def set_instances_in_queue(count: int):
    instances_in_queue.set(count)


def write_metrics(path: Union[str, Path]):
    """
    Записывает метрики в текстовый файл (формат node_exporter textfile).

    Путь "-" - вывод в stderr: stdout занят отчетом.
    """
    if str(path) == "-":
        sys.stderr.write(get_metrics().decode("utf-8"))
        return
    write_to_textfile(str(path), REGISTRY)
    logger.info(f"Метрики записаны в {path}")
