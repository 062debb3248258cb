"""
Celery application for experiment dispatch.
With REDIS_URL the suites run on real workers; without it tasks execute
eagerly in-process, so the CLI works with no broker at all.
"""
from celery import Celery
from app.core.config import settings

celery_app = Celery("abels_finiteness")

celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_track_started=True,
    task_time_limit=settings.EXPERIMENT_TIMEOUT_SECONDS,
    task_soft_time_limit=max(1, settings.EXPERIMENT_TIMEOUT_SECONDS - 30),
    worker_prefetch_multiplier=1,  # suites are long and uneven
    task_acks_late=True,
    task_reject_on_worker_lost=True,
)

if settings.dispatch_enabled:
    celery_app.conf.broker_url = settings.REDIS_URL
    celery_app.conf.result_backend = settings.REDIS_URL
else:
    celery_app.conf.broker_url = "memory://"
    celery_app.conf.result_backend = "cache+memory://"
    celery_app.conf.task_always_eager = True
    celery_app.conf.task_eager_propagates = True

celery_app.autodiscover_tasks(["app.worker"])
