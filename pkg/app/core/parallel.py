"""
Thread fan-out with a fixed reduction order.
"""

import os
from concurrent.futures import ThreadPoolExecutor

from django.conf import settings


def worker_count():
    """Worker cap from ALLOCPLAN_THREADS (settings), never below one."""
    if settings.configured:
        threads = getattr(settings, "ALLOCPLAN_THREADS", None)
    else:
        threads = os.environ.get("ALLOCPLAN_THREADS")
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def ordered_map(func, items):
    """Apply func to every item; results come back in input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
