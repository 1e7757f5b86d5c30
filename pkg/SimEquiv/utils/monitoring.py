import time
import logging
from datetime import datetime
from typing import Dict, Any, Optional
from functools import wraps
import statistics
from collections import defaultdict

import psutil

logger = logging.getLogger(__name__)


class PerformanceMetrics:
    def __init__(self):
        self.metrics = defaultdict(list)
        self.start_times = defaultdict(list)

    def start_operation(self, operation_name: str):
        """Start timing an operation"""
        self.start_times[operation_name].append(time.perf_counter())

    def end_operation(self, operation_name: str, metadata: Optional[Dict[str, Any]] = None):
        """End timing an operation and record metrics"""
        if self.start_times.get(operation_name):
            duration = time.perf_counter() - self.start_times[operation_name].pop()
            self.metrics[operation_name].append({
                'duration': duration,
                'timestamp': datetime.now().isoformat(),
                'metadata': metadata or {}
            })

    def get_operation_stats(self, operation_name: str) -> Dict[str, float]:
        """Get statistics for a specific operation"""
        if operation_name not in self.metrics:
            return {}

        durations = [m['duration'] for m in self.metrics[operation_name]]
        return {
            'count': len(durations),
            'mean': statistics.mean(durations),
            'median': statistics.median(durations),
            'min': min(durations),
            'max': max(durations),
            'total': sum(durations)
        }

    def get_all_stats(self) -> Dict[str, Dict[str, float]]:
        """Get statistics for all operations"""
        return {
            op_name: self.get_operation_stats(op_name)
            for op_name in self.metrics.keys()
        }

    def log_all_stats(self):
        """Log statistics for all operations"""
        logger.info("Performance statistics summary:")
        for op_name, stats in self.get_all_stats().items():
            logger.info(
                f"  {op_name}: count={stats['count']} total={stats['total']:.3f}s "
                f"mean={stats['mean']:.3f}s max={stats['max']:.3f}s"
            )

    def reset(self):
        self.metrics.clear()
        self.start_times.clear()


# Global metrics instance
metrics = PerformanceMetrics()


def track_performance(operation_name: str):
    """Decorator to track performance of a function"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            metrics.start_operation(operation_name)
            try:
                result = func(*args, **kwargs)
                metrics.end_operation(operation_name, {
                    'success': True,
                    'args_count': len(args),
                    'kwargs_count': len(kwargs)
                })
                return result
            except Exception as e:
                metrics.end_operation(operation_name, {
                    'success': False,
                    'error': str(e),
                    'args_count': len(args),
                    'kwargs_count': len(kwargs)
                })
                raise

        return wrapper
    return decorator


def check_allocation(label: str, n_bytes: int) -> bool:
    """Warn when an allocation would take more than half of the available memory"""
    available = psutil.virtual_memory().available
    if n_bytes > available // 2:
        logger.warning(
            f"{label} needs {n_bytes / 2**20:.0f} MiB, only {available / 2**20:.0f} MiB available"
        )
        return False
    logger.debug(f"{label}: allocating {n_bytes / 2**20:.1f} MiB")
    return True
