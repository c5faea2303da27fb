"""
Structured logging configuration for the tateforge engine.
Provides run ids, performance metrics, and consistent log formatting.
"""

import logging
import sys
import time
import uuid
from contextvars import ContextVar
from datetime import datetime, timezone
from functools import wraps
from typing import Callable, Optional

import structlog
from pythonjsonlogger import jsonlogger

from tateforge.config import settings

# Context variables for run-scoped data
run_id_var: ContextVar[Optional[str]] = ContextVar('run_id', default=None)
command_var: ContextVar[Optional[str]] = ContextVar('command', default=None)


def add_context(logger, method_name, event_dict):
    """Add context variables to all log entries"""
    run_id = run_id_var.get()
    if run_id:
        event_dict['run_id'] = run_id

    command = command_var.get()
    if command:
        event_dict['command'] = command

    event_dict['environment'] = settings.environment

    if 'timestamp' not in event_dict:
        event_dict['timestamp'] = datetime.now(timezone.utc).isoformat()

    return event_dict


def extract_from_exception(logger, method_name, event_dict):
    """Extract and format exception information"""
    if 'exception' in event_dict:
        exc_info = event_dict.pop('exception')
        if exc_info:
            event_dict['error_type'] = exc_info.__class__.__name__
            event_dict['error_message'] = str(exc_info)
            details = getattr(exc_info, 'details', None)
            if details:
                event_dict['error_details'] = details
            if settings.environment == 'development':
                import traceback
                event_dict['stack_trace'] = traceback.format_exception(
                    type(exc_info), exc_info, exc_info.__traceback__
                )
    return event_dict


def setup_logging():
    """Configure structured logging for the engine"""

    shared_processors = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        add_context,
        extract_from_exception,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    if settings.log_format == 'json':
        processors = shared_processors + [
            structlog.processors.dict_tracebacks,
            structlog.processors.JSONRenderer(sort_keys=True)
        ]
    else:
        processors = shared_processors + [
            structlog.dev.ConsoleRenderer(
                colors=sys.stderr.isatty(),
                pad_event=30,
                repr_native_str=False,
            )
        ]

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    if settings.log_format == 'json':
        formatter = jsonlogger.JsonFormatter(
            '%(timestamp)s %(level)s %(name)s %(message)s',
            rename_fields={'level': 'severity', 'name': 'logger'}
        )
    else:
        formatter = logging.Formatter('%(message)s')

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, settings.log_level))
    root_logger.handlers = []

    # stdout belongs to reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if settings.log_file:
        file_handler = logging.FileHandler(settings.log_file)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    return structlog.get_logger()


def get_logger(name: str = None) -> structlog.BoundLogger:
    """Get a structured logger instance"""
    if name:
        return structlog.get_logger(name)
    return structlog.get_logger()


def set_run_id(run_id: str = None) -> str:
    """Set or generate a run id for the current context"""
    if not run_id:
        run_id = uuid.uuid4().hex[:12]
    run_id_var.set(run_id)
    return run_id


def set_command(command: str):
    command_var.set(command)


def log_performance(operation: str = None):
    """Decorator to log duration of an engine operation"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger(func.__module__)
            op_name = operation or f"{func.__module__}.{func.__name__}"
            start_time = time.perf_counter()

            try:
                logger.debug(f"{op_name}.started")
                result = func(*args, **kwargs)
                duration_ms = int((time.perf_counter() - start_time) * 1000)

                if duration_ms > settings.slow_threshold_ms:
                    logger.info(
                        f"{op_name}.slow",
                        duration_ms=duration_ms,
                        threshold_ms=settings.slow_threshold_ms
                    )
                else:
                    logger.debug(
                        f"{op_name}.completed",
                        duration_ms=duration_ms
                    )

                return result

            except Exception as e:
                duration_ms = int((time.perf_counter() - start_time) * 1000)
                logger.error(
                    f"{op_name}.failed",
                    duration_ms=duration_ms,
                    exception=e
                )
                raise

        return wrapper

    return decorator


def log_computation_event(event_name: str, **kwargs):
    """Log a computation event with consistent structure"""
    logger = get_logger('computation_events')
    logger.info(event_name, **kwargs)


def log_error(error_name: str, exception: Exception = None, **kwargs):
    """Log an error with consistent structure"""
    logger = get_logger('errors')
    logger.error(error_name, exception=exception, **kwargs)


# Event constants for consistency
class ComputationEvents:
    # Basis and matrices
    BASIS_ENUMERATED = "basis.enumerated"
    CATALOG_BUILT = "catalog.built"

    # Margolis homology
    MARGOLIS_COMPUTED = "margolis.computed"
    EXT_COMPUTED = "ext.computed"
    LOCALIZED_E2_COMPUTED = "localized_e2.computed"

    # Pages
    PAGE_E2_BUILT = "page.e2_built"
    PAGE_D2_RUN = "page.d2_run"
    PAGE_TRUNCATED = "page.truncated"

    # Towers
    TOWER_VERDICT = "tower.verdict"
    TOWER_LIMIT = "tower.limit"

    # Oracles
    ORACLE_BAR_COMPUTED = "oracle.bar_computed"
    ORACLE_TWO_PATHS = "oracle.two_paths"
    ORACLE_RESOLUTION = "oracle.resolution"

    # Checks
    CHECK_PASSED = "check.passed"
    CHECK_MISMATCH = "check.mismatch"

    # Runs
    RUN_STARTED = "run.started"
    RUN_COMPLETED = "run.completed"
    RUN_FAILED = "run.failed"


logger = setup_logging()
