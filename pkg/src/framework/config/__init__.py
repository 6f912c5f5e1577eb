from .run_config import RunConfig, default_threads, THREADS_ENV, DEFAULT_CONFIG_PATH

__all__ = ['RunConfig', 'default_threads', 'THREADS_ENV', 'DEFAULT_CONFIG_PATH']
