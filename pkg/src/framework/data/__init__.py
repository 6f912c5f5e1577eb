from .collector import ResultsCollector

__all__ = ['ResultsCollector']
