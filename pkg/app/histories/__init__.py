from .space import Event, History, HistorySpace, single_time_events

__all__ = ["Event", "History", "HistorySpace", "single_time_events"]
