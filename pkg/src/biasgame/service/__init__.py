from .api import create_app
from .clock import Clock, VirtualClock
from .events import EventLog, FileEventLog, load_events
from .platform import Platform

__all__ = ["Clock", "EventLog", "FileEventLog", "Platform", "VirtualClock", "create_app", "load_events"]
