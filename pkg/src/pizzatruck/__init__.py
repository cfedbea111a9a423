"""Pizza food-truck N-back game with real-time EEG workload monitoring.

The package splits into a deterministic task engine (the game), a
signal chain turning 16-channel EEG chunks into per-epoch workload
classes, a synthetic EEG source standing in for the headset, and a
session server broadcasting both game state and workload to clients.
"""

__version__ = "0.1.0"

from .signals import DEFAULT_LAYOUT, ChannelLayout  # noqa: F401
from .task import GameConfig, OrderSequence, generate_sequence  # noqa: F401
from .workload import WorkloadClass, WorkloadSample  # noqa: F401
