"""
qzeno - Zeno-like null measurements on a double Jaynes-Cummings qubit system
"""

__version__ = "0.1.0"
__description__ = "Entanglement freezing, enhancement and resurrection by null-result measurements"

from .analytic import Branch
from .core import PureState16, SystemParams, TwoQubitDensity, TwoQubitPure, ZenoOutcome

__all__ = [
    'Branch',
    'PureState16',
    'SystemParams',
    'TwoQubitDensity',
    'TwoQubitPure',
    'ZenoOutcome',
]
