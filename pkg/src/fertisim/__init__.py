"""Closed-loop greenhouse fertigation simulator.

Simulates tomato-like plants growing under three nutrient-concentration
bands, renders them as silhouettes against a red background, measures them
back with a small vision pipeline, and drives an irrigation pump either on
a fixed timer or from a wilt-triggered rule evaluated on the measured
canopy width. A water ledger converts pump activity into liters per day so
the two regimes can be compared.
"""

__version__ = "0.1.0"
