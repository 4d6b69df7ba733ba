"""Kochen-Specker and Bell-CHSH tests on continuous-variable states."""

__version__ = "0.1.0"
