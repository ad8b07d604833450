"""Scenario replay, generation, and the independent visibility oracle."""
