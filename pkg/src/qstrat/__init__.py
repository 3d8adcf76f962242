"""Dataset-level selection among compilation, suppression and mitigation strategies."""

__version__ = "0.1.0"
