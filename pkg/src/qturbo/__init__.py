"""Quantum turbo codes built from convolutional stabilizer codes."""

__version__ = "0.1.0"
