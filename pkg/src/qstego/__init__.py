"""Simulation toolkit for quantum steganography protocols.

Dense-matrix channel simulation, Renyi/smooth information measures,
constructive hash and resolvability encoders, the four stego protocol
compositions with numerical audits, and a config-driven experiment CLI.
All logarithms are base 2; rates are in bits.
"""

__version__ = "0.1.0"
