"""kdvlab: a spectral-methods laboratory for IMEX soliton instabilities."""

__version__ = "0.1.0"
