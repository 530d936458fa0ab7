"""Lie bialgebras on gl(2), their Poisson-Lie groups, contractions to h4 and quantizations."""

__version__ = "0.1.0"
