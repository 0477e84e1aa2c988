"""Configuration package for Hamiltonian clustering"""

from .config_loader import config

__all__ = ['config']
