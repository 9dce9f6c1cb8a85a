"""
Package containing enum definitions for the project.
Provides standardized, type-safe constants for model families, signals, priors and networks.
"""
