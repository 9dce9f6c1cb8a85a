"""
Enum definitions for simulated model families and their variants.
"""

from enum import Enum


class ModelFamily(Enum):
    """Family of a simulator; selects the recursion used by `simulate`."""
    FIR = "fir"
    GROWTH = "growth"
    WIENER = "wiener"

    @classmethod
    def get_valid_families(cls) -> list:
        return [family.value for family in cls]

    @classmethod
    def is_valid(cls, family: str) -> bool:
        return family in cls.get_valid_families()


class GrowthVariant(Enum):
    """Variants of the growth model: fully generic, or one of the two benchmark cases."""
    GENERIC = "generic"
    M1 = "M1"
    M2 = "M2"

    @classmethod
    def get_valid_variants(cls) -> list:
        return [variant.value for variant in cls]

    @classmethod
    def is_valid(cls, variant: str) -> bool:
        return variant in cls.get_valid_variants()
