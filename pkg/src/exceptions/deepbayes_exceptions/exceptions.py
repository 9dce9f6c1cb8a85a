from typing import Optional


class DeepBayesError(Exception):
    category = "internal"


class InvalidSpecError(DeepBayesError, ValueError):
    category = "invalid_spec"


class InvalidParameterError(DeepBayesError, ValueError):
    category = "invalid_parameter"


class SingularSystemError(DeepBayesError):
    category = "singular_system"


class DegenerateFilterError(DeepBayesError):
    category = "degenerate_filter"

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class NonFiniteGradientError(DeepBayesError):
    category = "non_finite"


class DivergenceError(DeepBayesError):
    category = "divergence"

    def __init__(self, message: str, checkpoint=None):
        super().__init__(message)
        self.checkpoint = checkpoint


class DatasetFormatError(DeepBayesError):
    category = "dataset_format"

    def __init__(self, message: str, line: Optional[int] = None, offset: Optional[int] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if offset is not None:
            location.append(f"byte offset {offset}")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)
        self.line = line
        self.offset = offset


class DomainError(DeepBayesError, ValueError):
    category = "domain"


class MappingError(DeepBayesError):
    category = "mapping"


class NoFitError(DeepBayesError):
    category = "no_fit"


class EstimatorFailureError(DeepBayesError):
    category = "estimator_failure"

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class ConfigError(DeepBayesError):
    category = "config"

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key
