class ProcessorNotFoundError(Exception):
    pass


class InvalidInputError(Exception):
    pass


class ProcessorExecutionError(Exception):

    def __init__(self, message: str, category: str = "internal"):
        super().__init__(message)
        self.category = category
