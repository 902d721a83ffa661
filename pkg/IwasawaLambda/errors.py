"""Error hierarchy. Every failure carries a stable code and the CLI exit code it maps to."""


class LambdaError(Exception):
    exit_code = 5

    def __init__(self, code: str, message: str, **context):
        super().__init__(message)
        self.code = code
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return f"{self.code}: {self.message}"
        details = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.code}: {self.message} ({details})"


class PreconditionError(LambdaError):
    exit_code = 2


class BudgetError(LambdaError):
    exit_code = 3

    def __init__(self, message: str, **context):
        super().__init__("BUDGET_EXCEEDED", message, **context)


class CertificateError(LambdaError):
    exit_code = 4


class InvariantError(LambdaError):
    exit_code = 5
