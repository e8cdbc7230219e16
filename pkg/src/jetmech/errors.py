"""Exception hierarchy shared by all modules."""


class JetMechError(Exception):
    """Base class; carries optional context (field path, tau, sample index)."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)

    def __str__(self):
        base = super().__str__()
        if not self.context:
            return base
        extra = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{base} ({extra})"

    def with_context(self, **context):
        self.context.update(context)
        return self


class SingularTransition(JetMechError):
    pass


class DomainError(JetMechError):
    pass


class NonRegularInChart(JetMechError):
    pass


class NonPositiveG(JetMechError):
    pass


class SingularMassMatrix(JetMechError):
    pass


class DriftExceeded(JetMechError):
    pass


class NonPositiveReducedG(JetMechError):
    pass


class SingularReducedHessian(JetMechError):
    pass


class DegenerateWorldsheet(JetMechError):
    pass


class ConfigError(JetMechError):
    pass
