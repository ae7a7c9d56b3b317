"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class GridMismatchError(ValueError):
    """Two spectra defined on different frequency grids were combined."""


class InstabilityError(RuntimeError):
    """The simulated feedback loop diverged."""


class InfeasibleError(ValueError):
    """A design target cannot be reached with the given configuration."""


class ConfigError(ValueError):
    """Scenario configuration failed validation.

    ``problems`` holds ``(field_path, message)`` pairs for every offending field.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"{path}: {msg}" for path, msg in self.problems]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))
