"""Exception types shared across the package."""


class JetsymError(Exception):
    """Base class for all package errors."""


class DivisionByZero(JetsymError):
    """Division by the zero element of the coefficient field."""


class PoleAtParameter(JetsymError):
    """A coefficient denominator vanishes at the requested parameter value."""

    def __init__(self, value, den_text="", monomial=None):
        self.value = value
        self.den_text = den_text
        self.monomial = monomial
        msg = f"pole at parameter = {value}"
        if den_text:
            msg += f" (denominator {den_text})"
        super().__init__(msg)


class ExplicitXTDependence(JetsymError):
    """Operation requires an expression free of explicit x and t."""


class NonIntegerExponentPath(JetsymError):
    """Formal integration in a single generator left the exponent lattice."""


class NonlocalObstruction(JetsymError):
    """An antiderivative was requested for an expression outside Im D_x."""

    def __init__(self, remainder, entry=None):
        self.remainder = remainder
        self.entry = entry
        where = f" at matrix entry {entry}" if entry is not None else ""
        super().__init__(f"nonlocal obstruction{where}: remainder is nonzero")


class StructuralViolation(JetsymError):
    """A field fails the required leading-linear-plus-nonlinear-tail shape."""

    def __init__(self, reason, monomial=None, component=None):
        self.reason = reason
        self.monomial = monomial
        self.component = component
        super().__init__(reason)


class NotDecomposable(JetsymError):
    """Density does not split as constant * w + exact part."""


class AnsatzTooLarge(JetsymError):
    """Density ansatz exceeds the configured unknown-count cap."""

    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"ansatz has {count} unknowns, cap is {cap}")


class ParseError(JetsymError):
    """Syntax error in a system definition or operator text."""

    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownIdentifier(ParseError):
    """Identifier is not a declared variable, derivative, or parameter."""


class DuplicateEquation(JetsymError):
    """More than one evolution equation for the same dependent variable."""


class MissingEquation(JetsymError):
    """A declared dependent variable has no evolution equation."""
