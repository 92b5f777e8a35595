"""Exception hierarchy shared by every revsym module."""


class RevsymError(Exception):
    pass


class ParseError(RevsymError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")


class SortError(RevsymError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnboundVariable(RevsymError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class UninterpretedSymbol(RevsymError):
    """Raised when the evaluator meets a symbol outside the builtin catalogue."""

    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"no semantics for symbol {symbol!r}")


class AdmissionError(RevsymError):
    def __init__(self, rule_name, reason, counterexample=None):
        self.rule_name = rule_name
        self.reason = reason
        self.counterexample = counterexample
        super().__init__(f"rule {rule_name!r} rejected: {reason}")


class TheoryError(RevsymError):
    """Bad reference or duplicate name inside a theory file."""

    def __init__(self, message, line=None):
        self.message = message
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class FuelExhausted(RevsymError):
    def __init__(self, formula, fuel):
        self.formula = formula
        self.fuel = fuel
        super().__init__(f"rewriting did not terminate within {fuel} steps")


class CycleDetected(RevsymError):
    def __init__(self, formula, step):
        self.formula = formula
        self.step = step
        super().__init__(
            f"rewriting revisited formula #{hash(formula) & 0xFFFFFFFF:08x} at step {step}"
        )
