"""Exception hierarchy shared by the front-ends, the rewriter and the engine."""

from __future__ import annotations


class Rl2DatalogError(Exception):
    pass


class ParseError(Rl2DatalogError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.line, self.column, self.source = line, column, source
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{column}: "
        super().__init__(where + message)


class UnsupportedConstructError(Rl2DatalogError):
    def __init__(self, construct: str, message: str | None = None):
        self.construct = construct
        super().__init__(message or f"unsupported construct: {construct}")


class UnsupportedSparqlFeature(UnsupportedConstructError):
    def __init__(self, feature: str):
        super().__init__(feature, f"unsupported SPARQL feature: {feature}")


class RlProfileError(Rl2DatalogError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  {v}" for v in self.violations)
        super().__init__(f"TBox is outside the OWL 2 RL profile:\n{lines}")


class UnsafeRuleError(Rl2DatalogError):
    pass


class StratificationError(Rl2DatalogError):
    def __init__(self, cycle):
        self.cycle = sorted(cycle)
        super().__init__("cycle through negation: " + ", ".join(self.cycle))


class ConfigError(Rl2DatalogError):
    pass


class UnknownQueryError(Rl2DatalogError, KeyError):
    def __init__(self, index: int):
        self.index = index
        Exception.__init__(self, f"no query with index {index} in the model")

    def __str__(self) -> str:
        return self.args[0]
