"""
Perturbation schedule parser using pyparsing

A schedule is an arithmetic expression in the step index k, e.g. "2^-k" or
"1e-3*0.5^k". Supports:
- Numbers: 3, 0.5, 1e-3
- The step variable k
- Operators: + - * / and ^ (right-associative, binds tightest after unary minus)
- Functions: exp(...), sqrt(...)
- Parentheses for grouping

Unary minus binds tighter than ^, so "2^-k" is 2^(-k) and "-2^2" is 4.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from pyparsing import (
    Forward, Keyword, ParseException, Regex, Suppress,
    infixNotation, oneOf, opAssoc
)


class ScheduleNode(ABC):
    """Base class for schedule expression nodes"""

    @abstractmethod
    def evaluate(self, k: int) -> float:
        """Value of this node at step k"""
        pass


@dataclass
class Number(ScheduleNode):
    value: float

    def evaluate(self, k: int) -> float:
        return self.value

    def __repr__(self):
        return f"Number({self.value})"


@dataclass
class StepVariable(ScheduleNode):
    def evaluate(self, k: int) -> float:
        return float(k)

    def __repr__(self):
        return "k"


@dataclass
class Negate(ScheduleNode):
    operand: ScheduleNode

    def evaluate(self, k: int) -> float:
        return -self.operand.evaluate(k)

    def __repr__(self):
        return f"NEG({self.operand})"


@dataclass
class BinaryOp(ScheduleNode):
    op: str
    left: ScheduleNode
    right: ScheduleNode

    def evaluate(self, k: int) -> float:
        left = self.left.evaluate(k)
        right = self.right.evaluate(k)
        if self.op == "+":
            return left + right
        if self.op == "-":
            return left - right
        if self.op == "*":
            return left * right
        if self.op == "/":
            if right == 0:
                raise ValueError(f"Division by zero in schedule at k={k}")
            return left / right
        try:
            return math.pow(left, right)
        except (OverflowError, ValueError) as e:
            raise ValueError(f"Cannot evaluate {left}^{right} at k={k}: {e}")

    def __repr__(self):
        return f"{self.op}({self.left}, {self.right})"


@dataclass
class Function(ScheduleNode):
    name: str
    argument: ScheduleNode

    def evaluate(self, k: int) -> float:
        value = self.argument.evaluate(k)
        try:
            if self.name == "exp":
                return math.exp(value)
            return math.sqrt(value)
        except (OverflowError, ValueError) as e:
            raise ValueError(f"Cannot evaluate {self.name}({value}) at k={k}: {e}")

    def __repr__(self):
        return f"{self.name}({self.argument})"


class ScheduleParser:
    """Parse schedule expressions into an expression tree"""

    def __init__(self):
        self._grammar = self._build_grammar()

    def _build_grammar(self):
        """Build the pyparsing grammar for schedule expressions"""
        number = Regex(r"(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?").setParseAction(
            lambda t: Number(float(t[0]))
        )
        variable = Keyword("k").setParseAction(lambda t: StepVariable())

        expr = Forward()
        function = (oneOf("exp sqrt", asKeyword=True) + Suppress("(") + expr + Suppress(")")).setParseAction(
            lambda t: Function(t[0], t[1])
        )
        operand = number | function | variable

        def make_right(tokens):
            # [a, ^, b, ^, c] -> a ^ (b ^ c)
            t = tokens[0]
            result = t[-1]
            for i in range(len(t) - 3, -1, -2):
                result = BinaryOp(t[i + 1], t[i], result)
            return result

        def make_left(tokens):
            # [a, op, b, op, c] -> (a op b) op c
            t = tokens[0]
            result = t[0]
            for i in range(1, len(t), 2):
                result = BinaryOp(t[i], result, t[i + 1])
            return result

        expr <<= infixNotation(
            operand,
            [
                ("-", 1, opAssoc.RIGHT, lambda t: Negate(t[0][1])),
                ("^", 2, opAssoc.RIGHT, make_right),
                (oneOf("* /"), 2, opAssoc.LEFT, make_left),
                (oneOf("+ -"), 2, opAssoc.LEFT, make_left),
            ]
        )
        return expr

    def parse(self, expression: str) -> ScheduleNode:
        """
        Parse a schedule expression into an expression tree

        Args:
            expression: Schedule expression string

        Returns:
            Root ScheduleNode of the expression tree

        Raises:
            ValueError: If expression is invalid
        """
        if not expression or not expression.strip():
            return Number(0.0)

        try:
            result = self._grammar.parseString(expression, parseAll=True)
            return result[0]
        except ParseException as e:
            raise ValueError(f"Invalid schedule expression: {e}")

    def evaluate(self, expression: str, k: int) -> float:
        """
        Parse and evaluate a schedule at step k

        Raises:
            ValueError: If the expression is invalid or its value is negative
                or not finite
        """
        value = self.parse(expression).evaluate(k)
        if not math.isfinite(value):
            raise ValueError(f"Schedule {expression!r} is not finite at k={k}")
        if value < 0:
            raise ValueError(f"Schedule {expression!r} is negative at k={k}: {value}")
        return value


# Singleton instance
_parser = ScheduleParser()


def parse_schedule(expression: str) -> ScheduleNode:
    """Parse a schedule expression into an expression tree"""
    return _parser.parse(expression)


def evaluate_schedule(expression: str, k: int) -> float:
    """
    Evaluate a perturbation schedule at step k

    Args:
        expression: Schedule expression string, e.g. "2^-k"
        k: Step index

    Returns:
        The non-negative perturbation scale eps_k
    """
    return _parser.evaluate(expression, k)
