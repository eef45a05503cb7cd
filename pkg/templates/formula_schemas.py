"""
Formula schemas for adaptation properties
"""

from typing import Union

from evoverify.errors import BadArity, EvoVerifyError
from evoverify.logic import And, Atom, Ev, Formula, Next, Not, atom
from evoverify.process import Barb, parse_barb

BarbLike = Union[str, Barb]


def _atom(barb: BarbLike) -> Atom:
    if isinstance(barb, str):
        barb = parse_barb(barb)
    return atom(barb)


def eventually_after(formula: Formula) -> Formula:
    """At least one step, then eventually: `<> ev φ`"""
    return Next(Ev(formula))


class FormulaSchemas:
    """Parametric formulas over error and correctness barbs"""

    @staticmethod
    def CB(error: BarbLike, k: int) -> Formula:
        """No k consecutive error states: `not ev (e and <> (e and <> ... e))`"""
        if k < 1:
            raise BadArity("CB", "k", k)
        e = _atom(error)
        body: Formula = e
        for _ in range(k - 1):
            body = And(e, Next(body))
        return Not(Ev(body))

    @staticmethod
    def MC(error: BarbLike) -> Formula:
        """Monotone correctness: once solved, errors do not reappear"""
        e = _atom(error)
        return Not(Ev(And(e, eventually_after(And(Not(e), eventually_after(e))))))

    @staticmethod
    def MCr(ok: BarbLike, error: BarbLike) -> Formula:
        """Monotone correctness with a designated correctness barb, in the restricted logic"""
        return FormulaSchemas.MCrk(ok, error, 1)

    @staticmethod
    def MCrk(ok: BarbLike, error: BarbLike, k: int) -> Formula:
        """An error cannot re-appear after k correct phases"""
        if k < 1:
            raise BadArity("MCrk", "k", k)
        e, good = _atom(error), _atom(ok)
        chain: Formula = And(good, Ev(e))
        for _ in range(k - 1):
            chain = And(good, Ev(And(e, eventually_after(chain))))
        return Not(Ev(And(e, eventually_after(chain))))

    @staticmethod
    def schema(name: str, error: BarbLike, k: int = 1, ok: BarbLike = "ok") -> Formula:
        """
        Instantiate a schema by name

        Args:
            name: One of CB, MC, MCr, MCrk
            error: Error barb (`e` or `^e`)
            k: Repetition parameter of CB and MCrk
            ok: Correctness barb of MCr and MCrk

        Returns:
            Formula
        """
        if name == "CB":
            return FormulaSchemas.CB(error, k)
        if name == "MC":
            return FormulaSchemas.MC(error)
        if name == "MCr":
            return FormulaSchemas.MCr(ok, error)
        if name == "MCrk":
            return FormulaSchemas.MCrk(ok, error, k)
        raise EvoVerifyError(f"unknown schema '{name}', expected one of CB, MC, MCr, MCrk")
