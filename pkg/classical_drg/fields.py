from fractions import Fraction

import marshmallow as ma
from marshmallow.fields import *  # noqa
from marshmallow.fields import __all__ as ma_fields_all  # noqa

from classical_drg.families import TRule
from classical_drg.fock import EpsilonWord
from classical_drg.utils import float_or_none, to_fraction

__all__ = ["Rational", "Real", "Enum", "Word", "TRuleField", "IntegerList"] + ma_fields_all


class Rational(ma.fields.Field):
    """Exact rationals: "p/q", integers or decimal strings in, {"num", "den", "float"} out"""

    default_error_messages = {
        "invalid": "Not a valid rational number.",
        "zero_denominator": "Denominator has to be nonzero.",
    }

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        value = Fraction(value)
        return {"num": value.numerator, "den": value.denominator, "float": float(value)}

    def _deserialize(self, value, attr, data, **kwargs) -> Fraction:
        if isinstance(value, dict) and {"num", "den"} <= value.keys():
            value = f"{value['num']}/{value['den']}"
        if isinstance(value, float):
            raise self.make_error("invalid")
        try:
            return to_fraction(value)
        except ZeroDivisionError as error:
            raise self.make_error("zero_denominator") from error
        except (TypeError, ValueError) as error:
            raise self.make_error("invalid") from error


class Real(ma.fields.Float):
    """Floats that refuse nan and infinities on load and dump them as null"""

    default_error_messages = {
        "special": "Special numeric values (nan or infinity) are not permitted.",
    }

    def __init__(self, **kwargs):
        kwargs.setdefault("allow_nan", False)
        super().__init__(**kwargs)

    def _serialize(self, value, attr, obj, **kwargs):
        return float_or_none(value)


class Enum(ma.fields.Field):
    """Member of `enum`, loaded from its value or, failing that, its name in any case"""

    default_error_messages = {
        "invalid_enum": "Not one of {values}.",
    }

    def __init__(self, enum, dump_name: bool = False, **kwargs):
        self.enum = enum
        self.dump_name = dump_name
        super().__init__(**kwargs)

    def _serialize(self, value, *args, **kwargs):
        if value is None:
            return None
        return value.name.lower() if self.dump_name else value.value

    def _deserialize(self, value, *args, **kwargs):
        if isinstance(value, self.enum):
            return value
        try:
            return self.enum(value)
        except ValueError:
            pass
        if isinstance(value, str):
            by_name = {member.name.lower(): member for member in self.enum}
            member = by_name.get(value.strip().lower())
            if member is not None:
                return member
        raise self.make_error("invalid_enum", values=", ".join(str(member.value) for member in self.enum))


class Word(ma.fields.Field):
    default_error_messages = {
        "invalid": "Not a valid word, use the letters + - o (or p m c).",
    }

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return str(value)

    def _deserialize(self, value, attr, data, **kwargs) -> EpsilonWord:
        if isinstance(value, EpsilonWord):
            return value
        if not isinstance(value, str):
            raise self.make_error("invalid")
        try:
            return EpsilonWord.parse(value)
        except ValueError as error:
            raise self.make_error("invalid") from error


class TRuleField(ma.fields.Field):
    """
    t-schedules as strings: "zero", "const:<rational>", or "power:<slope>[,<intercept>]"
    for t = b^-ceil(slope d + intercept)
    """

    default_error_messages = {
        "invalid": "Not a valid t-rule, use zero, const:<t> or power:<slope>[,<intercept>].",
    }

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return str(value)

    def _deserialize(self, value, attr, data, **kwargs) -> TRule:
        if isinstance(value, TRule):
            return value
        if not isinstance(value, str):
            raise self.make_error("invalid")
        kind, _, argument = value.strip().partition(":")
        try:
            if kind == "zero" and not argument:
                return TRule.zero()
            if kind == "const":
                return TRule.constant(to_fraction(argument))
            if kind == "power":
                slope, _, intercept = argument.partition(",")
                return TRule.power(to_fraction(slope), to_fraction(intercept or "0"))
        except (TypeError, ValueError, ZeroDivisionError) as error:
            raise self.make_error("invalid") from error
        raise self.make_error("invalid")


class IntegerList(ma.fields.List):
    """Integer lists that also load from a comma-separated string"""

    def __init__(self, **kwargs):
        super().__init__(ma.fields.Integer(strict=False), **kwargs)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = [item.strip() for item in value.split(",") if item.strip()]
        return super()._deserialize(value, attr, data, **kwargs)
