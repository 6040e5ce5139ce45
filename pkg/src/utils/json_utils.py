import json
from fractions import Fraction

from pydantic import BaseModel


def _default(o):
    if isinstance(o, BaseModel):
        return o.model_dump()
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    return o.__dict__


def dump_object(object):
    return json.dumps(object, default=_default, indent=2)
