"""Shared pydantic base for dect's configuration models."""

from functools import partial

try:
    from pydantic.v1 import BaseModel as PydanticBaseModel
    from pydantic.v1 import Extra, ValidationError, root_validator, validator
except ImportError:
    from pydantic import BaseModel as PydanticBaseModel
    from pydantic import Extra, ValidationError, root_validator, validator

validator_reuse = partial(validator, allow_reuse=True)
prevalidator_reuse = partial(validator_reuse, pre=True)


class BaseModel(PydanticBaseModel):
    class Config:
        allow_mutation = False
        allow_population_by_field_name = True
        extra = Extra.forbid
