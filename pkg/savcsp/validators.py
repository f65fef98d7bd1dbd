from typing import Any


def validate_required(kwargs: dict, req_params: list, fn_name: str) -> None:
    """Check bound arguments for required parameters that were left as None.
    :param kwargs: dictionary object of bound arguments
    :param req_params: list of required params
    :param fn_name: function name for exceptions"""
    for req_param in req_params:
        if kwargs.get(req_param) is None:
            raise TypeError(f"{fn_name}() missing required parameter: {req_param!r}")


def validate_param_opts(kwargs: dict, val_params: dict, fn_name: str) -> None:
    """Validate values for parameters that only accept specific values.
    :param kwargs: dictionary object of bound arguments
    :param val_params: dict of any value parameters to check, {"param": ["valid", "values"]}
    :param fn_name: function name for exceptions"""
    for param, values in val_params.items():
        value = kwargs.get(param)

        if value is not None and value not in values:
            err = f"{fn_name}() unexpected value {value!r} for {param!r}, expecting one of: {values}"
            raise ValueError(err)


def validate_range(kwargs: dict, ranges: dict, fn_name: str, owner: Any = None) -> None:
    """Validate integer parameters against inclusive bounds.
    A bound given as a string names an attribute of the owner, so instance caps can be used as limits.
    :param kwargs: dictionary object of bound arguments
    :param ranges: dict of {"param": (low, high)}; either bound may be None
    :param fn_name: function name for exceptions
    :param owner: object used to resolve attribute-named bounds"""
    for param, (low, high) in ranges.items():
        value = kwargs.get(param)

        if value is None:
            continue

        low = getattr(owner, low) if isinstance(low, str) else low
        high = getattr(owner, high) if isinstance(high, str) else high

        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"{fn_name}() expected an integer for {param!r}, got {value!r}")

        if (low is not None and value < low) or (high is not None and value > high):
            raise ValueError(f"{fn_name}() value {value} for {param!r} outside the range [{low}, {high}]")


def validate_ordered(kwargs: dict, ordered: list, fn_name: str) -> None:
    """Validate that pairs of parameters are non-decreasing, for example k <= l.
    :param kwargs: dictionary object of bound arguments
    :param ordered: list of (smaller, larger) parameter name pairs
    :param fn_name: function name for exceptions"""
    for small, large in ordered:
        a, b = kwargs.get(small), kwargs.get(large)

        if a is not None and b is not None and a > b:
            raise ValueError(f"{fn_name}() {small!r} ({a}) must not exceed {large!r} ({b})")
