import inspect
import logging

from functools import wraps
from typing import Callable

from .validators import validate_ordered, validate_param_opts, validate_range, validate_required

LOG = logging.getLogger(__name__)


def method_params(fn: Callable) -> Callable:
    """Decorator for performing validations on a component method.
    The checks are read from the owning instance's '_method_kwargs' table under the method's name:
        "req_params": parameters that must not be None
        "validate": {"param": [allowed values]}
        "ranges": {"param": (low, high)}, where a string bound names a cap attribute of the instance
        "ordered": [("small", "large")] pairs that must be non-decreasing
    Defaults declared in the method signature are applied before validating.
    Note: This decorator must be first in the decorator chain."""
    signature = inspect.signature(fn)

    @wraps(fn)
    def wrap_actions(self, *args, **kwargs) -> Callable:
        fn_name = fn.__name__
        conf = self._method_kwargs.get(fn_name, {})
        bound = signature.bind(self, *args, **kwargs)
        bound.apply_defaults()
        params = dict(bound.arguments)

        req_params = conf.get("req_params")
        val_params = conf.get("validate")
        rng_params = conf.get("ranges")
        ord_params = conf.get("ordered")

        if req_params:
            validate_required(params, req_params, fn_name)

        if val_params:
            validate_param_opts(params, val_params, fn_name)

        if rng_params:
            validate_range(params, rng_params, fn_name, owner=self)

        if ord_params:
            validate_ordered(params, ord_params, fn_name)

        return fn(self, *args, **kwargs)

    return wrap_actions


def cached_by_fingerprint(key_fn: Callable) -> Callable:
    """Decorator caching a method's result per instance under a key derived from its arguments.
    Used for verdicts that are expensive to compute and depend only on a language's canonical form.
    :param key_fn: callable mapping the method's arguments to a hashable key"""

    def wrap_function(fn: Callable) -> Callable:
        @wraps(fn)
        def wrap_actions(self, *args, **kwargs):
            cache = self.__dict__.setdefault("_fingerprint_cache", {})
            key = (fn.__name__, key_fn(*args, **kwargs))

            if key not in cache:
                cache[key] = fn(self, *args, **kwargs)
            else:
                LOG.debug("%s(): cache hit for %s", fn.__name__, key[1][:12] if isinstance(key[1], str) else key[1])

            return cache[key]

        return wrap_actions

    return wrap_function
