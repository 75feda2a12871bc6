"""
Licensed to the Apache Software Foundation (ASF) under one
or more contributor license agreements.  See the NOTICE file
distributed with this work for additional information
regarding copyright ownership.  The ASF licenses this file
to you under the Apache License, Version 2.0 (the
"License"); you may not use this file except in compliance
with the License.  You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing,
software distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
KIND, either express or implied.  See the License for the
specific language governing permissions and limitations
under the License.
"""
from enum import Enum
import math

import numpy as np


def default_marshaller(obj):
    """
    Retrieve the state of the given object as builtins, recursively.

    namedtuples become dicts, numpy arrays and scalars become lists and
    Python numbers, sets become sorted lists, Enums become their values and
    any other object contributes ``__getstate__()`` or its ``__dict__``.
    Non-finite floats are written as strings so that the output stays
    strict JSON.

    :param obj: the object to marshal
    :returns: the marshalled object state
    """
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, Enum):
        return default_marshaller(obj.value)
    if isinstance(obj, np.ndarray):
        return [default_marshaller(x) for x in obj.tolist()]
    if isinstance(obj, np.generic):
        return default_marshaller(obj.item())
    if hasattr(obj, '_asdict'):
        return {k: default_marshaller(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): default_marshaller(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [default_marshaller(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [default_marshaller(x) for x in obj]

    getstate = getattr(obj, '__getstate__', None)
    state = getstate() if getstate is not None else None
    if state is None:
        try:
            state = obj.__dict__
        except AttributeError:
            raise TypeError('{!r} has no __dict__ attribute and does not implement '
                            '__getstate__()'.format(obj.__class__.__name__))
    return default_marshaller(state)
