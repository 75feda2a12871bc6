from collections import namedtuple
from enum import Enum

import numpy as np
import pytest
from unittest import mock

from entropygraph.core import (
    DegreeSequence,
    JSONSerializer,
    SerializationManager,
    default_marshaller,
)


class Colour(Enum):
    RED = 'red'


Point = namedtuple('Point', 'x y')


def test_sm_init_json():
    sm = SerializationManager()
    assert isinstance(sm.serializer, JSONSerializer)


def test_sm_init_unknown_scheme_raises():
    with pytest.raises(ValueError):
        SerializationManager('msgpack')


def test_sm_serialize(monkeypatch):
    sm = SerializationManager()
    monkeypatch.setattr(sm.serializer, 'serialize', lambda x: x)
    assert sm.serialize('testing') == 'testing'


def test_sm_deserialize_returns_none():
    sm = SerializationManager()
    with mock.patch.object(sm.serializer, 'deserialize') as mock_deser:
        mock_deser.side_effect = Exception
        assert sm.deserialize(None) is None


def test_sm_deserialize_raises():
    sm = SerializationManager()
    with mock.patch.object(sm.serializer, 'deserialize') as mock_deser:
        mock_deser.side_effect = Exception
        with pytest.raises(Exception):
            sm.deserialize('testing')


def test_json_serializer_is_deterministic():
    serializer = JSONSerializer()
    first = serializer.serialize({'b': 1, 'a': [1.5, 2]})
    second = serializer.serialize({'a': [1.5, 2], 'b': 1})
    assert first == second
    assert first.endswith(b'\n')
    assert serializer.mimetype == 'application/json'


def test_json_serializer_round_trips_state():
    serializer = JSONSerializer()
    payload = serializer.serialize(DegreeSequence([2, 1, 1]))
    assert serializer.deserialize(payload) == {'degrees': [1, 1, 2], 'total': 4}


def test_default_marshaller_numpy_and_enum():
    state = default_marshaller({'r': np.array([1.0, 2.0]), 'n': np.int64(3),
                                'colour': Colour.RED, 'pairs': {(1, 2)}})
    assert state == {'r': [1.0, 2.0], 'n': 3, 'colour': 'red', 'pairs': [[1, 2]]}


def test_default_marshaller_namedtuple_and_nonfinite():
    assert default_marshaller(Point(float('inf'), 1)) == {'x': 'inf', 'y': 1}


def test_default_marshaller_uses_dict_of_plain_objects():
    class Plain:
        def __init__(self):
            self.value = 4

    assert default_marshaller(Plain()) == {'value': 4}


def test_default_marshaller_rejects_stateless_objects():
    with pytest.raises(TypeError):
        default_marshaller(object())
