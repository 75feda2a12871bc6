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
import rapidjson

from entropygraph.core.serialize.abcs import Serializer
from entropygraph.core.serialize.marshalling import default_marshaller


class JSONSerializer(Serializer):
    """
    Serializes objects to JSON using python-rapidjson.  Keys are sorted and
    indentation is fixed so that identical objects produce identical bytes.
    """

    def __init__(self, encoding='utf-8', indent=2):
        self.encoding = encoding
        self.indent = indent

    def serialize(self, obj):
        state = default_marshaller(obj)
        text = rapidjson.dumps(state, sort_keys=True, indent=self.indent)
        return (text + '\n').encode(self.encoding)

    def deserialize(self, payload):
        if isinstance(payload, bytes):
            payload = payload.decode(self.encoding)
        return rapidjson.loads(payload)

    @property
    def mimetype(self):
        return 'application/json'


class SerializationManager:
    """
    SerializationManager proxies serialization requests made by the
    experiment harness.
    """
    def __init__(self, serializer_scheme='json'):
        # add encoders here:
        self.serializers = {'json': JSONSerializer}

        try:
            self.serializer = self.serializers[serializer_scheme]()
        except KeyError:
            msg = 'unsupported serializer scheme: {0}'.format(serializer_scheme)
            raise ValueError(msg)

    def serialize(self, obj):
        """
        :type obj: a Serializable object, namedtuple, dict or list of these
        :returns: an encoded, serialized object
        """
        return self.serializer.serialize(obj)

    def deserialize(self, message):
        if message is None:
            return None
        return self.serializer.deserialize(message)
