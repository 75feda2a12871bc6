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
import logging

from pubsub import pub as event_bus

EVENT_TOPIC = event_bus.AUTO_TOPIC

logger = logging.getLogger(__name__)

SOLVER_TOPICS = ('SOLVER.CONVERGED', 'SOLVER.FALLBACK', 'SOLVER.FAILED')
SAMPLER_TOPICS = ('SAMPLER.FINISHED',)
ROUNDING_TOPICS = ('ROUNDING.FINISHED',)
ACCEPTANCE_TOPICS = ('ACCEPTANCE.CRITERION',)


def publish(eventbus, topic, **items):
    """
    Send ``items`` on ``topic``.  Components built without a bus (eventbus is
    None) publish nothing.
    """
    if eventbus is None:
        return
    try:
        eventbus.sendMessage(topic, items=items)
    except AttributeError:
        msg = "Could not publish {} event".format(topic)
        logger.warning(msg)


class EventLogger:

    def __init__(self, eventbus):
        for topic in SOLVER_TOPICS:
            eventbus.subscribe(self.log_solver_event, topic)
        for topic in SAMPLER_TOPICS:
            eventbus.subscribe(self.log_sampler_event, topic)
        for topic in ROUNDING_TOPICS:
            eventbus.subscribe(self.log_rounding_event, topic)
        for topic in ACCEPTANCE_TOPICS:
            eventbus.subscribe(self.log_acceptance_event, topic)

    def log_solver_event(self, items=None, topic=EVENT_TOPIC):
        items = items or {}
        name = topic.getName()
        if name == 'SOLVER.FAILED':
            logger.warning(name, extra=items)
        else:
            logger.info(name, extra=items)

    def log_sampler_event(self, items=None, topic=EVENT_TOPIC):
        logger.info(topic.getName(), extra=items or {})

    def log_rounding_event(self, items=None, topic=EVENT_TOPIC):
        logger.info(topic.getName(), extra=items or {})

    def log_acceptance_event(self, items=None, topic=EVENT_TOPIC):
        items = items or {}
        extra = {'criterion': items.get('criterion'),
                 'passed': items.get('passed'),
                 'hard': items.get('hard')}
        logger.info(topic.getName(), extra=extra)
