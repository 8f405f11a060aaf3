# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

import unittest

import numpy as np

from dili.api.coord import Coord
from dili.api.message import (
    ElectionPayload,
    Message,
    MessageKind,
    RoundDone,
    WaveTag,
)
from dili.network.latency_models import FixedLatency, parse_latency, UniformLatency
from dili.network.link import LinkState, on_undock, schedule_delivery
from dili.network.transport import LinkDownError, Transport

from test.utils import make_config


def _msg(uid: int, src: int, dst: int, at: int = 0) -> Message:
    return Message(uid, src, dst, MessageKind.ROUND_DONE, RoundDone(0, src), at)


class TestLatencyModels(unittest.TestCase):
    def test_uniform_stays_in_range(self) -> None:
        model = UniformLatency(1, 20)
        rng = np.random.default_rng(0)
        draws = [model.sample(rng) for _ in range(500)]
        self.assertGreaterEqual(min(draws), 1)
        self.assertLessEqual(max(draws), 20)
        self.assertEqual(model.max_delay, 20)

    def test_same_seed_same_draws(self) -> None:
        model = UniformLatency(1, 20)
        a = [model.sample(np.random.default_rng(7)) for _ in range(3)]
        b = [model.sample(np.random.default_rng(7)) for _ in range(3)]
        self.assertEqual(a, b)

    def test_describe_round_trips(self) -> None:
        for model in (FixedLatency(5), UniformLatency(2, 9)):
            self.assertEqual(parse_latency(model.describe()), model)

    def test_bad_models(self) -> None:
        with self.assertRaises(ValueError):
            FixedLatency(0)
        with self.assertRaises(ValueError):
            UniformLatency(5, 2)
        with self.assertRaises(ValueError):
            parse_latency("gaussian:3")


class TestLink(unittest.TestCase):
    def test_delivery_after_latency(self) -> None:
        link = LinkState((1, 2))
        rng = np.random.default_rng(0)
        self.assertEqual(schedule_delivery(_msg(1, 1, 2, at=100), FixedLatency(5), rng, link), 105)

    def test_fifo_clamp(self) -> None:
        link = LinkState((1, 2), last_delivery=109)
        rng = np.random.default_rng(0)
        self.assertEqual(schedule_delivery(_msg(1, 2, 1, at=100), FixedLatency(3), rng, link), 110)
        self.assertEqual(on_undock(link)[0].uid, 1)
        self.assertEqual(len(link.in_flight), 0)


class TestTransport(unittest.TestCase):
    def setUp(self) -> None:
        # 1 - 2 - 3 in a row, 4 off on its own diagonal
        self.config = make_config([(0, 0), (1, 0), (2, 0), (3, 1)])
        self.transport = Transport(UniformLatency(1, 20), np.random.default_rng(3))

    def test_fifo_per_link(self) -> None:
        ticks = [self.transport.send(_msg(i, 1, 2), self.config, 0) for i in range(1, 30)]
        self.assertEqual(ticks, sorted(set(ticks)))
        replies = [self.transport.send(_msg(i, 2, 1), self.config, 0) for i in range(30, 40)]
        # both directions share the link ordering
        self.assertGreater(replies[0], ticks[-1])

    def test_delivery_after_send(self) -> None:
        tick = self.transport.send(_msg(1, 2, 3, at=100), self.config, 100)
        self.assertGreater(tick, 100)
        self.assertLessEqual(tick, 120)
        self.assertTrue(self.transport.deliver(_msg(1, 2, 3, at=100)))
        self.assertEqual(self.transport.pending, 0)

    def test_only_docked_modules_talk(self) -> None:
        with self.assertRaises(LinkDownError) as ctx:
            self.transport.send(_msg(1, 3, 4), self.config, 0)
        self.assertEqual(ctx.exception.reason, "link_down")

    def test_failed_endpoints(self) -> None:
        config = make_config([(0, 0), (1, 0), (2, 0)], failed=[2])
        with self.assertRaises(LinkDownError) as ctx:
            self.transport.send(_msg(1, 1, 2), config, 0)
        self.assertEqual(ctx.exception.reason, "failed_dst")
        with self.assertRaises(LinkDownError) as ctx:
            self.transport.send(_msg(2, 2, 3), config, 0)
        self.assertEqual(ctx.exception.reason, "failed_src")

    def test_undock_drops_in_flight(self) -> None:
        m1, m2 = _msg(1, 1, 2), _msg(2, 2, 3)
        self.transport.send(m1, self.config, 0)
        self.transport.send(m2, self.config, 0)
        dropped = self.transport.undock(1)
        self.assertEqual([m.uid for m in dropped], [1])
        self.assertFalse(self.transport.deliver(m1))
        self.assertTrue(self.transport.deliver(m2))

    def test_in_transit_module_is_unreachable(self) -> None:
        self.transport.set_in_transit(2, True)
        with self.assertRaises(LinkDownError):
            self.transport.send(_msg(1, 1, 2), self.config, 0)
        self.transport.set_in_transit(2, False)
        self.transport.send(_msg(2, 1, 2), self.config, 0)

    def test_drop_all(self) -> None:
        self.transport.send(_msg(1, 1, 2), self.config, 0)
        self.transport.send(_msg(2, 3, 2), self.config, 0)
        self.assertEqual(len(self.transport.drop_all()), 2)
        self.assertEqual(self.transport.pending, 0)


class TestMessages(unittest.TestCase):
    def test_wave_tag_order(self) -> None:
        self.assertGreater(WaveTag(1, -9, 5), WaveTag(0, 0, 1))
        self.assertGreater(WaveTag(0, -2, 5), WaveTag(0, -3, 1))
        # equal scores: the smaller id wins
        self.assertGreater(WaveTag(0, -2, 1), WaveTag(0, -2, 5))

    def test_message_epoch(self) -> None:
        msg = Message(1, 1, 2, MessageKind.WAVE, ElectionPayload(WaveTag(4, 0, 1)), 0)
        self.assertEqual(msg.epoch, 4)
        with self.assertRaises(ValueError):
            _msg(1, 2, 2)

    def test_coord_spelling(self) -> None:
        self.assertEqual(str(Coord(3, -1)), "3,-1")
