from __future__ import annotations

from hubsim.config import SimParams
from hubsim.overlay import init_k_out
from hubsim.protocols import proofs_exchange, proofs_round
from hubsim.protocols.proofs import install_subset
from hubsim.rng import RngStream

FIGURE_CACHES = {1: [2, 3, 4, 7], 4: [5, 6, 8, 3]}


def test_shuffle_example(network_factory):
    net = network_factory("proofs", FIGURE_CACHES, n=9, c=4, l=3)
    assert proofs_exchange(net, 1, 4, [2, 3, 4], reply=[5, 6, 8])
    assert set(net.nodes[1].cache) == {7, 5, 6, 8}
    assert set(net.nodes[4].cache) == {2, 1, 3, 8}


def test_empty_slots_fill_before_sent_entries():
    cache = [1, 2]
    install_subset(cache, received=[3, 4, 5], sent=[1], self_id=0, capacity=4)
    assert cache == [5, 2, 3, 4]


def test_own_address_and_known_ids_are_dropped():
    cache = [1, 2, 3]
    install_subset(cache, received=[0, 2, 9], sent=[1, 3], self_id=0, capacity=3)
    assert cache == [9, 2, 3]


def test_zero_length_round_is_a_no_op(network_factory):
    net = network_factory("proofs", FIGURE_CACHES, n=9, c=4, l=3)
    proofs_round(net, 1, l=0)
    assert net.nodes[1].cache == [2, 3, 4, 7]
    assert net.nodes[4].cache == [5, 6, 8, 3]


def test_dead_partner_aborts(network_factory):
    net = network_factory("proofs", FIGURE_CACHES, n=9, c=4, l=3)
    net.kill(4)
    assert not proofs_exchange(net, 1, 4, [2, 3, 4])
    assert net.nodes[1].cache == [2, 3, 4, 7]


def test_exchanges_only_move_exchanged_entries():
    net = init_k_out(SimParams(n=20, c=6, l=3, seed=13), protocol="proofs")
    rng = RngStream.from_seed(99)
    for _ in range(1000):
        node = rng.choice(net.alive_ids())
        cache = net.nodes[node].cache
        subset = rng.sample(cache, 3)
        partner = rng.choice(subset)
        reply = rng.sample(net.nodes[partner].cache, 3)
        before_p, before_q = list(cache), list(net.nodes[partner].cache)
        sent = [p for p in subset if p != partner] + [node]

        assert proofs_exchange(net, node, partner, subset, reply=reply)

        after_p, after_q = net.nodes[node].cache, net.nodes[partner].cache
        assert set(before_p) - set(subset) <= set(after_p)
        assert set(before_q) - set(reply) <= set(after_q)
        assert set(after_p) <= set(before_p) | set(reply)
        assert set(after_q) <= set(before_q) | set(sent)
        for owner, after in ((node, after_p), (partner, after_q)):
            assert owner not in after
            assert len(after) == len(set(after)) <= 6
