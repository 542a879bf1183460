import pytest

from tandem.domain import validate_domain
from tandem.kitchen import KitchenConfig, LayoutError, build_kitchen


@pytest.fixture(scope="module")
def kitchen():
    return build_kitchen(KitchenConfig())


def test_structurally_valid(kitchen):
    assert validate_domain(kitchen) == []


def test_desk_scale(kitchen):
    assert kitchen.num_states <= 100_000


def test_propositions(kitchen):
    props = set(kitchen.propositions)
    assert {"delivered_onions_0", "delivered_onions_3", "pot_count_0", "pot_count_3"} <= props
    assert {"human_holding_onion", "robot_holding_soup"} <= props


def find_states(domain, predicate):
    return [s for s in range(domain.num_states) if predicate(s)]


def _pot_count(kitchen, s):
    return next(int(p[-1]) for p in kitchen.label(s) if p.startswith("pot_count_"))


def test_delivery_labels_exactly_the_post_state(kitchen):
    # pot is emptied when the soup is lifted, so delivering leaves it as-is;
    # the canonical 3-onion flow ends in {delivered_onions_3, pot_count_0}
    canonical = 0
    for (src, dst), action in kitchen.edge_display.items():
        if action != "deliver soup":
            continue
        label = kitchen.label(dst)
        delivered = {p for p in label if p.startswith("delivered_")}
        assert len(delivered) == 1
        assert _pot_count(kitchen, dst) == _pot_count(kitchen, src)
        if delivered == {"delivered_onions_3"} and "pot_count_0" in label:
            canonical += 1
    assert canonical > 0


def test_delivered_flag_only_after_a_delivery_action(kitchen):
    for (src, dst), action in kitchen.edge_display.items():
        if any(p.startswith("delivered_") for p in kitchen.label(dst)):
            assert action == "deliver soup"


def test_deposit_increments_pot(kitchen):
    checked = 0
    for (src, dst), action in kitchen.edge_display.items():
        if action != "add onion to pot":
            continue
        before = next(int(p[-1]) for p in kitchen.label(src) if p.startswith("pot_count_"))
        after = next(int(p[-1]) for p in kitchen.label(dst) if p.startswith("pot_count_"))
        assert after == before + 1
        checked += 1
    assert checked > 0


def test_turn_alternation_and_totality(kitchen):
    for s in range(kitchen.num_states):
        assert kitchen.adjacency[s]
        for t in kitchen.adjacency[s]:
            assert kitchen.owner(t) is not kitchen.owner(s)


def test_deterministic_construction():
    from tandem.domain import serialize_domain

    assert serialize_domain(build_kitchen(KitchenConfig())) == serialize_domain(
        build_kitchen(KitchenConfig())
    )


class TestLayoutErrors:
    def test_unreachable_pot(self):
        layout = (
            "#W##",
            "#..#",
            "####",
            "#.P#",  # floor next to pot is walled off from the start cells
        )
        with pytest.raises(LayoutError):
            build_kitchen(
                KitchenConfig(layout=layout, human_start=(1, 1), robot_start=(1, 2))
            )

    def test_start_not_on_floor(self):
        with pytest.raises(LayoutError):
            build_kitchen(KitchenConfig(human_start=(0, 0)))

    def test_missing_feature(self):
        with pytest.raises(LayoutError):
            build_kitchen(KitchenConfig(layout=("#W##", "#..D", "#..#", "####")))

    def test_capacity_cap(self):
        from tandem.errors import CapacityError

        with pytest.raises(CapacityError):
            build_kitchen(KitchenConfig(state_cap=50))
