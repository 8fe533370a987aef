import pytest

from tacs.engine import Strong, explore, game_configs
from tacs.semantics import TYPE2
from tacs.worked import (
    EXAMPLES,
    UnknownExample,
    combined_relation,
    family_p,
    family_q,
    forced_pair,
    move_recipe,
    replay_recipe,
    reproduce,
    type2_p_states,
)

REQUIRED = {"sigma-skip", "parallel-skip", "urgency-blocks-tick", "coherence-triple", "indexed-counterexample", "precongruence-failure", "sec7-sizes"}


def test_registry_covers_required_ids():
    assert REQUIRED <= set(EXAMPLES)
    assert all(e.where and e.title for e in EXAMPLES.values())


@pytest.mark.parametrize("eid", sorted(EXAMPLES) + ["sec7-sizes?n=1", "sec7-sizes?n=3"])
def test_reproduce(eid):
    report = reproduce(eid)
    assert report.passed, [v.to_obj() for v in report.violations]
    assert report.checks > 0


def test_unknown_example():
    with pytest.raises(UnknownExample):
        reproduce("nope")
    with pytest.raises(ValueError):
        reproduce("sec7-sizes?n=0")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sizes(n):
    assert len(combined_relation(n)) == 4 * (n + 1)
    assert len(type2_p_states(n)) == 4 * n * n + 4
    assert len(explore(family_p(n), 10_000, sems=(TYPE2,))) >= 4 * n * n + 4


def test_recipe_example():
    # pair(0,2,1) at n = 2: two ticks in all, c reset after the first, b after the last
    assert move_recipe(0, 2, 1, 2) == ["tick", "tau", "tick", "b"]
    assert replay_recipe(move_recipe(0, 2, 1, 2), 2) == forced_pair(0, 2, 1, 2)
    assert (family_p(2), family_q(2)) in game_configs(family_p(2), family_q(2), Strong(1), 10_000)
