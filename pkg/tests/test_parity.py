import random

from hypothesis import given, strategies as st

from oracles import naive_parity_winners
from treelaw.parity import AUTOMATON, PATHFINDER, ParityGame, solve


@st.composite
def games(draw, max_nodes=6, max_priority=3):
    n = draw(st.integers(1, max_nodes))
    owner = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    priority = draw(st.lists(st.integers(0, max_priority), min_size=n, max_size=n))
    edges = [draw(st.lists(st.integers(0, n - 1), max_size=3, unique=True)) for _ in range(n)]
    return ParityGame(owner, priority, edges)


def play_is_won_by_strategy(game, sol, v):
    """Fix the winner's strategy and check the opponent cannot escape the winning region."""
    w = sol.winner[v]
    region = sol.region(w)
    for u in region:
        if game.owner[u] == w:
            if game.edges[u]:
                assert sol.strategy[u] in region
        else:
            assert all(x in region for x in game.edges[u])


@given(games())
def test_solver_agrees_with_naive_oracle(game):
    sol = solve(game)
    assert sol.winner == naive_parity_winners(game.owner, game.priority, game.edges)


@given(games())
def test_strategies_stay_in_winning_region(game):
    sol = solve(game)
    for v in range(len(game)):
        play_is_won_by_strategy(game, sol, v)


def test_dead_ends_lose_for_their_owner():
    sol = solve(ParityGame([AUTOMATON, PATHFINDER], [0, 0], [[], []]))
    assert sol.winner == [PATHFINDER, AUTOMATON]


def test_least_priority_decides():
    # a two-cycle through priorities 1 and 2: 1 is least, so player 1 wins
    assert solve(ParityGame([0, 0], [1, 2], [[1], [0]])).winner == [1, 1]
    assert solve(ParityGame([0, 0], [0, 1], [[1], [0]])).winner == [0, 0]


def test_bulk_agreement():
    r = random.Random(99)
    for _ in range(300):
        n = r.randint(1, 6)
        game = ParityGame([r.randint(0, 1) for _ in range(n)], [r.randint(0, 3) for _ in range(n)],
                          [r.sample(range(n), r.randint(0, min(3, n))) for _ in range(n)])
        assert solve(game).winner == naive_parity_winners(game.owner, game.priority, game.edges)
