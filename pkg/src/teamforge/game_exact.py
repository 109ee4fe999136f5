"""Exact rotating proposer mechanism by memoized backward induction.

The game walks a slot sequence of proposal opportunities. At a slot whose
player ``p`` is still unmatched, ``p`` offers their most preferred team among
those every invited member would accept; a member accepts when the offer is
at least as good as what they get if the offer fails and play moves on to
the next slot with nobody removed. The accepted team leaves and play
continues at the next slot. Once the slots run out, whoever is left stays
alone.

Two exact reductions keep the search tractable:

* disjoint components of the remaining neighbor graph evolve independently,
  so states are keyed by ``(component, slot)``;
* with ``use_ims`` every state first matches its soulmate teams, which
  equilibrium play forms anyway as long as one of their members still has
  a slot to propose from.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field

from ._compiled import bits, compile_profile, component_of, components, from_mask, to_mask
from .ims import ims_masks

DEFAULT_NODE_BUDGET = 5_000_000


class SearchBudgetExceeded(RuntimeError):
    """The search expanded more states than its node budget allows."""


class UnsupportedConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class ProposerOrder:
    """Sequence of proposal slots.

    Generated orders give each player one contiguous block of slots; orders
    read from a file may interleave players, in which case a player's block
    position is that of their first slot.
    """

    slots: tuple

    def __post_init__(self):
        slots = tuple(int(p) for p in self.slots)
        object.__setattr__(self, "slots", slots)
        seen = {}
        blocked = True
        for idx, p in enumerate(slots):
            if idx and slots[idx - 1] == p:
                continue
            if p in seen:
                blocked = False
                continue
            seen[p] = None
        object.__setattr__(self, "_players", tuple(seen))
        object.__setattr__(self, "_blocked", blocked)

    @property
    def blocked(self) -> bool:
        """True when every player's slots are contiguous."""
        return self._blocked

    @property
    def players(self) -> tuple:
        """Players in block order."""
        return self._players

    @property
    def block_index(self) -> dict:
        """1-based block position of each player."""
        return {p: pos for pos, p in enumerate(self._players, 1)}

    def covers(self, n: int) -> bool:
        return sorted(self._players) == list(range(n))

    @classmethod
    def from_blocks(cls, players, repeats) -> ProposerOrder:
        slots = []
        for p in players:
            r = repeats[p] if not isinstance(repeats, int) else repeats
            slots.extend([p] * r)
        return cls(tuple(slots))

    def to_text(self) -> str:
        return " ".join(str(p) for p in self.slots)

    @classmethod
    def from_text(cls, text: str) -> ProposerOrder:
        return cls(tuple(int(tok) for tok in text.split()))


def default_order(profile, rng: random.Random, repeats=None) -> ProposerOrder:
    """Uniform random block order; player i gets ``deg(i) + 1`` slots unless
    ``repeats`` (an int or a per-player sequence) says otherwise."""
    players = list(range(profile.n))
    rng.shuffle(players)
    if repeats is None:
        reps = [profile.degree(i) + 1 for i in range(profile.n)]
    elif isinstance(repeats, int):
        reps = [repeats] * profile.n
    else:
        reps = list(repeats)
    if any(r < 1 for r in reps):
        raise ValueError("every player needs at least one slot")
    return ProposerOrder.from_blocks(players, reps)


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    ims_prunes: int = 0
    threshold_accepts: int = 0
    threshold_rejects: int = 0
    score_evals: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class MechanismOutcome:
    partition: tuple  # tuple[frozenset[int], ...], sorted by smallest member
    teammate: dict | None  # roommate outcomes only; singletons map to themselves
    roles: dict  # player -> "proposer" | "receiver"
    stats: SearchStats = field(default_factory=SearchStats, compare=False)

    def team_of(self, i: int) -> frozenset:
        for t in self.partition:
            if i in t:
                return t
        raise KeyError(i)

    def to_dict(self) -> dict:
        return {
            "partition": [sorted(t) for t in self.partition],
            "stats": self.stats.as_dict(),
        }


def normalize_partition(teams) -> tuple:
    return tuple(sorted((frozenset(t) for t in teams), key=lambda t: min(t)))


def make_outcome(teams, order: ProposerOrder, stats: SearchStats | None = None) -> MechanismOutcome:
    partition = normalize_partition(teams)
    pos = order.block_index
    roles = {}
    teammate = {} if all(len(t) <= 2 for t in partition) else None
    for t in partition:
        lead = min(t, key=lambda p: pos.get(p, len(pos) + p))
        for p in t:
            roles[p] = "proposer" if p == lead else "receiver"
            if teammate is not None:
                others = [q for q in t if q != p]
                teammate[p] = others[0] if others else p
    return MechanismOutcome(partition=partition, teammate=teammate, roles=roles, stats=stats or SearchStats())


@dataclass(frozen=True)
class GameState:
    remaining: frozenset
    slot: int = 0


class Game:
    """Backward-induction solver bound to one (profile, order, omega) instance.

    ``alpha > 0`` turns on the opportunity-score shortcut for responders
    (roommate case only): offers scoring at most ``alpha`` are accepted and
    offers scoring at least ``1 - alpha`` rejected without searching the
    continuation.
    """

    def __init__(self, profile, order: ProposerOrder, omega: int = 2, use_ims: bool = True,
                 node_budget: int | None = DEFAULT_NODE_BUDGET, alpha: float = 0.0):
        if omega < 2:
            raise ValueError("omega must be >= 2")
        if not order.covers(profile.n):
            raise ValueError("proposer order must give every player a block")
        if alpha and omega != 2:
            raise UnsupportedConfiguration("the alpha shortcut is defined for the roommate case only")
        if not 0.0 <= alpha <= 0.5:
            raise ValueError("alpha must lie in [0, 0.5]")
        self.profile = profile
        self.order = order
        self.omega = omega
        self.use_ims = use_ims
        self.alpha = alpha
        self.node_budget = node_budget
        self.cp = compile_profile(profile)
        self.slots = order.slots
        self.stats = SearchStats()
        self._memo = {}
        n, S = profile.n, len(self.slots)
        # nxt[p][s]: first slot index >= s owned by p (S when none)
        nxt = [[S] * (S + 1) for _ in range(n)]
        for s in range(S - 1, -1, -1):
            q = self.slots[s]
            for p in range(n):
                nxt[p][s] = nxt[p][s + 1]
            nxt[q][s] = s
        self._nxt = nxt
        self._S = S
        self._alive = [0] * (S + 2)
        for s in range(S + 1):
            self._alive[s] = sum(1 << p for p in range(n) if nxt[p][s] < S)
        need = S + n + 100
        if sys.getrecursionlimit() < 4 * need:
            sys.setrecursionlimit(4 * need)

    # -- public surface -------------------------------------------------

    def solve(self) -> MechanismOutcome:
        t0 = time.perf_counter()
        full = (1 << self.profile.n) - 1
        teams = self._assemble(full, 0)
        self.stats.wall_time = time.perf_counter() - t0
        return make_outcome([from_mask(t) for t in teams], self.order, self.stats)

    def outcome_at(self, state: GameState) -> dict:
        """Equilibrium team (as a frozenset) of every player remaining in ``state``."""
        out = {}
        for t in self._assemble(to_mask(state.remaining), state.slot):
            for p in bits(t):
                out[p] = from_mask(t)
        return out

    def payoff(self, state: GameState, player: int) -> int:
        """Decision score the player obtains in the equilibrium of ``state``."""
        if player not in state.remaining:
            raise ValueError(f"player {player} is not remaining")
        s = min(state.slot, self._S)
        return self._payoff(player, self._component_of(player, to_mask(state.remaining), s), s)

    def would_accept(self, state: GameState, team, responder: int) -> bool:
        """Whether ``responder`` accepts ``team`` offered at ``state``.

        The offer is compared with the responder's equilibrium payoff when
        play moves on to the next slot with the same players.
        """
        if responder not in team:
            raise ValueError("responder must belong to the offered team")
        cp = self.cp
        team_mask = to_mask(team)
        if cp.nbr[responder] & team_mask != team_mask & ~(1 << responder):
            return False
        nxt_state = GameState(state.remaining, state.slot + 1)
        return cp.team_score(responder, team_mask) >= self.payoff(nxt_state, responder)

    # -- search -----------------------------------------------------------
    #
    # A decision is memoized per (component, normalized slot). It is either
    # ("ims", matched_teams, rest) or ("team", chosen_team). Payoff queries
    # walk decisions down the queried player's own component only.
    #
    # A player is alive at slot s while they still own a slot >= s. In the
    # roommate case two dead players can never pair, so their edge is
    # ignored when splitting components.

    def _live(self, s: int):
        return self._alive[s] if self.omega == 2 else None

    def _split(self, mask: int, s: int) -> list:
        return components(self.cp, mask, self._live(s))

    def _component_of(self, player: int, mask: int, s: int) -> int:
        return component_of(self.cp, player, mask, self._live(s))

    def _advance(self, comp: int, s: int) -> int:
        if s >= self._S:
            return self._S
        nxt = self._nxt
        return min(nxt[p][s] for p in bits(comp))

    def _assemble(self, mask: int, s: int) -> list:
        teams = []
        stack = [(c, s) for c in self._split(mask, min(s, self._S))]
        while stack:
            comp, s0 = stack.pop()
            if comp & (comp - 1) == 0:
                teams.append(comp)
                continue
            s1 = self._advance(comp, s0)
            if s1 >= self._S:
                teams.extend(1 << p for p in bits(comp))
                continue
            if self.omega == 2 and comp.bit_count() == 2:
                teams.append(comp)
                continue
            d = self._decide(comp, s1)
            if d[0] == "ims":
                teams.extend(d[1])
                stack.extend((c, s1) for c in self._split(d[2], s1))
            else:
                team = d[1]
                teams.append(team)
                stack.extend((c, s1 + 1) for c in self._split(comp & ~team, s1 + 1))
        return teams

    def _payoff(self, j: int, comp: int, s: int) -> int:
        cp = self.cp
        S = self._S
        bit = 1 << j
        while True:
            if comp == bit:
                return 0
            s = self._advance(comp, s)
            if s >= S:
                return 0
            if self.omega == 2 and comp.bit_count() == 2:
                return cp.score[j][(comp ^ bit).bit_length() - 1]
            d = self._decide(comp, s)
            if d[0] == "ims":
                for t in d[1]:
                    if t & bit:
                        return cp.team_score(j, t)
                rest = d[2]
            else:
                team = d[1]
                if team & bit:
                    return cp.team_score(j, team)
                rest = comp & ~team
                s += 1
            comp = self._component_of(j, rest, s)

    def _decide(self, comp: int, s: int):
        key = (comp, s)
        memo = self._memo
        hit = memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        st = self.stats
        st.nodes += 1
        if self.node_budget is not None and st.nodes > self.node_budget:
            raise SearchBudgetExceeded(f"more than {self.node_budget} states expanded")
        d = None
        if self.use_ims:
            eligible = comp & self._alive[s]
            matched, rest, _, _ = ims_masks(self.cp, comp, self.omega, eligible,
                                            live_tops=self.omega == 2)
            if matched:
                st.ims_prunes += len(matched)
                d = ("ims", tuple(matched), rest)
        if d is None:
            d = ("team", self._choose(comp, s, self.slots[s]))
        memo[key] = d
        return d

    def _choose(self, comp: int, s: int, p: int) -> int:
        cp = self.cp
        me = 1 << p
        if self.omega == 2:
            score = cp.score
            alpha = self.alpha
            live_next = self._alive[s + 1]
            for j in cp.rankings[p]:
                if not (comp >> j) & 1:
                    continue
                if alpha:
                    r = self._opportunity(comp, s, j, p)
                    if r <= alpha:
                        self.stats.threshold_accepts += 1
                        return me | (1 << j)
                    if r >= 1.0 - alpha:
                        self.stats.threshold_rejects += 1
                        continue
                if self._best_live_partner(j, comp, live_next) == p:
                    return me | (1 << j)  # nothing better can come along for j
                if score[j][p] >= self._payoff(j, comp, s + 1):
                    return me | (1 << j)
            return me
        for team in cp.feasible_teams(p, comp, self.omega):
            others = team & ~me
            if not others:
                return team
            if all(cp.team_score(j, team) >= self._payoff(j, comp, s + 1) for j in bits(others)):
                return team
        return me

    def _best_live_partner(self, j: int, comp: int, live: int) -> int:
        pool = comp if (live >> j) & 1 else comp & live
        for q in self.cp.rankings[j]:
            if (pool >> q) & 1:
                return q
        return j

    def _opportunity(self, comp: int, s: int, j: int, i: int) -> float:
        # feasible teammates: neighbors in the component reachable by a live edge
        cp = self.cp
        self.stats.score_evals += 1
        nbr, better = cp.nbr, cp.better
        live = self._alive[s]
        pool_j = comp if (live >> j) & 1 else comp & live
        denom = (nbr[j] & pool_j).bit_count()
        total = 0.0
        for k in bits(better[j][i] & pool_j):
            pool_k = comp if (live >> k) & 1 else comp & live
            ukk = (nbr[k] & pool_k).bit_count()
            if ukk:
                total += 1.0 - (better[k][j] & pool_k).bit_count() / ukk
        return total / denom


def solve(profile, order: ProposerOrder, omega: int = 2, use_ims: bool = True,
          node_budget: int | None = DEFAULT_NODE_BUDGET) -> MechanismOutcome:
    """Exact equilibrium outcome of the rotating proposer game."""
    return Game(profile, order, omega=omega, use_ims=use_ims, node_budget=node_budget).solve()
