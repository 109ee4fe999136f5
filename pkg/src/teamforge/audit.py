"""Upper bound on the players who could gain by misreporting (roommate case).

The walk follows the proposer order. The first unprocessed player is the
proposer of their pair and their teammate the receiver. A neighbor ``i`` of the
proposer who beats the receiver in the proposer's eyes, and who in turn
prefers the proposer to their own teammate, could profit from a lie; so could
a neighbor ``j`` of the receiver whom the receiver prefers to the proposer
and who prefers the receiver to their own teammate. Both pair members then
leave the pool.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AuditReport:
    sum: int
    flagged: tuple = ()  # (player, reason) per increment, in walk order
    players: frozenset = field(default_factory=frozenset)  # deduplicated

    @property
    def dedup(self) -> int:
        return len(self.players)


def check_teammates(profile, teammates) -> dict:
    tm = {int(k): int(v) for k, v in dict(teammates).items()}
    if sorted(tm) != list(range(profile.n)):
        raise ValueError("teammate vector must cover every player exactly once")
    for i, j in tm.items():
        if j not in tm or tm[j] != i:
            raise ValueError(f"teammate vector is not an involution at {i} -> {j}")
    return tm


def untruthful_upper_bound(profile, order, teammates) -> AuditReport:
    tm = check_teammates(profile, teammates)
    pool = set(range(profile.n))
    walk = [p for p in order.players]
    prefers = profile.prefers
    total = 0
    flagged = []
    pos = 0
    while len(pool) >= 2:
        while walk[pos] not in pool:
            pos += 1
        proposer = walk[pos]
        receiver = tm[proposer]
        for i in sorted(profile.neighbors[proposer] & pool):
            if prefers(proposer, i, receiver) and prefers(i, proposer, tm[i]):
                total += 1
                flagged.append((i, f"prefers proposer {proposer}"))
        if receiver != proposer:
            for j in sorted(profile.neighbors[receiver] & pool):
                if prefers(receiver, j, proposer) and prefers(j, receiver, tm[j]):
                    total += 1
                    flagged.append((j, f"preferred by receiver {receiver}"))
        pool.discard(proposer)
        pool.discard(receiver)
    return AuditReport(sum=total, flagged=tuple(flagged), players=frozenset(p for p, _ in flagged))


def truthful_profile_rate(reports) -> float:
    reports = list(reports)
    if not reports:
        raise ValueError("need at least one audit report")
    return sum(1 for r in reports if r.sum == 0) / len(reports)
