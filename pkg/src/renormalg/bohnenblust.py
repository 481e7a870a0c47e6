"""Symmetrized dendriform words: ordered partitions and permutation packets.

For letters ``a_1..a_n`` in a Rota--Baxter algebra, three quantities are
computed independently:

* the sum over permutations of left-nested ``>`` words;
* the sum over ordered partitions ``π`` of ``ω(π) l(π_1) * ... * l(π_k)``;
* the sum over permutations of the packet products ``T_σ``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .errors import PreconditionError
from .rota_baxter import RBInstance, double_product, left_prelie, succ


def ordered_partitions(n: int) -> list[tuple[frozenset, ...]]:
    """All sequences of disjoint nonempty blocks covering ``{1..n}``."""
    if n < 1:
        raise PreconditionError("n must be >= 1")

    def rec(rest: frozenset):
        if not rest:
            yield ()
            return
        items = sorted(rest)
        # every nonempty subset of ``rest`` may be the first block
        for mask in range(1, 1 << len(items)):
            block = frozenset(x for i, x in enumerate(items) if mask >> i & 1)
            for tail in rec(rest - block):
                yield (block,) + tail

    return list(rec(frozenset(range(1, n + 1))))


def omega(partition: Sequence) -> Fraction:
    """``1 / (|π1| (|π1|+|π2|) ... (|π1|+...+|πk|))``."""
    denom, acc = 1, 0
    for block in partition:
        acc += len(block)
        denom *= acc
    return Fraction(1, denom)


def descent_set(sigma: Sequence[int]) -> list[int]:
    """``k`` (1-based) such that ``σ_{k+1}`` exceeds every ``σ_j``, ``j <= k``."""
    out, running = [], sigma[0]
    for k in range(1, len(sigma)):
        if sigma[k] > running:
            out.append(k)
        running = max(running, sigma[k])
    return out


def packets(sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """Split ``σ`` after each position of its record set."""
    cuts = [0] + descent_set(sigma) + [len(sigma)]
    return [tuple(sigma[i:j]) for i, j in zip(cuts, cuts[1:])]


def bar_notation(sigma: Sequence[int]) -> str:
    return "|".join("".join(str(x) for x in p) for p in packets(sigma))


def _left_nested(op, letters, inst):
    out = letters[0]
    for x in letters[1:]:
        out = op(out, x, inst)
    return out


def _star(items, inst):
    out = items[0]
    for x in items[1:]:
        out = double_product(out, x, inst)
    return out


def pre_lie_word(letters, inst: RBInstance):
    """``l^(m)(b_1..b_m) = (...(b_1 ▷ b_2) ▷ ...) ▷ b_m``."""
    return _left_nested(left_prelie, list(letters), inst)


def t_sigma(sigma: Sequence[int], a: Sequence, inst: RBInstance):
    """Packet product ``T_σ(a_1..a_n)`` (``σ`` is 1-based)."""
    return _star([pre_lie_word([a[i - 1] for i in p], inst) for p in packets(sigma)], inst)


def succ_permutation_sum(a: Sequence, inst: RBInstance):
    n = len(a)
    total = inst.zero
    for sigma in permutations(range(n)):
        total = total + _left_nested(succ, [a[i] for i in sigma], inst)
    return total


def block_word_sum(block, a: Sequence, inst: RBInstance):
    """``l(E)``: sum of pre-Lie words over all orderings of ``E``."""
    total = inst.zero
    for order in permutations(sorted(block)):
        total = total + pre_lie_word([a[i - 1] for i in order], inst)
    return total


def partition_sum(a: Sequence, inst: RBInstance):
    n = len(a)
    cache: dict[frozenset, object] = {}
    total = inst.zero
    for part in ordered_partitions(n):
        factors = []
        for block in part:
            if block not in cache:
                cache[block] = block_word_sum(block, a, inst)
            factors.append(cache[block])
        total = total + _star(factors, inst) * omega(part)
    return total


def t_sigma_sum(a: Sequence, inst: RBInstance):
    n = len(a)
    total = inst.zero
    for sigma in permutations(range(1, n + 1)):
        total = total + t_sigma(sigma, a, inst)
    return total


@dataclass
class BohnenblustReport:
    n: int
    permutation_side: object
    partition_side: object
    packet_side: object

    @property
    def passed(self) -> bool:
        return self.permutation_side == self.partition_side == self.packet_side


def bohnenblust_spitzer(a: Sequence, inst: RBInstance) -> BohnenblustReport:
    n = len(a)
    if not 1 <= n <= 7:
        raise PreconditionError("Bohnenblust--Spitzer check supports 1 <= n <= 7")
    return BohnenblustReport(n, succ_permutation_sum(a, inst), partition_sum(a, inst), t_sigma_sum(a, inst))
