"""Exhaustive enumeration oracles (exact rational laws for tiny decks).

These walk every one of the n**r equally likely pick sequences, or every
permutation of [n], using only the literal shuffle and O(n^2) counters.  They
share no code with the fast paths they are used to check.
"""
import itertools
from collections import Counter
from fractions import Fraction


def _naive_deck(n, picks):
    deck = list(range(1, n + 1))
    for c in picks:
        deck.remove(c)
        deck.insert(0, c)
    return deck


def fixed_count(deck):
    return sum(1 for i, v in enumerate(deck, start=1) if v == i)


def descent_count(deck):
    return sum(1 for i in range(len(deck) - 1) if deck[i] > deck[i + 1])


def inversion_count(deck):
    n = len(deck)
    return sum(1 for i in range(n) for j in range(i + 1, n) if deck[i] > deck[j])


def shuffle_laws(n, r):
    """Exact laws over all n**r pick sequences.

    Returns a dict with the joint law of (fixed points, descents, inversions),
    the law of the distinct-pick count, and per-card return probabilities.
    """
    weight = Fraction(1, n**r)
    joint = Counter()
    distinct = Counter()
    returned = [Fraction(0)] * (n + 1)
    for picks in itertools.product(range(1, n + 1), repeat=r):
        deck = _naive_deck(n, picks)
        joint[(fixed_count(deck), descent_count(deck), inversion_count(deck))] += weight
        distinct[len(set(picks))] += weight
        for k in range(1, n + 1):
            if deck[k - 1] == k:
                returned[k] += weight
    return {"joint": dict(joint), "distinct": dict(distinct), "returned": returned[1:]}


def marginal(joint, index):
    out = Counter()
    for key, p in joint.items():
        out[key[index]] += p
    return dict(out)


def expectation(law):
    return sum((v * p for v, p in law.items()), Fraction(0))


def uniform_permutation_laws(n):
    perms = list(itertools.permutations(range(1, n + 1)))
    weight = Fraction(1, len(perms))
    joint = Counter()
    for p in perms:
        joint[(fixed_count(p), descent_count(p), inversion_count(p))] += weight
    return dict(joint)


def prefix_statistic_law(n, j):
    """Law of n - max(first j) + #fixed points in the first j, over all perms."""
    perms = list(itertools.permutations(range(1, n + 1)))
    weight = Fraction(1, len(perms))
    law = Counter()
    for p in perms:
        head = p[:j]
        law[n - max(head) + sum(1 for i, v in enumerate(head, 1) if v == i)] += weight
    return dict(law)


def k_permutation_fixed_law(k, m):
    """Law of fixed points of a uniform (k-1)-permutation of [m-1]."""
    arrangements = list(itertools.permutations(range(1, m), k - 1))
    weight = Fraction(1, len(arrangements))
    law = Counter()
    for arr in arrangements:
        law[sum(1 for i, v in enumerate(arr, 1) if v == i)] += weight
    return dict(law)


def decomposed_laws(n, r, occupancy_law):
    """Exact laws of the decomposition samplers, integrating K out.

    ``occupancy_law`` maps k -> P(K = k).  Returns laws of the resampled-deck
    triple (F, D, I), the prefix fixed-point formula and the sum of
    independent uniforms R_1 + ... + R_K.
    """
    perms = list(itertools.permutations(range(1, n + 1)))
    pw = Fraction(1, len(perms))
    deck_law, fixed_law, inv_law = Counter(), Counter(), Counter()
    for k, pk in occupancy_law.items():
        if pk == 0:
            continue
        for p in perms:
            deck = list(p[:k]) + sorted(p[k:])
            deck_law[(fixed_count(deck), descent_count(deck), inversion_count(deck))] += pk * pw
            head = p[:k]
            value = n - (max(head) if k else 0) + sum(1 for i, v in enumerate(head, 1) if v == i)
            fixed_law[value] += pk * pw
        ranges = [range(n - i + 1) for i in range(1, k + 1)]
        count = 1
        for rg in ranges:
            count *= len(rg)
        for combo in itertools.product(*ranges):
            inv_law[sum(combo)] += pk * Fraction(1, count)
    return {"deck": dict(deck_law), "fixed": dict(fixed_law), "inversions": dict(inv_law)}
