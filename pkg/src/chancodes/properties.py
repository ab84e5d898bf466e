"""Exact decision procedures for block codes against a channel:
error-detection and error-correction with concrete witnesses, a deterministic
non-maximality witness, and the exact maximality index.

The detection test runs on the three-way product (code as input language,
channel, code as output language) and searches it for an accepted path whose
input and output words differ.  Equality cannot be tracked symbol-by-symbol
when the two sides are desynchronized by insertions/deletions, so each product
state carries the *overhang*: the word by which one side is ahead of the
other.  A state with two distinct overhangs, an overhang/step mismatch, or a
final state with a non-empty overhang each pin down a violating pair, and if
none occurs every accepted pair is an identity pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .automata import Dfa, Nfa, Trellis, Word, format_word, universe_trellis
from .channels import Channel
from .errors import AlphabetMismatchError, NotDetectingError
from .transducers import Transducer, product

NONE_KIND = "none"
DETECT_KIND = "detect-violation"
CORRECT_KIND = "correct-violation"
ADDABLE_KIND = "addable"


@dataclass(frozen=True)
class Witness:
    kind: str
    u: Optional[Word] = None
    v: Optional[Word] = None
    z: Optional[Word] = None
    w: Optional[Word] = None

    @classmethod
    def none(cls) -> "Witness":
        return cls(NONE_KIND)

    @classmethod
    def detection(cls, u: Word, v: Word) -> "Witness":
        return cls(DETECT_KIND, u=u, v=v)

    @classmethod
    def correction(cls, u: Word, v: Word, z: Word) -> "Witness":
        return cls(CORRECT_KIND, u=u, v=v, z=z)

    @classmethod
    def addable(cls, w: Word) -> "Witness":
        return cls(ADDABLE_KIND, w=w)

    def __bool__(self) -> bool:
        """True when something was found (violation or addable word)."""
        return self.kind != NONE_KIND

    def __str__(self) -> str:
        if self.kind == NONE_KIND:
            return "NONE"
        if self.kind == DETECT_KIND:
            return f"DETECT-VIOLATION {format_word(self.u)} {format_word(self.v)}"
        if self.kind == CORRECT_KIND:
            return (
                f"CORRECT-VIOLATION {format_word(self.u)} {format_word(self.v)}"
                f" via {format_word(self.z)}"
            )
        return f"ADDABLE {format_word(self.w)}"


# -- three-way product with overhang tracking -------------------------------------

_SYNCED = ((), ())


def _identity_violation(code: Trellis, sigma: Transducer):
    """Search code x sigma x code for an accepted pair (u, v) with u != v.

    Returns None when every accepted pair is an identity pair (the code is
    detecting), else the pair.  Deterministic: states and edges are explored
    in sorted order, so ties always resolve the same way.
    """
    if not code.final:
        return None
    t = sigma.standard_form()
    code_delta = code.delta
    t_edges: list[list[tuple[Optional[str], Optional[str], int]]] = [
        [] for _ in t.states
    ]
    for src, inp, out, dst in t.transitions:
        t_edges[src].append((inp[0] if inp else None, out[0] if out else None, dst))
    for row in t_edges:
        row.sort(key=lambda e: (e[0] is not None, e[0] or "",
                                e[1] is not None, e[1] or "", e[2]))

    start_states = [
        (code.initial_state, q, code.initial_state) for q in sorted(t.initial)
    ]
    finals = set()
    # forward discovery
    numbering: dict[tuple[int, int, int], int] = {}
    order: list[tuple[int, int, int]] = []
    edges: list[list[tuple[Optional[str], Optional[str], int]]] = []
    for s in start_states:
        numbering[s] = len(order)
        order.append(s)
        edges.append([])
    i = 0
    code_final = code.final_state
    while i < len(order):
        p, q, r = order[i]
        if p == code_final and q in t.final and r == code_final:
            finals.add(i)
        for x, y, qd in t_edges[q]:
            if x is None:
                pd = p
            else:
                pd = code_delta.get((p, x))
                if pd is None:
                    continue
            if y is None:
                rd = r
            else:
                rd = code_delta.get((r, y))
                if rd is None:
                    continue
            key = (pd, qd, rd)
            idx = numbering.get(key)
            if idx is None:
                idx = len(order)
                numbering[key] = idx
                order.append(key)
                edges.append([])
            edges[i].append((x, y, idx))
        i += 1
    # co-reachability prune
    rev: list[list[int]] = [[] for _ in order]
    for s_idx, es in enumerate(edges):
        for _, _, d_idx in es:
            rev[d_idx].append(s_idx)
    alive = [False] * len(order)
    stack = sorted(finals)
    for f in stack:
        alive[f] = True
    while stack:
        s_idx = stack.pop()
        for p_idx in rev[s_idx]:
            if not alive[p_idx]:
                alive[p_idx] = True
                stack.append(p_idx)

    # completion hops toward a final state (shortest, deterministic)
    next_hop: dict[int, tuple[Optional[str], Optional[str], int]] = {}
    dist = {f: 0 for f in sorted(finals)}
    frontier = sorted(finals)
    while frontier:
        new_frontier = []
        for s_idx in frontier:
            for p_idx in rev[s_idx]:
                if p_idx in dist:
                    continue
                # find the concrete edge p->s with the smallest label key
                best = None
                for x, y, d_idx in edges[p_idx]:
                    if d_idx == s_idx:
                        k = (x is not None, x or "", y is not None, y or "")
                        if best is None or k < best[0]:
                            best = (k, (x, y, d_idx))
                dist[p_idx] = dist[s_idx] + 1
                next_hop[p_idx] = best[1]
                new_frontier.append(p_idx)
        frontier = sorted(new_frontier)

    def completion_words(s_idx: int) -> tuple[Word, Word]:
        xs: list[str] = []
        ys: list[str] = []
        while s_idx not in finals:
            x, y, s_idx = next_hop[s_idx]
            if x is not None:
                xs.append(x)
            if y is not None:
                ys.append(y)
        return tuple(xs), tuple(ys)

    parent: dict[int, tuple[int, Optional[str], Optional[str]]] = {}

    def path_words(s_idx: int) -> tuple[Word, Word]:
        xs: list[str] = []
        ys: list[str] = []
        while s_idx in parent:
            p_idx, x, y = parent[s_idx]
            if x is not None:
                xs.append(x)
            if y is not None:
                ys.append(y)
            s_idx = p_idx
        return tuple(reversed(xs)), tuple(reversed(ys))

    def advance(delay, x, y):
        pin, pout = delay
        if x is not None:
            pin = pin + (x,)
        if y is not None:
            pout = pout + (y,)
        while pin and pout:
            if pin[0] != pout[0]:
                return None
            pin = pin[1:]
            pout = pout[1:]
        return (pin, pout)

    delays: dict[int, tuple[Word, Word]] = {}
    queue: list[int] = []
    for s in start_states:
        idx = numbering[s]
        if alive[idx]:
            delays[idx] = _SYNCED
            queue.append(idx)
    head = 0
    while head < len(queue):
        s_idx = queue[head]
        head += 1
        d = delays[s_idx]
        for x, y, t_idx in edges[s_idx]:
            if not alive[t_idx]:
                continue
            nd = advance(d, x, y)
            if nd is None:
                # mismatch at an aligned position: complete and report
                ux, uy = path_words(s_idx)
                cx, cy = completion_words(t_idx)
                u = ux + ((x,) if x is not None else ()) + cx
                v = uy + ((y,) if y is not None else ()) + cy
                return u, v
            if t_idx not in delays:
                delays[t_idx] = nd
                parent[t_idx] = (s_idx, x, y)
                queue.append(t_idx)
            elif delays[t_idx] != nd:
                # two inconsistent overhangs: one of the two paths must
                # disagree with any shared completion
                ux1, uy1 = path_words(t_idx)
                ux2, uy2 = path_words(s_idx)
                ux2 += (x,) if x is not None else ()
                uy2 += (y,) if y is not None else ()
                cx, cy = completion_words(t_idx)
                for ux, uy in ((ux1, uy1), (ux2, uy2)):
                    u, v = ux + cx, uy + cy
                    if u != v:
                        return u, v
                raise AssertionError("overhang conflict without violating pair")
    for f in sorted(finals):
        if f in delays and delays[f] != _SYNCED:
            return path_words(f)
    return None


def _require_same_alphabet(code: Trellis, channel: Channel):
    if code.alphabet != channel.alphabet:
        raise AlphabetMismatchError(
            f"code over {code.alphabet} vs channel over {channel.alphabet}"
        )


def detection_witness(code: Trellis, channel: Channel) -> Witness:
    """NONE iff no codeword maps through the channel to a different codeword;
    otherwise a concrete violating pair (u, v) with v in channel(u)."""
    _require_same_alphabet(code, channel)
    found = _identity_violation(code, channel.transducer)
    if found is None:
        return Witness.none()
    return Witness.detection(*found)


def correction_witness(code: Trellis, channel: Channel) -> Witness:
    """NONE iff no two distinct codewords share a possible channel output.

    Decided through the detection test against inverse(channel) . channel; a
    violating pair is post-processed into (u, v, z) with z a shared output.
    """
    _require_same_alphabet(code, channel)
    composed = channel.transducer.inverse().compose(channel.transducer)
    found = _identity_violation(code, composed)
    if found is None:
        return Witness.none()
    u, v = found
    z = _shared_output(channel.transducer, u, v)
    return Witness.correction(u, v, z)


def _shared_output(sigma: Transducer, u: Word, v: Word) -> Word:
    common = sigma.image(u).determinize().intersect(
        sigma.image(v).determinize()
    ).trim()
    if isinstance(common, Dfa):
        z = common.least_word()
        if z is not None:
            return z
    raise AssertionError("composed violation without a shared channel output")


def exclusion_automaton(code: Trellis, channel: Channel) -> Nfa:
    """Automaton for (channel | channel^-1)(C): the words excluded by C."""
    return product(code, channel.self_union_inverse())


def maximality_witness(
    code: Trellis, channel: Channel, universe: "Trellis | None" = None
) -> Witness:
    """ADDABLE w for some word of the universe that can join the code while
    keeping it detecting, or NONE when the code is maximal in that universe.

    Exact but worst-case exponential (determinization), hence meant for small
    block lengths.  The default universe is all words of the code's length.
    """
    _require_same_alphabet(code, channel)
    if universe is None:
        universe = universe_trellis(code.alphabet, code.length)
    excluded = Nfa.union_automata(exclusion_automaton(code, channel), code)
    blocked = excluded.determinize()
    candidates = universe.intersect(
        blocked.complement(length=code.length)
    ).trim()
    if candidates.num_states == 0 or not isinstance(candidates, Dfa) \
            or candidates.count_words() == 0:
        return Witness.none()
    return Witness.addable(candidates.first_word())


def maximality_index(code: Trellis, channel: Channel) -> Fraction:
    """|Sigma^l  intersect  (channel | channel^-1)(C)| / |Sigma^l|, exactly.

    Requires the code to be detecting (Definition of the index presupposes
    it); a violating code raises NotDetectingError carrying the witness.
    """
    _require_same_alphabet(code, channel)
    witness = detection_witness(code, channel)
    if witness:
        raise NotDetectingError(
            f"code is not error-detecting for {channel.name}: {witness}",
            witness=witness,
        )
    universe = universe_trellis(code.alphabet, code.length)
    excluded = exclusion_automaton(code, channel).determinize()
    used = universe.intersect(excluded).trim()
    count = used.count_words() if isinstance(used, Dfa) and used.num_states else 0
    return Fraction(count, len(code.alphabet) ** code.length)
