"""Transducers over one alphabet: inverse, union, composition, word images,
and the automaton-through-transducer product.

A transducer transition carries an input word and an output word (either may
be empty).  In standard form both labels have length at most one; every
operation that needs standard form converts its operands internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .automata import (
    Alphabet,
    EPSILON_TOKEN,
    Nfa,
    Word,
    _number_states,
    _parse_automaton_text,
)
from .errors import AlphabetMismatchError, FormatError


@dataclass(frozen=True)
class Transducer:
    alphabet: Alphabet
    num_states: int
    initial: frozenset[int]
    final: frozenset[int]
    transitions: tuple[tuple[int, Word, Word, int], ...]
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        norm = []
        for src, inp, out, dst in self.transitions:
            norm.append((src, tuple(inp), tuple(out), dst))
        object.__setattr__(self, "transitions", tuple(sorted(set(norm))))
        for q in self.initial | self.final:
            if not 0 <= q < self.num_states:
                raise ValueError(f"state {q} out of range")
        for src, inp, out, dst in self.transitions:
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise ValueError("transition endpoint out of range")
            for sym in inp + out:
                if sym not in self.alphabet:
                    raise ValueError(f"label symbol {sym!r} not in alphabet")

    @property
    def states(self) -> range:
        return range(self.num_states)

    def size(self) -> int:
        return self.num_states + sum(
            1 + len(i) + len(o) for _, i, o, _ in self.transitions
        )

    @cached_property
    def is_standard(self) -> bool:
        return all(
            len(i) <= 1 and len(o) <= 1 for _, i, o, _ in self.transitions
        )

    @cached_property
    def has_epsilon_input(self) -> bool:
        return any(len(i) == 0 for _, i, _, _ in self.transitions)

    # -- core operations -----------------------------------------------------

    def standard_form(self) -> "Transducer":
        """Split long labels through fresh chain states; same relation."""
        if self.is_standard:
            return self
        transitions: list[tuple[int, Word, Word, int]] = []
        counter = self.num_states
        for src, inp, out, dst in self.transitions:
            steps = max(len(inp), len(out), 1)
            if steps == 1:
                transitions.append((src, inp, out, dst))
                continue
            here = src
            for k in range(steps):
                if k == steps - 1:
                    nxt = dst
                else:
                    nxt = counter
                    counter += 1
                transitions.append((here, inp[k : k + 1], out[k : k + 1], nxt))
                here = nxt
        return Transducer(
            self.alphabet, counter, self.initial, self.final,
            tuple(transitions), provenance=self.provenance,
        )

    def inverse(self) -> "Transducer":
        """Swap input and output labels; x in inv(y) iff y in self(x)."""
        return Transducer(
            self.alphabet,
            self.num_states,
            self.initial,
            self.final,
            tuple((s, o, i, d) for s, i, o, d in self.transitions),
            provenance=f"inverse({self.provenance})" if self.provenance else "",
        )

    def union(self, other: "Transducer") -> "Transducer":
        """Pointwise union of relations: (self | other)(x) = self(x) | other(x)."""
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(
                f"cannot union over {self.alphabet} and {other.alphabet}"
            )
        off = self.num_states
        return Transducer(
            self.alphabet,
            self.num_states + other.num_states,
            self.initial | frozenset(q + off for q in other.initial),
            self.final | frozenset(q + off for q in other.final),
            self.transitions
            + tuple((s + off, i, o, d + off) for s, i, o, d in other.transitions),
            provenance=f"union(left=0..{off - 1}, right={off}..{off + other.num_states - 1})",
        )

    def compose(self, inner: "Transducer") -> "Transducer":
        """Relational composition: (self . inner)(x) = self(inner(x)).

        ``inner`` runs first.  Built on standard-form operands; a transition of
        the pair state advances both sides on a matching middle symbol, or one
        side alone on an epsilon-output / epsilon-input move.
        """
        if self.alphabet != inner.alphabet:
            raise AlphabetMismatchError(
                f"cannot compose over {self.alphabet} and {inner.alphabet}"
            )
        t = inner.standard_form()
        s = self.standard_form()
        t_out: dict[str, list[tuple[int, Word, int]]] = {}
        t_silent: list[tuple[int, Word, int]] = []  # output-epsilon moves of t
        for src, inp, out, dst in t.transitions:
            if out:
                t_out.setdefault(out[0], []).append((src, inp, dst))
            else:
                t_silent.append((src, inp, dst))
        s_in: dict[str, list[tuple[int, Word, int]]] = {}
        s_silent: list[tuple[int, Word, int]] = []  # input-epsilon moves of s
        for src, inp, out, dst in s.transitions:
            if inp:
                s_in.setdefault(inp[0], []).append((src, out, dst))
            else:
                s_silent.append((src, out, dst))

        def pair_id(p: int, q: int) -> int:
            return p * s.num_states + q

        transitions: list[tuple[int, Word, Word, int]] = []
        for p in t.states:
            for q in s.states:
                pq = pair_id(p, q)
                for src, inp, dst in t_silent:
                    if src == p:
                        transitions.append((pq, inp, (), pair_id(dst, q)))
                for src, out, dst in s_silent:
                    if src == q:
                        transitions.append((pq, (), out, pair_id(p, dst)))
        for mid, t_edges in t_out.items():
            for (tp, inp, td) in t_edges:
                for (sp, out, sd) in s_in.get(mid, ()):
                    transitions.append(
                        (pair_id(tp, sp), inp, out, pair_id(td, sd))
                    )
        composed = Transducer(
            self.alphabet,
            t.num_states * s.num_states,
            frozenset(pair_id(p, q) for p in t.initial for q in s.initial),
            frozenset(pair_id(p, q) for p in t.final for q in s.final),
            tuple(transitions),
        )
        return composed.trim()

    def trim(self) -> "Transducer":
        fwd: set[int] = set()
        stack = list(self.initial)
        out_edges: dict[int, list[int]] = {}
        in_edges: dict[int, list[int]] = {}
        for s, _, _, d in self.transitions:
            out_edges.setdefault(s, []).append(d)
            in_edges.setdefault(d, []).append(s)
        while stack:
            q = stack.pop()
            if q in fwd:
                continue
            fwd.add(q)
            stack.extend(out_edges.get(q, ()))
        bwd: set[int] = set()
        stack = list(self.final)
        while stack:
            q = stack.pop()
            if q in bwd:
                continue
            bwd.add(q)
            stack.extend(in_edges.get(q, ()))
        keep = sorted(fwd & bwd)
        remap = {q: i for i, q in enumerate(keep)}
        return Transducer(
            self.alphabet,
            len(keep),
            frozenset(remap[q] for q in self.initial if q in remap),
            frozenset(remap[q] for q in self.final if q in remap),
            tuple(
                (remap[s], i, o, remap[d])
                for s, i, o, d in self.transitions
                if s in remap and d in remap
            ),
            provenance=self.provenance,
        )

    # -- images ----------------------------------------------------------------

    def image(self, word: "str | Iterable[str]") -> Nfa:
        """NFA accepting self(word); may describe an infinite language."""
        w = self.alphabet.word(word)
        chain = Nfa(
            self.alphabet,
            len(w) + 1,
            frozenset({0}),
            frozenset({len(w)}),
            tuple((i, sym, i + 1) for i, sym in enumerate(w)),
        )
        return product(chain, self)

    def image_set(self, word: "str | Iterable[str]", max_len: int) -> set[Word]:
        """self(word) restricted to outputs of length <= max_len."""
        return self.image(word).words_up_to(max_len)

    def domain_nonempty_on(self, word: "str | Iterable[str]") -> bool:
        return not self.image(word).is_empty()

    def is_input_preserving(self, up_to_length: int) -> bool:
        """Bounded check: x in self(x) whenever self(x) is non-empty, for all
        |x| <= up_to_length.  (An exact decision is deliberately not offered.)"""
        for n in range(up_to_length + 1):
            for w in self.alphabet.words_of_length(n):
                img = self.image(w)
                if img.num_states and not img.accepts(w):
                    return False
        return True

    # -- text format -------------------------------------------------------------

    def to_text(self) -> str:
        finals = " ".join(str(q) for q in sorted(self.final))
        initials = " ".join(str(q) for q in sorted(self.initial))
        lines = [f"@Transducer {finals} * {initials}".rstrip()]
        for src, inp, out, dst in self.transitions:
            itok = EPSILON_TOKEN if not inp else " ".join(inp)
            otok = EPSILON_TOKEN if not out else " ".join(out)
            lines.append(f"{src} {itok} {otok} {dst}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, alphabet: "Alphabet | None" = None) -> "Transducer":
        _, initial_toks, final_toks, rows = _parse_automaton_text(
            text, ("@Transducer",)
        )
        names = _number_states(
            final_toks + initial_toks + [t for r in rows for t in (r[0], r[3])]
        )
        syms = sorted(
            {r[1] for r in rows if r[1] is not None}
            | {r[2] for r in rows if r[2] is not None}
        )
        if alphabet is None:
            if not syms:
                raise FormatError("cannot infer an alphabet: no labelled transitions")
            alphabet = Alphabet(tuple(syms))
        transitions = tuple(
            (
                names[src],
                () if inp is None else (inp,),
                () if out is None else (out,),
                names[dst],
            )
            for src, inp, out, dst in rows
        )
        try:
            return Transducer(
                alphabet,
                len(names),
                frozenset(names[t] for t in initial_toks),
                frozenset(names[t] for t in final_toks),
                transitions,
            )
        except ValueError as exc:
            raise FormatError(str(exc)) from exc


def compose(outer: Transducer, inner: Transducer) -> Transducer:
    """z in compose(outer, inner)(x) iff y in inner(x) and z in outer(y) for some y."""
    return outer.compose(inner)


def identity_transducer(alphabet: Alphabet) -> Transducer:
    return Transducer(
        alphabet,
        1,
        frozenset({0}),
        frozenset({0}),
        tuple((0, (a,), (a,), 0) for a in alphabet),
    )


def product(a: Nfa, t: Transducer) -> Nfa:
    """The automaton accepting t(L(a)), built by synchronized state pairing.

    ``a`` is epsilon-removed first and ``t`` converted to standard form; if
    ``t`` has epsilon-input transitions the pairing lets the automaton side
    stand still, which is the same as adding (q, eps, q) self-loops to ``a``.
    The result is trimmed, with states renumbered in discovery order.
    """
    if a.alphabet != t.alphabet:
        raise AlphabetMismatchError(
            f"cannot build product over {a.alphabet} and {t.alphabet}"
        )
    a2 = a.remove_epsilon()
    t2 = t.standard_form()
    a_out: list[dict[str, tuple[int, ...]]] = [dict(a2._out[q]) for q in a2.states]
    t_edges: list[list[tuple[Word, Word, int]]] = [[] for _ in t2.states]
    for src, inp, out, dst in t2.transitions:
        t_edges[src].append((inp, out, dst))

    numbering: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    for p in sorted(a2.initial):
        for q in sorted(t2.initial):
            if (p, q) not in numbering:
                numbering[(p, q)] = len(order)
                order.append((p, q))
    transitions: list[tuple[int, "str | None", int]] = []
    i = 0
    while i < len(order):
        p, q = order[i]
        for inp, out, dst in t_edges[q]:
            label = out[0] if out else None
            if inp:
                targets = a_out[p].get(inp[0], ())
            else:
                targets = (p,)
            for ap in targets:
                key = (ap, dst)
                if key not in numbering:
                    numbering[key] = len(order)
                    order.append(key)
                transitions.append((i, label, numbering[key]))
        i += 1
    finals = frozenset(
        idx
        for (p, q), idx in numbering.items()
        if p in a2.final and q in t2.final
    )
    initials = frozenset(
        numbering[(p, q)] for p in sorted(a2.initial) for q in sorted(t2.initial)
    )
    raw = Nfa(a.alphabet, len(order), initials, finals, tuple(transitions))
    return raw.trim()
