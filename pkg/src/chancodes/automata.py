"""Finite automata: NFA/DFA/trellis construction, boolean algebra, counting, sampling.

Words are tuples of symbols.  Symbols are non-empty strings without whitespace;
when every symbol is a single character a word prints as a plain string, so the
binary alphabet behaves exactly like working with ``"0101"``-style strings.
Epsilon (the empty word as a transition label) is represented by ``None``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import EmptyLanguageError, FormatError, WordError

Word = tuple[str, ...]

EPSILON_TOKEN = "@epsilon"  # text-format spelling of the empty label


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of symbols; the ordering is stable and used everywhere
    a canonical iteration order is needed (serialization, witness tie-breaks)."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet has duplicate symbols")
        for s in self.symbols:
            if not s or any(c.isspace() for c in s) or s in (EPSILON_TOKEN, "*"):
                raise ValueError(f"bad alphabet symbol: {s!r}")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise WordError(f"symbol {symbol!r} not in alphabet {self}") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "{" + ",".join(self.symbols) + "}"

    def word(self, text: "str | Iterable[str]") -> Word:
        """Coerce ``text`` to a word.  A plain string is split into characters."""
        w = tuple(text)
        for s in w:
            if s not in self._index:
                raise WordError(f"symbol {s!r} not in alphabet {self}")
        return w

    def words_of_length(self, length: int) -> Iterator[Word]:
        if length == 0:
            yield ()
            return
        for prefix in self.words_of_length(length - 1):
            for s in self.symbols:
                yield prefix + (s,)


BINARY = Alphabet(("0", "1"))


def format_word(w: Word) -> str:
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton with optional epsilon transitions.

    States are the dense integers ``0 .. num_states-1``.  Transitions are kept
    sorted and deduplicated so that structurally equal automata compare equal.
    """

    alphabet: Alphabet
    num_states: int
    initial: frozenset[int]
    final: frozenset[int]
    transitions: tuple[tuple[int, "str | None", int], ...]

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", self._normalize(self.transitions))
        for q in self.initial | self.final:
            if not 0 <= q < self.num_states:
                raise ValueError(f"state {q} out of range")
        for src, sym, dst in self.transitions:
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise ValueError(f"transition endpoint out of range: {(src, sym, dst)}")
            if sym is not None and sym not in self.alphabet:
                raise ValueError(f"transition label {sym!r} not in alphabet")

    def _normalize(self, transitions) -> tuple[tuple[int, "str | None", int], ...]:
        def key(tr):
            src, sym, dst = tr
            return (src, sym is not None, sym or "", dst)

        return tuple(sorted(set(transitions), key=key))

    # -- basic structure ---------------------------------------------------

    @property
    def states(self) -> range:
        return range(self.num_states)

    def size(self) -> int:
        """States plus transition sizes (a transition counts 1 + label length)."""
        return self.num_states + sum(
            1 + (0 if sym is None else 1) for _, sym, _ in self.transitions
        )

    @cached_property
    def _out(self) -> tuple[dict[str, tuple[int, ...]], ...]:
        table: list[dict[str, list[int]]] = [dict() for _ in self.states]
        for src, sym, dst in self.transitions:
            if sym is not None:
                table[src].setdefault(sym, []).append(dst)
        return tuple({s: tuple(ts) for s, ts in row.items()} for row in table)

    @cached_property
    def _eps_out(self) -> tuple[tuple[int, ...], ...]:
        table: list[list[int]] = [[] for _ in self.states]
        for src, sym, dst in self.transitions:
            if sym is None:
                table[src].append(dst)
        return tuple(tuple(row) for row in table)

    @cached_property
    def _closure(self) -> tuple[frozenset[int], ...]:
        """Per-state epsilon closure."""
        out = []
        for q in self.states:
            seen = {q}
            stack = [q]
            while stack:
                p = stack.pop()
                for r in self._eps_out[p]:
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            out.append(frozenset(seen))
        return tuple(out)

    def epsilon_closure(self, states: Iterable[int]) -> frozenset[int]:
        result: set[int] = set()
        for q in states:
            result |= self._closure[q]
        return frozenset(result)

    # -- membership --------------------------------------------------------

    def accepts(self, word: "str | Iterable[str]") -> bool:
        w = self.alphabet.word(word)
        current = self.epsilon_closure(self.initial)
        for sym in w:
            nxt: set[int] = set()
            for q in current:
                for dst in self._out[q].get(sym, ()):
                    nxt |= self._closure[dst]
            if not nxt:
                return False
            current = frozenset(nxt)
        return bool(current & self.final)

    def matcher(self):
        """A fast membership test with all lookup tables resolved up front.

        Returns a callable ``run(word) -> bool``; the word must already be a
        tuple of valid symbols.  Used in sampling loops where ``accepts`` would
        re-validate on every call.
        """
        closure = self._closure
        # per-state symbol map with closures folded into the targets
        step: list[dict[str, frozenset[int]]] = []
        for q in self.states:
            row = {}
            for sym, dsts in self._out[q].items():
                acc: set[int] = set()
                for d in dsts:
                    acc |= closure[d]
                row[sym] = frozenset(acc)
            step.append(row)
        start = self.epsilon_closure(self.initial)
        final = self.final

        def run(word: Word) -> bool:
            current = start
            for sym in word:
                nxt: set[int] = set()
                for q in current:
                    hit = step[q].get(sym)
                    if hit:
                        nxt |= hit
                if not nxt:
                    return False
                current = nxt  # type: ignore[assignment]
            return not final.isdisjoint(current)

        return run

    # -- language-level helpers ---------------------------------------------

    def words_up_to(self, max_len: int) -> set[Word]:
        """All accepted words of length <= max_len (test/oracle helper)."""
        found: set[Word] = set()
        layer: dict[Word, frozenset[int]] = {(): self.epsilon_closure(self.initial)}
        for length in range(max_len + 1):
            for w, states in layer.items():
                if states & self.final:
                    found.add(w)
            if length == max_len:
                break
            nxt: dict[Word, frozenset[int]] = {}
            for w, states in layer.items():
                for sym in self.alphabet:
                    reach: set[int] = set()
                    for q in states:
                        for dst in self._out[q].get(sym, ()):
                            reach |= self._closure[dst]
                    if reach:
                        nxt[w + (sym,)] = frozenset(reach)
            layer = nxt
        return found

    def is_empty(self) -> bool:
        return self.trim().num_states == 0

    # -- transformations -----------------------------------------------------

    def trim(self) -> "Nfa":
        """Keep only states on some initial->final path; relabel densely."""
        fwd: set[int] = set()
        stack = list(self.initial)
        while stack:
            q = stack.pop()
            if q in fwd:
                continue
            fwd.add(q)
            for dst in self._eps_out[q]:
                stack.append(dst)
            for dsts in self._out[q].values():
                stack.extend(dsts)
        rev_in: list[list[int]] = [[] for _ in self.states]
        for src, _, dst in self.transitions:
            rev_in[dst].append(src)
        bwd: set[int] = set()
        stack = [q for q in self.final]
        while stack:
            q = stack.pop()
            if q in bwd:
                continue
            bwd.add(q)
            stack.extend(rev_in[q])
        keep = sorted(fwd & bwd)
        remap = {q: i for i, q in enumerate(keep)}
        return type(self)._raw(
            alphabet=self.alphabet,
            num_states=len(keep),
            initial=frozenset(remap[q] for q in self.initial if q in remap),
            final=frozenset(remap[q] for q in self.final if q in remap),
            transitions=tuple(
                (remap[s], a, remap[d])
                for s, a, d in self.transitions
                if s in remap and d in remap
            ),
        )

    @classmethod
    def _raw(cls, **kwargs) -> "Nfa":
        return Nfa(**kwargs)

    def remove_epsilon(self) -> "Nfa":
        """Equivalent automaton without epsilon transitions (states preserved)."""
        if not any(sym is None for _, sym, _ in self.transitions):
            return Nfa(
                self.alphabet, self.num_states, self.initial, self.final,
                self.transitions,
            )
        transitions = []
        finals = set()
        for p in self.states:
            reach = self._closure[p]
            if reach & self.final:
                finals.add(p)
            for r in reach:
                for sym, dsts in self._out[r].items():
                    for d in dsts:
                        transitions.append((p, sym, d))
        return Nfa(
            self.alphabet, self.num_states, self.initial, frozenset(finals),
            tuple(transitions),
        )

    def determinize(self) -> "Dfa":
        """Subset construction; discovery order is deterministic."""
        start = self.epsilon_closure(self.initial)
        numbering: dict[frozenset[int], int] = {start: 0}
        order: list[frozenset[int]] = [start]
        transitions: list[tuple[int, "str | None", int]] = []
        i = 0
        while i < len(order):
            subset = order[i]
            for sym in self.alphabet:
                reach: set[int] = set()
                for q in subset:
                    for dst in self._out[q].get(sym, ()):
                        reach |= self._closure[dst]
                if not reach:
                    continue
                target = frozenset(reach)
                if target not in numbering:
                    numbering[target] = len(order)
                    order.append(target)
                transitions.append((i, sym, numbering[target]))
            i += 1
        finals = frozenset(
            idx for subset, idx in numbering.items() if subset & self.final
        )
        return Dfa(
            self.alphabet, len(order), frozenset({0}), finals, tuple(transitions)
        )

    @staticmethod
    def union_automata(a: "Nfa", b: "Nfa") -> "Nfa":
        """Accepts L(a) | L(b); plain disjoint union of the two automata."""
        if a.alphabet != b.alphabet:
            raise WordError("automata alphabets differ")
        off = a.num_states
        return Nfa(
            a.alphabet,
            a.num_states + b.num_states,
            a.initial | frozenset(q + off for q in b.initial),
            a.final | frozenset(q + off for q in b.final),
            a.transitions + tuple((s + off, x, d + off) for s, x, d in b.transitions),
        )

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        head = "@DFA" if isinstance(self, Dfa) else "@NFA"
        finals = " ".join(str(q) for q in sorted(self.final))
        initials = " ".join(str(q) for q in sorted(self.initial))
        lines = [f"{head} {finals} * {initials}".rstrip()]
        for src, sym, dst in self.transitions:
            tok = EPSILON_TOKEN if sym is None else sym
            lines.append(f"{src} {tok} {dst}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, alphabet: "Alphabet | None" = None) -> "Nfa":
        kind, initial_toks, final_toks, rows = _parse_automaton_text(
            text, ("@NFA", "@DFA")
        )
        names = _number_states(
            final_toks + initial_toks + [t for r in rows for t in (r[0], r[2])]
        )
        syms = sorted({sym for _, sym, _ in rows if sym is not None})
        if alphabet is None:
            if not syms:
                raise FormatError("cannot infer an alphabet: no labelled transitions")
            alphabet = Alphabet(tuple(syms))
        transitions = tuple((names[s], a, names[d]) for s, a, d in rows)
        n = len(names)
        out_cls = Dfa if kind == "@DFA" else Nfa
        try:
            return out_cls(
                alphabet,
                n,
                frozenset(names[t] for t in initial_toks),
                frozenset(names[t] for t in final_toks),
                transitions,
            )
        except ValueError as exc:
            raise FormatError(str(exc)) from exc


@dataclass(frozen=True)
class Dfa(Nfa):
    """Deterministic automaton: one initial state, no epsilon transitions,
    at most one successor per (state, symbol).  May be partial."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.initial) != 1:
            raise ValueError("DFA must have exactly one initial state")
        seen: set[tuple[int, str]] = set()
        for src, sym, dst in self.transitions:
            if sym is None:
                raise ValueError("DFA cannot have epsilon transitions")
            if (src, sym) in seen:
                raise ValueError(f"nondeterministic at state {src} on {sym!r}")
            seen.add((src, sym))

    @classmethod
    def _raw(cls, **kwargs) -> "Nfa":
        if len(kwargs["initial"]) == 1:
            return Dfa(**kwargs)
        return Nfa(**kwargs)  # trimming away the initial state demotes to NFA

    @property
    def initial_state(self) -> int:
        return next(iter(self.initial))

    @cached_property
    def delta(self) -> dict[tuple[int, str], int]:
        return {(s, a): d for s, a, d in self.transitions}

    def accepts(self, word: "str | Iterable[str]") -> bool:
        w = self.alphabet.word(word)
        q = self.initial_state
        for sym in w:
            nxt = self.delta.get((q, sym))
            if nxt is None:
                return False
            q = nxt
        return q in self.final

    # -- boolean operations ---------------------------------------------------

    def complement(self, length: "int | None" = None) -> "Dfa":
        """Complement within Sigma* or, if ``length`` is given, within Sigma^length."""
        completed = self._completed()
        flipped = Dfa(
            completed.alphabet,
            completed.num_states,
            completed.initial,
            frozenset(completed.states) - completed.final,
            completed.transitions,
        )
        if length is None:
            return flipped
        return flipped.intersect(universe_trellis(self.alphabet, length))

    def _completed(self) -> "Dfa":
        missing = [
            (q, a)
            for q in self.states
            for a in self.alphabet
            if (q, a) not in self.delta
        ]
        if not missing:
            return self
        sink = self.num_states
        extra = [(q, a, sink) for q, a in missing]
        extra += [(sink, a, sink) for a in self.alphabet]
        return Dfa(
            self.alphabet,
            self.num_states + 1,
            self.initial,
            self.final,
            self.transitions + tuple(extra),
        )

    def intersect(self, other: "Dfa") -> "Dfa":
        if self.alphabet != other.alphabet:
            raise WordError("automata alphabets differ")
        start = (self.initial_state, other.initial_state)
        numbering = {start: 0}
        order = [start]
        transitions: list[tuple[int, "str | None", int]] = []
        i = 0
        while i < len(order):
            p, q = order[i]
            for sym in self.alphabet:
                pd = self.delta.get((p, sym))
                qd = other.delta.get((q, sym))
                if pd is None or qd is None:
                    continue
                t = (pd, qd)
                if t not in numbering:
                    numbering[t] = len(order)
                    order.append(t)
                transitions.append((i, sym, numbering[t]))
            i += 1
        finals = frozenset(
            idx
            for (p, q), idx in numbering.items()
            if p in self.final and q in other.final
        )
        return Dfa(self.alphabet, len(order), frozenset({0}), finals,
                   tuple(transitions))

    # -- counting and sampling --------------------------------------------------

    @cached_property
    def is_acyclic(self) -> bool:
        color = [0] * self.num_states  # 0 new, 1 active, 2 done
        for root in self.states:
            if color[root]:
                continue
            stack: list[tuple[int, int]] = [(root, 0)]
            color[root] = 1
            while stack:
                q, i = stack[-1]
                outs = self._succ[q]
                if i < len(outs):
                    stack[-1] = (q, i + 1)
                    d = outs[i]
                    if color[d] == 1:
                        return False
                    if color[d] == 0:
                        color[d] = 1
                        stack.append((d, 0))
                else:
                    color[q] = 2
                    stack.pop()
        return True

    @cached_property
    def _succ(self) -> tuple[tuple[int, ...], ...]:
        table: list[list[int]] = [[] for _ in self.states]
        for s, _, d in self.transitions:
            table[s].append(d)
        return tuple(tuple(row) for row in table)

    @cached_property
    def _path_counts(self) -> tuple[int, ...]:
        """Number of accepted words from each state (acyclic automata only)."""
        if not self.is_acyclic:
            raise ValueError("word counting requires an acyclic automaton")
        counts = [-1] * max(self.num_states, 1)
        ordered: list[int] = []
        seen = [False] * max(self.num_states, 1)
        for root in self.states:
            if seen[root]:
                continue
            stack: list[tuple[int, int]] = [(root, 0)]
            seen[root] = True
            while stack:
                q, i = stack[-1]
                outs = self._succ[q]
                if i < len(outs):
                    stack[-1] = (q, i + 1)
                    d = outs[i]
                    if not seen[d]:
                        seen[d] = True
                        stack.append((d, 0))
                else:
                    ordered.append(q)
                    stack.pop()
        for q in ordered:
            total = 1 if q in self.final else 0
            for sym in self.alphabet:
                d = self.delta.get((q, sym))
                if d is not None:
                    total += counts[d]
            counts[q] = total
        return tuple(counts[: self.num_states])

    def count_words(self) -> int:
        if self.num_states == 0:
            return 0
        return self._path_counts[self.initial_state]

    def sample_uniform(self, rng: random.Random) -> Word:
        """Draw one accepted word, each with probability exactly 1/|L|."""
        total = self.count_words()
        if total == 0:
            raise EmptyLanguageError("cannot sample from an empty language")
        counts = self._path_counts
        q = self.initial_state
        word: list[str] = []
        pick = rng.randrange(counts[q])
        while True:
            if q in self.final:
                if pick == 0:
                    return tuple(word)
                pick -= 1
            for sym in self.alphabet:
                d = self.delta.get((q, sym))
                if d is None:
                    continue
                if pick < counts[d]:
                    word.append(sym)
                    q = d
                    break
                pick -= counts[d]
            else:
                raise AssertionError("path count bookkeeping out of sync")

    def iter_words(self) -> Iterator[Word]:
        """All accepted words, depth-first with symbols in alphabet order
        (lexicographic order for block languages).  Acyclic automata only."""
        if not self.is_acyclic:
            raise ValueError("word enumeration requires an acyclic automaton")

        def walk(q: int, prefix: Word) -> Iterator[Word]:
            if q in self.final:
                yield prefix
            for sym in self.alphabet:
                d = self.delta.get((q, sym))
                if d is not None and self._path_counts[d] > 0:
                    yield from walk(d, prefix + (sym,))

        yield from walk(self.initial_state, ())

    def first_word(self) -> Word:
        """First word under iter_words order; least word for block languages."""
        if self.count_words() == 0:
            raise EmptyLanguageError("automaton accepts no words")
        return next(iter(self.iter_words()))

    def least_word(self) -> "Word | None":
        """Shortest accepted word, lexicographically least among the shortest.
        Works on cyclic automata; None when the language is empty."""
        if self.initial_state in self.final:
            return ()
        seen = {self.initial_state}
        layer: list[tuple[int, Word]] = [(self.initial_state, ())]
        while layer:
            nxt: list[tuple[int, Word]] = []
            for q, w in layer:
                for sym in self.alphabet:
                    d = self.delta.get((q, sym))
                    if d is None or d in seen:
                        continue
                    seen.add(d)
                    wd = w + (sym,)
                    if d in self.final:
                        return wd
                    nxt.append((d, wd))
            layer = nxt
        return None


@dataclass(frozen=True)
class Trellis(Dfa):
    """Trim acyclic DFA accepting a block code: one initial state, at most one
    final state, every accepted word of length exactly ``length``."""

    length: int = 0

    def __post_init__(self):
        super().__post_init__()
        if self.length < 0:
            raise ValueError("block length must be >= 0")
        if len(self.final) > 1:
            raise ValueError("trellis must have at most one final state")
        trimmed = Nfa(
            self.alphabet, self.num_states, self.initial, self.final,
            self.transitions,
        ).trim()
        if self.final and trimmed.num_states != self.num_states:
            raise ValueError("trellis must be trim")
        if self.final and not self.is_acyclic:
            raise ValueError("trellis must be acyclic")
        if self.final:
            self._check_uniform_length()

    def _check_uniform_length(self):
        depth = {self.initial_state: 0}
        queue = [self.initial_state]
        i = 0
        while i < len(queue):
            q = queue[i]
            i += 1
            for sym in self.alphabet:
                d = self.delta.get((q, sym))
                if d is None:
                    continue
                nd = depth[q] + 1
                if d in depth:
                    if depth[d] != nd:
                        raise ValueError("trellis paths have inconsistent lengths")
                else:
                    depth[d] = nd
                    queue.append(d)
        for q in self.final:
            if depth.get(q) != self.length:
                raise ValueError(
                    f"trellis accepts words of length {depth.get(q)}, "
                    f"declared {self.length}"
                )

    @classmethod
    def _raw(cls, **kwargs):
        # trim() and similar rebuilds drop back to plain automata
        if len(kwargs["initial"]) == 1:
            return Dfa(**kwargs)
        return Nfa(**kwargs)

    @property
    def final_state(self) -> "int | None":
        return next(iter(self.final)) if self.final else None

    def words(self) -> list[Word]:
        return list(self.iter_words())

    def add_word(self, word: "str | Iterable[str]") -> "Trellis":
        """Trellis accepting C(self) | {word}.

        Returns ``self`` unchanged when the word is already accepted, so
        ``result is t`` doubles as the "nothing added" flag.  The new word is
        spliced in by walking its longest existing prefix and branching into
        fresh states, with the last step redirected into the unique final
        state; determinism is preserved because only the missing transitions
        are added.
        """
        w = self.alphabet.word(word)
        if len(w) != self.length:
            raise WordError(
                f"word length {len(w)} does not match block length {self.length}"
            )
        if self.final and self.accepts(w):
            return self
        if not w:  # length-0 code: the only word is the empty one
            return Trellis(self.alphabet, self.num_states, self.initial,
                           self.initial, self.transitions, length=0)
        num = self.num_states
        transitions = list(self.transitions)
        final = self.final_state
        new_final = final
        if new_final is None:
            new_final = num
            num += 1
        q = self.initial_state
        i = 0
        while i < len(w):
            nxt = self.delta.get((q, w[i]))
            if nxt is None:
                break
            q = nxt
            i += 1
        # fresh interior states for the unmatched part, except the last step
        while i < len(w) - 1:
            transitions.append((q, w[i], num))
            q = num
            num += 1
            i += 1
        transitions.append((q, w[-1], new_final))
        return Trellis(
            self.alphabet,
            num,
            self.initial,
            frozenset({new_final}),
            tuple(transitions),
            length=self.length,
        )

    def to_text(self) -> str:
        return Dfa(
            self.alphabet, self.num_states, self.initial, self.final,
            self.transitions,
        ).to_text()


def universe_trellis(alphabet: Alphabet, length: int) -> Trellis:
    """The trellis accepting every word of the given length: a chain of
    length+1 states with the full symbol fan at each step."""
    if length < 0:
        raise ValueError("length must be >= 0")
    transitions = tuple(
        (i, sym, i + 1) for i in range(length) for sym in alphabet
    )
    return Trellis(
        alphabet,
        length + 1,
        frozenset({0}),
        frozenset({length}),
        transitions,
        length=length,
    )


def trellis_from_words(
    words: Iterable["str | Iterable[str]"],
    alphabet: Alphabet,
    length: "int | None" = None,
) -> Trellis:
    """Prefix tree with a single merged final state, accepting exactly the
    given equal-length words.  An empty collection needs an explicit length."""
    coerced = sorted({alphabet.word(w) for w in words})
    if not coerced:
        if length is None:
            raise WordError("empty word set needs an explicit block length")
        return Trellis(alphabet, 1, frozenset({0}), frozenset(), (), length=length)
    lengths = {len(w) for w in coerced}
    if len(lengths) != 1:
        raise WordError(f"words have mixed lengths: {sorted(lengths)}")
    (ell,) = lengths
    if length is not None and length != ell:
        raise WordError(f"words have length {ell}, declared {length}")
    if ell == 0:
        return Trellis(alphabet, 1, frozenset({0}), frozenset({0}), (), length=0)
    # interior prefix-tree states, then one shared final state
    FINAL = -1
    node_of: dict[Word, int] = {(): 0}
    transitions: list[tuple[int, str, int]] = []
    counter = 1
    for w in coerced:
        q = 0
        for i, sym in enumerate(w[:-1]):
            prefix = w[: i + 1]
            if prefix not in node_of:
                node_of[prefix] = counter
                transitions.append((q, sym, counter))
                counter += 1
            q = node_of[prefix]
        transitions.append((q, w[-1], FINAL))
    final = counter
    return Trellis(
        alphabet,
        counter + 1,
        frozenset({0}),
        frozenset({final}),
        tuple((s, a, final if d == FINAL else d) for s, a, d in transitions),
        length=ell,
    )


def as_trellis(machine: Nfa, length: "int | None" = None) -> Trellis:
    """Trim/determinize an automaton and validate it as a trellis."""
    dfa = machine if isinstance(machine, Dfa) else machine.determinize()
    d = dfa.trim()
    if d.num_states == 0 or not isinstance(d, Dfa):
        # trimming removed the initial state: the language is empty
        if length is None:
            raise WordError("empty language needs an explicit block length")
        return trellis_from_words((), machine.alphabet, length)
    if not d.is_acyclic:
        raise WordError("automaton is cyclic; not a block code")
    if d.count_words() == 0:
        if length is None:
            raise WordError("empty language needs an explicit block length")
        return trellis_from_words((), machine.alphabet, length)
    ell = len(d.first_word())
    if length is not None and length != ell:
        raise WordError(f"language has length {ell}, declared {length}")
    if len(d.final) == 1:
        return Trellis(d.alphabet, d.num_states, d.initial, d.final,
                       d.transitions, length=ell)
    # merge the final states into one fresh state (block code: no final has
    # outgoing transitions once trimmed, so the merge cannot break determinism)
    fresh = d.num_states
    merged = Nfa(
        d.alphabet,
        d.num_states + 1,
        d.initial,
        frozenset({fresh}),
        tuple((s, a, fresh if t in d.final else t) for s, a, t in d.transitions),
    ).trim()
    if not isinstance(merged, Dfa):
        merged = merged.determinize().trim()
    return Trellis(merged.alphabet, merged.num_states, merged.initial,
                   merged.final, merged.transitions, length=ell)


# -- shared text-format helpers ------------------------------------------------


def _parse_automaton_text(text: str, kinds: Sequence[str]):
    """Parse the common header/transition-lines shape.

    Returns (kind, initial tokens, final tokens, rows); rows hold raw tokens
    with epsilon already decoded to None.
    """
    lines = text.splitlines()
    header_idx = None
    for i, line in enumerate(lines):
        if line.strip() and not line.lstrip().startswith("#"):
            header_idx = i
            break
    if header_idx is None:
        raise FormatError("empty description")
    head = lines[header_idx].split()
    if head[0] not in kinds:
        raise FormatError(
            f"expected one of {', '.join(kinds)}, got {head[0]!r}",
            line=header_idx + 1,
        )
    if "*" not in head:
        raise FormatError("missing '*' separator in header", line=header_idx + 1)
    star = head.index("*")
    final_toks = head[1:star]
    initial_toks = head[star + 1 :]
    if not initial_toks:
        raise FormatError("no initial states in header", line=header_idx + 1)
    rows = []
    width = 3 if kinds[0] in ("@NFA", "@DFA") else 4
    for i in range(header_idx + 1, len(lines)):
        line = lines[i].strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0].startswith("@"):
            raise FormatError(f"unknown directive {parts[0]!r}", line=i + 1)
        if len(parts) != width:
            raise FormatError(
                f"expected {width} fields, got {len(parts)}", line=i + 1
            )
        decoded = tuple(None if p == EPSILON_TOKEN else p for p in parts)
        if decoded[0] is None or decoded[-1] is None:
            raise FormatError("state name cannot be @epsilon", line=i + 1)
        rows.append(decoded)
    return head[0], initial_toks, final_toks, rows


def _number_states(tokens: list[str]) -> dict[str, int]:
    """Map state tokens to dense ids.

    If every token is a decimal numeral and together they form 0..n-1, the
    numerals are taken literally, which makes parse -> serialize -> parse the
    identity; otherwise ids follow first occurrence.
    """
    uniq = list(dict.fromkeys(tokens))
    if all(t.isdigit() for t in uniq):
        values = sorted(int(t) for t in uniq)
        if values == list(range(len(values))):
            return {t: int(t) for t in uniq}
    return {t: i for i, t in enumerate(uniq)}
