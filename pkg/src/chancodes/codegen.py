"""Randomized construction of error-detecting block codes.

``next_word`` draws uniform words from the sampling universe and returns the
first one outside the exclusion language (channel | channel^-1)(C) and outside
C itself; after n = 1 + floor(1 / (4 eps (1-f)^2)) failed trials it gives up.
When the code is not yet f-maximal with respect to the universe, the give-up
probability is below eps (a Chebyshev bound on the binomial trial count).

``make_code`` repeats that until the requested number of words is added or a
give-up ends the run; the grown code is detecting by construction, and an
early stop means the result is f-maximal or a random word is addable with
probability below eps.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .automata import Alphabet, Trellis, Word, format_word, trellis_from_words, \
    universe_trellis
from .channels import Channel
from .errors import AlphabetMismatchError, NotDetectingError, ParameterError
from .properties import detection_witness
from .transducers import product

RNG_NAME = "python-random-mt19937"
MAX_TRIALS = 10**9
DEFAULT_F = "0.95"
DEFAULT_EPS = "0.05"


def _as_fraction(x, name: str) -> Fraction:
    """Numeric parameters are read at decimal face value, so 0.95 means 19/20
    exactly rather than the nearest binary float."""
    try:
        if isinstance(x, float):
            return Fraction(str(x))
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"bad value for {name}: {x!r}") from exc


def trial_bound(f, eps) -> int:
    """n = 1 + floor(1 / (4 eps (1-f)^2)), computed in exact arithmetic."""
    f = _as_fraction(f, "f")
    eps = _as_fraction(eps, "eps")
    if not 0 <= f < 1:
        raise ParameterError(f"f must be in [0, 1), got {f}")
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must be in (0, 1], got {eps}")
    n = 1 + int(Fraction(1) / (4 * eps * (1 - f) ** 2))
    if n > MAX_TRIALS:
        raise ParameterError(f"trial count {n} exceeds the {MAX_TRIALS} cap")
    return n


class NextWord(NamedTuple):
    """Outcome of one NEXTWORD run: ``word`` is None when the trial budget was
    exhausted; ``empty_universe`` flags the degenerate give-up."""

    word: Optional[Word]
    trials: int
    empty_universe: bool = False


def next_word(
    channel: Channel,
    code: Trellis,
    f=DEFAULT_F,
    eps=DEFAULT_EPS,
    rng: "random.Random | None" = None,
    universe: "Trellis | None" = None,
) -> NextWord:
    """One attempt to find a word that can join the code.

    Builds the exclusion automaton once, then samples uniformly from the
    universe (default: all words of the code's length) with replacement.
    """
    n = trial_bound(f, eps)
    if rng is None:
        rng = random.Random()
    if universe is None:
        universe = universe_trellis(code.alphabet, code.length)
    if universe.alphabet != code.alphabet:
        raise AlphabetMismatchError("universe alphabet differs from the code's")
    if universe.length != code.length:
        raise ParameterError(
            f"universe length {universe.length} != code length {code.length}"
        )
    if universe.count_words() == 0:
        return NextWord(None, 0, empty_universe=True)
    excluded = product(code, channel.self_union_inverse())
    in_excluded = excluded.matcher()
    delta = code.delta
    q0 = code.initial_state
    finals = code.final

    def in_code(w: Word) -> bool:
        q = q0
        for sym in w:
            q = delta.get((q, sym))
            if q is None:
                return False
        return q in finals

    for tr in range(1, n + 1):
        w = universe.sample_uniform(rng)
        if not in_excluded(w) and not in_code(w):
            return NextWord(w, tr)
    return NextWord(None, n)


@dataclass(frozen=True)
class GenReport:
    """Everything a MAKECODE run produced, sufficient to reproduce it."""

    channel: str
    alphabet: Alphabet
    length: int
    requested: int
    f: str
    eps: str
    trial_bound: int
    seed: Optional[int]
    rng: str
    universe: str
    trellis: Trellis
    words: tuple[Word, ...]
    trials_per_word: tuple[int, ...]
    exhausted: bool
    empty_universe: bool
    wall_time: float = field(compare=False)

    @property
    def size(self) -> int:
        return self.trellis.count_words()

    def to_text(self, include_timing: bool = False) -> str:
        lines = [
            f"channel: {self.channel}",
            f"alphabet: {format_word(self.alphabet.symbols)}",
            f"length: {self.length}",
            f"requested: {self.requested}",
            f"f: {self.f}",
            f"eps: {self.eps}",
            f"trials-per-word: {self.trial_bound}",
            f"seed: {self.seed}",
            f"rng: {self.rng}",
            f"universe: {self.universe}",
            "words:",
        ]
        lines += [format_word(w) for w in self.words]
        lines += [
            f"size: {self.size}",
            f"exhausted: {'true' if self.exhausted else 'false'}",
        ]
        if include_timing:
            lines.append(f"wall-time-s: {self.wall_time:.3f}")
        return "\n".join(lines) + "\n"

    def to_json(self, include_timing: bool = False) -> str:
        payload = {
            "channel": self.channel,
            "alphabet": list(self.alphabet.symbols),
            "length": self.length,
            "requested": self.requested,
            "f": self.f,
            "eps": self.eps,
            "trials_per_word": self.trial_bound,
            "seed": self.seed,
            "rng": self.rng,
            "universe": self.universe,
            "words": [format_word(w) for w in self.words],
            "trials": list(self.trials_per_word),
            "size": self.size,
            "exhausted": self.exhausted,
            "empty_universe": self.empty_universe,
        }
        if include_timing:
            payload["wall_time_s"] = round(self.wall_time, 3)
        return json.dumps(payload, indent=2) + "\n"


def make_code(
    channel: Channel,
    n_words: int,
    length: "int | None" = None,
    *,
    alphabet: "Alphabet | None" = None,
    seed_code: "Trellis | None" = None,
    f=DEFAULT_F,
    eps=DEFAULT_EPS,
    seed: "int | None" = None,
    universe: "Trellis | None" = None,
    universe_label: "str | None" = None,
) -> GenReport:
    """Grow a detecting block code by up to ``n_words`` words.

    Starts from ``seed_code`` when given (it must itself be detecting), else
    from the empty code, in which case ``length`` (and ``alphabet``, default
    binary) are required.  The exclusion automaton is rebuilt from scratch
    against the grown trellis on every iteration.
    """
    if n_words < 0:
        raise ParameterError("requested word count must be >= 0")
    n = trial_bound(f, eps)
    if seed_code is not None:
        code = seed_code
        if length is not None and length != code.length:
            raise ParameterError("length argument contradicts the seed code")
        if alphabet is not None and alphabet != code.alphabet:
            raise ParameterError("alphabet argument contradicts the seed code")
        witness = detection_witness(code, channel)
        if witness:
            raise NotDetectingError(
                f"seed code is not {channel.name}-detecting: {witness}",
                witness=witness,
            )
    else:
        if length is None:
            raise ParameterError("an empty start needs an explicit length")
        code = trellis_from_words((), alphabet or channel.alphabet, length=length)
    if code.alphabet != channel.alphabet:
        raise AlphabetMismatchError("code alphabet differs from the channel's")

    rng = random.Random(seed)
    started = time.perf_counter()
    words: list[Word] = []
    trials: list[int] = []
    exhausted = False
    empty_universe = False
    while len(words) < n_words:
        outcome = next_word(channel, code, f, eps, rng, universe)
        if outcome.word is None:
            exhausted = True
            empty_universe = outcome.empty_universe
            break
        grown = code.add_word(outcome.word)
        assert grown is not code, "next_word returned a word already in the code"
        code = grown
        words.append(outcome.word)
        trials.append(outcome.trials)
    return GenReport(
        channel=channel.name,
        alphabet=code.alphabet,
        length=code.length,
        requested=n_words,
        f=_param_str(f),
        eps=_param_str(eps),
        trial_bound=n,
        seed=seed,
        rng=RNG_NAME,
        universe=universe_label or ("full" if universe is None else "custom"),
        trellis=code,
        words=tuple(words),
        trials_per_word=tuple(trials),
        exhausted=exhausted,
        empty_universe=empty_universe,
        wall_time=time.perf_counter() - started,
    )


def _param_str(x) -> str:
    return str(x)


def derive_seed(seed: "int | None", index: int) -> int:
    """Stable per-repetition seed stream for parallel experiment runs."""
    import hashlib

    base = "none" if seed is None else str(seed)
    digest = hashlib.blake2b(
        f"{base}:{index}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")
