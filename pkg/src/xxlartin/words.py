"""Signed-letter words over named generators.

Words are kept exactly as written: products concatenate without cancelling,
and free reduction happens only when asked for.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

Letter = tuple[str, int]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for sym, sign in self.letters:
            if sign not in (1, -1):
                raise ValueError(f"letter {sym!r} has sign {sign}, expected +1 or -1")

    @classmethod
    def from_powers(cls, powers: Iterable[tuple[str, int]]) -> "Word":
        """Expand ``[("a", 2), ("b", -1)]`` into ``a a b^-1``."""
        letters: list[Letter] = []
        for sym, k in powers:
            sign = 1 if k > 0 else -1
            letters.extend([(sym, sign)] * abs(k))
        return cls(tuple(letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse whitespace-separated letters with optional ``^k`` exponents.

        ``"a b a b^-1"`` and ``"t^-2 u"`` are valid; ``"1"`` or an empty
        string is the empty word.
        """
        powers = []
        for tok in text.split():
            if tok == "1":
                continue
            match = _TOKEN.match(tok)
            if match is None:
                raise ValueError(f"cannot parse word token {tok!r}")
            sym, exp = match.group(1), match.group(2)
            powers.append((sym, 1 if exp is None else int(exp)))
        return cls.from_powers(powers)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def inverse(self) -> "Word":
        return Word(tuple((s, -e) for s, e in reversed(self.letters)))

    def alphabet(self) -> frozenset[str]:
        return frozenset(s for s, _ in self.letters)

    def exponent_sum(self, weights: dict[str, int] | None = None) -> int:
        if weights is None:
            return sum(e for _, e in self.letters)
        return sum(weights[s] * e for s, e in self.letters)

    def free_reduce(self) -> "Word":
        out: list[Letter] = []
        for sym, e in self.letters:
            if out and out[-1] == (sym, -e):
                out.pop()
            else:
                out.append((sym, e))
        return Word(tuple(out))

    def is_freely_reduced(self) -> bool:
        return all(
            self.letters[i] != (self.letters[i + 1][0], -self.letters[i + 1][1])
            for i in range(len(self.letters) - 1)
        )

    def powers(self) -> list[tuple[str, int]]:
        """Group adjacent equal letters into ``(symbol, exponent)`` runs."""
        runs: list[list] = []
        for sym, e in self.letters:
            if runs and runs[-1][0] == sym and (runs[-1][1] > 0) == (e > 0):
                runs[-1][1] += e
            else:
                runs.append([sym, e])
        return [(s, k) for s, k in runs]

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(s if k == 1 else f"{s}^{k}" for s, k in self.powers())

    def compact(self) -> str:
        """Letters without separators, inverses in upper case: ``abAB``."""
        return "".join(s if e > 0 else s.upper() for s, e in self.letters)


def alternating(s: str, t: str, length: int) -> Word:
    """The positive word ``s t s t ...`` with ``length`` letters."""
    return Word(tuple(((s, t)[i % 2], 1) for i in range(length)))


_COMPACT = re.compile(r"\s*(?:(\()|(\))|\^\s*(-?\d+)|([A-Za-z]))")


def parse_compact(text: str, alphabet: str = "ab") -> Word:
    """Parse single-letter words such as ``(ab)^5 a (ab)^-5 a^-1`` or ``abAB``.

    Letters come from ``alphabet``; an upper-case letter is the inverse of
    its lower-case generator. Parentheses group, and ``^k`` raises the
    preceding letter or group to an integer power.
    """
    text = text.strip()
    if text in ("", "1"):
        return Word()
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        match = _COMPACT.match(text, pos)
        if match is None or match.end() == pos:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        pos = match.end()
        if match.group(1):
            tokens.append(("(", ""))
        elif match.group(2):
            tokens.append((")", ""))
        elif match.group(3) is not None:
            tokens.append(("^", match.group(3)))
        else:
            tokens.append(("x", match.group(4)))
    def group(i: int, closing: bool) -> tuple[Word, int]:
        out = Word()
        last: Word | None = None
        while i < len(tokens):
            kind, val = tokens[i]
            if kind == ")":
                if not closing:
                    raise ValueError("unbalanced ')'")
                break
            if kind == "^":
                if last is None:
                    raise ValueError("exponent without a base")
                out = Word(out.letters[: len(out) - len(last)])
                last = last ** int(val)
                out = out * last
                i += 1
                last = None
                continue
            if kind == "(":
                inner, i = group(i + 1, True)
                if i >= len(tokens):
                    raise ValueError("unbalanced '('")
                last = inner
            else:
                sym = val.lower()
                if sym not in alphabet:
                    raise ValueError(f"letter {val!r} is not in the alphabet {alphabet!r}")
                last = Word(((sym, 1 if val == sym else -1),))
            out = out * last
            i += 1
        else:
            if closing:
                raise ValueError("unbalanced '('")
        return out, i

    word, _ = group(0, False)
    return word
