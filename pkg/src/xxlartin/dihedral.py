"""Dihedral Artin groups I2(m) = < a, b | w_m(a,b) = w_m(b,a) >, m >= 5.

Both alternative presentations (odd: <t, u | t^m = u^2>, even:
<a, t | a t^p = t^p a>, with t = ab) are available as substitution tables.
Elements are compared through their action on T_m x R: an element acts on
the R factor by translation by its exponent sum, and on T_m through the
central quotient (Z/m * Z/2 for odd m, Z * Z/p for even m), where it has a
syllable normal form.

The word problem is decided by that pair. The kernel of the quotient map is
the infinite cyclic centre, generated by t^m (odd) or t^p (even), whose
exponent sum is nonzero; so an element with trivial quotient image and zero
exponent sum is trivial. Conversely both coordinates are homomorphic images.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .presentation import build_word
from .words import Word

MAX_BALL_RADIUS = 8


@dataclass(frozen=True)
class DihedralParams:
    m: int

    def __post_init__(self):
        if self.m < 5:
            raise ValueError(f"dihedral model needs m >= 5, got m={self.m}")

    @property
    def parity(self) -> str:
        return "odd" if self.m % 2 else "even"

    @property
    def p(self) -> int:
        return (self.m - 1) // 2 if self.m % 2 else self.m // 2

    @property
    def quotient_alphabet(self) -> tuple[str, str]:
        return ("t", "u") if self.parity == "odd" else ("a", "t")

    @property
    def factor_orders(self) -> dict[str, int]:
        # 0 marks the infinite cyclic factor
        if self.parity == "odd":
            return {"t": self.m, "u": 2}
        return {"a": 0, "t": self.p}

    @property
    def lift_weights(self) -> dict[str, int]:
        """Exponent sum, in a and b, of each quotient letter."""
        if self.parity == "odd":
            return {"t": 2, "u": self.m}
        return {"a": 1, "t": 2}

    @property
    def center_weight(self) -> int:
        """Exponent sum of the central generator t^m (odd) or t^p (even)."""
        return 2 * self.m if self.parity == "odd" else 2 * self.p


AB = frozenset("ab")


def _check_alphabet(word: Word, allowed, what: str):
    extra = word.alphabet() - frozenset(allowed)
    if extra:
        raise ValueError(f"{what} must be over {{{', '.join(sorted(allowed))}}}, found {sorted(extra)}")


@dataclass(frozen=True)
class SubstitutionTable:
    m: int
    p: int
    parity: str
    to_ab: dict
    to_quotient: dict
    hnn: dict | None = None

    def __hash__(self):
        return hash((self.m, self.parity))


def odd_presentation(m: int) -> SubstitutionTable:
    if m < 5 or m % 2 == 0:
        raise ValueError(f"odd presentation needs odd m >= 5, got {m}")
    p = (m - 1) // 2
    return SubstitutionTable(
        m=m,
        p=p,
        parity="odd",
        to_ab={"t": Word.parse("a b"), "u": build_word("a", "b", m)},
        to_quotient={
            "a": Word.from_powers([("t", -p), ("u", 1)]),
            "b": Word.from_powers([("u", 1), ("t", -p)]),
        },
    )


def even_presentation(m: int) -> SubstitutionTable:
    if m < 6 or m % 2:
        raise ValueError(f"even presentation needs even m >= 6, got {m}")
    p = m // 2
    return SubstitutionTable(
        m=m,
        p=p,
        parity="even",
        to_ab={"a": Word.parse("a"), "t": Word.parse("a b")},
        to_quotient={"a": Word.parse("a"), "b": Word.parse("a^-1 t")},
        hnn={"base": "t", "associated": f"t^{p}", "stable_letter": "a"},
    )


def substitution_table(params: DihedralParams) -> SubstitutionTable:
    if params.parity == "odd":
        return odd_presentation(params.m)
    return even_presentation(params.m)


def rewrite(word: Word, params: DihedralParams, target: str = "quotient") -> Word:
    """Letter-by-letter substitution between {a,b} and the quotient alphabet.

    No reduction is performed, so ``rewrite(a b)`` for m=5 is
    ``t^-2 u u t^-2``.
    """
    table = substitution_table(params)
    if target == "quotient":
        _check_alphabet(word, AB, "source word")
        subst = table.to_quotient
    elif target == "ab":
        _check_alphabet(word, params.quotient_alphabet, "source word")
        subst = table.to_ab
    else:
        raise ValueError(f"unknown target alphabet {target!r}")
    out: list = []
    for sym, e in word:
        piece = subst[sym]
        out.extend((piece if e > 0 else piece.inverse()).letters)
    return Word(tuple(out))


def _normalize(params: DihedralParams, sym: str, k: int) -> int:
    n = params.factor_orders[sym]
    return k % n if n else k


def _reduce(params: DihedralParams, powers) -> tuple[tuple[str, int], ...]:
    stack: list[list] = []
    for sym, k in powers:
        k = _normalize(params, sym, k)
        if k == 0:
            continue
        if stack and stack[-1][0] == sym:
            k = _normalize(params, sym, stack[-1][1] + k)
            if k == 0:
                stack.pop()
            else:
                stack[-1][1] = k
        else:
            stack.append([sym, k])
    return tuple((s, k) for s, k in stack)


@dataclass(frozen=True)
class NormalForm:
    """Free-product normal form in the central quotient, plus the power of
    the central generator needed to recover the element of I2(m)."""

    m: int
    syllables: tuple[tuple[str, int], ...] = ()
    central_power: int = 0

    @property
    def params(self) -> DihedralParams:
        return DihedralParams(self.m)

    def is_trivial_image(self) -> bool:
        return not self.syllables

    def lift(self) -> Word:
        """A word in the quotient alphabet representing the full element."""
        params = self.params
        z = ("t", self.m if params.parity == "odd" else params.p)
        return Word.from_powers(list(self.syllables) + [(z[0], z[1] * self.central_power)])

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        if self.m != other.m:
            raise ValueError("normal forms of different dihedral groups")
        params = self.params
        syl = _reduce(params, self.syllables + other.syllables)
        w = params.lift_weights
        before = sum(w[s] * k for s, k in self.syllables + other.syllables)
        after = sum(w[s] * k for s, k in syl)
        shift, rem = divmod(before - after, params.center_weight)
        assert rem == 0
        return NormalForm(self.m, syl, self.central_power + other.central_power + shift)

    def inverse(self) -> "NormalForm":
        params = self.params
        return syllable_normal_form(self.lift().inverse(), params)

    def __str__(self) -> str:
        body = " ".join(s if k == 1 else f"{s}^{k}" for s, k in self.syllables) or "1"
        if self.central_power:
            return f"{body} . z^{self.central_power}"
        return body


def syllable_normal_form(word: Word, params: DihedralParams) -> NormalForm:
    _check_alphabet(word, params.quotient_alphabet, "quotient word")
    syl = _reduce(params, [(s, e) for s, e in word])
    w = params.lift_weights
    central, rem = divmod(word.exponent_sum(w) - sum(w[s] * k for s, k in syl), params.center_weight)
    assert rem == 0
    return NormalForm(params.m, syl, central)


@dataclass(frozen=True)
class IsometryRecord:
    quotient_image: NormalForm
    translation: int

    def is_identity(self) -> bool:
        return self.quotient_image.is_trivial_image() and self.translation == 0

    def __mul__(self, other: "IsometryRecord") -> "IsometryRecord":
        return IsometryRecord(self.quotient_image * other.quotient_image, self.translation + other.translation)


def translation_on_r(word: Word) -> int:
    """Exponent sum: the translation of the R factor, in units of alpha."""
    _check_alphabet(word, AB, "word")
    return word.exponent_sum()


def act_on_cover(word: Word, params: DihedralParams) -> IsometryRecord:
    _check_alphabet(word, AB, "word")
    image = syllable_normal_form(rewrite(word, params, "quotient"), params)
    return IsometryRecord(image, translation_on_r(word))


def is_trivial(word: Word, params: DihedralParams) -> bool:
    return act_on_cover(word, params).is_identity()


def relator(params: DihedralParams) -> Word:
    m = params.m
    return build_word("a", "b", m) * build_word("b", "a", m).inverse()


def center_generator(params: DihedralParams) -> Word:
    k = params.m if params.parity == "odd" else params.p
    return Word.parse("a b") ** k


# -- brute-force oracle --------------------------------------------------------
#
# Letters are encoded as ints: a=0, a^-1=1, b=2, b^-1=3, so x ^ 1 inverts x.

_LETTERS = (("a", 1), ("a", -1), ("b", 1), ("b", -1))
_CODE = {l: i for i, l in enumerate(_LETTERS)}


def _encode(word: Word) -> tuple[int, ...]:
    return tuple(_CODE[l] for l in word)


def _decode(code) -> Word:
    return Word(tuple(_LETTERS[c] for c in code))


def _reduce_code(code) -> tuple[int, ...]:
    out: list[int] = []
    for c in code:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def _inverse_code(code) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(code))


def _reduced_words(max_len: int) -> list[tuple[int, ...]]:
    words = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for c in range(4):
                if w and w[-1] == c ^ 1:
                    continue
                nxt.append(w + (c,))
        words.extend(nxt)
        frontier = nxt
    return words


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                rx, ry = ry, rx
            self.parent[rx] = ry


@dataclass(frozen=True)
class BallPartition:
    m: int
    radius: int
    length_cap: int
    node_cap: int
    classes: tuple[tuple[Word, ...], ...]

    def class_index(self) -> dict[Word, int]:
        return {w: i for i, cls in enumerate(self.classes) for w in cls}

    def same_class(self, u: Word, v: Word) -> bool:
        idx = self.class_index()
        return idx[u] == idx[v]

    def agreement(self, params: DihedralParams) -> dict:
        """Cross-check against ``act_on_cover``.

        ``conflicts`` counts oracle classes whose members have different
        isometry records (a soundness failure of one side); ``unmatched``
        counts record classes split across several oracle classes, which the
        length cap allows and which is reported, not treated as an error.
        """
        conflicts = []
        record_classes: dict[IsometryRecord, set[int]] = {}
        for i, cls in enumerate(self.classes):
            records = {act_on_cover(w, params) for w in cls}
            if len(records) > 1:
                conflicts.append(i)
            for r in records:
                record_classes.setdefault(r, set()).add(i)
        unmatched = sum(1 for s in record_classes.values() if len(s) > 1)
        return {"conflicts": conflicts, "unmatched_record_classes": unmatched}


def enumerate_ball(params: DihedralParams, L: int, node_slack: int = 2) -> BallPartition:
    """Partition all {a,b}-words of length <= L into classes of certified
    equality, without using the quotient action.

    Equalities come from free reduction and from replacing a subword ``x`` by
    ``y`` whenever ``x y^-1`` is a cyclic permutation of the relator or its
    inverse. Rewriting runs on freely reduced words of length at most
    ``L + node_slack``; the unreduced intermediate words never exceed
    ``2L + 2m`` letters. Being length-capped, the oracle may leave equal
    elements in different classes, but never merges unequal ones.
    """
    if L < 0 or L > MAX_BALL_RADIUS:
        raise ValueError(f"ball radius must be in [0, {MAX_BALL_RADIUS}], got {L}")
    m = params.m
    length_cap = 2 * L + 2 * m
    node_cap = min(L + node_slack, length_cap - 2 * m + 2) if L else 0

    r = _encode(relator(params))
    cyclic = set()
    for base in (r, _inverse_code(r)):
        for i in range(len(base)):
            cyclic.add(base[i:] + base[:i])
    pieces: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for rel in sorted(cyclic):
        for k in range(1, len(rel) + 1):
            pieces.setdefault(rel[:k], set()).add(_inverse_code(rel[k:]))
    max_piece = 2 * m

    nodes = _reduced_words(node_cap)
    index = {w: i for i, w in enumerate(nodes)}
    uf = _UnionFind(len(nodes))
    for w in nodes:
        n = len(w)
        wi = index[w]
        for i in range(n):
            for k in range(1, min(max_piece, n - i) + 1):
                reps = pieces.get(w[i:i + k])
                if not reps:
                    continue
                for rep in reps:
                    if n - k + len(rep) > length_cap:
                        continue
                    new = _reduce_code(w[:i] + rep + w[i + k:])
                    j = index.get(new)
                    if j is not None:
                        uf.union(wi, j)

    groups: dict[int, list[tuple[int, ...]]] = {}
    for n in range(L + 1):
        for code in product(range(4), repeat=n):
            root = uf.find(index[_reduce_code(code)])
            groups.setdefault(root, []).append(code)
    classes = sorted((tuple(sorted(g, key=lambda c: (len(c), c))) for g in groups.values()),
                     key=lambda cls: (len(cls[0]), cls[0]))
    return BallPartition(
        m=m,
        radius=L,
        length_cap=length_cap,
        node_cap=node_cap,
        classes=tuple(tuple(_decode(c) for c in cls) for cls in classes),
    )
