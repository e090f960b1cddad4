"""Words in a free group and product-of-conjugates identities.

A word is a tuple of letters ``(symbol, sign)`` with ``sign`` in ``{+1, -1}``.
Symbols are arbitrary hashable values (arc ids, graph edge ids).  Words are
not kept reduced; :func:`reduce_word` computes the unique reduced form.
"""

from typing import Hashable, Iterable, Mapping, Sequence

Letter = tuple[Hashable, int]
Word = tuple[Letter, ...]

EPSILON: Word = ()


class FormulaError(ValueError):
    pass


def word(letters: Iterable[tuple]) -> Word:
    out = []
    for sym, sign in letters:
        if sign not in (1, -1):
            raise FormulaError(f"letter sign must be +-1, got {sign!r}")
        out.append((sym, sign))
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def concat(*ws: Word) -> Word:
    out: list[Letter] = []
    for w in ws:
        out.extend(w)
    return tuple(out)


def reduce_word(w: Word) -> Word:
    stack: list[Letter] = []
    for let in w:
        if stack and stack[-1][0] == let[0] and stack[-1][1] == -let[1]:
            stack.pop()
        else:
            stack.append(let)
    return tuple(stack)


def conjugate(by: Word, w: Word) -> Word:
    """``by * w * by^-1``."""
    return concat(by, w, inverse(by))


def power(w: Word, e: int) -> Word:
    if e == 0:
        return EPSILON
    if e < 0:
        return power(inverse(w), -e)
    return concat(*([w] * e))


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = reduce_word(w[1:-1])
    return w


def cyclically_equal(a: Word, b: Word) -> bool:
    """Equality of conjugacy classes: cyclic reductions agree up to rotation."""
    ra, rb = cyclic_reduce(a), cyclic_reduce(b)
    if len(ra) != len(rb):
        return False
    if not ra:
        return True
    return any(rb[k:] + rb[:k] == ra for k in range(len(rb)))


def substitute(w: Word, table: Mapping[Hashable, Word]) -> Word:
    """Apply the homomorphism sending each symbol to a word."""
    out: list[Letter] = []
    for sym, e in w:
        img = table[sym]
        out.extend(img if e == 1 else inverse(img))
    return tuple(out)


def exponent_sums(w: Word) -> dict:
    out: dict = {}
    for sym, e in w:
        out[sym] = out.get(sym, 0) + e
        if out[sym] == 0:
            del out[sym]
    return out


class ConjugationFormula:
    """An identity ``lhs = prod_i  conj_i * base_i^(exp_i) * conj_i^-1``.

    ``bases`` names the curves the right side is built from; factors refer to
    them by key so the same curve may appear several times.  Validity (both
    sides reduce to the same word) is checked at construction and the
    constructor refuses invalid identities.
    """

    def __init__(self, lhs: Word, factors: Sequence[tuple[Word, Hashable, int]],
                 bases: Mapping[Hashable, Word]):
        self.lhs: Word = tuple(lhs)
        self.factors: tuple[tuple[Word, Hashable, int], ...] = tuple(
            (tuple(conj), key, exp) for conj, key, exp in factors)
        self.bases: dict = dict(bases)
        for conj, key, exp in self.factors:
            if key not in self.bases:
                raise FormulaError(f"factor references unknown base {key!r}")
            if exp not in (1, -1):
                raise FormulaError("factor exponent must be +-1")
        if not self.holds():
            raise FormulaError("conjugation formula does not free-reduce to an identity")

    def rhs_word(self) -> Word:
        parts = []
        for conj, key, exp in self.factors:
            base = self.bases[key]
            parts.append(conjugate(conj, base if exp == 1 else inverse(base)))
        return concat(*parts)

    def holds(self) -> bool:
        return reduce_word(self.lhs) == reduce_word(self.rhs_word())

    def symbols(self) -> set:
        syms = {s for s, _ in self.lhs}
        for conj, key, _ in self.factors:
            syms.update(s for s, _ in conj)
            syms.update(s for s, _ in self.bases[key])
        return syms

    def compose(self, expansions: Mapping[Hashable, "ConjugationFormula"]) -> "ConjugationFormula":
        """Replace base curves by their own product-of-conjugates identities.

        For every key in ``expansions`` the expansion's left side must be the
        base word stored here; its factors are spliced in with conjugators
        composed, inverted factors reversing order.
        """
        new_factors: list[tuple[Word, Hashable, int]] = []
        new_bases: dict = {}
        for conj, key, exp in self.factors:
            sub = expansions.get(key)
            if sub is None:
                new_bases[key] = self.bases[key]
                new_factors.append((conj, key, exp))
                continue
            if reduce_word(sub.lhs) != reduce_word(self.bases[key]):
                raise FormulaError("expansion left side does not match the base word")
            inner = sub.factors if exp == 1 else tuple(
                (c, k, -e) for c, k, e in reversed(sub.factors))
            for c, k, e in inner:
                new_bases[k] = sub.bases[k]
                new_factors.append((concat(conj, c), k, e))
        return ConjugationFormula(self.lhs, new_factors, new_bases)
