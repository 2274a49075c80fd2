"""Exact integer exponent vectors, monomial orders and rational polynomials.

Monomials are plain tuples of nonnegative ints over a fixed VariableIndex;
polynomials map exponent tuples to nonzero Fractions.  Everything is
immutable after construction and safe to share.

Canonical text form (grammar used in all JSON reports):

    monomial  := "1" | factor ("*" factor)*
    factor    := name "[" int ("," int)* "]" ("^" int)?
    binomial  := monomial " - " monomial

Factors are listed in variable-index order; exponents of 1 are omitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

LESS, EQUAL, GREATER = -1, 0, 1


class DimensionMismatch(ValueError):
    pass


class MarkedOrderError(ValueError):
    """A marked "order" only designates leading terms; it cannot compare."""


def _label_key(label):
    prefix, key = label
    if isinstance(key, int):
        key = (key,)
    return (prefix, tuple(key))


class VariableIndex:
    """Ordered, immutable set of variable labels.

    A label is a pair (prefix, key) where key is an int or a tuple of ints,
    rendered as e.g. ``x[1,2]``, ``y[2,3]``, ``t[1]``.  Order is fixed at
    construction; positions never change.
    """

    __slots__ = ("labels", "_pos")

    def __init__(self, labels):
        labels = tuple((p, k if isinstance(k, int) else tuple(k)) for p, k in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate variable labels")
        self.labels = labels
        self._pos = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, VariableIndex) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"VariableIndex({len(self.labels)} variables)"

    def position(self, label):
        prefix, key = label
        if not isinstance(key, int):
            key = tuple(key)
        return self._pos[(prefix, key)]

    def variable(self, label):
        """Exponent tuple of a single variable."""
        exp = [0] * len(self.labels)
        exp[self.position(label)] = 1
        return tuple(exp)

    def monomial(self, powers):
        """Exponent tuple from an iterable of (label, exponent) pairs."""
        exp = [0] * len(self.labels)
        for label, e in powers:
            exp[self.position(label)] += e
        return tuple(exp)

    def one(self):
        return (0,) * len(self.labels)

    def label_text(self, i):
        prefix, key = self.labels[i]
        if isinstance(key, int):
            key = (key,)
        return f"{prefix}[{','.join(str(k) for k in key)}]"

    def format_monomial(self, exp):
        parts = []
        for i, e in enumerate(exp):
            if e == 1:
                parts.append(self.label_text(i))
            elif e > 1:
                parts.append(f"{self.label_text(i)}^{e}")
        return "*".join(parts) if parts else "1"

    _FACTOR_RE = re.compile(r"^([A-Za-z_]+)\[([-0-9,]+)\](?:\^(\d+))?$")

    def parse_monomial(self, text):
        exp = [0] * len(self.labels)
        text = text.strip()
        if text == "1":
            return tuple(exp)
        for factor in text.split("*"):
            m = self._FACTOR_RE.match(factor.strip())
            if m is None:
                raise ValueError(f"bad monomial factor: {factor!r}")
            prefix, key_text, power = m.groups()
            key = tuple(int(k) for k in key_text.split(","))
            label = (prefix, key[0] if len(key) == 1 else key)
            exp[self.position(label)] += int(power) if power else 1
        return tuple(exp)


# ---------------------------------------------------------------------------
# monomial helpers on exponent tuples


def mono_degree(a):
    return sum(a)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True if x^a divides x^b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(a, b):
    """Exponent of x^a / x^b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_is_squarefree(a):
    return all(x <= 1 for x in a)


def _grevlex_cmp(a, b):
    da, db = sum(a), sum(b)
    if da != db:
        return LESS if da < db else GREATER
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            # larger exponent in the latest differing variable loses
            return GREATER if x < y else LESS
    return EQUAL


def _lex_cmp(a, b):
    for x, y in zip(a, b):
        if x != y:
            return GREATER if x > y else LESS
    return EQUAL


def _grevlex_key(a):
    """Tuple key that sorts ascending in grevlex."""
    return (sum(a), tuple(-x for x in reversed(a)))


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """Total multiplicative order on exponent tuples with 1 minimal."""

    kind = "abstract"

    def cmp(self, a, b):
        raise NotImplementedError

    def sort_key(self, a):
        """Tuple key for one exponent; sorts ascending in this order."""
        raise NotImplementedError

    def key(self):
        """Key function (ascending) usable with sorted/max/min."""
        return self.sort_key

    def describe(self):
        return {"kind": self.kind}

    def __repr__(self):
        return f"{type(self).__name__}()"


class Lex(MonomialOrder):
    kind = "lex"

    def cmp(self, a, b):
        return _lex_cmp(a, b)

    def sort_key(self, a):
        return tuple(a)


class Grevlex(MonomialOrder):
    kind = "grevlex"

    def cmp(self, a, b):
        return _grevlex_cmp(a, b)

    def sort_key(self, a):
        return _grevlex_key(a)


class BlockOrder(MonomialOrder):
    """Weight vector first, then grevlex within consecutive variable blocks.

    With weight 1 on an eliminated block and 0 elsewhere this is the
    standard block elimination order.
    """

    kind = "block-elimination"

    def __init__(self, weights, blocks):
        self.weights = tuple(weights)
        self.blocks = tuple(tuple(b) for b in blocks)

    def cmp(self, a, b):
        ka, kb = self.sort_key(a), self.sort_key(b)
        return EQUAL if ka == kb else (LESS if ka < kb else GREATER)

    def sort_key(self, a):
        weight = sum(w * x for w, x in zip(self.weights, a))
        return (weight,) + tuple(
            _grevlex_key([a[i] for i in block]) for block in self.blocks)

    def describe(self):
        return {"kind": self.kind, "weights": list(self.weights),
                "blocks": [list(b) for b in self.blocks]}


class ImageOrder(MonomialOrder):
    """Compare by grevlex on images under a monomial map, tie-break grevlex.

    `images[i]` is the image exponent tuple of variable i.  Used as the
    contraction order: x-monomials are compared through their y-images
    first, so equal-image monomials (the Segre fibers) fall through to the
    plain grevlex tie-break.
    """

    kind = "weight+tiebreak"

    def __init__(self, images):
        self.images = tuple(tuple(v) for v in images)
        self._ydim = len(self.images[0]) if self.images else 0
        self._cache = {}

    def image(self, a):
        a = tuple(a)
        cached = self._cache.get(a)
        if cached is not None:
            return cached
        img = [0] * self._ydim
        for e, vec in zip(a, self.images):
            if e:
                for j, v in enumerate(vec):
                    if v:
                        img[j] += e * v
        img = tuple(img)
        if len(self._cache) < 1_000_000:
            self._cache[a] = img
        return img

    def cmp(self, a, b):
        c = _grevlex_cmp(self.image(a), self.image(b))
        if c != EQUAL:
            return c
        return _grevlex_cmp(a, b)

    def sort_key(self, a):
        return (_grevlex_key(self.image(a)), _grevlex_key(a))

    def describe(self):
        return {"kind": self.kind, "weights": [list(v) for v in self.images],
                "tiebreak": "grevlex"}


class MarkedOrder(MonomialOrder):
    """Sentinel for bases whose leading terms were designated by hand."""

    kind = "marked"

    def __init__(self, description="marked"):
        self.description = description

    def cmp(self, a, b):
        raise MarkedOrderError("marked order designates leads; it cannot compare")

    def sort_key(self, a):
        raise MarkedOrderError("marked order designates leads; it cannot compare")

    def describe(self):
        return {"kind": self.kind, "description": self.description}


def compare(a, b, order):
    """Three-way comparison of two exponent tuples under `order`."""
    if len(a) != len(b):
        raise DimensionMismatch(f"monomials of dimension {len(a)} vs {len(b)}")
    if isinstance(order, MarkedOrder):
        raise MarkedOrderError("cannot compare under a marked order")
    return order.cmp(tuple(a), tuple(b))


def sort_tuple(t):
    """Weakly increasing rearrangement of a tuple of indices."""
    return tuple(sorted(t))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Exact rational-coefficient polynomial over a fixed variable count.

    Stored as a dict from exponent tuple to nonzero Fraction.  Treat
    instances as immutable.
    """

    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars):
        clean = {}
        for exp, c in terms.items() if isinstance(terms, dict) else terms:
            c = Fraction(c)
            if c == 0:
                continue
            exp = tuple(exp)
            if len(exp) != nvars:
                raise DimensionMismatch("exponent length != variable count")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            acc = clean.get(exp, Fraction(0)) + c
            if acc == 0:
                clean.pop(exp, None)
            else:
                clean[exp] = acc
        self.terms = clean
        self.nvars = nvars

    @classmethod
    def zero(cls, nvars):
        return cls({}, nvars)

    @classmethod
    def monomial(cls, exp, nvars, coeff=1):
        return cls({tuple(exp): Fraction(coeff)}, nvars)

    @classmethod
    def binomial(cls, lead, tail, nvars):
        """x^lead - x^tail (zero when lead == tail)."""
        return cls([(tuple(lead), Fraction(1)), (tuple(tail), Fraction(-1))],
                   nvars)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms \
            and self.nvars == other.nvars

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        res = dict(self.terms)
        for exp, c in other.terms.items():
            acc = res.get(exp, Fraction(0)) + c
            if acc == 0:
                res.pop(exp, None)
            else:
                res[exp] = acc
        out = Polynomial.zero(self.nvars)
        out.terms = res
        return out

    def __neg__(self):
        out = Polynomial.zero(self.nvars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.nvars)
        out = Polynomial.zero(self.nvars)
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def term_mul(self, coeff, exp):
        """Multiply by coeff * x^exp."""
        coeff = Fraction(coeff)
        if coeff == 0:
            return Polynomial.zero(self.nvars)
        out = Polynomial.zero(self.nvars)
        out.terms = {mono_mul(e, exp): coeff * c for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        res = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                acc = res.get(e, Fraction(0)) + c1 * c2
                if acc == 0:
                    res.pop(e, None)
                else:
                    res[e] = acc
        out = Polynomial.zero(self.nvars)
        out.terms = res
        return out

    def is_binomial(self):
        """Two terms with coefficients +1 and -1."""
        if len(self.terms) != 2:
            return False
        return sorted(self.terms.values()) == [Fraction(-1), Fraction(1)]

    def is_homogeneous(self):
        degs = {mono_degree(e) for e in self.terms}
        return len(degs) <= 1

    def degree(self):
        return max((mono_degree(e) for e in self.terms), default=0)

    def leading_exponent(self, order):
        """Largest exponent under `order`; None for the zero polynomial."""
        best = None
        for e in self.terms:
            if best is None or order.cmp(e, best) == GREATER:
                best = e
        return best

    def sorted_terms(self, order):
        """Terms sorted descending under `order`."""
        return sorted(self.terms.items(), key=lambda t: order.key()(t[0]),
                      reverse=True)

    def text(self, variables, order=None):
        if not self.terms:
            return "0"
        if order is None:
            exps = sorted(self.terms, reverse=True)
        else:
            exps = [e for e, _ in self.sorted_terms(order)]
        parts = []
        for e in exps:
            c = self.terms[e]
            mono = variables.format_monomial(e)
            if not parts:
                lead = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{lead}{mono}")
            else:
                sign = " - " if c < 0 else " + "
                mag = abs(c)
                parts.append(f"{sign}{mono if mag == 1 else f'{mag}*{mono}'}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({len(self.terms)} terms, {self.nvars} vars)"
