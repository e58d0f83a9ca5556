"""Exact integer Laurent series in two variables, truncated by total degree.

A series is a finite map from exponents m = (m1, m2) in Z^2 to nonzero
integers, together with a cutoff D: every stored exponent satisfies
delta(m) := m1 + m2 <= D, and two series agree when their terms agree on
the common window delta <= min(D, D').  Negative exponents are allowed,
so these are truncated Laurent series rather than polynomials.

Coefficients are Python ints (arbitrary precision); no division happens
anywhere in the ring operations, which keeps every positivity verdict
exact.
"""

from __future__ import annotations

import json
from math import gcd

Exponent = tuple  # (m1, m2), plain int pair


class CutoffError(ValueError):
    """An exponent beyond the truncation cutoff was requested."""


class NonInvertibleError(ValueError):
    """power() with negative exponent needs a unit-plus-positive-tail."""


class InexactDivisionError(ArithmeticError):
    """exact_divide() was asked for a quotient that does not exist."""


def delta(m):
    """Total degree m1 + m2 of an exponent."""
    return m[0] + m[1]


def term_key(m):
    """Canonical (delta, lex) ordering key used for minima and output."""
    return (m[0] + m[1], m[0], m[1])


def primitive(v):
    """Scale an integer vector to primitive form (gcd 1), keeping direction."""
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return (v[0] // g, v[1] // g)


class TruncatedSeries:
    """Immutable truncated Laurent series."""

    __slots__ = ("terms", "cutoff")

    def __init__(self, terms, cutoff):
        clean = {}
        for m, c in terms.items():
            if c == 0:
                continue
            m = (int(m[0]), int(m[1]))
            if delta(m) > cutoff:
                raise CutoffError(
                    "exponent %s has delta %d beyond cutoff %d"
                    % (m, delta(m), cutoff))
            clean[m] = int(c)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "cutoff", int(cutoff))

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def min_delta(self):
        """Smallest total degree present, or 0 for the zero series."""
        if not self.terms:
            return 0
        return min(delta(m) for m in self.terms)

    def support(self):
        return sorted(self.terms, key=term_key)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        d = min(self.cutoff, other.cutoff)
        a = {m: c for m, c in self.terms.items() if delta(m) <= d}
        b = {m: c for m, c in other.terms.items() if delta(m) <= d}
        return a == b

    def __hash__(self):
        raise TypeError("unhashable (equality is cutoff-relative)")

    def __repr__(self):
        return "TruncatedSeries(%s, cutoff=%d)" % (format_series(self),
                                                   self.cutoff)


def monomial(p, D):
    """The single-term series z^p at cutoff D."""
    if delta(p) > D:
        raise CutoffError("monomial exponent %s beyond cutoff %d" % (p, D))
    return TruncatedSeries({tuple(p): 1}, D)


def zero(D):
    return TruncatedSeries({}, D)


def one(D):
    return monomial((0, 0), D)


def add(f, g):
    D = min(f.cutoff, g.cutoff)
    out = {m: c for m, c in f.terms.items() if delta(m) <= D}
    for m, c in g.terms.items():
        if delta(m) <= D:
            out[m] = out.get(m, 0) + c
    return TruncatedSeries(out, D)


def neg(f):
    return TruncatedSeries({m: -c for m, c in f.terms.items()}, f.cutoff)


def sub(f, g):
    return add(f, neg(g))


def scale(f, a):
    if a == 0:
        return zero(f.cutoff)
    return TruncatedSeries({m: a * c for m, c in f.terms.items()}, f.cutoff)


def mul(f, g):
    D = min(f.cutoff, g.cutoff)
    out = {}
    for (a1, a2), c1 in f.terms.items():
        da = a1 + a2
        for (b1, b2), c2 in g.terms.items():
            if da + b1 + b2 <= D:
                k = (a1 + b1, a2 + b2)
                out[k] = out.get(k, 0) + c1 * c2
    return TruncatedSeries(out, D)


def truncate(f, D):
    """Restrict f to the window delta <= D (D may exceed f.cutoff: no-op)."""
    if D >= f.cutoff:
        return TruncatedSeries(f.terms, f.cutoff)
    return TruncatedSeries({m: c for m, c in f.terms.items()
                            if delta(m) <= D}, D)


def _unit_tail(f):
    if f.terms.get((0, 0)) != 1:
        raise NonInvertibleError("series is not 1 + (positive tail)")
    tail = {m: c for m, c in f.terms.items() if m != (0, 0)}
    if any(delta(m) < 1 for m in tail):
        raise NonInvertibleError("tail has terms of total degree < 1")
    return tail


def inverse(f):
    """Inverse of a unit-plus-positive-tail series via geometric expansion."""
    tail = _unit_tail(f)
    D = f.cutoff
    out = one(D)
    mt = TruncatedSeries({m: -c for m, c in tail.items()}, D)
    powk = one(D)
    for _ in range(max(D, 0) + 1):
        powk = mul(powk, mt)
        if powk.is_zero():
            break
        out = add(out, powk)
    return out


def pow_nonneg(f, e):
    """Plain f**e for e >= 0 by binary exponentiation (no unit needed)."""
    e = int(e)
    if e < 0:
        raise ValueError("pow_nonneg needs e >= 0")
    out = one(f.cutoff)
    sq = f
    while e:
        if e & 1:
            out = mul(out, sq)
        e >>= 1
        if e:
            sq = mul(sq, sq)
    return out


def power(f, e):
    """f**e for integer e on a unit-plus-positive-tail series.

    Negative exponents expand via the geometric series of the tail.
    """
    _unit_tail(f)
    e = int(e)
    if e < 0:
        return pow_nonneg(inverse(f), -e)
    return pow_nonneg(f, e)


def coefficient(f, m):
    """The integer coefficient of z^m; the value is unknowable past cutoff."""
    m = tuple(m)
    if delta(m) > f.cutoff:
        raise CutoffError("coefficient at %s beyond cutoff %d"
                          % (m, f.cutoff))
    return f.terms.get(m, 0)


def is_nonnegative(f):
    return all(c >= 0 for c in f.terms.values())


def exact_divide(f, g):
    """Quotient q with f = q*g in Laurent polynomials, else raise.

    Used by the cluster module to reduce numerator/denominator pairs;
    an inexact division there signals a bug, so failure is an error.
    """
    if g.is_zero():
        raise InexactDivisionError("division by zero series")
    if f.is_zero():
        return zero(f.cutoff)
    D = min(f.cutoff, g.cutoff)
    # bounding box for admissible quotient exponents
    f1 = [m[0] for m in f.terms]
    f2 = [m[1] for m in f.terms]
    g1 = [m[0] for m in g.terms]
    g2 = [m[1] for m in g.terms]
    box = (min(f1) - max(g1), max(f1) - min(g1),
           min(f2) - max(g2), max(f2) - min(g2))
    lg = min(g.terms, key=term_key)
    cg = g.terms[lg]
    rem = dict(f.terms)
    quo = {}
    while rem:
        lr = min(rem, key=term_key)
        q = (lr[0] - lg[0], lr[1] - lg[1])
        c, r = divmod(rem[lr], cg)
        if r != 0 or not (box[0] <= q[0] <= box[1] and
                          box[2] <= q[1] <= box[3]):
            raise InexactDivisionError("leading term %s not divisible" %
                                       (lr,))
        quo[q] = c
        for mg, cg2 in g.terms.items():
            k = (q[0] + mg[0], q[1] + mg[1])
            v = rem.get(k, 0) - c * cg2
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return TruncatedSeries(quo, D)


# -- formatting and JSON --------------------------------------------------

def _fmt_mono(m):
    if m == (0, 0):
        return "1"
    parts = []
    for name, e in (("x", m[0]), ("y", m[1])):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts)


def format_series(f, max_terms=None):
    """Human-readable rendering, terms in (delta, lex) order."""
    if f.is_zero():
        return "0"
    bits = []
    for m in f.support()[:max_terms]:
        c = f.terms[m]
        mono = _fmt_mono(m)
        if mono == "1":
            bits.append(str(c))
        elif c == 1:
            bits.append(mono)
        elif c == -1:
            bits.append("-" + mono)
        else:
            bits.append("%d*%s" % (c, mono))
    s = " + ".join(bits).replace("+ -", "- ")
    if max_terms is not None and len(f.terms) > max_terms:
        s += " + ..."
    return s


def to_json_dict(f):
    return {"cutoff": f.cutoff,
            "terms": [{"m": [m[0], m[1]], "c": str(f.terms[m])}
                      for m in f.support()]}


def to_json(f):
    return json.dumps(to_json_dict(f))


def from_json_dict(d):
    terms = {}
    for t in d["terms"]:
        m1, m2 = t["m"]
        terms[(int(m1), int(m2))] = int(t["c"])
    return TruncatedSeries(terms, int(d["cutoff"]))


def from_json(s):
    return from_json_dict(json.loads(s))
