"""Theta functions via broken lines, transport between chambers, basis
expansion, and the positivity / atomicity verdicts.

A broken line for p ending at a basepoint Q is a piecewise-linear path
decorated with monomials: the unbounded initial segment carries z^p and
comes in from infinity in direction -p (so a segment carrying c*z^m
travels in direction +m), and at a transversal wall crossing the
monomial may be multiplied by any term of f_w^|omega(m0, m)|.  The local
expansion iota_Q(theta_p) is the sum of final monomials over all broken
lines ending at Q.

Everything here is exact: verdicts labelled "positive" certify
non-negativity of every reported coefficient up to the stated cutoff.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import series
from .series import TruncatedSeries, delta, term_key
from .scatter import (OMEGA, Chamber, OnWallError, apply_path,
                      chamber_adjacent, chamber_of, chambers,
                      crossing_apply, path_product)


class NotInSpanError(ValueError):
    """expand() could not make progress (support not in F + P)."""


# --------------------------------------------------------------------------
# broken lines


class BrokenLine:
    """One broken line: initial exponent, endpoint chamber data, the bend
    decisions, and the resulting final monomial."""

    __slots__ = ("initial_exponent", "endpoint", "bends", "final_coeff",
                 "final_exponent")

    def __init__(self, initial_exponent, endpoint, bends, final_coeff,
                 final_exponent):
        self.initial_exponent = initial_exponent
        self.endpoint = endpoint
        self.bends = bends          # [(wall_direction, j, picked_coeff)]
        self.final_coeff = final_coeff
        self.final_exponent = final_exponent

    def __repr__(self):
        return ("BrokenLine(p=%s -> %d*z^%s, bends=%s)"
                % (self.initial_exponent, self.final_coeff,
                   self.final_exponent, self.bends))


def _generic_point(diagram, chamber, bad_dirs):
    """A rational interior point of the chamber not parallel to any of
    the finitely many bad directions (deterministic scan).

    Mixes the low boundary ray with the representative so the point stays
    interior even for sectors wider than a half-plane.
    """
    u = chamber.low_ray
    v = chamber.representative
    if u == chamber.high_ray:  # whole plane (no walls)
        u, v = (3, 1), (1, 2)
    bad = {series.primitive(b) for b in bad_dirs if b != (0, 0)}
    bad |= {(-b[0], -b[1]) for b in bad}
    for k in range(1, 4096):
        for (a, b) in ((2 * k + 1, 2), (2, 2 * k + 1)):
            pt = (a * u[0] + b * v[0], a * u[1] + b * v[1])
            if pt == (0, 0):
                continue
            if series.primitive(pt) in bad:
                continue
            return (Fraction(pt[0], 7), Fraction(pt[1], 7))
    raise RuntimeError("no generic basepoint found")


def _search_lines(diagram, p, point, roots, record=False):
    """Backward search for broken lines ending at `point`.

    roots: candidate final monomials (all m with m - p in the positive
    quadrant and delta(m) <= cutoff).  Returns a dict m -> coefficient
    and, when record is set, a list of BrokenLine objects.
    """
    walls = [w for w in diagram.walls if not w.is_trivial()]
    lines = []
    totals = {}

    def omf(m0, X):
        return m0[0] * X[1] - m0[1] * X[0]

    def search(X, m, coef, bends):
        if m == p:
            totals[root] = totals.get(root, 0) + coef
            if record:
                lines.append(BrokenLine(p, None, list(reversed(bends)),
                                        coef, root))
            return
        dneed = (m[0] - p[0], m[1] - p[1])
        for w in walls:
            m0 = w.direction
            wom = OMEGA(m0, m)
            if wom == 0:
                continue
            t = Fraction(omf(m0, X), wom)
            if t <= 0:
                continue
            B = (X[0] - t * m[0], X[1] - t * m[1])
            if B == (0, 0):
                raise RuntimeError("degenerate search through origin")
            if w.kind == "ray":
                s = (Fraction(B[0], m0[0]) if m0[0]
                     else Fraction(B[1], m0[1]))
                if s <= 0:
                    continue
            e = abs(wom)
            jmax = 0
            d0 = delta(m0)
            lim = min(dneed[0] // m0[0] if m0[0] else 10 ** 9,
                      dneed[1] // m0[1] if m0[1] else 10 ** 9)
            if lim <= 0:
                continue
            pw = w._pow(e, lim)
            for j in range(1, lim + 1):
                kj = pw[j]
                if kj == 0:
                    continue
                mp = (m[0] - j * m0[0], m[1] - j * m0[1])
                if mp[0] - p[0] < 0 or mp[1] - p[1] < 0:
                    break
                search(B, mp, coef * kj, bends + [(m0, j, kj)])

    for root in roots:
        search(point, root, 1, [])
    return totals, lines


def _candidate_roots(p, cutoff):
    out = []
    top = cutoff - delta(p)
    for d in range(0, max(top, 0) + 1):
        for a in range(0, d + 1):
            m = (p[0] + a, p[1] + d - a)
            if delta(m) <= cutoff:
                out.append(m)
    return out


def broken_lines(diagram, p, chamber):
    """All broken lines with initial exponent p ending in the chamber,
    with final monomials surviving the cutoff."""
    p = (int(p[0]), int(p[1]))
    if p == (0, 0):
        raise ValueError("broken lines need p != 0")
    if not isinstance(chamber, Chamber):
        chamber = chamber_of(diagram, chamber)
    diagram = diagram.for_series(
        series.TruncatedSeries({p: 1}, max(diagram.cutoff, delta(p))))
    roots = _candidate_roots(p, diagram.cutoff)
    bad = list(roots) + diagram.support_rays()
    point = _generic_point(diagram, chamber, bad)
    totals, lines = _search_lines(diagram, p, point, roots, record=True)
    for ln in lines:
        ln.endpoint = chamber.representative
    lines.sort(key=lambda ln: term_key(ln.final_exponent))
    return lines


def _theta_by_enumeration(diagram, p, chamber):
    roots = _candidate_roots(p, diagram.cutoff)
    bad = list(roots) + diagram.support_rays()
    point = _generic_point(diagram, chamber, bad)
    totals, _ = _search_lines(diagram, p, point, roots)
    return TruncatedSeries(totals, diagram.cutoff)


def _theta_all_chambers(diagram, p):
    """iota_Q(theta_p) for every chamber, as a list indexed like chambers().

    Enumerates broken lines once, in the chamber adjacent to the ray
    through -p (where the count is smallest), then propagates to every
    other chamber by single wall crossings.  Enumeration and transport
    agree by consistency; the test suite checks this on many samples.
    """
    key = ("theta", p, diagram.cutoff, diagram.depth)
    got = diagram._theta_cache.get(key)
    if got is not None:
        return got
    chs = chambers(diagram)
    anchor = chamber_adjacent(diagram, (-p[0], -p[1]), chs)
    vals = [None] * len(chs)
    vals[anchor.index] = _theta_by_enumeration(diagram, p, anchor)
    n = len(chs)
    for step in range(1, n):
        i = (anchor.index + step) % n
        prev = vals[(anchor.index + step - 1) % n]
        ray = chs[i].low_ray
        w = diagram.wall_at(ray) or diagram.wall_at((-ray[0], -ray[1]))
        neg = w.direction != ray
        sign = -1 if neg else +1  # CCW crossing, departs omega<0 on pos half
        vals[i] = crossing_apply(w, sign, prev)
    diagram._theta_cache[key] = vals
    return vals


def theta_local(diagram, p, chamber):
    """The local expansion iota_Q(theta_p) at the chamber of Q."""
    p = (int(p[0]), int(p[1]))
    if p == (0, 0):
        return series.one(diagram.cutoff)
    if not isinstance(chamber, Chamber):
        chamber = chamber_of(diagram, chamber)
    deep = diagram.for_series(
        TruncatedSeries({p: 1}, max(diagram.cutoff, delta(p))))
    if deep is not diagram:
        # deepening can split chambers with high-order walls; those do not
        # change any coefficient at the report cutoff, so relocate by the
        # representative (nudging off a freshly added ray if needed)
        rep = chamber.representative
        try:
            chamber = chamber_of(deep, rep)
        except OnWallError:
            chamber = chamber_adjacent(deep, rep)
    vals = _theta_all_chambers(deep, p)
    out = vals[chamber.index]
    return series.truncate(out, diagram.cutoff)


# --------------------------------------------------------------------------
# theta expansions


class ThetaExpansion:
    """A finite integer combination sum_m a_m * theta_m."""

    __slots__ = ("coeffs", "cutoff", "base")

    def __init__(self, coeffs, cutoff, base=None):
        clean = {}
        for m, a in coeffs.items():
            if a:
                clean[(int(m[0]), int(m[1]))] = int(a)
        self.coeffs = clean
        self.cutoff = int(cutoff)
        self.base = base

    def support(self):
        return sorted(self.coeffs, key=term_key)

    def __eq__(self, other):
        if not isinstance(other, ThetaExpansion):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        bits = ["%d*th%s" % (a, m) for m, a in
                sorted(self.coeffs.items(), key=lambda t: term_key(t[0]))]
        return "ThetaExpansion(%s)" % " + ".join(bits or ["0"])

    def to_json_dict(self):
        return {"cutoff": self.cutoff,
                "coeffs": [{"m": [m[0], m[1]], "a": str(self.coeffs[m])}
                           for m in self.support()]}

    def to_json(self):
        return json.dumps(self.to_json_dict())


def expansion_from_json(data, cutoff=None):
    if isinstance(data, str):
        data = json.loads(data)
    co = {}
    for t in data["coeffs"]:
        m1, m2 = t["m"]
        co[(int(m1), int(m2))] = int(t["a"])
    return ThetaExpansion(co, int(data.get("cutoff", cutoff or 8)))


def localize(diagram, combo, chamber):
    """iota_Q extended linearly over a theta expansion."""
    out = series.zero(min(diagram.cutoff, combo.cutoff))
    for m in combo.support():
        th = theta_local(diagram, m, chamber)
        out = series.add(out, series.scale(th, combo.coeffs[m]))
    return out


def transport(diagram, f, src, dst):
    """Move a local expansion between chambers along the shorter arc."""
    if isinstance(src, Chamber):
        src = src.representative
    if isinstance(dst, Chamber):
        dst = dst.representative
    chs = chambers(diagram)
    ci = chamber_of(diagram, src, chs).index
    cj = chamber_of(diagram, dst, chs).index
    if ci == cj:
        return f
    n = len(chs)
    ccw_steps = (cj - ci) % n
    orientation = "ccw" if ccw_steps <= n - ccw_steps else "cw"
    pa = path_product(diagram, src, dst, orientation)
    return apply_path(pa, f, diagram=diagram)


def expand(diagram, f, base_chamber):
    """Theta-basis expansion of a local expression at base_chamber.

    Processes delta-minimal exponents first; each coefficient is read off
    near the matching ray (the executable form of "a_p equals c_p for Q
    sufficiently close"), then the localized theta is subtracted.
    """
    if not isinstance(base_chamber, Chamber):
        base_chamber = chamber_of(diagram, base_chamber)
    chs = chambers(diagram)
    remainder = f
    coeffs = {}
    last_key = None
    max_rounds = (f.cutoff + 2 - min(0, f.min_delta())) ** 2 + \
        len(f.terms) + 8
    for _ in range(max_rounds):
        if remainder.is_zero():
            return ThetaExpansion(coeffs, f.cutoff, base=base_chamber)
        p = min(remainder.terms, key=term_key)
        if last_key is not None and term_key(p) <= last_key:
            raise NotInSpanError("no progress at exponent %s" % (p,))
        last_key = term_key(p)
        if p == (0, 0):
            # theta_0 = 1; the constant coefficient is chamber-independent
            # once all smaller-degree basis points are cleared
            a = series.coefficient(remainder, p)
        else:
            near = chamber_adjacent(diagram, (-p[0], -p[1]), chs)
            moved = transport(diagram, remainder,
                              base_chamber.representative,
                              near.representative)
            a = series.coefficient(moved, p)
        if a == 0:
            raise NotInSpanError("vanishing basis coefficient at %s" % (p,))
        coeffs[p] = a
        th = theta_local(diagram, p, base_chamber)
        remainder = series.sub(remainder,
                               series.scale(series.truncate(
                                   th, remainder.cutoff), a))
    raise NotInSpanError("expansion did not terminate")


# --------------------------------------------------------------------------
# verdicts


class PositivityVerdict:
    """Outcome of a universal-positivity check over the scattering atlas."""

    POSITIVE = "positive"
    NEGATIVE = "negative-witness"

    def __init__(self, verdict, cutoff, witness=None, atlas="scattering"):
        self.verdict = verdict
        self.cutoff = cutoff
        self.witness = witness  # (chamber_rep, exponent, coefficient)
        self.atlas = atlas

    @property
    def is_positive(self):
        return self.verdict == self.POSITIVE

    def to_json_dict(self):
        out = {"verdict": self.verdict, "cutoff": self.cutoff,
               "atlas": self.atlas}
        if self.witness is not None:
            q, m, cval = self.witness
            out["witness"] = {"chamber": [q[0], q[1]],
                              "exponent": [m[0], m[1]],
                              "coefficient": str(cval)}
        return out

    def __repr__(self):
        return "PositivityVerdict(%s)" % self.verdict


class AtomicityVerdict:
    ATOMIC = "atomic"
    DECOMPOSABLE = "decomposable"
    NOT_POSITIVE = "not-universally-positive"

    def __init__(self, verdict, cutoff, certificate=None, witness=None):
        self.verdict = verdict
        self.cutoff = cutoff
        self.certificate = certificate  # (ThetaExpansion, ThetaExpansion)
        self.witness = witness

    def to_json_dict(self):
        out = {"verdict": self.verdict, "cutoff": self.cutoff}
        if self.certificate is not None:
            out["certificate"] = [c.to_json_dict() for c in self.certificate]
        if self.witness is not None:
            q, m, cval = self.witness
            out["witness"] = {"chamber": [q[0], q[1]],
                              "exponent": [m[0], m[1]],
                              "coefficient": str(cval)}
        return out

    def __repr__(self):
        return "AtomicityVerdict(%s)" % self.verdict


def _extra_badlands_dirs(diagram):
    """For wild diagrams, a few primitive directions deep in the region
    where walls accumulate, to harden positivity sampling."""
    if diagram.b * diagram.c < 5:
        return []
    rays = [r for r in diagram.support_rays()
            if r[0] > 0 and r[1] > 0]
    if len(rays) < 2:
        return []
    rays.sort(key=lambda r: Fraction(r[1], r[0]))
    mid = len(rays) // 2
    lo = rays[max(0, mid - 1)]
    hi = rays[min(len(rays) - 1, mid + 1)]
    out = []
    u, v = lo, hi
    for _ in range(4):
        w = series.primitive((u[0] + v[0], u[1] + v[1]))
        out.append(w)
        u = w
    return out


def check_universal_positivity(diagram, combo):
    """Semi-decision: localize at every chamber representative at the
    cutoff (plus ray-adjacent chambers for each support point, plus extra
    badlands directions for bc >= 5); report the first negative
    coefficient found, scanning basis points first.
    """
    chs = chambers(diagram)
    # pass 1: basis coefficients via the near-ray recipe
    for p in combo.support():
        a = combo.coeffs[p]
        if a < 0:
            near = chamber_adjacent(diagram, (-p[0], -p[1]), chs)
            loc = localize(diagram, combo, near)
            cval = series.coefficient(loc, p)
            return PositivityVerdict(PositivityVerdict.NEGATIVE,
                                     diagram.cutoff,
                                     witness=(near.representative, p, cval))
    # pass 2: every chamber at the cutoff, plus hardening samples
    sample = list(chs)
    for q in _extra_badlands_dirs(diagram):
        try:
            ch = chamber_of(diagram, q, chs)
        except OnWallError:
            continue
        if all(c.index != ch.index for c in sample):
            sample.append(ch)
    for ch in sample:
        loc = localize(diagram, combo, ch)
        negs = [m for m, cval in loc.terms.items() if cval < 0]
        if negs:
            m = min(negs, key=term_key)
            return PositivityVerdict(PositivityVerdict.NEGATIVE,
                                     diagram.cutoff,
                                     witness=(ch.representative, m,
                                              loc.terms[m]))
    return PositivityVerdict(PositivityVerdict.POSITIVE, diagram.cutoff)


def check_atomicity(diagram, combo):
    """Theta functions are exactly the atomic universally positive
    elements; everything else positive decomposes by splitting off a
    single theta."""
    if not combo.coeffs:
        raise ValueError("atomicity is undefined for the zero element")
    pos = check_universal_positivity(diagram, combo)
    if not pos.is_positive:
        return AtomicityVerdict(AtomicityVerdict.NOT_POSITIVE,
                                diagram.cutoff, witness=pos.witness)
    items = combo.support()
    if len(items) == 1 and combo.coeffs[items[0]] == 1:
        return AtomicityVerdict(AtomicityVerdict.ATOMIC, diagram.cutoff)
    p = items[0]
    first = ThetaExpansion({p: 1}, combo.cutoff)
    rest = dict(combo.coeffs)
    rest[p] -= 1
    second = ThetaExpansion(rest, combo.cutoff)
    return AtomicityVerdict(AtomicityVerdict.DECOMPOSABLE, diagram.cutoff,
                            certificate=(first, second))


def structure_constants(diagram, p, q, base_chamber=None):
    """Expansion of theta_p * theta_q in the theta basis."""
    if base_chamber is None:
        base_chamber = chamber_adjacent(diagram, (-1, -1))
    fp = theta_local(diagram, p, base_chamber)
    fq = theta_local(diagram, q, base_chamber)
    return expand(diagram, series.mul(fp, fq), base_chamber)


# --------------------------------------------------------------------------
# transition positivity


def _cross_positive_parts(wall, sign, g):
    """Crossing image of a non-negative series g, written as num / f^E.

    E = max(0, -min exponent occurring), so every monomial of g is
    multiplied by a non-negative power of the wall function and num stays
    manifestly non-negative whenever g and the wall are.
    """
    m0 = wall.direction
    dm0 = delta(m0)
    exps = [sign * OMEGA(m0, m) for m in g.terms] or [0]
    E = max(0, -min(exps))
    out = {}
    for m, cval in g.terms.items():
        e = sign * OMEGA(m0, m) + E
        orders = max(0, (g.cutoff - delta(m)) // dm0)
        pw = wall._pow(e, orders)
        for j, u in enumerate(pw):
            if u:
                k2 = (m[0] + j * m0[0], m[1] + j * m0[1])
                if delta(k2) <= g.cutoff:
                    out[k2] = out.get(k2, 0) + u * cval
    return TruncatedSeries(out, g.cutoff), E


def check_transition_positivity(diagram, src, dst, exponents):
    """For each z^m, factor the transported monomial as
    z^m -> (non-negative numerator) / (non-negative denominator) and
    verify the factorization; this witnesses the transition map being a
    formal positive rational function."""
    if isinstance(src, Chamber):
        src = src.representative
    if isinstance(dst, Chamber):
        dst = dst.representative
    cutoff = diagram.cutoff
    chs = chambers(diagram)
    ci = chamber_of(diagram, src, chs).index
    cj = chamber_of(diagram, dst, chs).index
    n = len(chs)
    ccw_steps = (cj - ci) % n
    orientation = "ccw" if ccw_steps <= n - ccw_steps else "cw"
    results = []
    ok = True
    for m in exponents:
        m = (int(m[0]), int(m[1]))
        ext = cutoff - min(0, delta(m))
        deep = diagram.for_series(series.monomial(m, ext))
        pa = path_product(deep, src, dst, orientation)
        # invariant: image(z^m) = num / den, both non-negative
        num = series.monomial(m, ext)
        den = series.one(ext)
        for w, s in pa.crossings:
            top, e_top = _cross_positive_parts(w, s, num)
            bot, e_bot = _cross_positive_parts(w, s, den)
            fw = w.function(ext)
            num = series.mul(top, series.pow_nonneg(fw, e_bot))
            den = series.mul(bot, series.pow_nonneg(fw, e_top))
        transported = apply_path(pa, series.monomial(m, ext))
        check = series.sub(series.truncate(num, cutoff),
                           series.truncate(series.mul(transported, den),
                                           cutoff))
        entry = {"exponent": list(m),
                 "numerator_nonnegative": series.is_nonnegative(num),
                 "denominator_nonnegative": series.is_nonnegative(den),
                 "identity_holds": check.is_zero()}
        ok = ok and all(entry[k2] for k2 in
                        ("numerator_nonnegative",
                         "denominator_nonnegative", "identity_holds"))
        results.append(entry)
    from .scatter import CheckReport
    return CheckReport("transition-positivity", ok, cutoff,
                       details={"pairs": results,
                                "from": list(src), "to": list(dst)})
