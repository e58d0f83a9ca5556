"""Rank-2 cluster algebra: seeds, mutation, g-vectors, the cluster
complex, and cross-checks against the theta functions.

The exchange relations are x1 * x1' = (1 + x2)^c and x2 * x2' =
(1 + x1)^b, the rank-2 relations whose wall data is exactly the
scattering module's initial lines (1+x)^c on the x-axis and (1+y)^b on
the y-axis; with this pairing every cluster variable is the theta
function of its g-vector (checked by check_cluster_theta_agreement).
For bc <= 3 the exchange graph is finite with the classical 5/6/8
cluster-variable counts.

Cluster variables are kept as exact Laurent polynomials in the initial
pair (x, y); each also carries its numerator/denominator split with a
monomial denominator, so positivity witnesses stay constructive.
"""

from __future__ import annotations

from . import series, theta
from .series import TruncatedSeries, delta, term_key
from .scatter import CheckReport, chamber_of, chambers

# cluster variables are honest Laurent polynomials; this cutoff is simply
# "large enough to never truncate" for the depths we walk
BIG = 10 ** 6


class ClusterError(ValueError):
    pass


def _laurent_key(L):
    return tuple(sorted((m, c) for m, c in L.terms.items()))


def _gvector(L):
    """The unique exponent g with support(L) inside g + (first quadrant)."""
    g = min(L.terms, key=term_key)
    for m in L.terms:
        if m[0] < g[0] or m[1] < g[1]:
            raise ClusterError("no cone-minimal exponent in %s" %
                               (sorted(L.terms),))
    return g


def _split(L):
    """Write L = num / den with den a monomial and num not divisible by
    x or y; both have non-negative exponents."""
    a = max(0, -min(m[0] for m in L.terms))
    b = max(0, -min(m[1] for m in L.terms))
    num = TruncatedSeries({(m[0] + a, m[1] + b): c
                           for m, c in L.terms.items()}, BIG)
    den = series.monomial((a, b), BIG)
    return num, den


class Seed:
    """A seed: exchange parameters, two variables, their g-vectors, and
    the mutation word that produced it."""

    __slots__ = ("b", "c", "laurents", "vars", "gvecs", "word")

    def __init__(self, b, c, laurents, word=""):
        self.b = int(b)
        self.c = int(c)
        self.laurents = tuple(laurents)
        self.vars = tuple(_split(L) for L in laurents)
        self.gvecs = tuple(_gvector(L) for L in laurents)
        self.word = word

    def __repr__(self):
        return "Seed(b=%d, c=%d, word=%r, g=%s)" % (self.b, self.c,
                                                    self.word, self.gvecs)


def initial_seed(b, c):
    if b < 0 or c < 0:
        raise ClusterError("exchange parameters must be >= 0")
    x = series.monomial((1, 0), BIG)
    y = series.monomial((0, 1), BIG)
    return Seed(b, c, (x, y))


def mutate(seed, direction):
    """Replace the indicated variable by its exchange-relation partner:
    x1' = (1 + x2)^c / x1 or x2' = (1 + x1)^b / x2."""
    if direction not in (1, 2):
        raise ClusterError("mutation direction must be 1 or 2")
    v1, v2 = seed.laurents
    if direction == 1:
        numer = series.pow_nonneg(series.add(series.one(BIG), v2), seed.c)
        new = series.exact_divide(numer, v1)
        laurents = (new, v2)
    else:
        numer = series.pow_nonneg(series.add(series.one(BIG), v1), seed.b)
        new = series.exact_divide(numer, v2)
        laurents = (v1, new)
    return Seed(seed.b, seed.c, laurents, seed.word + str(direction))


def _walk(b, c, depth):
    """Seeds along the two alternating mutation walks of the given length."""
    out = [initial_seed(b, c)]
    for first in (1, 2):
        s = out[0]
        d = first
        for _ in range(depth):
            s = mutate(s, d)
            out.append(s)
            d = 3 - d
    return out


def _is_unit(L):
    return len(L.terms) == 1


def cluster_variables(b, c, depth):
    """Distinct cluster variables reachable within depth alternating
    mutation steps, as (laurent, g-vector) pairs.

    Degenerate directions (exchange exponent 0) produce constant-times-
    monomial "inverse" variables; those are excluded, as are the
    duplicates finite type wraps around to.
    """
    seen = {}
    for s in _walk(b, c, depth):
        for L in s.laurents:
            key = _laurent_key(L)
            if key not in seen:
                if _is_unit(L) and L.terms != {(1, 0): 1} \
                        and L.terms != {(0, 1): 1}:
                    continue
                seen[key] = (L, _gvector(L))
    return list(seen.values())


class ClusterChamber:
    """The cone spanned by a seed's two g-vectors (the convex sector,
    oriented so travelling g_low -> g_high is counterclockwise)."""

    __slots__ = ("g_low", "g_high", "seed_word")

    def __init__(self, g1, g2, seed_word=""):
        turn = g1[0] * g2[1] - g1[1] * g2[0]
        if turn == 0:
            raise ClusterError("degenerate g-vector cone %s, %s" % (g1, g2))
        if turn > 0:
            self.g_low, self.g_high = g1, g2
        else:
            self.g_low, self.g_high = g2, g1
        self.seed_word = seed_word

    def key(self):
        return (self.g_low, self.g_high)

    def __repr__(self):
        return "ClusterChamber(%s, %s)" % (self.g_low, self.g_high)


def cluster_chambers(b, c, depth):
    """g-vector cones of all seeds reached within depth."""
    out = {}
    for s in _walk(b, c, depth):
        ch = ClusterChamber(s.gvecs[0], s.gvecs[1], s.word)
        out.setdefault(ch.key(), ch)
    return list(out.values())


def check_laurent_positivity(b, c, depth):
    """All variables within depth are Laurent polynomials in the initial
    pair with non-negative integer coefficients."""
    for s in _walk(b, c, depth):
        for L in s.laurents:
            for m, coef in L.terms.items():
                if coef < 0:
                    return CheckReport(
                        "laurent-positivity", False, depth,
                        witness={"seed": s.word, "exponent": list(m),
                                 "coefficient": str(coef)})
    return CheckReport("laurent-positivity", True, depth)


def initial_chamber(diagram, chamber_list=None):
    """The scattering chamber acting as the initial cluster chart: the one
    containing the direction (-1,-1), where both initial theta functions
    localize to the bare coordinates."""
    return chamber_of(diagram, (-1, -1), chamber_list)


def check_cluster_theta_agreement(b, c, k, depth=12, diagram=None):
    """Every reached cluster variable equals the theta function of its
    g-vector, localized at the initial chamber; matching scattering
    chambers are flagged is_cluster in the returned chamber list."""
    from .scatter import complete, initial_diagram
    if diagram is None:
        diagram = complete(initial_diagram(b, c, k))
    chs = chambers(diagram)
    q0 = initial_chamber(diagram, chs)
    matches = []
    failed = False
    for L, g in cluster_variables(b, c, depth):
        th = theta.theta_local(diagram, g, q0)
        agree = th == series.truncate(L, k)
        matches.append({"gvec": list(g), "agrees": agree,
                        "variable": series.to_json_dict(
                            series.truncate(L, k))["terms"]})
        failed = failed or not agree
    # mark scattering chambers opposite the g-vector cones (point
    # reflection preserves the counterclockwise boundary order)
    marked = []
    for cc in cluster_chambers(b, c, depth):
        lo = (-cc.g_low[0], -cc.g_low[1])
        hi = (-cc.g_high[0], -cc.g_high[1])
        for ch in chs:
            if ch.low_ray == lo and ch.high_ray == hi:
                ch.is_cluster = True
                marked.append(ch.index)
    report = CheckReport("cluster-theta-agreement", not failed, k,
                         details={"matches": matches,
                                  "cluster_chambers": sorted(marked)})
    report.chambers = chs
    return report


def cluster_atlas_positivity(diagram, combo, depth=12):
    """Positivity of a theta combination sampled over cluster chambers
    only.  Exploratory: the verdict is labelled with the atlas and depth
    and asserts nothing beyond the sampled charts."""
    chs = check_cluster_theta_agreement(diagram.b, diagram.c,
                                        diagram.cutoff, depth,
                                        diagram=diagram).chambers
    label = "cluster (depth-limited, depth=%d)" % depth
    for ch in chs:
        if not ch.is_cluster:
            continue
        loc = theta.localize(diagram, combo, ch)
        negs = [m for m, cval in loc.terms.items() if cval < 0]
        if negs:
            m = min(negs, key=term_key)
            return theta.PositivityVerdict(
                theta.PositivityVerdict.NEGATIVE, diagram.cutoff,
                witness=(ch.representative, m, loc.terms[m]), atlas=label)
    return theta.PositivityVerdict(theta.PositivityVerdict.POSITIVE,
                                   diagram.cutoff, atlas=label)
