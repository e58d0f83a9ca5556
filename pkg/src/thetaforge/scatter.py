"""Rank-2 scattering diagrams: initial data, order-by-order completion,
wall crossings and path-ordered products.

Geometry lives in the plane R^2.  A wall is a full line R*m0 (the two
initial walls) or a ray R>=0*m0 (everything completion adds), with m0 a
primitive direction in the first quadrant and an attached function

    f = 1 + sum_{j>=1} c_j z^(j*m0).

Crossing a wall transforms z^m into z^m * f^(sign*omega(m0, m)) with
omega((a,b),(c,d)) = a*d - b*c.  The sign convention, fixed once and for
all by the pentagon calibration (completing the (1,1) diagram must add
the single ray through (1,1) with function 1 + x*y):

    a path crossing a wall while departing from the side where
    omega(m0, .) < 0 uses sign +1; departing from omega > 0 uses -1.

Path-ordered products compose crossings in traversal order (the first
wall crossed acts first).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from . import series
from .series import TruncatedSeries, delta, primitive

OMEGA = lambda m0, m: m0[0] * m[1] - m0[1] * m[0]  # noqa: E731


class DiagramError(ValueError):
    pass


class OnWallError(ValueError):
    """A basepoint sat on the support of the diagram."""


class ConsistencyBug(RuntimeError):
    """Completion produced a deviation not cancellable by ray walls."""


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# --------------------------------------------------------------------------
# walls


class Wall:
    """A single wall: support kind, primitive direction, function coeffs.

    coeffs[j-1] is the coefficient of z^(j*m0); the list is exact up to
    z^(exact_to * m0) in total degree terms, i.e. the function is known
    exactly for total degree <= exact_to.  Polynomial walls (the initial
    lines) are exact at every order and carry exact_to = None.
    """

    __slots__ = ("kind", "direction", "coeffs", "exact_to", "_pow_cache")

    def __init__(self, kind, direction, coeffs, exact_to=None):
        if kind not in ("line", "ray"):
            raise DiagramError("bad wall kind %r" % (kind,))
        direction = (int(direction[0]), int(direction[1]))
        if direction == (0, 0) or direction[0] < 0 or direction[1] < 0:
            raise DiagramError("wall direction must be in the first "
                               "quadrant and nonzero: %s" % (direction,))
        if primitive(direction) != direction:
            raise DiagramError("wall direction must be primitive: %s"
                               % (direction,))
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.kind = kind
        self.direction = direction
        self.coeffs = coeffs
        self.exact_to = exact_to
        self._pow_cache = {}

    def is_trivial(self):
        return not self.coeffs

    def known_orders(self):
        """Number of t-coefficients (t = z^m0) that are exact."""
        if self.exact_to is None:
            return None
        return self.exact_to // delta(self.direction)

    def function(self, cutoff):
        """The wall function as a TruncatedSeries at the given cutoff."""
        a, b = self.direction
        terms = {(0, 0): 1}
        for j, c in enumerate(self.coeffs, start=1):
            if j * (a + b) <= cutoff and c:
                terms[(j * a, j * b)] = c
        return TruncatedSeries(terms, cutoff)

    def _pow(self, e, orders):
        """Coefficient list [u_0..u_orders] of f^e in t = z^m0.

        Exactness relative to the wall's knowledge is policed by the
        caller; arithmetic here is always exact for the requested window.
        """
        got = self._pow_cache.get(e)
        if got is None or len(got) <= orders:
            n = max(orders, len(self.coeffs))
            f = ([1] + self.coeffs + [0] * n)[:n + 1]

            def umul(p, q):
                r = [0] * (n + 1)
                for i, pi in enumerate(p):
                    if pi:
                        for j2, qj in enumerate(q):
                            if i + j2 <= n and qj:
                                r[i + j2] += pi * qj
                    elif i > n:
                        break
                return r

            base = f
            if e < 0:
                inv = [1] + [0] * n
                for k in range(1, n + 1):
                    s = 0
                    for j2 in range(1, min(k, len(self.coeffs)) + 1):
                        s += self.coeffs[j2 - 1] * inv[k - j2]
                    inv[k] = -s
                base = inv
            out = [1] + [0] * n
            ee = abs(e)
            while ee:
                if ee & 1:
                    out = umul(out, base)
                ee >>= 1
                if ee:
                    base = umul(base, base)
            self._pow_cache[e] = out
            got = out
        return got[:orders + 1]

    def to_json_dict(self):
        return {"kind": self.kind,
                "dir": [self.direction[0], self.direction[1]],
                "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        return "Wall(%s, %s, f=%s)" % (
            self.kind, self.direction,
            series.format_series(self.function(
                delta(self.direction) * max(1, len(self.coeffs))), 4))


def crossing_apply(wall, sign, f):
    """Apply z^m -> z^m * f_w^(sign*omega(m0,m)) term by term.

    Each monomial's factor is expanded to total degree cutoff - delta(m),
    so every reported coefficient of the result is exact provided the
    wall function is known that far (checked).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m0 = wall.direction
    dm0 = delta(m0)
    out = {}
    D = f.cutoff
    for m, c in f.terms.items():
        e = sign * OMEGA(m0, m)
        if e == 0:
            out[m] = out.get(m, 0) + c
            continue
        budget = D - delta(m)
        orders = max(0, budget // dm0)
        if wall.exact_to is not None and orders > wall.known_orders():
            raise DiagramError(
                "wall %s known to %d orders, need %d (deepen the diagram)"
                % (wall.direction, wall.known_orders(), orders))
        pw = wall._pow(e, orders)
        for j, u in enumerate(pw):
            if u:
                k = (m[0] + j * m0[0], m[1] + j * m0[1])
                if delta(k) <= D:
                    out[k] = out.get(k, 0) + c * u
    return TruncatedSeries(out, D)


# --------------------------------------------------------------------------
# angular bookkeeping for drawn rays (wall halves)


def _ray_angle_key(v):
    """Exact CCW ordering key for a nonzero integer vector, angle in [0,2pi).

    Rotates the vector back into the quadrant 0 <= angle < 90 and uses
    the slope there, so comparisons are exact rational arithmetic.
    """
    x, y = v
    if x == 0 and y == 0:
        raise ValueError("zero vector has no angle")
    quad = 0
    while not (x > 0 and y >= 0):
        x, y = y, -x          # rotate 90 degrees clockwise
        quad += 1
    return (quad, Fraction(y, x))


def _between_ccw(a, key_lo, key_hi):
    """Is angle-key a strictly inside the CCW arc (key_lo, key_hi)?"""
    if key_lo < key_hi:
        return key_lo < a < key_hi
    return a > key_lo or a < key_hi


class ScatteringDiagram:
    """b, c exchange parameters, report cutoff, and the wall list.

    Walls are stored exactly up to total degree `depth` >= cutoff; theta
    and transport computations on series with negative total degrees
    deepen the diagram on demand (completion is canonical order by
    order, so deepening never changes low-order data).
    """

    def __init__(self, b, c, cutoff, walls, completed=False, depth=None):
        if b < 0 or c < 0:
            raise DiagramError("exchange parameters must be >= 0")
        if cutoff < 1:
            raise DiagramError("cutoff must be >= 1")
        self.b = int(b)
        self.c = int(c)
        self.cutoff = int(cutoff)
        self.walls = list(walls)
        self.completed = completed
        self.depth = cutoff if depth is None else depth
        self._deeper = {}
        self._theta_cache = {}

    # -- structure ---------------------------------------------------------

    def wall_at(self, m0):
        for w in self.walls:
            if w.direction == tuple(m0):
                return w
        return None

    def drawn_rays(self, include_trivial=False):
        """All wall half-lines as (ray_vector, wall, is_negative_half),
        sorted CCW from angle 0."""
        out = []
        for w in self.walls:
            if w.is_trivial() and not include_trivial:
                continue
            out.append((w.direction, w, False))
            if w.kind == "line":
                out.append(((-w.direction[0], -w.direction[1]), w, True))
        out.sort(key=lambda r: _ray_angle_key(r[0]))
        return out

    def support_rays(self):
        return [r for r, w, neg in self.drawn_rays()]

    def on_support(self, q):
        """Does direction q lie on a nontrivial wall ray?"""
        for r, w, neg in self.drawn_rays():
            if OMEGA(r, q) == 0 and r[0] * q[0] + r[1] * q[1] > 0:
                return True
        return False

    # -- deepening ----------------------------------------------------------

    def at_depth(self, depth):
        """A diagram with identical low-order data, walls exact to depth."""
        if depth <= self.depth:
            return self
        got = self._deeper.get(depth)
        if got is None:
            base = initial_diagram(self.b, self.c, depth)
            got = complete(base) if self.completed else base
            got = ScatteringDiagram(self.b, self.c, self.cutoff, got.walls,
                                    completed=self.completed, depth=depth)
            self._deeper[depth] = got
        return got

    def for_series(self, f):
        """Deepen so that crossings act exactly on f at its own cutoff."""
        need = f.cutoff - min(0, f.min_delta())
        return self.at_depth(max(self.depth, need))

    # -- io ------------------------------------------------------------------

    def to_json_dict(self):
        return {"b": self.b, "c": self.c, "cutoff": self.cutoff,
                "completed": self.completed,
                "walls": [w.to_json_dict() for w in self.walls]}

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def __repr__(self):
        return ("ScatteringDiagram(b=%d, c=%d, cutoff=%d, %d walls)"
                % (self.b, self.c, self.cutoff, len(self.walls)))


def diagram_from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    try:
        b, c, cutoff = int(data["b"]), int(data["c"]), int(data["cutoff"])
        walls = []
        for wd in data["walls"]:
            walls.append(Wall(wd["kind"], tuple(wd["dir"]),
                              [int(x) for x in wd["coeffs"]],
                              exact_to=cutoff))
        completed = bool(data.get("completed", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError("malformed diagram JSON: %s" % exc) from exc
    d = ScatteringDiagram(b, c, cutoff, walls, completed=completed)
    # initial lines are polynomial, hence exact at every order
    for w in d.walls:
        if w.kind == "line":
            w.exact_to = None
    return d


# --------------------------------------------------------------------------
# initial diagrams and completion


def initial_diagram(b, c, k):
    """Two full lines: the x-axis with (1+x)^c and the y-axis with (1+y)^b."""
    if b < 0 or c < 0:
        raise DiagramError("exchange parameters must be >= 0")
    if k < 1:
        raise DiagramError("cutoff must be >= 1")
    wx = Wall("line", (1, 0), [_binom(c, j) for j in range(1, c + 1)])
    wy = Wall("line", (0, 1), [_binom(b, j) for j in range(1, b + 1)])
    return ScatteringDiagram(b, c, k, [wx, wy], completed=False, depth=k)


def _loop_crossings(diagram):
    """Crossing list (wall, sign) of the full CCW loop based just below
    the positive x-axis: positive halves in CCW order with sign +1, then
    negative halves with sign -1."""
    out = []
    for r, w, neg in diagram.drawn_rays():
        if not neg:
            out.append((w, +1))
    for r, w, neg in diagram.drawn_rays():
        if neg:
            out.append((w, -1))
    return out


def _loop_image(diagram, f):
    for w, s in _loop_crossings(diagram):
        f = crossing_apply(w, s, f)
    return f


def complete(diagram):
    """Add the unique ray walls making the full loop the identity.

    Proceeds order by order: at total degree n the loop deviates from the
    identity by commuting corrections along first-quadrant rays; each is
    cancelled by the matching term of a ray wall.
    """
    k = diagram.depth
    walls = [Wall(w.kind, w.direction, w.coeffs, w.exact_to)
             for w in diagram.walls]
    work = ScatteringDiagram(diagram.b, diagram.c, diagram.cutoff, walls,
                             completed=False, depth=k)
    for n in range(2, k + 1):
        # deviation of the loop on x and y, one order past n
        need = {}
        for g in ((1, 0), (0, 1)):
            img = _loop_image(work, series.monomial(g, n + 1))
            for m, cc in img.terms.items():
                dv = (m[0] - g[0], m[1] - g[1])
                if dv == (0, 0) or delta(dv) != n:
                    continue
                if dv[0] < 0 or dv[1] < 0:
                    raise ConsistencyBug("deviation %s outside the first "
                                         "quadrant" % (dv,))
                gg = gcd(dv[0], dv[1])
                m0 = (dv[0] // gg, dv[1] // gg)
                need.setdefault((m0, gg), {})[g] = cc
        for (m0, j), seen in sorted(need.items()):
            cands = []
            for g, cc in seen.items():
                w = OMEGA(m0, g)
                if w != 0:
                    if cc % w != 0:
                        raise ConsistencyBug("non-integral correction at "
                                             "%s^%d" % (m0, j))
                    cands.append(-cc // w)
            if not cands or any(v != cands[0] for v in cands):
                raise ConsistencyBug("inconsistent corrections at %s^%d"
                                     % (m0, j))
            cj = cands[0]
            if cj == 0:
                continue
            tgt = work.wall_at(m0)
            if tgt is None or tgt.kind == "line":
                if m0 in ((1, 0), (0, 1)):
                    raise ConsistencyBug("axis ray correction requested")
                w_new = Wall("ray", m0, [0] * (j - 1) + [cj], exact_to=k)
                work.walls.append(w_new)
            else:
                coeffs = list(tgt.coeffs)
                coeffs += [0] * (j - len(coeffs))
                coeffs[j - 1] += cj
                work.walls[work.walls.index(tgt)] = Wall(
                    "ray", m0, coeffs, exact_to=k)
    for g in ((1, 0), (0, 1)):
        img = _loop_image(work, series.monomial(g, k))
        if img != series.monomial(g, k):
            raise ConsistencyBug("loop still deviates after completion")
    work.walls.sort(key=lambda w: _ray_angle_key(w.direction))
    return ScatteringDiagram(diagram.b, diagram.c, diagram.cutoff,
                             work.walls, completed=True, depth=k)


# --------------------------------------------------------------------------
# chambers


class Chamber:
    """Angular sector between consecutive nontrivial wall rays."""

    __slots__ = ("low_ray", "high_ray", "representative", "index",
                 "is_cluster")

    def __init__(self, low_ray, high_ray, representative, index,
                 is_cluster=False):
        self.low_ray = low_ray
        self.high_ray = high_ray
        self.representative = representative
        self.index = index
        self.is_cluster = is_cluster

    def contains(self, q):
        """Is the nonzero direction q inside the (closed-low, open-high)
        sector?  Whole-plane chambers contain everything."""
        if self.low_ray == self.high_ray:
            return True
        a = _ray_angle_key(q)
        lo = _ray_angle_key(self.low_ray)
        hi = _ray_angle_key(self.high_ray)
        if a == lo:
            return True
        return _between_ccw(a, lo, hi)

    def __repr__(self):
        return "Chamber(%d: %s..%s, rep=%s%s)" % (
            self.index, self.low_ray, self.high_ray, self.representative,
            ", cluster" if self.is_cluster else "")

    def to_json_dict(self):
        return {"index": self.index,
                "low": list(self.low_ray), "high": list(self.high_ray),
                "representative": list(self.representative),
                "is_cluster": self.is_cluster}


def chambers(diagram):
    """Maximal angular sectors between consecutive nontrivial wall rays,
    CCW from angle 0, each with a deterministic rational representative."""
    rays = [r for r, w, neg in diagram.drawn_rays()]
    if not rays:
        return [Chamber((1, 0), (1, 0), (1, 1), 0)]
    out = []
    for i in range(len(rays)):
        u = rays[i]
        v = rays[(i + 1) % len(rays)]
        rep = (u[0] + v[0], u[1] + v[1])
        if rep == (0, 0):
            rep = (-u[1], u[0])
        out.append(Chamber(u, v, primitive(rep), i))
    return out


def chamber_of(diagram, q, chamber_list=None):
    """The chamber containing direction q; q on a wall ray is an error."""
    q = (int(q[0]), int(q[1]))
    if q == (0, 0):
        raise OnWallError("zero direction")
    if diagram.on_support(q):
        raise OnWallError("direction %s lies on the support" % (q,))
    chs = chambers(diagram) if chamber_list is None else chamber_list
    for ch in chs:
        if ch.contains(q):
            return ch
    raise RuntimeError("unreachable: no chamber contains %s" % (q,))


def chamber_adjacent(diagram, direction, chamber_list=None):
    """The chamber whose closure contains the given ray, on the CCW side.

    If the direction is inside a chamber this is just its chamber.
    """
    q = (int(direction[0]), int(direction[1]))
    if q == (0, 0):
        raise OnWallError("zero direction")
    chs = chambers(diagram) if chamber_list is None else chamber_list
    a = _ray_angle_key(q)
    for ch in chs:
        if ch.low_ray == ch.high_ray:
            return ch
        if a == _ray_angle_key(ch.low_ray) or _between_ccw(
                a, _ray_angle_key(ch.low_ray), _ray_angle_key(ch.high_ray)):
            return ch
    raise RuntimeError("unreachable: no chamber near %s" % (q,))


# --------------------------------------------------------------------------
# path-ordered products


class PathAutomorphism:
    """An ordered list of signed wall crossings; first crossed acts first."""

    __slots__ = ("crossings",)

    def __init__(self, crossings):
        self.crossings = list(crossings)

    def __len__(self):
        return len(self.crossings)

    def reverse(self):
        return PathAutomorphism([(w, -s) for w, s in
                                 reversed(self.crossings)])

    def __repr__(self):
        return "PathAutomorphism(%s)" % (
            [(w.direction, s) for w, s in self.crossings],)


def _crossing_sign(ray, is_negative_half, ccw):
    """Sign convention: +1 iff the motion departs the omega(m0,.) < 0 side.

    A CCW crossing of the positive half departs omega < 0; of the
    negative half, omega > 0.  CW flips both.
    """
    s = -1 if is_negative_half else +1
    return s if ccw else -s


def path_product(diagram, start, end, orientation="ccw"):
    """Ordered signed crossings along the angular path start -> end.

    start and end are directions (integer vectors) off the support.
    """
    if orientation not in ("ccw", "cw"):
        raise ValueError("orientation must be 'ccw' or 'cw'")
    ccw = orientation == "ccw"
    start = (int(start[0]), int(start[1]))
    end = (int(end[0]), int(end[1]))
    for q in (start, end):
        if diagram.on_support(q):
            raise OnWallError("basepoint %s lies on the support" % (q,))
    a0 = _ray_angle_key(start)
    a1 = _ray_angle_key(end)
    if a0 == a1:
        return PathAutomorphism([])
    hits = []
    for r, w, neg in diagram.drawn_rays():
        ar = _ray_angle_key(r)
        if _between_ccw(ar, a0, a1) if ccw else _between_ccw(ar, a1, a0):
            hits.append((ar, r, w, neg))
    hits.sort(key=lambda h: h[0], reverse=not ccw)
    return PathAutomorphism([(w, _crossing_sign(r, neg, ccw))
                             for ar, r, w, neg in hits])


def loop_product(diagram, orientation="ccw"):
    """Signed crossings of a full loop based just below the positive x-axis."""
    ccw = PathAutomorphism(_loop_crossings(diagram))
    return ccw if orientation == "ccw" else ccw.reverse()


def apply_path(path, f, diagram=None):
    """Left-to-right composition of crossing_apply over the crossing list."""
    if diagram is not None:
        diagram = diagram.for_series(f)
        repl = {w.direction: w for w in diagram.walls}
        path = PathAutomorphism([(repl.get(w.direction, w), s)
                                 for w, s in path.crossings])
    for w, s in path.crossings:
        f = crossing_apply(w, s, f)
    return f


# --------------------------------------------------------------------------
# reports


class CheckReport:
    """Outcome of a diagram-level check with a replayable witness."""

    def __init__(self, name, passed, cutoff, details=None, witness=None):
        self.name = name
        self.passed = passed
        self.cutoff = cutoff
        self.details = details or {}
        self.witness = witness

    def to_json_dict(self):
        out = {"check": self.name, "passed": self.passed,
               "cutoff": self.cutoff}
        if self.details:
            out["details"] = self.details
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __repr__(self):
        return "CheckReport(%s: %s)" % (self.name,
                                        "pass" if self.passed else "FAIL")


def check_consistency(diagram):
    """Pass iff the full loop fixes z^(1,0), z^(0,1), z^(-1,0), z^(0,-1)."""
    k = diagram.cutoff
    deep = diagram.at_depth(max(diagram.depth, k + 1))
    worst = None
    for g in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        f0 = series.monomial(g, k)
        img = _loop_image(deep, f0)
        dev = series.sub(img, f0)
        if not dev.is_zero():
            dmin = min(delta(m) for m in dev.terms) - delta(g)
            if worst is None or dmin < worst[0]:
                worst = (dmin, g)
    if worst is None:
        return CheckReport("consistency", True, k)
    return CheckReport("consistency", False, k,
                       details={"first_deviation_degree": worst[0],
                                "generator": list(worst[1])})


def check_wall_positivity(diagram):
    """Pass iff every wall coefficient is a non-negative integer."""
    for w in diagram.walls:
        for j, cval in enumerate(w.coeffs, start=1):
            if cval < 0:
                return CheckReport(
                    "wall-positivity", False, diagram.cutoff,
                    witness={"wall": list(w.direction), "order": j,
                             "coefficient": str(cval)})
    return CheckReport("wall-positivity", True, diagram.cutoff)
