"""Recursive towers of curves carrying normalized Drinfeld modules.

A nonzero T-torsion point x of a normalized module pins the module
down: its T-action is the q-linearized polynomial

    torsion_poly(x):    X + ((x^(q^2) - x)/x^q) X^q - X^(q^2)

which factors through the line k*x as cofactor_poly(x) composed with
kernel_line_poly(x), where

    kernel_line_poly(x):  x^(q-1) X - X^q      (vanishes exactly on k*x)
    cofactor_poly(x):     x^(1-q) X + X^q

The reverse composition quotient_torsion_poly(x) is the T-action of the
quotient module, and its own torsion points feed the next storey.  A
level-n point of the tower is a tuple (x_1, ..., x_n) of nonzero
coordinates linked by

    x_j = x_{j-1}^(-1) z_j   with   z_j^q + z_j = x_{j-1}^(q+1),

so the whole tower is cut out by one equation repeated n-1 times.  The
level-2 curve is the Hermitian curve over GF(q^2).  Points whose first
coordinate lies in GF(q^2)* are the supersingular ones; all of their
coordinates then lie in GF(q^2)* automatically.

Dividing by the GF(q^2)* scaling action (c, then c^q, alternating along
the tuple) leaves the coordinates Z_j = (x_{j-1} x_j)^(q-1), which obey

    Z_{j+1} (1+Z_{j+1})^(q-1) = Z_j^q / (1+Z_j)^(q-1)

and generate the quotient tower; enumerate_x0 walks that recursion
directly.  Enumeration orders are deterministic: coordinates are grown
in field-enumeration order and results sorted lexicographically, so
output does not depend on the worker count.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from .drinfeld import DrinfeldModule
from .finite_field import (
    FieldElement,
    FieldSpec,
    embed,
    prime_power,
)
from .linearized import LinearizedPoly, preimages


# ---------------------------------------------------------------------------
# the four building-block polynomials
# ---------------------------------------------------------------------------

def kernel_line_poly(x: FieldElement, q: int) -> LinearizedPoly:
    """x^(q-1) X - X^q, the degree-q polynomial vanishing on the line k*x."""
    if not x:
        raise ValueError("x must be nonzero")
    return LinearizedPoly(q, (x ** (q - 1), -x.spec.one()))


def cofactor_poly(x: FieldElement, q: int) -> LinearizedPoly:
    """x^(1-q) X + X^q, the complementary factor of torsion_poly(x)."""
    if not x:
        raise ValueError("x must be nonzero")
    return LinearizedPoly(q, (x ** (1 - q), x.spec.one()))


def torsion_poly(x: FieldElement, q: int) -> LinearizedPoly:
    """T-action of the normalized module having x as a T-torsion point."""
    if not x:
        raise ValueError("x must be nonzero")
    one = x.spec.one()
    mid = (x.frobenius(q, 2) - x) / x ** q
    return LinearizedPoly(q, (one, mid, -one))


def quotient_torsion_poly(x: FieldElement, q: int) -> LinearizedPoly:
    """T-action of the quotient by the line k*x; equals
    kernel_line_poly(x) * cofactor_poly(x)."""
    if not x:
        raise ValueError("x must be nonzero")
    one = x.spec.one()
    mid = x ** (q - 1) - x ** (q - q * q)
    return LinearizedPoly(q, (one, mid, -one))


def module_from_torsion_point(x1: FieldElement, q: int) -> DrinfeldModule:
    """The normalized module (l0, g, delta) = (1, (x1^(q^2)-x1)/x1^q, -1)."""
    if not x1:
        raise ValueError("x1 must be nonzero")
    spec = x1.spec
    g = (x1.frobenius(q, 2) - x1) / x1 ** q
    module = DrinfeldModule(q, spec.one(), g, -spec.one())
    if module.phi_t()(x1):
        raise RuntimeError("x1 failed to be a torsion point of its module")
    return module


def _trace_map(q: int, spec: FieldSpec) -> LinearizedPoly:
    return LinearizedPoly.from_ints(q, spec, [1, 1])


# ---------------------------------------------------------------------------
# tower points in x-coordinates
# ---------------------------------------------------------------------------

class TowerPoint:
    """Affine point (x_1, ..., x_n) of the level-n tower curve.

    All coordinates are nonzero elements of one field and consecutive
    ones satisfy the defining relation; both facts are checked at
    construction.  Level 1 is the bare x_1-line and serves as the
    enumeration seed.
    """

    __slots__ = ("q", "coords")

    def __init__(self, q: int, coords: tuple):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a point needs at least the x_1 coordinate")
        spec = coords[0].spec
        pr = prime_power(q)
        if pr is None or pr[0] != spec.p or spec.m % (2 * pr[1]):
            raise ValueError(
                f"coordinate field {spec!r} must contain GF({q}^2)")
        for x in coords:
            if x.spec != spec:
                raise ValueError("coordinates lie in different fields")
            if not x:
                raise ValueError("cuspidal coordinate 0 is not allowed")
        for a, b in zip(coords, coords[1:]):
            z = a * b
            if z.frobenius(q) + z != a ** (q + 1):
                raise ValueError(
                    "coordinates do not satisfy the tower relation")
        self.q = q
        self.coords = coords

    @property
    def level(self) -> int:
        return len(self.coords)

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    def ints(self) -> tuple:
        return tuple(x.to_int() for x in self.coords)

    def __eq__(self, other):
        if not isinstance(other, TowerPoint):
            return NotImplemented
        return (self.q, self.coords) == (other.q, other.coords)

    def __hash__(self):
        return hash((self.q, self.coords))

    def __repr__(self):
        return f"TowerPoint(q={self.q}, {[x.serialize() for x in self.coords]})"

    def serialize(self) -> list:
        return [x.serialize() for x in self.coords]

    def lift_to(self, target: FieldSpec) -> "TowerPoint":
        if target == self.spec:
            return self
        return TowerPoint(self.q, tuple(embed(x, target) for x in self.coords))

    # -- geometry ---------------------------------------------------------------

    def is_supersingular(self) -> bool:
        """Whether x_1 lies in GF(q^2)*; the other coordinates then must."""
        q = self.q
        if self.coords[0].frobenius(q, 2) != self.coords[0]:
            return False
        for x in self.coords[1:]:
            if x.frobenius(q, 2) != x:
                raise RuntimeError(
                    "supersingular point left GF(q^2); tower relation broken")
        return True

    def extend(self, target: Optional[FieldSpec] = None) -> list:
        """All one-step extensions with the new coordinate in the target
        field (default: the point's own field), possibly none."""
        base = self.lift_to(target) if target is not None else self
        spec = base.spec
        q = self.q
        last = base.coords[-1]
        rhs = last ** (q + 1)
        sols = preimages(_trace_map(q, spec), rhs, spec)
        inv = last.inverse()
        out = [TowerPoint(q, base.coords + (inv * z,))
               for z in sols if z]
        out.sort(key=TowerPoint.ints)
        return out

    def act(self, c: FieldElement) -> "TowerPoint":
        """Scale by c in GF(q^2)*: coordinates alternate c, c^q factors.

        The image is validated, which re-checks that the scaling
        preserves the tower relation, and its Z-coordinates are
        unchanged.
        """
        q = self.q
        if c.spec != self.spec:
            c = embed(c, self.spec)
        if not c:
            raise ValueError("the scaling constant must be nonzero")
        if c.frobenius(q, 2) != c:
            raise ValueError("the scaling constant must lie in GF(q^2)")
        cbar = c.frobenius(q)
        scaled = tuple(x * (c if i % 2 == 0 else cbar)
                       for i, x in enumerate(self.coords))
        return TowerPoint(q, scaled)

    def project_to_x0(self) -> "X0Point":
        """Z-coordinates (x_{j-1} x_j)^(q-1) of the image in the quotient
        tower; defined once the point has at least two coordinates."""
        if self.level < 2:
            raise ValueError("projection needs at least two coordinates")
        q = self.q
        zs = tuple((a * b) ** (q - 1)
                   for a, b in zip(self.coords, self.coords[1:]))
        return X0Point(q, zs)

    def kernel_chain_poly(self, depth: int) -> LinearizedPoly:
        """kernel_line_poly(x_depth) * ... * kernel_line_poly(x_1).

        Its full kernel in a splitting field is the group of
        T^depth-torsion points selected by this tower point: q^depth
        elements forming a cyclic module under the T-action.
        """
        if not 1 <= depth <= self.level:
            raise ValueError(f"depth must be in 1..{self.level}")
        q = self.q
        chain = kernel_line_poly(self.coords[0], q)
        for x in self.coords[1:depth]:
            chain = kernel_line_poly(x, q) * chain
        return chain


# ---------------------------------------------------------------------------
# quotient-tower points in Z-coordinates
# ---------------------------------------------------------------------------

class X0Point:
    """Point (Z_2, ..., Z_n) of the level-n quotient tower."""

    __slots__ = ("q", "zcoords")

    def __init__(self, q: int, zcoords: tuple):
        zcoords = tuple(zcoords)
        if not zcoords:
            raise ValueError("a point needs at least the Z_2 coordinate")
        spec = zcoords[0].spec
        pr = prime_power(q)
        if pr is None or pr[0] != spec.p or spec.m % (2 * pr[1]):
            raise ValueError(
                f"coordinate field {spec!r} must contain GF({q}^2)")
        minus_one = -spec.one()
        one = spec.one()
        for z in zcoords:
            if z.spec != spec:
                raise ValueError("coordinates lie in different fields")
            if z == minus_one:
                raise ValueError("degenerate coordinate Z = -1")
        for za, zb in zip(zcoords, zcoords[1:]):
            lhs = zb * (one + zb) ** (q - 1)
            rhs = za.frobenius(q) / (one + za) ** (q - 1)
            if lhs != rhs:
                raise ValueError(
                    "coordinates do not satisfy the quotient recursion")
        self.q = q
        self.zcoords = zcoords

    @property
    def level(self) -> int:
        return len(self.zcoords) + 1

    @property
    def spec(self) -> FieldSpec:
        return self.zcoords[0].spec

    def ints(self) -> tuple:
        return tuple(z.to_int() for z in self.zcoords)

    def __eq__(self, other):
        if not isinstance(other, X0Point):
            return NotImplemented
        return (self.q, self.zcoords) == (other.q, other.zcoords)

    def __hash__(self):
        return hash((self.q, self.zcoords))

    def __repr__(self):
        return f"X0Point(q={self.q}, {[z.serialize() for z in self.zcoords]})"

    def serialize(self) -> list:
        return [z.serialize() for z in self.zcoords]

    def is_supersingular(self) -> bool:
        """All coordinates are (q+1)-st roots of unity other than -1."""
        one = self.spec.one()
        return all(z ** (self.q + 1) == one for z in self.zcoords)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _chunked(items: list, workers: int) -> list:
    return [items[i::workers] for i in range(workers)]


def _run_chunks(fn, seeds: list, workers: int) -> list:
    if workers <= 1 or len(seeds) <= 1:
        return fn(seeds)
    out = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(fn, _chunked(seeds, workers)):
            out.extend(part)
    return out


def enumerate_xprime(q: int, n: int, field: FieldSpec,
                     workers: int = 1) -> list:
    """All level-n points with every coordinate in the given field.

    Seeds x_1 over the nonzero elements and extends one coordinate at a
    time; the result is sorted lexicographically by coordinate index,
    so it is independent of the worker count.
    """
    if n < 2:
        raise ValueError("the tower starts at level 2")
    seeds = list(field.nonzero_elements())

    def grow(chunk):
        pts = [TowerPoint(q, (x,)) for x in chunk]
        for _ in range(n - 1):
            pts = [ext for pt in pts for ext in pt.extend()]
        return pts

    points = _run_chunks(grow, seeds, workers)
    points.sort(key=TowerPoint.ints)
    return points


def enumerate_x0(q: int, n: int, field: FieldSpec, workers: int = 1) -> list:
    """All level-n quotient-tower points with coordinates in the field.

    The level-2 seed Z_2 ranges over the field minus the degenerate
    value -1; each later coordinate solves the degree-q recursion,
    found by one pass of bucketed enumeration over the field.
    """
    if n < 2:
        raise ValueError("the quotient tower starts at level 2")
    one = field.one()
    minus_one = -one
    allowed = [z for z in field.elements() if z != minus_one]
    buckets: dict = {}
    if n > 2:
        for z in allowed:
            buckets.setdefault(z * (one + z) ** (q - 1), []).append(z)

    def grow(chunk):
        tuples = [(z,) for z in chunk]
        for _ in range(n - 2):
            nxt = []
            for tup in tuples:
                za = tup[-1]
                rhs = za.frobenius(q) / (one + za) ** (q - 1)
                for zb in buckets.get(rhs, ()):
                    nxt.append(tup + (zb,))
            tuples = nxt
        return [X0Point(q, tup) for tup in tuples]

    points = _run_chunks(grow, allowed, workers)
    points.sort(key=X0Point.ints)
    return points


def degenerate_z_skips(q: int, n: int, field: FieldSpec) -> int:
    """How many branches of the level-n quotient enumeration land on the
    excluded value Z = -1.

    The excluded seed counts once; past that, a branch reaches -1 only
    from a tuple whose last coordinate makes the recursion's right side
    vanish.  Reported as a diagnostic next to the point counts.
    """
    if n < 2:
        raise ValueError("the quotient tower starts at level 2")
    one = field.one()
    minus_one = -one
    target = minus_one * (one + minus_one) ** (q - 1)
    allowed = [z for z in field.elements() if z != minus_one]
    skipped = 1
    frontier = {z: 1 for z in allowed}
    buckets: dict = {}
    for z in allowed:
        buckets.setdefault(z * (one + z) ** (q - 1), []).append(z)
    for _ in range(n - 2):
        nxt: dict = {}
        for za, mult in frontier.items():
            rhs = za.frobenius(q) / (one + za) ** (q - 1)
            if rhs == target:
                skipped += mult
            for zb in buckets.get(rhs, ()):
                nxt[zb] = nxt.get(zb, 0) + mult
        frontier = nxt
    return skipped


@functools.lru_cache(maxsize=None)
def supersingular_z_values(q: int, k1: FieldSpec) -> tuple:
    """The q supersingular Z-values inside GF(q^2).

    Three descriptions must coincide: the (q+1)-st roots of unity other
    than -1, the solutions of Z(1+Z)^(q-1) = 1, and the solutions of
    Z^q = (1+Z)^(q-1).  Disagreement would mean a broken field layer,
    so it raises rather than returning.
    """
    if k1.size != q * q:
        raise ValueError(f"{k1!r} is not GF({q}^2)")
    one = k1.one()
    minus_one = -one
    roots = {z for z in k1.elements()
             if z ** (q + 1) == one and z != minus_one}
    closed = {z for z in k1.elements() if z * (one + z) ** (q - 1) == one}
    balanced = {z for z in k1.elements()
                if z.frobenius(q) == (one + z) ** (q - 1)}
    if not (roots == closed == balanced) or len(roots) != q:
        raise RuntimeError(
            "the three descriptions of the supersingular Z-set disagree")
    return tuple(sorted(roots, key=FieldElement.to_int))


# ---------------------------------------------------------------------------
# torsion-generator descent
# ---------------------------------------------------------------------------

def verify_descent(pt: TowerPoint, y: FieldElement) -> bool:
    """Check the induction that threads torsion generators down the tower.

    Precondition: y solves chain_{n-1}(y) = x_n for the depth-(n-1)
    kernel chain of the point (violations raise).  The claim being
    verified is that applying the T-action torsion_poly(x_1) to y gives
    a solution of the level-(n-1) equation, i.e.

        chain_{n-2}(torsion_poly(x_1)(y)) = x_{n-1},

    and that every consecutive pair of coordinates satisfies the swap
    identity cofactor*kernel_line at x_j equals kernel_line*cofactor at
    x_{j-1}, both being torsion_poly(x_j).
    """
    n = pt.level
    if n < 2:
        raise ValueError("descent needs a point of level at least 2")
    q = pt.q
    spec = y.spec
    coords = [embed(x, spec) if x.spec != spec else x for x in pt.coords]

    chain = pt.kernel_chain_poly(n - 1).map_to(spec)
    if chain(y) != coords[-1]:
        raise ValueError("y does not generate the torsion group of pt")

    for xa, xb in zip(coords, coords[1:]):
        swap_a = cofactor_poly(xb, q) * kernel_line_poly(xb, q)
        swap_b = kernel_line_poly(xa, q) * cofactor_poly(xa, q)
        if not (swap_a == swap_b == torsion_poly(xb, q)):
            return False

    y_down = torsion_poly(coords[0], q)(y)
    if n == 2:
        return y_down == coords[0]
    chain_down = pt.kernel_chain_poly(n - 2).map_to(spec)
    return chain_down(y_down) == coords[-2]
