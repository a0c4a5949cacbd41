"""Exact arithmetic in small finite fields GF(p^m).

An element of GF(p^m) is a length-m tuple of integers modulo p, read as
coefficients (c0, c1, ..., c_{m-1}) of 1, x, ..., x^{m-1} in the power
basis of a root of a fixed monic irreducible modulus.  Everything is
exact integer arithmetic; there are no floating point paths.

Conventions that downstream code and the serialization formats rely on:

* enumeration order is by the integer encoding sum(c_i * p^i), so 0
  comes first and the prime-subfield constants come before anything
  with a nonzero higher coefficient;
* when no modulus is supplied, the lexicographically first monic
  irreducible of the requested degree is chosen (first in the integer
  encoding above), so serialized elements are reproducible;
* subfield embeddings map the source power-basis root to the first
  root of the source modulus in enumeration order of the target.

Field sizes are capped (default 2**24) at construction time.  The cap
exists so that full enumeration stays feasible where the library uses
it; kernel and preimage computations elsewhere go through GF(p) linear
algebra and never enumerate large fields.

Fields up to 2**16 elements switch to discrete-log multiplication
tables once they have seen enough products to amortize the build.  The
table path returns bit-identical results to the generic convolution
path; a test compares the two exhaustively.
"""

from __future__ import annotations

import functools
from typing import Iterator, Optional, Sequence

DEFAULT_CAP = 2**24


class CapExceededError(RuntimeError):
    """A requested field would exceed the configured size cap."""


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); coefficient lists are little-endian ints
# ---------------------------------------------------------------------------

def _ptrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list:
    # f must be monic
    r = list(a)
    df = len(f) - 1
    while len(r) - 1 >= df and r:
        c = r[-1]
        if c:
            shift = len(r) - 1 - df
            for j, fj in enumerate(f):
                r[shift + j] = (r[shift + j] - c * fj) % p
        r.pop()
    return _ptrim(r)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(r) - 1 >= db and r:
        c = (r[-1] * inv) % p
        shift = len(r) - 1 - db
        if c:
            q[shift] = c
            for j, bj in enumerate(b):
                r[shift + j] = (r[shift + j] - c * bj) % p
        r.pop()
        _ptrim(r)
    return _ptrim(q), _ptrim(r)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list:
    a, b = list(a), list(b)
    while b:
        # make b monic before reducing so _pmod stays valid
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = bm, _pmod(a, bm, p)
    return a


def _ppowmod(g: Sequence[int], e: int, f: Sequence[int], p: int) -> list:
    result = [1]
    base = list(g)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _p_power_x(k: int, f: Sequence[int], p: int) -> list:
    """x^(p^k) reduced mod the monic polynomial f."""
    g = _pmod([0, 1], f, p)
    for _ in range(k):
        g = _ppowmod(g, p, f, p)
    return g


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_divisors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Rabin test for a monic polynomial over GF(p)."""
    f = [c % p for c in coeffs]
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        raise ValueError("modulus must be monic of degree >= 1")
    if m == 1:
        return True
    top = _p_power_x(m, f, p)
    x_poly = _pmod([0, 1], f, p)
    diff = [(a - b) % p for a, b in
            zip(top + [0] * (len(x_poly) - len(top)),
                x_poly + [0] * (len(top) - len(x_poly)))]
    if _ptrim(diff):
        return False
    for r in _prime_divisors(m):
        sub = _p_power_x(m // r, f, p)
        d = [(a - b) % p for a, b in
             zip(sub + [0] * (len(x_poly) - len(sub)),
                 x_poly + [0] * (len(sub) - len(x_poly)))]
        d = _ptrim(d)
        if not d:
            return False
        if len(_pgcd(f, d, p)) > 1:
            return False
    return True


# Lexicographically first irreducible moduli, encoded as sum(c_i * p^i)
# including the leading term.  Generated by the search in
# first_irreducible() and frozen here so large-degree fields skip the
# search; a unit test re-derives the small entries from scratch.
_LEX_FIRST: dict = {
    (2, 1): 2, (2, 2): 7, (2, 3): 11, (2, 4): 19, (2, 5): 37, (2, 6): 67,
    (2, 7): 131, (2, 8): 283, (2, 9): 515, (2, 10): 1033, (2, 11): 2053,
    (2, 12): 4105, (2, 13): 8219, (2, 14): 16417, (2, 15): 32771,
    (2, 16): 65579, (2, 17): 131081, (2, 18): 262153, (2, 19): 524327,
    (2, 20): 1048585, (2, 21): 2097157, (2, 22): 4194307, (2, 23): 8388641,
    (2, 24): 16777243, (2, 25): 33554441, (2, 26): 67108891,
    (2, 27): 134217767, (2, 28): 268435459, (2, 29): 536870917,
    (2, 30): 1073741827, (2, 31): 2147483657, (2, 32): 4294967437,
    (3, 1): 3, (3, 2): 10, (3, 3): 34, (3, 4): 86, (3, 5): 250,
    (3, 6): 734, (3, 7): 2198, (3, 8): 6572, (3, 9): 19747, (3, 10): 59068,
    (3, 11): 177158, (3, 12): 531452, (3, 13): 1594330, (3, 14): 4782974,
    (3, 15): 14348918, (3, 16): 43046758, (3, 17): 129140170,
    (3, 18): 387420523, (3, 19): 1162261478, (3, 20): 3486784435,
    (3, 21): 10460353234, (3, 22): 31381059646, (3, 23): 94143178858,
    (3, 24): 282429536564, (3, 25): 847288609498, (3, 26): 2541865828348,
    (3, 27): 7625597485274, (3, 28): 22876792454972,
    (3, 29): 68630377364966, (3, 30): 205891132094654,
    (3, 31): 617673396283978, (3, 32): 1853020188851893, (5, 1): 5,
    (5, 2): 27, (5, 3): 131, (5, 4): 627, (5, 5): 3146, (5, 6): 15632,
    (5, 7): 78131, (5, 8): 390627, (7, 1): 7, (7, 2): 50, (7, 3): 345,
    (7, 4): 2409,
}


def _int_to_coeffs(n: int, p: int) -> list:
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out


def first_irreducible(p: int, m: int) -> tuple:
    """Lexicographically first monic irreducible of degree m over GF(p)."""
    enc = _LEX_FIRST.get((p, m))
    if enc is not None:
        return tuple(_int_to_coeffs(enc, p))
    lead = p**m
    for low in range(lead):
        cand = _int_to_coeffs(low + lead, p)
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def prime_power(q: int) -> Optional[tuple]:
    """(p, r) with q = p^r, or None when q is not a prime power."""
    if q < 2:
        return None
    ds = _prime_divisors(q)
    if len(ds) != 1:
        return None
    p = ds[0]
    r = 0
    while q % p == 0:
        q //= p
        r += 1
    return (p, r) if q == 1 else None


# ---------------------------------------------------------------------------
# field specs and elements
# ---------------------------------------------------------------------------

_SPEC_CACHE: dict = {}


def make_field(p: int, m: int, modulus: Optional[Sequence[int]] = None,
               cap: int = DEFAULT_CAP) -> "FieldSpec":
    """Build (or fetch from cache) a validated GF(p^m) spec.

    With modulus omitted the deterministic lexicographically first monic
    irreducible of degree m is used.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p**m > cap:
        raise CapExceededError(
            f"field size {p}^{m} exceeds the cap {cap}")
    if modulus is None:
        mod = first_irreducible(p, m)
    else:
        mod = tuple(int(c) % p for c in modulus)
    key = (p, m, mod)
    spec = _SPEC_CACHE.get(key)
    if spec is None:
        spec = FieldSpec(p, m, mod)
        _SPEC_CACHE[key] = spec
    return spec


class FieldSpec:
    """Immutable description of GF(p^m) with a fixed monic modulus."""

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(modulus, p):
            raise ValueError(
                f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.size = p**m
        # x^(m+j) mod modulus for j = 0..m-2, used to fold products back
        rows = []
        cur = [(-c) % p for c in modulus[:-1]]
        rows.append(tuple(cur))
        for _ in range(m - 2):
            nxt = [0] + cur
            top = nxt.pop()
            if top:
                nxt = [(a + top * b) % p for a, b in zip(nxt, rows[0])]
            rows.append(tuple(nxt))
            cur = nxt
        self._red_rows = rows
        self._frob_cache: dict = {}
        # discrete-log tables are built lazily once a field has seen
        # enough products to amortize the build; results are identical
        # to the generic path, only faster
        self._exp: Optional[list] = None
        self._log: Optional[dict] = None
        self._mul_count = 0
        self._table_threshold = self.size // 4 \
            if 8 <= self.size <= 2**16 else None

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.m, self.modulus)
                == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FieldSpec(GF({self.p}^{self.m}))"

    def serialize(self) -> str:
        return f"{self.p}^{self.m}/" + ",".join(str(c) for c in self.modulus)

    @staticmethod
    def parse(text: str, cap: int = DEFAULT_CAP) -> "FieldSpec":
        head, _, tail = text.partition("/")
        ps, _, ms = head.partition("^")
        mod = tuple(int(c) for c in tail.split(",")) if tail else None
        return make_field(int(ps), int(ms) if ms else 1, mod, cap=cap)

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        cs = tuple(int(c) % self.p for c in coeffs)
        if len(cs) != self.m:
            raise ValueError(f"need {self.m} coefficients, got {len(cs)}")
        return FieldElement(self, cs)

    def constant(self, c: int) -> "FieldElement":
        """Image of the integer c under the prime-subfield embedding."""
        return FieldElement(self, (c % self.p,) + (0,) * (self.m - 1))

    def zero(self) -> "FieldElement":
        return self.constant(0)

    def one(self) -> "FieldElement":
        return self.constant(1)

    def from_int(self, n: int) -> "FieldElement":
        """Inverse of FieldElement.to_int, the enumeration index."""
        if not 0 <= n < self.size:
            raise ValueError("index out of range")
        cs = []
        for _ in range(self.m):
            cs.append(n % self.p)
            n //= self.p
        return FieldElement(self, tuple(cs))

    def elements(self) -> Iterator["FieldElement"]:
        """All p^m elements exactly once, in enumeration order."""
        for n in range(self.size):
            yield self.from_int(n)

    def nonzero_elements(self) -> Iterator["FieldElement"]:
        for n in range(1, self.size):
            yield self.from_int(n)

    def random_element(self, rng) -> "FieldElement":
        return self.from_int(rng.randrange(self.size))

    def random_nonzero(self, rng) -> "FieldElement":
        return self.from_int(rng.randrange(1, self.size))

    # -- internal arithmetic -------------------------------------------------

    def _mul_generic(self, a: tuple, b: tuple) -> tuple:
        p, m = self.p, self.m
        if m == 1:
            return ((a[0] * b[0]) % p,)
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        out = conv[:m]
        for j in range(m - 1):
            c = conv[m + j]
            if c:
                row = self._red_rows[j]
                for i in range(m):
                    out[i] = (out[i] + c * row[i]) % p
        return tuple(out)

    def _build_tables(self) -> None:
        order = self.size - 1
        one = self.one().coeffs
        gen = None
        for n in range(1, self.size):
            cand = self.from_int(n).coeffs
            if all(self._pow_generic(cand, order // f) != one
                   for f in _prime_divisors(order)):
                gen = cand
                break
        exp = [one]
        for _ in range(order - 1):
            exp.append(self._mul_generic(exp[-1], gen))
        log = {coeffs: i for i, coeffs in enumerate(exp)}
        # readers gate on _exp, so _log must be visible first
        self._log = log
        self._exp = exp

    def _pow_generic(self, a: tuple, n: int) -> tuple:
        out = self.one().coeffs
        base = a
        while n:
            if n & 1:
                out = self._mul_generic(out, base)
            base = self._mul_generic(base, base)
            n >>= 1
        return out

    def _mul(self, a: tuple, b: tuple) -> tuple:
        if self._exp is not None:
            if not (any(a) and any(b)):
                return (0,) * self.m
            return self._exp[(self._log[a] + self._log[b])
                             % (self.size - 1)]
        if self._table_threshold is not None:
            self._mul_count += 1
            if self._mul_count > self._table_threshold:
                self._table_threshold = None
                self._build_tables()
        return self._mul_generic(a, b)

    def _inv(self, a: tuple) -> tuple:
        if not any(a):
            raise ZeroDivisionError("division by zero in " + repr(self))
        if self._exp is not None:
            order = self.size - 1
            return self._exp[(order - self._log[a]) % order]
        p = self.p
        # extended Euclid in GF(p)[x] against the modulus
        r0, r1 = list(self.modulus), _ptrim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, rem = _pdivmod(r0, r1, p)
            qs1 = _pmul(q, s1, p)
            snew = _psub(s0, qs1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, snew
        # r0 = gcd, a nonzero constant since the modulus is irreducible
        lead_inv = pow(r0[-1], p - 2, p)
        s0 = _pmod([(c * lead_inv) % p for c in s0], list(self.modulus), p)
        return tuple(s0 + [0] * (self.m - len(s0)))

    # -- GF(p)-linear structure ----------------------------------------------

    def frobenius_matrix(self, k: int) -> list:
        """Matrix of x -> x^(p^k) on the power basis (columns are images)."""
        k %= self.m
        mat = self._frob_cache.get(k)
        if mat is not None:
            return mat
        if k == 0:
            mat = gfp_identity(self.m)
        elif k == 1:
            cols = []
            base_x = self.element((0, 1) + (0,) * (self.m - 2)) \
                if self.m > 1 else self.one()
            xpow = base_x**self.p if self.m > 1 else self.one()
            cur = self.one()
            for _ in range(self.m):
                cols.append(cur.coeffs)
                cur = cur * xpow
            mat = [[cols[j][i] for j in range(self.m)] for i in range(self.m)]
        else:
            mat = gfp_matmul(self.frobenius_matrix(1),
                             self.frobenius_matrix(k - 1), self.p)
        self._frob_cache[k] = mat
        return mat

    def multiplication_matrix(self, a: "FieldElement") -> list:
        cols = []
        base_x = self.element((0, 1) + (0,) * (self.m - 2)) \
            if self.m > 1 else self.one()
        cur = a
        for _ in range(self.m):
            cols.append(cur.coeffs)
            cur = cur * base_x if self.m > 1 else cur
        return [[cols[j][i] for j in range(self.m)] for i in range(self.m)]


class FieldElement:
    """An element of a FieldSpec; a small immutable value."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple):
        self.spec = spec
        self.coeffs = coeffs

    # -- housekeeping ---------------------------------------------------------

    def __repr__(self):
        return f"GF({self.spec.p}^{self.spec.m})({self.serialize()})"

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @staticmethod
    def parse(spec: FieldSpec, text: str) -> "FieldElement":
        return spec.element([int(c) for c in text.split(",")])

    def to_int(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.spec.p + c
        return n

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.spec.constant(other)
        return NotImplemented

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError(
                    f"elements of {self.spec!r} and {other.spec!r} "
                    "cannot be combined; embed first")
            return other
        if isinstance(other, int):
            return self.spec.constant(other)
        return None

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, self.spec._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec._inv(self.coeffs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, n: int):
        spec = self.spec
        if spec._exp is not None:
            if not self:
                if n == 0:
                    return spec.one()
                if n < 0:
                    raise ZeroDivisionError(
                        "negative power of zero in " + repr(spec))
                return self
            order = spec.size - 1
            return FieldElement(
                spec, spec._exp[(spec._log[self.coeffs] * n) % order])
        if n < 0:
            return self.inverse() ** (-n)
        result = spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, q: int, e: int = 1) -> "FieldElement":
        """a^(q^e) for q a power of the characteristic."""
        pr = prime_power(q)
        if pr is None or pr[0] != self.spec.p:
            raise ValueError(f"{q} is not a power of {self.spec.p}")
        out = self
        for _ in range(e):
            out = out**q
        return out


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch form of the four field operations."""
    table = {"add": FieldElement.__add__, "sub": FieldElement.__sub__,
             "mul": FieldElement.__mul__, "div": FieldElement.__truediv__}
    try:
        fn = table[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    out = fn(a, b)
    if out is NotImplemented:
        raise ValueError("operands not compatible")
    return out


def q_frobenius(a: FieldElement, q: int, e: int = 1) -> FieldElement:
    return a.frobenius(q, e)


# ---------------------------------------------------------------------------
# embeddings and subfields
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _embedding_powers(source: FieldSpec, target: FieldSpec) -> tuple:
    """Powers (r^0, ..., r^{m-1}) of the chosen root of source.modulus."""
    if source.p != target.p or target.m % source.m:
        raise ValueError(
            f"no embedding of {source!r} into {target!r}")
    if source == target:
        base = source.element((0, 1) + (0,) * (source.m - 2)) \
            if source.m > 1 else source.one()
        root = base
    else:
        candidates = subfield_elements(target, source.p**source.m)
        roots = []
        for y in candidates:
            acc = target.zero()
            ypow = target.one()
            for c in source.modulus:
                if c:
                    acc = acc + ypow * c
                ypow = ypow * y
            if not acc:
                roots.append(y)
        if not roots:
            raise RuntimeError("source modulus has no root in target")
        root = min(roots, key=FieldElement.to_int)
    powers = []
    cur = target.one() if source != target else source.one()
    for _ in range(source.m):
        powers.append(cur)
        cur = cur * root
    return tuple(powers)


def embed(a: FieldElement, target: FieldSpec) -> FieldElement:
    """Ring-homomorphic image of a in an extension field."""
    if a.spec == target:
        return a
    powers = _embedding_powers(a.spec, target)
    acc = target.zero()
    p = target.p
    for c, pw in zip(a.coeffs, powers):
        if c:
            acc = acc + FieldElement(
                target, tuple((c * x) % p for x in pw.coeffs))
    return acc


@functools.lru_cache(maxsize=None)
def _embedding_section(source: FieldSpec, target: FieldSpec) -> dict:
    return {embed(y, target).coeffs: y for y in source.elements()}


def project(a: FieldElement, target: FieldSpec) -> FieldElement:
    """Inverse of embed for values that lie in the embedded subfield."""
    sec = _embedding_section(target, a.spec)
    try:
        return sec[a.coeffs]
    except KeyError:
        raise ValueError(f"{a!r} is not in the embedded copy of {target!r}")


@functools.lru_cache(maxsize=None)
def subfield_elements(spec: FieldSpec, q: int) -> tuple:
    """All x in the field with x^q = x, sorted in enumeration order.

    This is the unique subfield of size q, computed as the fixed space
    of the q-power Frobenius by GF(p) linear algebra, so it works for
    fields far too large to enumerate.
    """
    pr = prime_power(q)
    if pr is None or pr[0] != spec.p or spec.m % pr[1]:
        raise ValueError(f"GF({q}) is not a subfield of {spec!r}")
    r = pr[1]
    fr = spec.frobenius_matrix(r)
    mat = [row[:] for row in fr]
    for i in range(spec.m):
        mat[i][i] = (mat[i][i] - 1) % spec.p
    basis = gfp_nullspace(mat, spec.p)
    out = []
    for combo in _iter_combinations(len(basis), spec.p):
        vec = [0] * spec.m
        for c, bvec in zip(combo, basis):
            if c:
                for i in range(spec.m):
                    vec[i] = (vec[i] + c * bvec[i]) % spec.p
        out.append(FieldElement(spec, tuple(vec)))
    out.sort(key=FieldElement.to_int)
    if len(out) != q:
        raise RuntimeError("subfield solve returned a wrong-size space")
    return tuple(out)


def trace_to_subfield(a: FieldElement, sub: FieldSpec) -> FieldElement:
    """Trace a + a^q of an element of the quadratic extension of sub."""
    q = sub.size
    if a.spec.p != sub.p or a.spec.m != 2 * sub.m:
        raise ValueError(
            f"{a.spec!r} is not a quadratic extension of {sub!r}")
    r = a + a.frobenius(q)
    if r.frobenius(q) != r:
        raise RuntimeError("trace did not land in the subfield")
    return project(r, sub)


def _iter_combinations(k: int, p: int):
    combo = [0] * k
    while True:
        yield tuple(combo)
        i = 0
        while i < k:
            combo[i] += 1
            if combo[i] < p:
                break
            combo[i] = 0
            i += 1
        if i == k:
            return


# ---------------------------------------------------------------------------
# linear algebra over GF(p)
# ---------------------------------------------------------------------------

def gfp_identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def gfp_matmul(a: list, b: list, p: int) -> list:
    n, k = len(a), len(b)
    m = len(b[0])
    bt = [[b[r][c] for r in range(k)] for c in range(m)]
    out = []
    for row in a:
        orow = []
        for col in bt:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s += x * y
            orow.append(s % p)
        out.append(orow)
    return out


def gfp_nullspace(mat: list, p: int) -> list:
    """Basis of the right null space of mat over GF(p)."""
    if not mat:
        return []
    rows = [row[:] for row in mat]
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(x - c * y) % p
                           for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rows[r][fc]) % p
        basis.append(vec)
    return basis


class GFpSolver:
    """Repeated-right-hand-side solver for A x = b over GF(p)."""

    def __init__(self, mat: list, p: int):
        self.p = p
        n = len(mat)
        ncols = len(mat[0]) if mat else 0
        self.ncols = ncols
        aug = [mat[i][:] + [1 if j == i else 0 for j in range(n)]
               for i in range(n)]
        pivots = []
        rank = 0
        for col in range(ncols):
            pivot = None
            for r in range(rank, n):
                if aug[r][col]:
                    pivot = r
                    break
            if pivot is None:
                continue
            aug[rank], aug[pivot] = aug[pivot], aug[rank]
            inv = pow(aug[rank][col], p - 2, p)
            aug[rank] = [(x * inv) % p for x in aug[rank]]
            for r in range(n):
                if r != rank and aug[r][col]:
                    c = aug[r][col]
                    aug[r] = [(x - c * y) % p
                              for x, y in zip(aug[r], aug[rank])]
            pivots.append(col)
            rank += 1
        self.rank = rank
        self.pivots = pivots
        self.reduced = [row[:ncols] for row in aug]
        self.transform = [row[ncols:] for row in aug]
        self.nullspace = gfp_nullspace(mat, p) if mat else []

    def solve(self, rhs: list):
        """One particular solution, or None when the system is inconsistent."""
        p = self.p
        c = []
        for trow in self.transform:
            s = 0
            for x, y in zip(trow, rhs):
                if x and y:
                    s += x * y
            c.append(s % p)
        for r in range(self.rank, len(c)):
            if c[r]:
                return None
        x = [0] * self.ncols
        for r, pc in enumerate(self.pivots):
            x[pc] = c[r]
        return x
