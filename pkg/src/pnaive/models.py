"""Concrete group actions on hyperbolic spaces.

Three kinds of model are provided:

* :class:`FreeGroup` -- the free group of rank ``r`` acting on its Cayley tree.
* :class:`FreeProduct` -- ``Z/p * Z/q`` acting on its Bass-Serre tree, with an
  exact integer matrix channel for ``Z/2 * Z/3 = PSL(2, Z)``.
* :class:`HalfPlane` -- a floating-point upper half-plane model for demos.
  It is flagged approximate and refused by every certificate-producing path.

Tree vertices are encoded by their *address*: the labels of the edges on the
path from the basepoint. Distances between addresses are exact integers and
ends of the tree are eventually periodic addresses (:class:`EndPoint`).
"""
from __future__ import annotations

import hashlib
import itertools
import math
import random
import re
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, ModelMismatch, UnsupportedModel
from .points import Cylinder, EndPoint, Site

__all__ = [
    "GroupElement",
    "FreeGroup",
    "FreeProduct",
    "HalfPlane",
    "EndPoint",
    "Cylinder",
    "Site",
    "reduce",
    "act",
    "matrix_eval",
    "random_element",
    "derive_seed",
    "PSL2Z_IMAGES",
]

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))

#: standard images of s and t in PSL(2, Z)
PSL2Z_IMAGES: Tuple[Matrix, Matrix] = (((0, -1), (1, 0)), ((0, -1), (1, -1)))


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary printable parts (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_pow(x: Matrix, n: int) -> Matrix:
    if n < 0:
        x, n = mat_inv(x), -n
    out = IDENTITY
    while n:
        if n & 1:
            out = mat_mul(out, x)
        x = mat_mul(x, x)
        n >>= 1
    return out


def mat_inv(x: Matrix) -> Matrix:
    det = x[0][0] * x[1][1] - x[0][1] * x[1][0]
    if det not in (1, -1):
        raise DomainError(f"matrix {x} is not invertible over Z")
    return ((x[1][1] * det, -x[0][1] * det), (-x[1][0] * det, x[0][0] * det))


def projective(x: Matrix) -> Matrix:
    """Representative of ``x`` modulo sign: first nonzero entry made positive."""
    for v in (x[0][0], x[0][1], x[1][0], x[1][1]):
        if v:
            if v < 0:
                return ((-x[0][0], -x[0][1]), (-x[1][0], -x[1][1]))
            return x
    return x


class GroupElement:
    """An element of a model's group, stored by its unique normal form."""

    __slots__ = ("model", "nf")

    def __init__(self, model, nf):
        self.model = model
        self.nf = tuple(nf)

    def _check(self, other):
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected GroupElement, got {type(other).__name__}")
        if other.model.key != self.model.key:
            raise ModelMismatch(f"{self.model.key} vs {other.model.key}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.model, self.model.mul_nf(self.nf, other.nf))

    def __invert__(self) -> "GroupElement":
        return GroupElement(self.model, self.model.inv_nf(self.nf))

    inverse = __invert__

    def __pow__(self, n: int) -> "GroupElement":
        return GroupElement(self.model, self.model.pow_nf(self.nf, n))

    def conj(self, h: "GroupElement") -> "GroupElement":
        """``h g h^-1``."""
        return h * self * ~h

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.model.key == other.model.key and self.nf == other.nf

    def __hash__(self):
        return hash((self.model.key, self.nf))

    def __len__(self):
        return len(self.nf)

    @property
    def is_identity(self) -> bool:
        return not self.nf

    @property
    def word(self) -> Tuple[int, ...]:
        """Normal form spelled as signed generator letters."""
        return self.model.nf_to_letters(self.nf)

    def sort_key(self):
        """Shortlex key: normal-form length, then lexicographic."""
        return (len(self.nf), self.model.letter_key_seq(self.nf))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return self.model.format_nf(self.nf)

    def __repr__(self):
        return f"<{self.model.key}: {self}>"


_TOKEN = re.compile(r"\s*([A-Za-z])(?:\^\(?(-?\d+)\)?)?")


class _WordModel:
    """Shared plumbing: parsing, formatting and shortlex enumeration."""

    key: str
    names: Tuple[str, ...]
    delta = 0
    K1 = 1
    K2 = 1
    is_tree = True
    approximate = False
    certificate_capable = True

    def __repr__(self):
        return f"{type(self).__name__}({self.key})"

    # -- elements -------------------------------------------------------
    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, ())

    @property
    def generators(self) -> List[GroupElement]:
        return [self.reduce((i + 1,)) for i in range(len(self.names))]

    def reduce(self, word: Sequence[int]) -> GroupElement:
        """Normal form of a raw word of signed letters ``+-1 .. +-n``."""
        nf: tuple = ()
        for letter in word:
            if not isinstance(letter, (int, np.integer)) or letter == 0 or abs(letter) > len(self.names):
                raise DomainError(f"letter {letter!r} not in the alphabet of {self.key}")
            nf = self.mul_nf(nf, self._letter_nf(int(letter)))
        return GroupElement(self, nf)

    def parse(self, text) -> GroupElement:
        """Parse ``"a b^-1 A"``, ``"s t^2"`` or ``"1"``; uppercase letters are inverses."""
        if isinstance(text, GroupElement):
            return text
        if isinstance(text, (list, tuple)):
            return self.reduce(text)
        text = str(text).replace("*", " ").replace(".", " ").strip()
        if text in ("", "1", "e"):
            return self.identity
        letters: List[int] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise DomainError(f"cannot parse {text!r} at position {pos}")
            name, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
            sign = 1
            if name not in self.names:
                if name.lower() in self.names and name.upper() == name:
                    sign = -1
                    name = name.lower()
                else:
                    raise DomainError(f"unknown generator {name!r} for {self.key}")
            idx = self.names.index(name) + 1
            letters.extend([sign * idx if exp > 0 else -sign * idx] * abs(exp))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        return self.reduce(letters)

    def pow_nf(self, nf, n: int):
        if n < 0:
            nf, n = self.inv_nf(nf), -n
        out: tuple = ()
        base = nf
        while n:
            if n & 1:
                out = self.mul_nf(out, base)
            base = self.mul_nf(base, base)
            n >>= 1
        return out

    def elements(self, max_length: int, min_length: int = 0) -> Iterator[GroupElement]:
        """All elements with ``min_length <= len <= max_length`` in shortlex order."""
        for n in range(min_length, max_length + 1):
            for nf in self._nfs_of_length(n):
                yield GroupElement(self, nf)

    def count_elements(self, length: int) -> int:
        return sum(1 for _ in self._nfs_of_length(length))

    def random_element(self, length: int, seed) -> GroupElement:
        """Uniform-ish element of normal-form length exactly ``length``; deterministic in ``seed``."""
        if length < 0:
            raise DomainError("length must be >= 0")
        rng = random.Random(derive_seed("random_element", self.key, length, seed))
        return GroupElement(self, self._random_nf(length, rng))

    def letter_key_seq(self, seq) -> tuple:
        return tuple(self._lkey(x) for x in seq)

    # -- matrices -------------------------------------------------------
    @property
    def has_matrices(self) -> bool:
        return self.matrix_images is not None

    def matrix_eval(self, g: GroupElement) -> Matrix:
        if self.matrix_images is None:
            raise UnsupportedModel(f"{self.key} has no exact matrix images")
        if g.model.key != self.key:
            raise ModelMismatch(f"{g.model.key} vs {self.key}")
        out = IDENTITY
        for letter in self.nf_to_letters(g.nf):
            out = mat_mul(out, self._letter_matrix(letter))
        return projective(out)

    def _letter_matrix(self, letter: int) -> Matrix:
        m = self.matrix_images[abs(letter) - 1]
        return m if letter > 0 else mat_inv(m)

    # -- tree geometry --------------------------------------------------
    @property
    def basepoint(self) -> Site:
        return Site(self, ())

    def site(self, address) -> Site:
        address = tuple(address)
        if not self.valid_address(address):
            raise DomainError(f"{address} is not a vertex address of {self.key}")
        return Site(self, address)

    def act(self, g: GroupElement, x: Site) -> Site:
        if g.model.key != self.key or x.model.key != self.key:
            raise ModelMismatch(f"act: {g.model.key} on {x.model.key} in {self.key}")
        return Site(self, self.act_address(g.nf, x.coords))

    def distance_addr(self, a, b) -> int:
        n = 0
        for u, v in zip(a, b):
            if u != v:
                break
            n += 1
        return len(a) + len(b) - 2 * n

    def valid_address(self, addr) -> bool:
        for i, label in enumerate(addr):
            if label not in self.children(addr[:i]):
                return False
        return True

    def ball(self, radius: int) -> List[Site]:
        """All vertices within ``radius`` of the basepoint, in shortlex order."""
        out = [()]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for addr in frontier:
                for c in self.children(addr):
                    nxt.append(addr + (c,))
            out.extend(nxt)
            frontier = nxt
        return [Site(self, a) for a in out]

    def sphere_prefixes(self, depth: int) -> List[Tuple]:
        """All addresses of length exactly ``depth`` (one per depth-d cylinder)."""
        level = [()]
        for _ in range(depth):
            level = [a + (c,) for a in level for c in self.children(a)]
        return level

    def cylinders(self, depth: int) -> List[Cylinder]:
        return [Cylinder(p) for p in self.sphere_prefixes(depth)]

    def end(self, prefix, period) -> EndPoint:
        prefix, period = tuple(prefix), tuple(period)
        if not period or not self.valid_address(prefix + period + period + period):
            raise DomainError(f"({prefix}, {period}) is not a ray of {self.key}")
        return EndPoint.make(prefix, period)

    def act_end(self, g: GroupElement, xi: EndPoint) -> EndPoint:
        """Image of an end under ``g``; the tail of the ray is preserved."""
        if g.is_identity:
            return xi
        reach = self.distance_addr((), self.act_address(g.nf, ())) + 2 * len(g.nf) + 4
        k = max(2, -(-(reach - len(xi.prefix)) // len(xi.period)) + 2)
        image = self.act_address(g.nf, xi.prefix + xi.period * k)
        return EndPoint.make(image, xi.period)


class FreeGroup(_WordModel):
    """Free group of rank ``r`` acting on its Cayley tree (letters ``+-1 .. +-r``)."""

    kind = "free_group"

    def __init__(self, rank: int = 2, matrix_images: Optional[Sequence[Matrix]] = None):
        if not 1 <= rank <= 26:
            raise DomainError("rank must be in 1..26")
        self.rank = rank
        self.names = tuple("abcdefghijklmnopqrstuvwxyz"[:rank])
        self.key = f"F{rank}"
        self.matrix_images = None
        if matrix_images is not None:
            images = tuple(_as_matrix(m) for m in matrix_images)
            if len(images) != rank:
                raise DomainError("need one matrix image per generator")
            for m in images:
                mat_inv(m)
            self.matrix_images = images
            self.key = f"F{rank}[{images}]"

    def describe(self) -> dict:
        out = {"kind": self.kind, "rank": self.rank}
        if self.matrix_images is not None:
            out["matrix_images"] = [list(map(list, m)) for m in self.matrix_images]
        return out

    @staticmethod
    def _lkey(x):
        return (abs(x), x < 0)

    def _letter_nf(self, letter: int):
        return (letter,)

    def mul_nf(self, x, y):
        i = 0
        n = min(len(x), len(y))
        while i < n and x[-1 - i] == -y[i]:
            i += 1
        return x[: len(x) - i] + y[i:]

    def inv_nf(self, x):
        return tuple(-v for v in reversed(x))

    def nf_to_letters(self, nf):
        return tuple(nf)

    def format_nf(self, nf) -> str:
        if not nf:
            return "1"
        return "".join(self.names[v - 1] if v > 0 else self.names[-v - 1].upper() for v in nf)

    format_address = format_nf

    def _letters(self):
        out = []
        for i in range(1, self.rank + 1):
            out += [i, -i]
        return out

    def _nfs_of_length(self, n: int):
        letters = self._letters()

        def rec(prefix, k):
            if k == 0:
                yield prefix
                return
            for v in letters:
                if prefix and v == -prefix[-1]:
                    continue
                yield from rec(prefix + (v,), k - 1)

        yield from rec((), n)

    def _random_nf(self, length, rng):
        letters = self._letters()
        out: List[int] = []
        for _ in range(length):
            choices = [v for v in letters if not out or v != -out[-1]]
            out.append(rng.choice(choices))
        return tuple(out)

    def children(self, addr):
        if not addr:
            return self._letters()
        return [v for v in self._letters() if v != -addr[-1]]

    def act_address(self, nf, addr):
        return self.mul_nf(nf, addr)


class FreeProduct(_WordModel):
    """``Z/p * Z/q`` acting on its Bass-Serre tree.

    Normal forms are alternating syllables ``(factor, exponent)`` with
    ``1 <= exponent < order``. Tree vertices are the cosets ``g<s>`` and
    ``g<t>``; the basepoint is the coset ``<s>``. A vertex address lists the
    exponents met along the path from ``<s>``: position ``i`` carries an
    exponent of factor ``i % 2``, only position 0 may be 0 (the step to ``<t>``).
    """

    kind = "free_product"

    def __init__(self, orders: Sequence[int] = (2, 3), matrix_images="default", names=("s", "t")):
        orders = tuple(int(o) for o in orders)
        if len(orders) != 2:
            raise DomainError("free-product models take exactly two finite cyclic factors")
        if min(orders) < 2:
            raise DomainError("factor orders must be >= 2")
        self.orders = orders
        self.names = tuple(names)
        self.key = f"Z{orders[0]}*Z{orders[1]}"
        if matrix_images == "default":
            matrix_images = PSL2Z_IMAGES if orders == (2, 3) else None
        self.matrix_images = None
        if matrix_images is not None:
            images = tuple(_as_matrix(m) for m in matrix_images)
            for m, o in zip(images, orders):
                if projective(mat_pow(m, o)) != IDENTITY:
                    raise DomainError(f"matrix image {m} does not have order dividing {o}")
            self.matrix_images = images
            if images != PSL2Z_IMAGES:
                self.key = f"{self.key}[{images}]"

    def describe(self) -> dict:
        out = {"kind": self.kind, "orders": list(self.orders)}
        if self.matrix_images is not None:
            out["matrix_images"] = [list(map(list, m)) for m in self.matrix_images]
        return out

    @staticmethod
    def _lkey(x):
        return x

    def _letter_nf(self, letter: int):
        f = abs(letter) - 1
        e = 1 if letter > 0 else self.orders[f] - 1
        return ((f, e),)

    def mul_nf(self, x, y):
        out = list(x)
        for f, e in y:
            if out and out[-1][0] == f:
                e2 = (out.pop()[1] + e) % self.orders[f]
                if e2:
                    out.append((f, e2))
            else:
                out.append((f, e))
        return tuple(out)

    def inv_nf(self, x):
        return tuple((f, self.orders[f] - e) for f, e in reversed(x))

    def nf_to_letters(self, nf):
        return tuple(l for f, e in nf for l in [f + 1] * e)

    def format_nf(self, nf) -> str:
        if not nf:
            return "1"
        return " ".join(self.names[f] if e == 1 else f"{self.names[f]}^{e}" for f, e in nf)

    def format_address(self, addr) -> str:
        return "[" + ",".join(map(str, addr)) + "]"

    def _nfs_of_length(self, n: int):
        def rec(prefix, k):
            if k == 0:
                yield prefix
                return
            for f in (0, 1):
                if prefix and prefix[-1][0] == f:
                    continue
                for e in range(1, self.orders[f]):
                    yield from rec(prefix + ((f, e),), k - 1)

        yield from rec((), n)

    def _random_nf(self, length, rng):
        if not length:
            return ()
        f = rng.randrange(2)
        out = []
        for _ in range(length):
            out.append((f, rng.randrange(1, self.orders[f])))
            f = 1 - f
        return tuple(out)

    # -- Bass-Serre tree ---------------------------------------------
    def children(self, addr):
        f = len(addr) % 2
        lo = 0 if not addr else 1
        return list(range(lo, self.orders[f]))

    @staticmethod
    def address_to_coset(addr):
        """``(vertex type, shortest coset representative)`` of an address."""
        syl = tuple((i % 2, e) for i, e in enumerate(addr) if e)
        return len(addr) % 2, syl

    @staticmethod
    def coset_to_address(vtype, rep):
        if not rep:
            return () if vtype == 0 else (0,)
        exps = tuple(e for _, e in rep)
        return exps if rep[0][0] == 0 else (0,) + exps

    def act_address(self, nf, addr):
        vtype, rep = self.address_to_coset(addr)
        image = self.mul_nf(nf, rep)
        if image and image[-1][0] == vtype:
            image = image[:-1]
        return self.coset_to_address(vtype, image)

    def vertex_stabilizer(self, addr) -> List[GroupElement]:
        """All elements fixing the vertex at ``addr`` (a conjugate of a factor)."""
        vtype, rep = self.address_to_coset(addr)
        r = GroupElement(self, rep)
        return [
            r * GroupElement(self, ((vtype, e),) if e else ()) * ~r for e in range(self.orders[vtype])
        ]


class HalfPlane(_WordModel):
    """Upper half-plane with a group generated by real 2x2 matrices (demo only).

    Elements are freely reduced words in the generators, so this model does not
    know the relations of the generated group. Every quantity is floating point
    and flagged approximate; certificate paths refuse this model.

    ``delta`` is the thin-triangle constant ``ln(1 + sqrt 2)`` of the hyperbolic
    plane. The local-to-global constants ``(K1, K2)`` are conservative
    placeholders: local geodesics of length at least ``100 * delta`` are treated
    as global ``K2 = 2`` quasigeodesics. They are never used to certify anything.
    """

    kind = "half_plane"
    is_tree = False
    approximate = True
    certificate_capable = False

    def __init__(self, generators: Sequence[Sequence[Sequence[float]]]):
        self.gen_matrices = tuple(np.array(m, dtype=float) for m in generators)
        for m in self.gen_matrices:
            if m.shape != (2, 2) or abs(np.linalg.det(m) - 1.0) > 1e-9:
                raise DomainError("half-plane generators must be 2x2 with determinant 1")
        self.names = tuple("abcdefghijklmnopqrstuvwxyz"[: len(self.gen_matrices)])
        self.key = "H2" + repr(tuple(tuple(map(tuple, m.tolist())) for m in self.gen_matrices))
        self.delta = math.log(1 + math.sqrt(2))
        self.K1 = 100 * self.delta
        self.K2 = 2
        self.matrix_images = None
        self._free = FreeGroup(len(self.names))

    def describe(self) -> dict:
        return {"kind": self.kind, "generators": [m.tolist() for m in self.gen_matrices]}

    _lkey = staticmethod(FreeGroup._lkey)

    def _letter_nf(self, letter):
        return (letter,)

    def mul_nf(self, x, y):
        return self._free.mul_nf(x, y)

    def inv_nf(self, x):
        return self._free.inv_nf(x)

    def nf_to_letters(self, nf):
        return tuple(nf)

    def format_nf(self, nf):
        return self._free.format_nf(nf)

    def format_address(self, coords):
        return f"({coords[0]:.6g}, {coords[1]:.6g})"

    def _nfs_of_length(self, n):
        return self._free._nfs_of_length(n)

    def _random_nf(self, length, rng):
        return self._free._random_nf(length, rng)

    def float_matrix(self, g: GroupElement) -> np.ndarray:
        out = np.eye(2)
        for v in g.nf:
            m = self.gen_matrices[abs(v) - 1]
            out = out @ (m if v > 0 else np.linalg.inv(m))
        return out

    @property
    def basepoint(self) -> Site:
        return Site(self, (0.0, 1.0))

    def site(self, coords) -> Site:
        x, y = map(float, coords)
        if y <= 0:
            raise DomainError("half-plane points need y > 0")
        return Site(self, (x, y))

    def act(self, g, x):
        if g.model.key != self.key or x.model.key != self.key:
            raise ModelMismatch("act: model mismatch")
        m = self.float_matrix(g)
        z = complex(*x.coords)
        w = (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])
        return Site(self, (w.real, w.imag))

    @staticmethod
    def distance_coords(p, q) -> float:
        (x1, y1), (x2, y2) = p, q
        arg = 1.0 + ((x1 - x2) ** 2 + (y1 - y2) ** 2) / (2.0 * y1 * y2)
        return math.acosh(max(arg, 1.0))

    def point_at(self, r: float, theta: float) -> Site:
        """Point at hyperbolic distance ``r`` from ``i`` in direction ``theta``."""
        w = math.tanh(r / 2) * complex(math.cos(theta), math.sin(theta))
        z = 1j * (1 + w) / (1 - w)
        return Site(self, (z.real, z.imag))

    def sample_ball(self, radius: float, count: int, seed) -> List[Site]:
        rng = random.Random(derive_seed("sample_ball", self.key, radius, count, seed))
        return [self.point_at(radius * math.sqrt(rng.random()), 2 * math.pi * rng.random()) for _ in range(count)]

    def ball(self, radius):
        raise UnsupportedModel("the half-plane ball is not finite; use sample_ball")

    def children(self, addr):
        raise UnsupportedModel("the half-plane model has no tree structure")


def _as_matrix(m) -> Matrix:
    (a, b), (c, d) = m
    return ((int(a), int(b)), (int(c), int(d)))


# -- module-level operations ------------------------------------------------

def reduce(word, model) -> GroupElement:
    """Normal form of a raw word (signed letters or a string) in ``model``."""
    if isinstance(word, str):
        return model.parse(word)
    return model.reduce(word)


def act(g: GroupElement, x: Site) -> Site:
    return g.model.act(g, x)


def matrix_eval(g: GroupElement) -> Matrix:
    """Exact integer matrix of ``g`` modulo sign."""
    return g.model.matrix_eval(g)


def random_element(model, length: int, rng_seed) -> GroupElement:
    return model.random_element(length, rng_seed)


def model_from_description(desc: dict):
    """Build a model from a parsed model-description mapping."""
    kind = desc.get("kind")
    if kind == "free_group":
        return FreeGroup(int(desc.get("rank", 2)), desc.get("matrix_images"))
    if kind == "free_product":
        images = desc.get("matrix_images", "default")
        return FreeProduct(desc.get("orders", (2, 3)), images, tuple(desc.get("names", ("s", "t"))))
    if kind == "half_plane":
        return HalfPlane(desc["generators"])
    raise DomainError(f"unknown model kind {kind!r}")
