"""Orbifold signatures and discrete faithful holonomy representations.

A signature ``(g; m_1..m_k; b)`` with negative orbifold Euler characteristic
is realized as a Fuchsian group with the standard presentation

    a_1 b_1 a_1' b_1' ... a_g b_g a_g' b_g' x_1 ... x_k c_1 ... c_b = 1,
    x_j^{m_j} = 1,

on named generators ``a1,b1,...,x1,...,c1,...`` where each ``x_j`` is an
elliptic rotation by ``2 pi / m_j`` and each ``c_l`` is hyperbolic.

The construction is a fan-of-triangles polygon with a one-dimensional
bisection on the closing angle defect: cone generators are rotations by
twice the polygon angles, handles and boundary components occupy pairs of
right-angled slots whose order-two rotations multiply to hyperbolic
blocks, and handle blocks are filled in with an explicitly glued
one-holed-torus pair.  Small signatures with forced elliptic or purely
hyperbolic handle blocks are built by closed-form constructions instead.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import hypgeom
from .errors import (
    NonHyperbolic,
    NotHyperbolic,
    RootFindFailed,
    UnknownGenerator,
    UnsupportedSignature,
)
from .hypgeom import Isometry, rotation_about
from .tolerances import TOL


@dataclass(frozen=True)
class OrbifoldSignature:
    """Genus, cone orders, and boundary-component count."""

    genus: int
    cone_orders: tuple[int, ...]
    boundary: int = 0

    def __post_init__(self):
        if self.genus < 0 or self.boundary < 0:
            raise ValueError("genus and boundary count must be non-negative")
        if any(m < 2 for m in self.cone_orders):
            raise ValueError("cone orders must be >= 2")
        object.__setattr__(self, "cone_orders", tuple(self.cone_orders))

    @property
    def r(self) -> int:
        """Number of cone points plus boundary components."""
        return len(self.cone_orders) + self.boundary

    def generator_names(self) -> list[str]:
        names = []
        for i in range(self.genus):
            names.append(f"a{i + 1}")
            names.append(f"b{i + 1}")
        for j in range(len(self.cone_orders)):
            names.append(f"x{j + 1}")
        for l in range(self.boundary):
            names.append(f"c{l + 1}")
        return names

    def torsion_order(self, gen_index: int) -> int | None:
        """Torsion order of the 1-based generator index, None if infinite."""
        k = gen_index - 1 - 2 * self.genus
        if 0 <= k < len(self.cone_orders):
            return self.cone_orders[k]
        return None

    def text(self) -> str:
        cones = ",".join(str(m) for m in self.cone_orders) or "-"
        return f"g={self.genus} cones={cones} boundary={self.boundary}"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "cones": list(self.cone_orders),
            "boundary": self.boundary,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OrbifoldSignature":
        return cls(int(obj["genus"]), tuple(int(m) for m in obj.get("cones", [])),
                   int(obj.get("boundary", 0)))

    @classmethod
    def parse(cls, text: str) -> "OrbifoldSignature":
        """Parse either the text form ``g=1 cones=3 boundary=0`` or JSON."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_json(json.loads(text))
        fields = dict(re.findall(r"(\w+)=([\w,.-]+)", text))
        if "g" not in fields:
            raise ValueError(f"cannot parse signature {text!r}")
        cones_text = fields.get("cones", "-")
        cones = () if cones_text in ("-", "") else tuple(
            int(m) for m in cones_text.split(","))
        return cls(int(fields["g"]), cones, int(fields.get("boundary", 0)))

    def stable_hash(self) -> str:
        return hashlib.sha256(self.text().encode()).hexdigest()[:12]

    # word helpers tied to the generator naming -------------------------

    def parse_word(self, text: str) -> tuple[int, ...]:
        """Parse ``a1 b1 a1^-1 x1^2`` into signed generator letters."""
        names = self.generator_names()
        index = {n: i + 1 for i, n in enumerate(names)}
        letters: list[int] = []
        for token in text.split():
            m = re.fullmatch(r"([a-z]+\d+)(?:\^(-?\d+))?", token)
            if not m:
                raise UnknownGenerator(f"bad word token {token!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            if name not in index:
                raise UnknownGenerator(f"unknown generator {name!r}")
            g = index[name]
            letters.extend([g if exp > 0 else -g] * abs(exp))
        return tuple(letters)

    def format_word(self, word: Sequence[int]) -> str:
        """Inverse of :meth:`parse_word`, with exponents collapsed."""
        names = self.generator_names()
        out = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            g = word[i]
            name = names[abs(g) - 1]
            e = (j - i) if g > 0 else -(j - i)
            out.append(name if e == 1 else f"{name}^{e}")
            i = j
        return " ".join(out)


def euler_characteristic(sig: OrbifoldSignature) -> Fraction:
    """Exact orbifold Euler characteristic 2 - 2g - b - sum(1 - 1/m_j)."""
    chi = Fraction(2 - 2 * sig.genus - sig.boundary)
    for m in sig.cone_orders:
        chi -= Fraction(m - 1, m)
    return chi


def counting_exponent(sig: OrbifoldSignature) -> int:
    """Growth exponent 6g - 6 + 2r of mapping-class-group orbit counts."""
    return 6 * sig.genus - 6 + 2 * sig.r


def is_exceptional(sig: OrbifoldSignature) -> bool:
    """Signatures with finite mapping class group: genus 0 with r = 3."""
    return sig.genus == 0 and sig.r == 3


# ----------------------------------------------------------------------
# polygon machinery


def _side_from_angles(A: float, B: float, C: float) -> float:
    """Side opposite C of the hyperbolic triangle with angles A, B, C."""
    val = (math.cos(A) * math.cos(B) + math.cos(C)) / (math.sin(A) * math.sin(B))
    return math.acosh(val)


def _asa_third(A: float, B: float, d: float):
    """Third angle and the side opposite B, for angles A, B joined by side d."""
    cC = -math.cos(A) * math.cos(B) + math.sin(A) * math.sin(B) * math.cosh(d)
    if not -1.0 < cC < 1.0:
        return None
    C = math.acos(cC)
    k = math.sinh(d) / math.sin(C)
    return C, math.asinh(k * math.sin(B))


def _fan_chain(angles, splits, u1):
    """Lay out the triangle chain; return (closing defect, triangle data)."""
    n = len(angles)
    if u1 <= 0.0 or splits[0] + angles[1] + u1 >= math.pi or u1 >= angles[2]:
        return None
    d01 = _side_from_angles(splits[0], angles[1], u1)
    d = _side_from_angles(splits[0], u1, angles[1])
    tris = [(splits[0], angles[1], u1, d01, d)]
    u = u1
    for i in range(1, n - 2):
        B = angles[i + 1] - u
        if B <= 0.0:
            return None
        res = _asa_third(splits[i], B, d)
        if res is None:
            return None
        C, dnext = res
        tris.append((splits[i], B, C, d, dnext))
        if i == n - 3:
            return C - angles[n - 1], tris
        u, d = C, dnext
    return None


_SPLIT_RATIOS = (1.0, 0.8, 1.25, 0.6, 1.6, 0.45, 2.2, 0.3, 3.0, 0.2, 5.0)


def _fan_polygon(angles: list[float]) -> list[complex]:
    """Vertices of a convex polygon with the given interior angles.

    The polygon is triangulated as a fan from the first vertex; the angle
    splits there follow a geometric weight family and the first diagonal
    angle is found by bisection on the closing angle defect (to
    ``TOL.bisection``).  Raises RootFindFailed when no family closes.
    """
    n = len(angles)
    if n < 3:
        raise UnsupportedSignature("polygon needs at least 3 slots")
    if sum(angles) >= (n - 2) * math.pi - 1e-12:
        raise UnsupportedSignature(
            "angle sum admits no hyperbolic polygon for this signature")

    if n == 3:
        d01 = _side_from_angles(angles[0], angles[1], angles[2])
        d02 = _side_from_angles(angles[0], angles[2], angles[1])
        tris = [(angles[0], angles[1], angles[2], d01, d02)]
        return _fan_vertices(tris, n)

    tried = []
    for rho in _SPLIT_RATIOS:
        w = [rho ** i for i in range(n - 2)]
        total = sum(w)
        splits = [angles[0] * wi / total for wi in w]
        hi = min(math.pi - splits[0] - angles[1], angles[2])
        grid = [hi * (i + 0.5) / 256.0 for i in range(256)]
        prev = None
        bracket = None
        for u in grid:
            res = _fan_chain(angles, splits, u)
            if res is None:
                prev = None
                continue
            if prev is not None and prev[1] * res[0] <= 0.0:
                bracket = (prev[0], u)
                break
            prev = (u, res[0])
        tried.append((rho, bracket))
        if bracket is None:
            continue
        lo, hi_ = bracket
        flo = _fan_chain(angles, splits, lo)[0]
        best = None
        for _ in range(80):
            mid = 0.5 * (lo + hi_)
            res = _fan_chain(angles, splits, mid)
            if res is None:
                break
            if best is None or abs(res[0]) < abs(best[0]):
                best = (res[0], res[1])
            if flo * res[0] <= 0.0:
                hi_ = mid
            else:
                lo, flo = mid, res[0]
            if hi_ - lo <= TOL.bisection * 1e-3:
                break
        if best is None or abs(best[0]) > TOL.bisection:
            continue
        return _fan_vertices(best[1], n)
    raise RootFindFailed(
        f"fan polygon with angles {angles} did not close", brackets=tried)


def _fan_vertices(tris, n: int) -> list[complex]:
    """Place the chain in the plane, first vertex at i, counterclockwise."""
    v1 = complex(0.0, 1.0)
    verts = [v1, hypgeom.point_at(v1, 0.0, tris[0][3])]
    acc = 0.0
    for (s, _B, _C, _d, ddiag) in tris:
        acc += s
        verts.append(hypgeom.point_at(v1, acc, ddiag))
    return verts[:n]


# ----------------------------------------------------------------------
# handle blocks


def _symmetric_pair(trace_target: float) -> tuple[Isometry, Isometry]:
    """Translations of equal length along perpendicular axes through i.

    The common translation length is chosen so that tr[a, b] equals
    ``trace_target``; with cosh^2(len/2) = 1 + u the commutator trace is
    2 - 4 u^2, so any target <= -2 (hyperbolic or parabolic commutator)
    and any target in (-2, 2) (elliptic commutator) is reachable.
    """
    u = math.sqrt((2.0 - trace_target) / 4.0)
    c2 = 1.0 + u
    ch = math.sqrt(c2)
    sh = math.sqrt(c2 - 1.0)
    e = ch + sh
    a = Isometry(e, 0.0, 0.0, 1.0 / e)
    b = Isometry(ch, sh, sh, ch)
    return a, b


def _commutator(a: Isometry, b: Isometry) -> Isometry:
    return a * b * a.inv() * b.inv()


def _oriented_axis_map(g: Isometry) -> Isometry:
    """Isometry sending the oriented axis of g to (0 -> infinity), so that
    the conjugated g is a translation toward infinity."""
    ax = hypgeom.axis(g)
    m = hypgeom._mobius_two_points(ax.e1, ax.e2)
    gg = m * g * m.inv()
    # diagonal up to sign; attracting endpoint must be infinity
    if abs(gg.a) < abs(gg.d):
        flip = Isometry(0.0, 1.0, -1.0, 0.0)  # swaps 0 and infinity
        m = flip * m
    return m


def _handle_pair_for(block: Isometry, avoid: complex) -> tuple[Isometry, Isometry]:
    """Pair (a, b) with [a, b] = block, torus core on the far side from avoid.

    ``block`` must be hyperbolic; ``avoid`` is the polygon center that the
    glued one-holed torus must not overlap.
    """
    t = block.trace()
    target = -abs(t)
    A, B = _symmetric_pair(target)
    K = _commutator(A, B)
    mK = _oriented_axis_map(K)
    mH = _oriented_axis_map(block)
    conj = mH.inv() * mK
    a1, b1 = conj * A * conj.inv(), conj * B * conj.inv()
    if _commutator(a1, b1).distance_to(block) > 1e-9:
        raise RootFindFailed("handle block alignment failed")
    # side test in the straightened picture: core center vs polygon center
    core = mH(conj(complex(0.0, 1.0)))
    other = mH(avoid)
    if core.real * other.real > 0.0:
        # reflect the model pair across its commutator axis, keeping [a,b]
        axK = hypgeom.axis(K)
        foot = hypgeom.foot_on_geodesic(complex(0.0, 1.0), axK)
        r = rotation_about(foot, math.pi)
        A2, B2 = r * B * r.inv(), r * A * r.inv()
        if _commutator(A2, B2).distance_to(K) > 1e-9:
            raise RootFindFailed("handle reflection did not preserve the block")
        conj = mH.inv() * _oriented_axis_map(_commutator(A2, B2))
        a1, b1 = conj * A2 * conj.inv(), conj * B2 * conj.inv()
        if _commutator(a1, b1).distance_to(block) > 1e-9:
            raise RootFindFailed("handle block alignment failed after flip")
    return a1, b1


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FuchsianGroup:
    """A realized signature: named generator matrices plus diagnostics."""

    signature: OrbifoldSignature
    generators: tuple[Isometry, ...]
    relator_residual: float

    def __post_init__(self):
        names = self.signature.generator_names()
        if len(names) != len(self.generators):
            raise ValueError("generator count does not match signature")

    @property
    def names(self) -> list[str]:
        return self.signature.generator_names()

    def generator(self, name: str) -> Isometry:
        try:
            idx = self.names.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None
        return self.generators[idx]

    def relator_word(self) -> tuple[int, ...]:
        """The long relator as signed generator letters."""
        word: list[int] = []
        g = self.signature.genus
        for i in range(g):
            ai, bi = 2 * i + 1, 2 * i + 2
            word += [ai, bi, -ai, -bi]
        n0 = 2 * g
        word += [n0 + j + 1 for j in range(len(self.signature.cone_orders))]
        n1 = n0 + len(self.signature.cone_orders)
        word += [n1 + l + 1 for l in range(self.signature.boundary)]
        return tuple(word)

    def holonomy(self, word) -> Isometry:
        """Product of generator matrices over a word.

        ``word`` is either a whitespace word string (``a1 b1^-1``) or an
        iterable of signed 1-based generator indices.
        """
        if isinstance(word, str):
            word = self.signature.parse_word(word)
        n = len(self.generators)
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
        count = 0
        for letter in word:
            k = abs(letter)
            if not 1 <= k <= n:
                raise UnknownGenerator(f"letter {letter} out of range")
            g = self.generators[k - 1]
            if letter > 0:
                e, f, h, i2 = g.a, g.b, g.c, g.d
            else:
                e, f, h, i2 = g.d, -g.b, -g.c, g.a
            a, b, c, d = (a * e + b * h, a * f + b * i2,
                          c * e + d * h, c * f + d * i2)
            count += 1
            if count % 64 == 0:
                det = a * d - b * c
                if abs(det - 1.0) > TOL.det_drift:
                    s = math.sqrt(det)
                    a, b, c, d = a / s, b / s, c / s, d / s
        return Isometry(a, b, c, d)

    def word_trace(self, word) -> float:
        return self.holonomy(word).trace()

    def word_length(self, word) -> float:
        """Translation length of the holonomy, the geodesic length of the
        corresponding free homotopy class."""
        h = self.holonomy(word)
        t = abs(h.trace())
        if t <= 2.0 + TOL.trace_band:
            raise NotHyperbolic(f"word has |trace| = {t}")
        return 2.0 * math.acosh(t / 2.0)

    def cone_points(self) -> list[complex]:
        """Fixed points of the cone generators (one lift per cone point)."""
        pts = []
        n0 = 2 * self.signature.genus
        for j in range(len(self.signature.cone_orders)):
            pts.append(hypgeom.elliptic_fixed_point(self.generators[n0 + j]))
        return pts


def _relator_residual(sig: OrbifoldSignature, gens: list[Isometry]) -> float:
    prod = hypgeom.IDENTITY
    g = sig.genus
    for i in range(g):
        a, b = gens[2 * i], gens[2 * i + 1]
        prod = prod * a * b * a.inv() * b.inv()
    for j in range(len(sig.cone_orders)):
        prod = prod * gens[2 * g + j]
    for l in range(sig.boundary):
        prod = prod * gens[2 * g + len(sig.cone_orders) + l]
    return prod.distance_to(hypgeom.IDENTITY)


def build_group(sig: OrbifoldSignature) -> FuchsianGroup:
    """Realize a signature as an explicit Fuchsian group.

    Raises NonHyperbolic when chi >= 0, UnsupportedSignature when the
    polygon family cannot accommodate the signature, RootFindFailed when
    the closing bisection finds no bracket.
    """
    if euler_characteristic(sig) >= 0:
        raise NonHyperbolic(f"chi({sig.text()}) = {euler_characteristic(sig)} >= 0")
    g, k, b = sig.genus, len(sig.cone_orders), sig.boundary
    if 4 * g + 2 * k + 2 * b < 3:
        raise UnsupportedSignature("signature has too few sides")

    if g == 1 and k == 1 and b == 0:
        return _build_torus_with_cone(sig)
    if g == 2 and k == 0 and b == 0:
        return _build_genus_two(sig)

    # general fan: handle sockets, cones, boundary sockets, in relator order
    angles: list[float] = []
    angles += [math.pi / 2.0] * (2 * g)
    angles += [math.pi / m for m in sig.cone_orders]
    angles += [math.pi / 2.0] * (2 * b)
    if len(angles) < 3:
        raise UnsupportedSignature(
            f"signature {sig.text()} is outside the supported polygon family")
    verts = _fan_polygon(angles)

    blocks: list[Isometry] = [
        rotation_about(verts[i], 2.0 * angles[i]) for i in range(len(verts))
    ]
    center = sum(verts) / len(verts)
    center = complex(center.real, max(center.imag, 1e-6))

    gens: list[Isometry] = []
    for i in range(g):
        h = blocks[2 * i] * blocks[2 * i + 1]
        a, bb = _handle_pair_for(h, center)
        gens += [a, bb]
    for j in range(k):
        gens.append(blocks[2 * g + j])
    for l in range(b):
        gens.append(blocks[2 * g + k + 2 * l] * blocks[2 * g + k + 2 * l + 1])

    residual = _relator_residual(sig, gens)
    group = FuchsianGroup(sig, tuple(gens), residual)
    _validate_group(group)
    return group


def _build_torus_with_cone(sig: OrbifoldSignature) -> FuchsianGroup:
    """(1; m; 0): symmetric pair with elliptic commutator of angle 2 pi/m."""
    m = sig.cone_orders[0]
    a, b = _symmetric_pair(-2.0 * math.cos(math.pi / m))
    x = _commutator(a, b).inv()
    gens = [a, b, x]
    residual = _relator_residual(sig, gens)
    group = FuchsianGroup(sig, tuple(gens), residual)
    _validate_group(group)
    return group


_GENUS2_WAIST = 4.0 * math.acosh(2.0)  # separating geodesic length


def _build_genus_two(sig: OrbifoldSignature) -> FuchsianGroup:
    """(2; -; 0): two one-holed tori glued along a common waist geodesic."""
    a1, b1 = _symmetric_pair(-2.0 * math.cosh(_GENUS2_WAIST / 2.0))
    h = _commutator(a1, b1)
    axh = hypgeom.axis(h)
    q = hypgeom.foot_on_geodesic(complex(0.0, 1.0), axh)
    flip = rotation_about(q, math.pi)
    a2 = flip * a1 * flip.inv()
    b2 = flip * b1 * flip.inv()
    gens = [a1, b1, a2, b2]
    residual = _relator_residual(sig, gens)
    group = FuchsianGroup(sig, tuple(gens), residual)
    _validate_group(group)
    return group


def _validate_group(group: FuchsianGroup) -> None:
    sig = group.signature
    if group.relator_residual > TOL.relator_residual:
        raise RootFindFailed(
            f"relator residual {group.relator_residual:.3e} exceeds "
            f"{TOL.relator_residual}")
    n0 = 2 * sig.genus
    for j, m in enumerate(sig.cone_orders):
        x = group.generators[n0 + j]
        cl = hypgeom.classify(x)
        if cl.kind != "elliptic":
            raise RootFindFailed(f"x{j + 1} is {cl.kind}, not elliptic")
        if abs(cl.value - 2.0 * math.pi / m) > TOL.elliptic_angle:
            raise RootFindFailed(
                f"x{j + 1} angle {cl.value} is not 2 pi/{m}")
    for l in range(sig.boundary):
        c = group.generators[n0 + len(sig.cone_orders) + l]
        if hypgeom.classify(c).kind != "hyperbolic":
            raise RootFindFailed(f"c{l + 1} is not hyperbolic")


def holonomy(group: FuchsianGroup, word) -> Isometry:
    return group.holonomy(word)
