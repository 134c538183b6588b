"""
Extended affine Weyl group W = Y x| W_fin

Elements are pairs (y, w) standing for the product of the translation y with the
finite Weyl element w. The affine simple reflections are s_1, ..., s_r together
with s_0 = t(theta^vee) s_theta, and the length-zero subgroup Omega is isomorphic
to Y/Y'.
"""

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.errors import CapExceededError, DatumMismatchError, ParseError, RootDatumError
from src.root_datum import Cochar, RootDatum
from src.weyl_group import WeylElt, WeylGroup, parse_word, weyl_group

DEFAULT_BFS_MAX_RADIUS = 14
DEFAULT_BFS_MAX_RANK = 2
COXETER_SEARCH_LIMIT = 6


@dataclass(frozen=True)
class AffineElt:
    """The element y.w of the extended affine Weyl group"""
    y: Cochar
    w: WeylElt

    def __str__(self) -> str:
        return format_affine(self)


@dataclass(frozen=True)
class AffineDecomp:
    """a = s_{word[0]} ... s_{word[-1]} . omega with omega of length zero"""
    word: Tuple[int, ...]
    omega_index: int
    omega: AffineElt

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        letters = " ".join(f"s{i}" for i in self.word) if self.word else "1"
        return f"{letters} | omega={self.omega_index}"


def format_affine(a: AffineElt) -> str:
    """'y=[1,0] w=s1s2'"""
    y = ",".join(str(c) for c in a.y)
    w = "".join(f"s{i}" for i in a.w.word) or "1"
    return f"y=[{y}] w={w}"


_AFFINE_PATTERN = re.compile(r"^\s*y\s*=\s*\[([^\]]*)\]\s*(?:w\s*=\s*(\S+))?\s*$")


class AffineWeylGroup:
    """Multiplication, Iwahori-Matsumoto length and Omega data for one root datum"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.weyl: WeylGroup = weyl_group(datum)
        self.rank = datum.rank
        self.identity = AffineElt(tuple([0] * self.rank), self.weyl.identity)

        theta = datum.highest_root_index
        self.theta_coroot: Cochar = datum.coroot_in_y(theta)
        self.s_theta = self.weyl.reflection(theta)
        logger.debug(f"Affine Weyl group of {datum.descriptor}: s0 = t{self.theta_coroot} s_theta")

    # -- construction -----------------------------------------------------

    def element(self, y: Sequence[int], w: Optional[WeylElt] = None) -> AffineElt:
        y = self.datum.check_cochar(y)
        w = self.weyl.identity if w is None else w
        self.weyl._check(w)
        return AffineElt(y, w)

    def translation(self, y: Sequence[int]) -> AffineElt:
        return self.element(y)

    def finite(self, w: WeylElt) -> AffineElt:
        return self.element(self.identity.y, w)

    @property
    def simple_indices(self) -> Tuple[int, ...]:
        """Indices of S_aff; 0 is the affine node"""
        return tuple(range(self.rank + 1))

    def simple_reflection(self, i: int) -> AffineElt:
        if i == 0:
            return AffineElt(self.theta_coroot, self.s_theta)
        if not 1 <= i <= self.rank:
            raise RootDatumError(f"No affine simple reflection s{i} in {self.datum.descriptor}")
        return self.finite(self.weyl.simple_reflection(i))

    def from_word(self, word: Sequence[int], omega_index: int = 0) -> AffineElt:
        element = self.identity
        for i in word:
            element = self.multiply(element, self.simple_reflection(i))
        return self.multiply(element, self.omega_elements[omega_index])

    # -- group law --------------------------------------------------------

    def _check(self, a: AffineElt):
        if len(a.y) != self.rank or len(a.w.perm) != 2 * self.datum.num_positive or a.w.rank != self.rank:
            raise DatumMismatchError(f"Affine element {a} does not belong to {self.datum.descriptor}")

    def multiply(self, a: AffineElt, b: AffineElt) -> AffineElt:
        """(y1, w1)(y2, w2) = (y1 + w1(y2), w1 w2)"""
        self._check(a)
        self._check(b)
        moved = self.weyl.act_on_cochar(a.w, b.y)
        y = tuple(p + r for p, r in zip(a.y, moved))
        return AffineElt(y, self.weyl.multiply(a.w, b.w))

    def inverse(self, a: AffineElt) -> AffineElt:
        """(y, w)^-1 = (-w^-1(y), w^-1)"""
        self._check(a)
        w_inv = self.weyl.inverse(a.w)
        moved = self.weyl.act_on_cochar(w_inv, a.y)
        return AffineElt(tuple(-c for c in moved), w_inv)

    def conjugate(self, a: AffineElt, b: AffineElt) -> AffineElt:
        """a b a^-1"""
        return self.multiply(self.multiply(a, b), self.inverse(a))

    # -- length -----------------------------------------------------------

    def length(self, a: AffineElt) -> int:
        """
        Iwahori-Matsumoto length

        Sum over positive alpha of |<y, alpha>| when w^-1(alpha) > 0 and of
        |<y, alpha> - 1| when w^-1(alpha) < 0.
        """
        self._check(a)
        n_pos = self.datum.num_positive
        pairings = self.datum.root_pairings(a.y)[:n_pos]
        inverse = np.asarray(a.w.inverse_perm[:n_pos])
        shifted = np.where(inverse >= n_pos, pairings - 1, pairings)
        return int(np.abs(shifted).sum())

    # -- Omega ------------------------------------------------------------

    @cached_property
    def omega_elements(self) -> Tuple[AffineElt, ...]:
        """
        Length-zero elements, one per class of Y/Y'; the identity comes first

        The lattice part is a minuscule dominant coweight y in Y and the finite
        part inverts exactly the positive roots with <y, alpha> = 1.
        """
        theta = self.datum.roots[self.datum.highest_root_index]
        candidates: List[Cochar] = []
        for i in self.datum.simple_indices:
            if theta[i - 1] != 1:
                continue
            pairings = [int(j == i) for j in self.datum.simple_indices]
            y = self.datum.coweight_to_cochar(pairings)
            if y is not None:
                candidates.append(y)

        elements = [self.identity]
        for y in candidates:
            zeros = [i for i, p in enumerate(self.datum.simple_pairings(y), start=1) if p == 0]
            # w^-1 = w0 w0_J sends R+ \ R_J+ to negatives and R_J+ to positives
            w_inverse = self.weyl.multiply(self.weyl.longest_element(), self.weyl.longest_element(zeros))
            omega = AffineElt(y, self.weyl.inverse(w_inverse))
            if self.length(omega) != 0:
                raise RootDatumError(f"Omega candidate {omega} has length {self.length(omega)}")
            elements.append(omega)

        index = self.datum.coset_label
        labels = {index(element.y) for element in elements}
        if len(labels) != len(elements):
            raise RootDatumError("Omega elements do not represent distinct classes of Y/Y'")
        logger.debug(f"Omega for {self.datum.descriptor} has {len(elements)} elements")
        return tuple(elements)

    def omega_index(self, a: AffineElt) -> int:
        """Position of a length-zero element in omega_elements"""
        for k, omega in enumerate(self.omega_elements):
            if omega == a:
                return k
        raise RootDatumError(f"{a} is not a length-zero element")

    def omega_product_index(self, j: int, k: int) -> int:
        return self.omega_index(self.multiply(self.omega_elements[j], self.omega_elements[k]))

    def omega_permutation(self, k: int) -> Dict[int, int]:
        """s -> omega_k s omega_k^-1 on the affine simple reflections"""
        omega = self.omega_elements[k]
        generators = {self.simple_reflection(i): i for i in self.simple_indices}
        images = {}
        for i in self.simple_indices:
            image = self.conjugate(omega, self.simple_reflection(i))
            if image not in generators:
                raise RootDatumError(f"Conjugation by omega_{k} does not preserve S_aff")
            images[i] = generators[image]
        return images

    @cached_property
    def coxeter_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """Orders m_st of s t on S_aff; infinite order is stored as 0"""
        size = self.rank + 1
        matrix = [[1 if s == t else 0 for t in range(size)] for s in range(size)]
        for s in range(size):
            for t in range(s + 1, size):
                product = self.multiply(self.simple_reflection(s), self.simple_reflection(t))
                power = product
                order = 0
                for k in range(1, COXETER_SEARCH_LIMIT + 1):
                    if power == self.identity:
                        order = k
                        break
                    power = self.multiply(power, product)
                matrix[s][t] = matrix[t][s] = order
        return tuple(tuple(row) for row in matrix)

    # -- decomposition ----------------------------------------------------

    def decompose(self, a: AffineElt, prefer: str = "first") -> AffineDecomp:
        """
        Reduced word over S_aff times a length-zero element

        Greedily strips a left descent; prefer='first' takes the smallest
        descending generator and prefer='last' the largest, giving two reduced
        words for the same element.
        """
        if prefer not in ("first", "last"):
            raise ValueError(f"prefer must be 'first' or 'last', got {prefer!r}")
        order = self.simple_indices if prefer == "first" else tuple(reversed(self.simple_indices))
        current = a
        remaining = self.length(a)
        word: List[int] = []
        while remaining:
            for i in order:
                candidate = self.multiply(self.simple_reflection(i), current)
                candidate_length = self.length(candidate)
                if candidate_length < remaining:
                    word.append(i)
                    current, remaining = candidate, candidate_length
                    break
            else:
                raise RootDatumError(f"No descent found for {current} of length {remaining}")
        return AffineDecomp(tuple(word), self.omega_index(current), current)

    # -- brute-force oracle -------------------------------------------------

    def _check_bfs_caps(self, radius: int, max_radius: int, max_rank: int):
        if radius > max_radius:
            raise CapExceededError("BFS radius", radius, max_radius)
        if self.rank > max_rank:
            raise CapExceededError("BFS rank", self.rank, max_rank)

    def bfs_ball(self, radius: int, max_radius: int = DEFAULT_BFS_MAX_RADIUS,
                 max_rank: int = DEFAULT_BFS_MAX_RANK) -> Dict[AffineElt, int]:
        """Word distance from the identity for every element within radius"""
        self._check_bfs_caps(radius, max_radius, max_rank)
        generators = [self.simple_reflection(i) for i in self.simple_indices]
        omegas = list(self.omega_elements[1:])
        distance: Dict[AffineElt, int] = {self.identity: 0}
        queue = deque([self.identity])
        # 0-1 BFS: Omega edges cost nothing
        while queue:
            current = queue.popleft()
            d = distance[current]
            for omega in omegas:
                neighbour = self.multiply(current, omega)
                if distance.get(neighbour, radius + 1) > d:
                    distance[neighbour] = d
                    queue.appendleft(neighbour)
            if d == radius:
                continue
            for generator in generators:
                neighbour = self.multiply(current, generator)
                if distance.get(neighbour, radius + 1) > d + 1:
                    distance[neighbour] = d + 1
                    queue.append(neighbour)
        logger.debug(f"BFS ball of radius {radius} in {self.datum.descriptor}: {len(distance)} elements")
        return distance

    def length_bfs_oracle(self, a: AffineElt, radius: int, max_radius: int = DEFAULT_BFS_MAX_RADIUS,
                          max_rank: int = DEFAULT_BFS_MAX_RANK) -> Optional[int]:
        """Cayley-graph distance of a, or None when it exceeds radius"""
        self._check(a)
        return self.bfs_ball(radius, max_radius, max_rank).get(a)

    # -- sampling ---------------------------------------------------------

    def random_element(self, rng: np.random.Generator, max_word_length: int = 8) -> AffineElt:
        """Product of random affine simple reflections and a random Omega element"""
        length = int(rng.integers(0, max_word_length + 1))
        word = [int(i) for i in rng.integers(0, self.rank + 1, size=length)]
        omega = int(rng.integers(0, len(self.omega_elements)))
        return self.from_word(word, omega)

    # -- text -------------------------------------------------------------

    def parse(self, text: str) -> AffineElt:
        """Read 'y=[1,0] w=s1s2' or a decomposition such as 's0 s1 | omega=1'"""
        match = _AFFINE_PATTERN.match(text)
        if match:
            try:
                y = tuple(int(c) for c in match.group(1).split(",") if c.strip())
            except ValueError:
                raise ParseError("element", f"non-integer translation in {text!r}")
            if len(y) != self.rank:
                raise ParseError("element", f"translation {y} needs {self.rank} coordinates")
            w = self.weyl.from_word(parse_word(match.group(2) or "1"))
            return AffineElt(y, w)

        word_part, _, omega_part = text.partition("|")
        omega_index = 0
        if omega_part:
            key, _, value = omega_part.strip().partition("=")
            if key.strip() != "omega" or not value.strip().isdigit():
                raise ParseError("element", f"expected 'omega=<k>' in {text!r}")
            omega_index = int(value)
            if omega_index >= len(self.omega_elements):
                raise ParseError("element", f"omega={omega_index} but |Omega| = {len(self.omega_elements)}")
        word = parse_word(word_part)
        if any(i > self.rank for i in word):
            raise ParseError("element", f"generator index out of range in {text!r}")
        return self.from_word(word, omega_index)


@lru_cache(maxsize=64)
def affine_weyl_group(datum: RootDatum) -> AffineWeylGroup:
    return AffineWeylGroup(datum)


def aff_mul(a: AffineElt, b: AffineElt, datum: RootDatum) -> AffineElt:
    return affine_weyl_group(datum).multiply(a, b)


def im_length(a: AffineElt, datum: RootDatum) -> int:
    return affine_weyl_group(datum).length(a)


def decompose(a: AffineElt, datum: RootDatum, prefer: str = "first") -> AffineDecomp:
    return affine_weyl_group(datum).decompose(a, prefer)


def length_bfs_oracle(a: AffineElt, datum: RootDatum, radius: int) -> Optional[int]:
    return affine_weyl_group(datum).length_bfs_oracle(a, radius)
