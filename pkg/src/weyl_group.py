"""
Finite Weyl group of a root datum

Elements act on the stored root list by permutation. Each element carries its
lexicographically smallest reduced word and its length.
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.errors import CapExceededError, DatumMismatchError, ParseError, RootDatumError
from src.root_datum import Cochar, RootDatum, RootVector


@dataclass(frozen=True)
class WeylElt:
    """Element of the finite Weyl group given by its action on root indices"""
    perm: Tuple[int, ...]
    word: Tuple[int, ...] = field(compare=False)
    length: int = field(compare=False)
    rank: int = field(compare=False)

    @property
    def num_positive(self) -> int:
        return len(self.perm) // 2

    @property
    def inverse_perm(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.perm)
        for k, image in enumerate(self.perm):
            inverse[image] = k
        return tuple(inverse)

    def is_identity(self) -> bool:
        return self.length == 0

    def __str__(self) -> str:
        return format_word(self.word)


class ParabolicRoots(NamedTuple):
    """Root indices of R_J, R_J^+ and R_J^-"""
    roots: Tuple[int, ...]
    positive: Tuple[int, ...]
    negative: Tuple[int, ...]


def format_word(word: Sequence[int]) -> str:
    """'s1 s2 s1'; the empty word is rendered as '1'"""
    if not word:
        return "1"
    return " ".join(f"s{i}" for i in word)


def parse_word(text: str) -> Tuple[int, ...]:
    """Accept 's1 s2', 's1s2', '1,2' or '1' for the identity"""
    text = text.strip()
    if text in ("", "1", "e", "id"):
        return ()
    if "s" in text:
        pieces = [piece for piece in text.replace(" ", "").split("s") if piece]
    else:
        pieces = [piece for piece in text.replace(" ", ",").split(",") if piece]
    try:
        return tuple(int(piece) for piece in pieces)
    except ValueError:
        raise ParseError("word", f"cannot read a reduced word from {text!r}")


def descent_set(w: WeylElt) -> frozenset:
    """L(w) = {i : l(s_i w) > l(w)}, i.e. the i with w^-1(alpha_i) positive"""
    n_pos = w.num_positive
    inverse = w.inverse_perm
    # simple roots occupy the first rank positions of the root list
    return frozenset(i for i in range(1, w.rank + 1) if inverse[i - 1] < n_pos)


class WeylGroup:
    """The Weyl group of a root datum with lazily enumerated element tables"""

    def __init__(self, datum: RootDatum, max_rank: Optional[int] = None):
        if max_rank is not None and datum.rank > max_rank:
            raise CapExceededError("rank", datum.rank, max_rank)
        self.datum = datum
        self.rank = datum.rank
        self.num_positive = datum.num_positive

        self._simple_perms: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(datum.root_index[datum.reflect_root(i, root)] for root in datum.roots)
            for i in datum.simple_indices
        )
        self._canonical: Dict[Tuple[int, ...], WeylElt] = {}
        self._elements: Optional[Tuple[WeylElt, ...]] = None
        self._y_matrices: Dict[Tuple[int, ...], np.ndarray] = {}
        self._parabolic: Dict[frozenset, ParabolicRoots] = {}

        self.identity = self._make(tuple(range(2 * self.num_positive)))

    # -- element construction ---------------------------------------------

    def _length_of(self, perm: Sequence[int]) -> int:
        return sum(1 for k in range(self.num_positive) if perm[k] >= self.num_positive)

    def _make(self, perm: Tuple[int, ...]) -> WeylElt:
        cached = self._canonical.get(perm)
        if cached is not None:
            return cached
        # peel the smallest left descent to reach the lexicographically least reduced word
        inverse = _invert(perm)
        descents = [i for i in range(1, self.rank + 1) if inverse[i - 1] >= self.num_positive]
        if descents:
            i = descents[0]
            simple = self._simple_perms[i - 1]
            shorter = self._make(tuple(simple[image] for image in perm))
            word = (i,) + shorter.word
        else:
            word = ()
        element = WeylElt(perm=perm, word=word, length=len(word), rank=self.rank)
        if element.length != self._length_of(perm):
            raise RootDatumError(f"Reduced word {word} disagrees with the inversion count")
        self._canonical[perm] = element
        return element

    def simple_reflection(self, i: int) -> WeylElt:
        if i not in self.datum.simple_indices:
            raise RootDatumError(f"No simple reflection s{i} in {self.datum.descriptor}")
        return self._make(self._simple_perms[i - 1])

    def multiply(self, a: WeylElt, b: WeylElt) -> WeylElt:
        self._check(a)
        self._check(b)
        return self._make(tuple(a.perm[image] for image in b.perm))

    def inverse(self, w: WeylElt) -> WeylElt:
        self._check(w)
        return self._make(w.inverse_perm)

    def from_word(self, word: Iterable[int]) -> WeylElt:
        element = self.identity
        for i in word:
            element = self.multiply(element, self.simple_reflection(i))
        return element

    def left_multiply_simple(self, i: int, w: WeylElt) -> WeylElt:
        simple = self._simple_perms[i - 1]
        return self._make(tuple(simple[image] for image in w.perm))

    def _check(self, w: WeylElt):
        if len(w.perm) != 2 * self.num_positive or w.rank != self.rank:
            raise DatumMismatchError(f"Weyl element of size {len(w.perm)} used with {self.datum.descriptor}")

    # -- descents ---------------------------------------------------------

    def descent_set(self, w: WeylElt) -> frozenset:
        """L(w) = {i : s_i w > w}"""
        self._check(w)
        inverse = w.inverse_perm
        return frozenset(i for i in self.datum.simple_indices if inverse[i - 1] < self.num_positive)

    def left_descents(self, w: WeylElt) -> frozenset:
        return frozenset(self.datum.simple_indices) - self.descent_set(w)

    def right_descents(self, w: WeylElt) -> frozenset:
        return frozenset(i for i in self.datum.simple_indices if w.perm[i - 1] >= self.num_positive)

    # -- enumeration ------------------------------------------------------

    @property
    def elements(self) -> Tuple[WeylElt, ...]:
        """All elements, breadth-first by length, ties broken by reduced word"""
        if self._elements is None:
            self._elements = self._enumerate()
        return self._elements

    def _enumerate(self) -> Tuple[WeylElt, ...]:
        logger.info(f"Enumerating the Weyl group of {self.datum.descriptor}")
        levels: List[List[WeylElt]] = [[self.identity]]
        seen = {self.identity.perm}
        while True:
            next_level: List[WeylElt] = []
            for w in levels[-1]:
                for i in self.datum.simple_indices:
                    simple = self._simple_perms[i - 1]
                    perm = tuple(simple[image] for image in w.perm)
                    if perm in seen or self._length_of(perm) != w.length + 1:
                        continue
                    seen.add(perm)
                    next_level.append(self._make(perm))
            if not next_level:
                break
            levels.append(sorted(next_level, key=lambda e: e.word))

        elements = tuple(element for level in levels for element in level)
        expected = self.order_formula()
        if len(elements) != expected:
            raise RootDatumError(f"Enumerated {len(elements)} elements, expected {expected}")
        logger.info(f"Weyl group of {self.datum.descriptor} has order {len(elements)}")
        return elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def order_formula(self, subset: Optional[Iterable[int]] = None) -> int:
        """
        |W_J| from the heights of the positive roots of R_J

        The number of exponents >= k equals the number of positive roots of height k,
        and the order is the product of (exponent + 1).
        """
        positive = self.parabolic_roots(subset).positive if subset is not None else range(self.num_positive)
        heights = Counter(self.datum.height(self.datum.roots[k]) for k in positive)
        order = 1
        for height, count in heights.items():
            order *= (height + 1) ** (count - heights.get(height + 1, 0))
        return order

    def by_length(self) -> Dict[int, List[WeylElt]]:
        table: Dict[int, List[WeylElt]] = {}
        for element in self.elements:
            table.setdefault(element.length, []).append(element)
        return table

    def longest_element(self, subset: Optional[Iterable[int]] = None) -> WeylElt:
        """Longest element of W (or of W_J), built by climbing ascents"""
        allowed = self.check_subset(self.datum.simple_indices if subset is None else subset)
        w = self.identity
        while True:
            ascents = sorted(self.descent_set(w) & allowed)
            if not ascents:
                break
            w = self.left_multiply_simple(ascents[0], w)
        expected = len(self.parabolic_roots(allowed).positive)
        if w.length != expected:
            raise RootDatumError(f"Longest element has length {w.length}, expected {expected}")
        return w

    def reflection(self, root_index: int) -> WeylElt:
        """s_beta(x) = x - <beta^vee, x> beta on the root list"""
        beta = self.datum.roots[root_index]
        coroot = self.datum.coroots[root_index]
        perm = []
        for root in self.datum.roots:
            shift = self.datum.coroot_pairing(coroot, root)
            perm.append(self.datum.root_index[tuple(r - shift * b for r, b in zip(root, beta))])
        return self._make(tuple(perm))

    # -- parabolic data ---------------------------------------------------

    def check_subset(self, subset: Iterable[int]) -> frozenset:
        subset = frozenset(int(i) for i in subset)
        if not subset <= frozenset(self.datum.simple_indices):
            raise RootDatumError(f"{sorted(subset)} is not a subset of I0 = {list(self.datum.simple_indices)}")
        return subset

    def parabolic_roots(self, subset: Iterable[int]) -> ParabolicRoots:
        """R_J as the W_J-orbit of the simple roots in J"""
        subset = self.check_subset(subset)
        if subset in self._parabolic:
            return self._parabolic[subset]
        orbit = set()
        frontier = [self.datum.simple_root_index(i) for i in subset]
        frontier += [self.datum.negate_index(k) for k in frontier]
        orbit.update(frontier)
        while frontier:
            k = frontier.pop()
            for i in subset:
                image = self._simple_perms[i - 1][k]
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        roots = tuple(sorted(orbit))
        parabolic = ParabolicRoots(
            roots=roots,
            positive=tuple(k for k in roots if k < self.num_positive),
            negative=tuple(k for k in roots if k >= self.num_positive),
        )
        self._parabolic[subset] = parabolic
        return parabolic

    def parabolic_subgroup(self, subset: Iterable[int]) -> Tuple[WeylElt, ...]:
        subset = self.check_subset(subset)
        return tuple(w for w in self.elements if set(w.word) <= subset)

    def min_coset_reps(self, subset: Iterable[int]) -> Tuple[WeylElt, ...]:
        """^J W: the w with J contained in L(w), minimal in their cosets W_J w"""
        subset = self.check_subset(subset)
        return tuple(w for w in self.elements if subset <= self.descent_set(w))

    # -- actions ----------------------------------------------------------

    def act_on_root_index(self, w: WeylElt, k: int) -> int:
        return w.perm[k]

    def act_on_root(self, w: WeylElt, x: Sequence[int]) -> RootVector:
        """w(x) for any x in X, applying the reduced word right to left"""
        image = tuple(int(c) for c in x)
        for i in reversed(w.word):
            image = self.datum.reflect_root(i, image)
        return image

    def cochar_matrix(self, w: WeylElt) -> np.ndarray:
        """M with w(y) = y @ M for y in Y-coordinates"""
        matrix = self._y_matrices.get(w.perm)
        if matrix is None:
            p, q = self.datum.pairing_matrix, self.datum.coroot_to_y
            matrix = np.eye(self.rank, dtype=np.int64)
            for i in reversed(w.word):
                reflection = np.eye(self.rank, dtype=np.int64) - np.outer(p[:, i - 1], q[i - 1])
                matrix = matrix @ reflection
            self._y_matrices[w.perm] = matrix
        return matrix

    def act_on_cochar(self, w: WeylElt, y: Sequence[int]) -> Cochar:
        y = self.datum.check_cochar(y)
        return tuple(int(c) for c in np.asarray(y, dtype=np.int64) @ self.cochar_matrix(w))

    def inversion_indices(self, w: WeylElt) -> Tuple[int, ...]:
        """Positive root indices k with w^-1(alpha_k) negative"""
        inverse = w.inverse_perm
        return tuple(k for k in range(self.num_positive) if inverse[k] >= self.num_positive)

    def dominant_conjugate(self, y: Sequence[int]) -> Tuple[WeylElt, Cochar]:
        """Minimal-length w with w(y) dominant, together with w(y)"""
        word, dominant = self.datum.dominant_conjugate_word(y)
        w = self.from_word(word)
        if w.length != len(word):
            raise RootDatumError(f"Dominant conjugation word {word} is not reduced")
        return w, dominant

    # -- export -----------------------------------------------------------

    def to_dict(self) -> Dict:
        """Length-indexed element table"""
        return {
            "descriptor": self.datum.descriptor,
            "order": self.order,
            "longest_length": self.num_positive,
            "elements_by_length": {
                str(length): [format_word(w.word) for w in elements]
                for length, elements in self.by_length().items()
            },
        }


def _invert(perm: Sequence[int]) -> Tuple[int, ...]:
    inverse = [0] * len(perm)
    for k, image in enumerate(perm):
        inverse[image] = k
    return tuple(inverse)


@lru_cache(maxsize=64)
def weyl_group(datum: RootDatum) -> WeylGroup:
    """Shared group instance per datum"""
    return WeylGroup(datum)


def enumerate_weyl(datum: RootDatum, max_rank: Optional[int] = None) -> Tuple[WeylElt, ...]:
    if max_rank is not None and datum.rank > max_rank:
        raise CapExceededError("rank", datum.rank, max_rank)
    return weyl_group(datum).elements


def longest_element(datum: RootDatum) -> WeylElt:
    return weyl_group(datum).longest_element()


def min_coset_reps(datum: RootDatum, subset: Iterable[int]) -> Tuple[WeylElt, ...]:
    return weyl_group(datum).min_coset_reps(subset)


def parabolic_roots(datum: RootDatum, subset: Iterable[int]) -> ParabolicRoots:
    return weyl_group(datum).parabolic_roots(subset)


def dominant_conjugate(datum: RootDatum, y: Sequence[int]) -> Tuple[WeylElt, Cochar]:
    return weyl_group(datum).dominant_conjugate(y)
