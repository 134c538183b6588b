"""
Verification of the character identities over finite grids

Each validate_* method returns a result dictionary with the checked count, issues,
warnings, counterexamples and a passed flag. A failed identity is recorded, never
raised.
"""

from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from loguru import logger

from config_manager import ApplicationConfig, get_config
from src.affine_weyl import affine_weyl_group
from src.errors import CalculatorError
from src.exact_ring import ONE, Q, LaurentPoly
from src.hecke_algebra import HeckeAlgebra, char_thm43, char_thm43_volume_form, direct_sum, steinberg_module, trivial_module
from src.root_datum import RootDatum, parse_datum_descriptor
from src.steinberg_character import UnipotentData, cvr_sign, steinberg_character
from src.utils import dominant_grid, types_up_to_rank
from src.weyl_group import weyl_group

MAX_COUNTEREXAMPLES = 20


class IdentityVerifier:
    """Runs the identity checks and collects their results"""

    def __init__(self, config: Optional[ApplicationConfig] = None):
        self.config = config or get_config()
        self.validation_results: Dict[str, Dict[str, Any]] = {}
        self.rng = np.random.default_rng(self.config.verification.seed)

    # -- helpers ------------------------------------------------------------

    def _new_result(self, suite: str) -> Dict[str, Any]:
        return {
            'suite': suite,
            'validation_timestamp': datetime.now(),
            'checked': 0,
            'issues': [],
            'warnings': [],
            'counterexamples': [],
            'passed': True,
        }

    def _fail(self, results: Dict[str, Any], message: str, example: Optional[Dict[str, Any]] = None):
        results['passed'] = False
        results['issues'].append(message)
        if example is not None and len(results['counterexamples']) < MAX_COUNTEREXAMPLES:
            results['counterexamples'].append(example)
        logger.warning(f"[{results['suite']}] {message}")

    def _finish(self, results: Dict[str, Any]) -> Dict[str, Any]:
        logger.info(
            f"{results['suite']} verification completed. Checked: {results['checked']}, "
            f"Issues: {len(results['issues'])}, Warnings: {len(results['warnings'])}"
        )
        self.validation_results[results['suite']] = results
        return results

    def _datum(self, label: str, lattice: str = "sc", max_rank: Optional[int] = None) -> RootDatum:
        cap = max_rank if max_rank is not None else self.config.limits.max_rank
        return parse_datum_descriptor(f"{label}:{lattice}", max_rank=cap)

    def _grid_data(self, types: Optional[Iterable[str]], lattices: Optional[Iterable[str]]) -> List[RootDatum]:
        types = list(types or self.config.verification.types)
        lattices = list(lattices or self.config.verification.lattices)
        return [self._datum(label, lattice) for label in types for lattice in lattices]

    # -- suites ---------------------------------------------------------------

    def validate_thm22(self, types=None, lattices=None, ymax: Optional[int] = None) -> Dict[str, Any]:
        """Alternating sum, x_w/c_w collapse and closed form agree on the dominant grid"""
        logger.info("Validating the three-way character agreement...")
        results = self._new_result('thm22')
        ymax = self.config.verification.ymax if ymax is None else ymax

        for datum in self._grid_data(types, lattices):
            evaluator = steinberg_character(datum)
            for y in dominant_grid(datum, ymax):
                results['checked'] += 1
                try:
                    alternating = evaluator.alternating_sum(y).value
                    collapsed = evaluator.xw_collapse(y).value
                    closed = evaluator.closed_form(y).value
                except CalculatorError as exc:
                    self._fail(results, f"{datum.descriptor} y={y}: {exc}", {'datum': datum.descriptor, 'y': list(y)})
                    continue
                if not alternating == collapsed == closed:
                    self._fail(results, f"{datum.descriptor} y={y}: values disagree", {
                        'datum': datum.descriptor, 'y': list(y),
                        'alternating_sum': str(alternating), 'xw_collapse': str(collapsed), 'closed_form': str(closed),
                    })

        return self._finish(results)

    def validate_cw(self, types=None) -> Dict[str, Any]:
        """c_w is 1 at the longest element and 0 elsewhere"""
        logger.info("Validating the c_w collapse...")
        results = self._new_result('cw')

        for label in types or self.config.verification.types:
            datum = self._datum(label)
            evaluator = steinberg_character(datum)
            group = weyl_group(datum)
            w0 = group.longest_element()
            for w in group.elements:
                results['checked'] += 1
                expected = 1 if w == w0 else 0
                value = evaluator.c_w(w)
                if value != expected:
                    self._fail(results, f"{label}: c_w({w}) = {value}, expected {expected}",
                               {'datum': label, 'w': str(w), 'c_w': value})

        return self._finish(results)

    def validate_length(self, types=None, radius: Optional[int] = None, lattices=None) -> Dict[str, Any]:
        """Iwahori-Matsumoto length against Cayley-graph distance"""
        logger.info("Validating the Iwahori-Matsumoto length...")
        results = self._new_result('length')
        limits = self.config.limits
        radius = self.config.verification.radius if radius is None else radius

        for label in types or self.config.verification.length_types:
            for lattice in lattices or self.config.verification.lattices:
                datum = self._datum(label, lattice)
                group = affine_weyl_group(datum)
                ball = group.bfs_ball(radius, limits.bfs_max_radius, limits.bfs_max_rank)
                for element, distance in ball.items():
                    results['checked'] += 1
                    length = group.length(element)
                    if length != distance:
                        self._fail(results, f"{datum.descriptor} {element}: formula {length}, BFS {distance}",
                                   {'datum': datum.descriptor, 'element': str(element), 'im_length': length, 'bfs': distance})
                    if group.length(group.inverse(element)) != length:
                        self._fail(results, f"{datum.descriptor} {element}: l(a^-1) != l(a)")

                for k, omega in enumerate(group.omega_elements):
                    results['checked'] += 1
                    if group.length(omega) != 0 or ball.get(omega) != 0:
                        self._fail(results, f"{datum.descriptor}: omega_{k} = {omega} is not of length zero")
                    try:
                        group.omega_permutation(k)
                    except CalculatorError as exc:
                        self._fail(results, f"{datum.descriptor}: {exc}")

                self._check_dominant_lengths(results, datum)

        return self._finish(results)

    def _check_dominant_lengths(self, results: Dict[str, Any], datum: RootDatum):
        group = affine_weyl_group(datum)
        wanted = self.config.verification.dominant_length_samples
        found = 0
        for _ in range(wanted * 200):
            if found == wanted:
                break
            y = tuple(int(c) for c in self.rng.integers(0, 7, size=datum.rank))
            if any(p <= 0 for p in datum.simple_pairings(y)):
                continue
            found += 1
            results['checked'] += 1
            expected = datum.pairing(y, datum.two_rho)
            length = group.length(group.translation(y))
            if length != expected:
                self._fail(results, f"{datum.descriptor} y={y}: l(y) = {length}, <y, 2rho> = {expected}")
        if found < wanted:
            results['warnings'].append(f"{datum.descriptor}: only {found} strictly dominant samples drawn")

    def validate_hecke(self, types=None, lattice: str = "adjoint") -> Dict[str, Any]:
        """Quadratic relation, length-additive products and associativity"""
        logger.info("Validating Hecke algebra relations...")
        results = self._new_result('hecke')
        settings = self.config.verification

        for label in types or settings.length_types[:2]:
            datum = self._datum(label, lattice)
            group = affine_weyl_group(datum)
            algebra = HeckeAlgebra(group)

            for i in group.simple_indices:
                results['checked'] += 1
                t = algebra.generator(i)
                expected = algebra.one().scale(Q) + t.scale(Q - 1)
                if t * t != expected:
                    self._fail(results, f"{label}: quadratic relation fails for s{i}")

            additive = 0
            for _ in range(settings.hecke_pair_samples * 20):
                if additive == settings.hecke_pair_samples:
                    break
                a, b = group.random_element(self.rng, 5), group.random_element(self.rng, 5)
                ab = group.multiply(a, b)
                product = algebra.basis(a) * algebra.basis(b)
                results['checked'] += 1
                if group.length(ab) == group.length(a) + group.length(b):
                    additive += 1
                    if product != algebra.basis(ab):
                        self._fail(results, f"{label}: T_a T_b != T_ab for a={a}, b={b}",
                                   {'datum': label, 'a': str(a), 'b': str(b)})
                elif product == algebra.basis(ab):
                    self._fail(results, f"{label}: T_a T_b = T_ab although lengths do not add, a={a}, b={b}")
            if additive < settings.hecke_pair_samples:
                results['warnings'].append(f"{label}: only {additive} length-additive pairs sampled")

            for _ in range(settings.hecke_triple_samples):
                results['checked'] += 1
                a, b, c = (algebra.basis(group.random_element(self.rng, 4)) for _ in range(3))
                if (a * b) * c != a * (b * c):
                    self._fail(results, f"{label}: associativity fails",
                               {'datum': label, 'a': str(a), 'b': str(b), 'c': str(c)})

        return self._finish(results)

    def validate_euler(self, max_rank: Optional[int] = None) -> Dict[str, Any]:
        """Signed facet count equals (-1)^rank for every type up to max_rank"""
        logger.info("Validating the facet Euler identity...")
        results = self._new_result('euler')
        max_rank = self.config.verification.euler_max_rank if max_rank is None else max_rank
        results['reports'] = []

        for label in types_up_to_rank(max_rank):
            datum = self._datum(label, max_rank=max(max_rank, self.config.limits.max_rank))
            report = steinberg_character(datum).facet_euler_check(cross_check=datum.rank <= 3)
            results['checked'] += 1
            results['reports'].append(report.to_dict())
            if not report.holds:
                self._fail(results, f"{label}: signed count {report.signed_count}, expected {report.expected}")
            if report.character_value != cvr_sign(datum.rank, datum.rank):
                self._fail(results, f"{label}: character value {report.character_value} != +1")

        return self._finish(results)

    def validate_unipotent(self, types=None, samples: Optional[int] = None) -> Dict[str, Any]:
        """Leading term |W| q^(sum n_alpha / 2) of the unipotent expansion"""
        logger.info("Validating the unipotent expansion...")
        results = self._new_result('unipotent')
        settings = self.config.verification
        samples = settings.unipotent_samples if samples is None else samples

        a1 = self._datum("A1")
        results['checked'] += 1
        value = steinberg_character(a1).unipotent_expansion(UnipotentData.constant(a1, 1))
        if value != LaurentPoly.q_power(1, 2) - ONE:
            self._fail(results, f"A1 with n = 1 gives {value}, expected 2*q - 1")

        for label in types or types_up_to_rank(settings.unipotent_max_rank):
            datum = self._datum(label)
            evaluator = steinberg_character(datum)
            order = weyl_group(datum).order
            for _ in range(samples):
                data = UnipotentData.random(datum, self.rng)
                results['checked'] += 1
                value = evaluator.unipotent_expansion(data)
                if value.leading() != (data.total, order):
                    self._fail(results, f"{label} n={list(data.n)}: leading term {value.leading()}",
                               {'datum': label, 'n': list(data.n), 'value': str(value)})

        return self._finish(results)

    def validate_cor34(self, types=None, lattices=None, ymax: Optional[int] = None) -> Dict[str, Any]:
        """Split-case parabolic value equals the closed form"""
        logger.info("Validating the split parabolic cross-check...")
        results = self._new_result('cor34')
        ymax = self.config.verification.ymax if ymax is None else ymax

        for datum in self._grid_data(types, lattices):
            evaluator = steinberg_character(datum)
            for y in dominant_grid(datum, ymax):
                results['checked'] += 1
                parabolic = evaluator.corollary34_split(y).value
                closed = evaluator.closed_form(y).value
                if parabolic != closed:
                    self._fail(results, f"{datum.descriptor} y={y}: {parabolic} != {closed}",
                               {'datum': datum.descriptor, 'y': list(y), 'cor34': str(parabolic), 'closed_form': str(closed)})

        return self._finish(results)

    def validate_thm43(self, types=None, lattices=None, ymax: Optional[int] = None) -> Dict[str, Any]:
        """Hecke trace formula against the closed form, the trivial module and dimensions"""
        logger.info("Validating the Iwahori-spherical trace formula...")
        results = self._new_result('thm43')
        ymax = self.config.verification.ymax if ymax is None else ymax

        for datum in self._grid_data(types, lattices):
            sign, trivial = steinberg_module(datum), trivial_module(datum)
            evaluator = steinberg_character(datum)
            zero = tuple([0] * datum.rank)
            for module in (sign, trivial, direct_sum(sign, trivial)):
                results['checked'] += 1
                if char_thm43(zero, module) != module.dim:
                    self._fail(results, f"{datum.descriptor}: value at y=0 for {module.name} is not {module.dim}")

            for y in dominant_grid(datum, ymax):
                results['checked'] += 1
                value = char_thm43(y, sign)
                closed = evaluator.closed_form(y).value
                if value != closed:
                    self._fail(results, f"{datum.descriptor} y={y}: sign module gives {value}, closed form {closed}",
                               {'datum': datum.descriptor, 'y': list(y), 'thm43': str(value), 'closed_form': str(closed)})
                if char_thm43(y, trivial) != ONE:
                    self._fail(results, f"{datum.descriptor} y={y}: trivial module is not constantly 1")
                if char_thm43_volume_form(y, sign) != value:
                    self._fail(results, f"{datum.descriptor} y={y}: volume form disagrees")

        return self._finish(results)

    # -- reporting ------------------------------------------------------------

    def generate_verification_report(self, validation_results: List[Dict[str, Any]]) -> str:
        """Generate a plain-text verification report"""
        report = []
        report.append("=" * 60)
        report.append("IDENTITY VERIFICATION REPORT")
        report.append("=" * 60)
        report.append(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        report.append("")

        total_issues = 0
        total_warnings = 0

        for result in validation_results:
            report.append(f"Suite: {result['suite'].upper()}")
            report.append("-" * 40)
            report.append(f"Checked: {result['checked']:,}")
            report.append(f"Status: {'PASSED' if result['passed'] else 'FAILED'}")

            if result['issues']:
                report.append(f"\nISSUES ({len(result['issues'])}):")
                for issue in result['issues'][:MAX_COUNTEREXAMPLES]:
                    report.append(f"  - {issue}")
                total_issues += len(result['issues'])

            if result['warnings']:
                report.append(f"\nWARNINGS ({len(result['warnings'])}):")
                for warning in result['warnings']:
                    report.append(f"  - {warning}")
                total_warnings += len(result['warnings'])

            report.append("")

        report.append("SUMMARY")
        report.append("-" * 40)
        report.append(f"Suites run: {len(validation_results)}")
        report.append(f"Total Issues: {total_issues}")
        report.append(f"Total Warnings: {total_warnings}")
        report.append(f"Overall Status: {'PASSED' if total_issues == 0 else 'FAILED'}")
        report.append("")

        return "\n".join(report)
