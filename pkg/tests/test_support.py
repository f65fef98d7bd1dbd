import unittest

from fractions import Fraction
from unittest.mock import patch

from savcsp.algebra import (
    BoundedWidthTester,
    CoreFinder,
    Operation,
    SupportTester,
    add_constants,
    conservative_dichotomy,
    constant,
    gadget_multiplier,
    is_conservative_language,
    is_fractional_polymorphism,
    is_majority,
    is_polymorphism,
    is_wnu,
    majority,
    min_op,
    minority,
    opt_gadget,
    projection,
    restrict_instance,
    satisfies_bwc_identity,
    tau,
)
from savcsp.generators import Generator, cut_relation, disequality_relation, unary_relation, xor_relation
from savcsp.model import Constraint, Instance, Language, crisp_relation, ext, opt_relation
from savcsp.oracle import OracleResult, brute_force
from savcsp.utils import ExactnessError, StructuralError, make_rng

from .fixtures import cut_edge, cut_language, random_language, unary_instance, xor_language


class TestSupportMembership(unittest.TestCase):
    def setUp(self):
        self.tester = SupportTester()

    def test_min_in_support_of_cut(self):
        answer = self.tester.supp_membership(min_op(2), cut_language())
        self.assertTrue(answer.member)
        self.assertGreater(answer.witness_fpol.weight(min_op(2)), 0)
        self.assertTrue(is_fractional_polymorphism(answer.witness_fpol, cut_language()))

    def test_min_not_in_support_of_xor(self):
        answer = self.tester.supp_membership(min_op(2), xor_language())
        self.assertFalse(answer.member)
        witness = answer.witness_instance
        self.assertEqual(witness.num_vars, 4)

        optima = brute_force(witness).optima
        self.assertIn(projection(2, 2, 0).table, optima)
        self.assertIn(projection(2, 2, 1).table, optima)
        self.assertNotIn(min_op(2).table, optima)

    def test_projection_is_a_member(self):
        for k in (1, 2, 3):
            self.assertTrue(self.tester.in_support(projection(2, k, 0), xor_language()))

    def test_non_polymorphism_short_circuits(self):
        neq = Language(2, [disequality_relation()])
        answer = self.tester.supp_membership(min_op(2), neq)
        self.assertFalse(answer.member)
        self.assertEqual(answer.violation[0], "neq")
        self.assertFalse(answer.witness_instance.evaluate(min_op(2).table).is_finite)

    def test_domain_mismatch(self):
        with self.assertRaises(StructuralError):
            self.tester.supp_membership(min_op(3), cut_language())

    def test_support_operations_preserve_optimal_assignments(self):
        optimal = opt_relation(cut_edge())
        self.assertTrue(self.tester.in_support(min_op(2), cut_language()))
        for a in optimal.feasible:
            for b in optimal.feasible:
                self.assertIn(min_op(2).apply([a, b]), optimal.feasible_set)

    def test_tau_passes(self):
        self.assertTrue(is_fractional_polymorphism(tau(2, 3), cut_language()))

    def test_projections_must_be_globally_optimal_in_the_witness(self):
        lower = OracleResult(ext(-1), ())

        with patch("savcsp.algebra.support.brute_force", return_value=lower):
            with self.assertRaises(ExactnessError):
                SupportTester().supp_membership(min_op(2), xor_language())

    def test_answers_carry_their_evidence(self):
        binary = [Operation(2, 2, [(code >> i) & 1 for i in range(4)], f"b{code}") for code in range(16)]
        rng = make_rng(7)
        ternary = [Operation(3, 2, [int(bit) for bit in rng.integers(0, 2, size=8)], f"t{i}") for i in range(8)]
        ops = [*binary, majority(2), minority(2), projection(2, 3, 1), *ternary]

        for language in (cut_language(), xor_language()):
            for f in ops:
                answer = self.tester.supp_membership(f, language)

                with self.subTest(language=language.names, op=f.name):
                    if answer.member:
                        self.assertGreater(answer.witness_fpol.weight(f), 0)
                        self.assertTrue(is_fractional_polymorphism(answer.witness_fpol, language))
                        continue

                    witness = answer.witness_instance

                    if answer.violation is not None:
                        self.assertFalse(witness.evaluate(f.table).is_finite)
                        continue

                    optima = brute_force(witness).optima

                    for i in range(f.arity):
                        self.assertIn(projection(2, f.arity, i).table, optima)

                    self.assertNotIn(f.table, optima)
                    self.assertFalse(is_polymorphism(f, opt_relation(witness)))


class TestCores(unittest.TestCase):
    def setUp(self):
        self.finder = CoreFinder()

    def test_unary_collapses_to_zero(self):
        core = self.finder.core_of(unary_instance().language)
        self.assertEqual(core.labels, (0,))
        self.assertEqual(core.domain_size, 1)

    def test_cut_has_a_single_label_core(self):
        self.assertEqual(self.finder.core_of(cut_language()).domain_size, 1)

    def test_disequality_is_a_core(self):
        core = self.finder.core_of(Language(2, [disequality_relation()]))
        self.assertEqual(core.labels, (0, 1))
        self.assertEqual(core.chain, ())

    def test_unary_support_operations_of_core_are_bijections(self):
        core = self.finder.core_of(Language(2, [disequality_relation()]))

        for h in self.finder.polymorphisms(core.language, 1):
            if self.finder.in_support(h, core.language):
                self.assertTrue(h.is_bijective)

    def test_chain_records_constant_map(self):
        core = self.finder.core_of(unary_instance().language)
        h, labels, answer = core.chain[0]
        self.assertEqual(h, constant(2, 0))
        self.assertEqual(labels, (0,))
        self.assertTrue(answer.member)

    def test_restrict_instance_keeps_constraints(self):
        core = self.finder.core_of(unary_instance().language)
        restricted = restrict_instance(unary_instance(), core.language)
        self.assertEqual(restricted.evaluate((0,)), ext(0))

    def test_add_constants(self):
        extended = add_constants(cut_language())
        self.assertEqual(len(extended), 3)
        self.assertEqual(extended.relation("c_1").feasible, ((1,),))
        self.assertEqual(add_constants(extended), extended)
        self.assertEqual(len(add_constants(Language(3, [cut_relation(3)]))), 4)

    def test_core_keeps_the_minimum(self):
        generator = Generator()

        for seed in range(20):
            language = random_language(seed, 2 + seed % 2, high=3)
            instance = generator.gen_instance(seed, language, 4, 4)
            core = self.finder.core_of(language)

            with self.subTest(seed=seed):
                restricted = restrict_instance(instance, core.language)
                self.assertEqual(brute_force(restricted).value, brute_force(instance).value)


class TestBoundedWidth(unittest.TestCase):
    def setUp(self):
        self.tester = BoundedWidthTester()

    def test_cut_has_bounded_width(self):
        verdict = self.tester.bwc_verdict(cut_language())
        self.assertTrue(verdict.is_yes)
        self.assertTrue(is_wnu(verdict.ternary) and is_wnu(verdict.quaternary))
        self.assertTrue(satisfies_bwc_identity(verdict.ternary, verdict.quaternary))

    def test_xor_does_not(self):
        verdict = self.tester.bwc_verdict(xor_language())
        self.assertFalse(verdict.is_yes)
        self.assertEqual(verdict.core_labels, (0, 1))

    def test_majority_closed_language(self):
        language = add_constants(Language(2, [disequality_relation()]))
        verdict = self.tester.bwc_test(language)
        self.assertTrue(verdict.is_yes)
        self.assertTrue(satisfies_bwc_identity(verdict.ternary, verdict.quaternary))

    def test_majority_path_pads_the_quaternary(self):
        m = majority(2)
        language = add_constants(Language(2, [crisp_relation("imp", 2, 2, [(0, 0), (0, 1), (1, 1)])]))
        verdict = self.tester.bwc_test(language, candidates=[(m, m)])
        self.assertTrue(verdict.is_yes)
        self.assertNotEqual(verdict.path, "candidate")

    def test_single_label(self):
        verdict = self.tester.bwc_test(Language(1, []))
        self.assertEqual(verdict.path, "single-label")
        self.assertTrue(verdict.is_yes)

    def test_verdict_is_cached(self):
        first = self.tester.bwc_verdict(cut_language())
        self.assertIs(self.tester.bwc_verdict(cut_language()), first)


class TestGadgets(unittest.TestCase):
    def test_multiplier(self):
        self.assertEqual(gadget_multiplier(Fraction(5), Fraction(0), Fraction(1)), 6)
        self.assertEqual(gadget_multiplier(Fraction(5), Fraction(0), None), 1)

    def test_all_optimal_inner_instance(self):
        language = Language(2, [cut_relation(), crisp_relation("eq", 2, 2, [(0, 0), (1, 1)])])
        inner = Instance(language, 2, (Constraint("eq", (0, 1)),))
        outer_language = language.union([opt_relation(inner)])
        outer = Instance(outer_language, 2, (Constraint("opt", (0, 1)),))
        self.assertEqual(opt_gadget(language, inner, outer).multiplier, 1)

    def test_recovers_outer_minimum(self):
        language = Language(2, [cut_relation(), unary_relation([2, 1])])
        inner = Instance(language, 2, (Constraint("cut", (0, 1)),))
        outer_language = language.union([opt_relation(inner)])
        outer = Instance(
            outer_language, 3, (Constraint("opt", (0, 1)), Constraint("cut", (0, 2)), Constraint("u", (2,)))
        )
        gadget = opt_gadget(language, inner, outer)
        self.assertEqual(gadget.occurrences, 1)
        self.assertEqual(gadget.gap, Fraction(1))
        self.assertEqual(gadget.multiplier, 3)
        self.assertEqual(gadget.recover_value(brute_force(gadget.instance).value), brute_force(outer).value)

    def test_unsatisfiable_inner(self):
        language = Language(2, [crisp_relation("never", 2, 1, [])])
        inner = Instance(language, 1, (Constraint("never", (0,)),))

        with self.assertRaises(StructuralError):
            opt_gadget(language, inner, Instance(language, 1))

    def test_recovers_random_outer_minima(self):
        generator = Generator()
        language = Language(2, [cut_relation(), unary_relation([2, 1]), xor_relation()])

        for seed in range(24):
            inner = generator.gen_instance(seed, language, 2 + seed % 2, 2)
            outer_language = language.union([opt_relation(inner)])
            opts = [Constraint("opt", tuple(range(inner.num_vars)))]

            if seed % 2:
                opts.append(Constraint("opt", tuple(range(4 - inner.num_vars, 4))))

            extra = generator.gen_instance(seed + 100, language, 4, 2).constraints
            outer = Instance(outer_language, 4, (*opts, *extra))
            gadget = opt_gadget(language, inner, outer)

            with self.subTest(seed=seed):
                self.assertEqual(gadget.occurrences, len(opts))
                self.assertEqual(gadget.recover_value(brute_force(gadget.instance).value), brute_force(outer).value)


class TestConservative(unittest.TestCase):
    def unaries(self):
        return [unary_relation(bits, f"u{i}") for i, bits in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)])]

    def test_detects_conservative_languages(self):
        self.assertTrue(is_conservative_language(Language(2, [cut_relation(), *self.unaries()])))
        self.assertFalse(is_conservative_language(cut_language()))

    def test_cut_with_unaries_has_a_majority(self):
        report = conservative_dichotomy(SupportTester(), Language(2, [cut_relation(), *self.unaries()]))
        self.assertTrue(report.conservative)
        self.assertTrue(report.width_23)
        self.assertTrue(is_majority(report.majority))

    def test_not_conservative(self):
        self.assertFalse(conservative_dichotomy(SupportTester(), cut_language()).conservative)


if __name__ == "__main__":
    unittest.main()
