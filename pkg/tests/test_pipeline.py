import unittest

from savcsp.algebra import is_fractional_polymorphism, is_polymorphism, majority, mjn, submodular
from savcsp.generators import Generator, LanguageShape, gen_min_uncut, parse_graph, xor_relation
from savcsp.model import Language, ext, minimum_and_optima, opt_relation
from savcsp.oracle import brute_force
from savcsp.pipeline import AuditConfig, Pipeline
from savcsp.utils import ResourceCapError, StructuralError

from .fixtures import (
    cut_edge,
    cut_language,
    empty_instance,
    random_language,
    unary_instance,
    xor_language,
    xor_triangle,
)


class TestOracle(unittest.TestCase):
    def test_triangle(self):
        result = brute_force(xor_triangle())
        self.assertEqual(result.value, ext(1))
        self.assertEqual(len(result.optima), 6)

    def test_unsatisfiable(self):
        result = brute_force(empty_instance())
        self.assertFalse(result.satisfiable)
        self.assertEqual(result.optima, ())

    def test_cap(self):
        with self.assertRaises(ResourceCapError):
            brute_force(xor_triangle(), 4)

    def test_opt_relation_holds_the_optima(self):
        generator = Generator()

        for seed in range(12):
            language = random_language(seed, 2 + seed % 2, p_inf=0.2)
            instance = generator.gen_instance(seed, language, 3, 4)
            oracle = brute_force(instance)
            best, optima = minimum_and_optima(instance, 1000)

            with self.subTest(seed=seed):
                self.assertEqual((best, tuple(optima)), (oracle.value, oracle.optima))
                self.assertEqual(set(opt_relation(instance).feasible), set(oracle.optima))


class TestGenerators(unittest.TestCase):
    def setUp(self):
        self.generator = Generator()

    def test_min_uncut_edges(self):
        instance = gen_min_uncut("cycle:5")
        self.assertEqual(instance.num_vars, 5)
        self.assertEqual(len(instance.constraints), 5)
        self.assertEqual(instance.language.relation("xor"), xor_relation())

    def test_graph_specifications(self):
        self.assertEqual(parse_graph("triangle").number_of_edges(), 3)
        self.assertEqual(parse_graph("0-1,1-2").number_of_nodes(), 3)

        with self.assertRaises(StructuralError):
            parse_graph("0-a")

    def test_self_loops_are_rejected(self):
        with self.assertRaises(StructuralError):
            gen_min_uncut("0-0,0-1")

    def test_improved_languages(self):
        language = self.generator.gen_improved(11, submodular(2), LanguageShape((1, 2, 2)))
        self.assertEqual(language.names, ("r0", "r1", "r2"))
        self.assertTrue(is_fractional_polymorphism(submodular(2), language))

    def test_seeds_are_reproducible(self):
        first = self.generator.gen_improved(5, mjn(2), LanguageShape((2,), p_inf=0.2))
        self.assertEqual(first, self.generator.gen_improved(5, mjn(2), LanguageShape((2,), p_inf=0.2)))

    def test_submodular_instances(self):
        language, instance = self.generator.gen_submodular(2, n=4, count=3)
        self.assertEqual(len(instance.constraints), 3)
        self.assertTrue(is_fractional_polymorphism(submodular(2), language))

    def test_majority_closed(self):
        language = self.generator.gen_majority_closed(4, domain_size=3, count=2)

        for rel in language:
            self.assertTrue(is_polymorphism(majority(3), rel))

    def test_random_instance(self):
        instance = self.generator.gen_instance(0, cut_language(), n=4, count=6)
        self.assertEqual(len(instance.constraints), 6)
        self.assertTrue(all(len(set(c.scope)) == 2 for c in instance.constraints))

    def test_rejection_cap(self):
        generator = Generator(max_rejections=1)
        shape = LanguageShape((2,), low=0, high=100)

        with self.assertRaises(ResourceCapError):
            for seed in range(50):
                generator.gen_improved(seed, submodular(2), shape)


class TestSolve(unittest.TestCase):
    def setUp(self):
        self.pipeline = Pipeline()

    def test_triangle_is_relaxation_only(self):
        result = self.pipeline.solve_value(xor_triangle())
        self.assertEqual(result.value, ext(1))
        self.assertEqual(result.status, "relaxation-only")

    def test_submodular_is_exact(self):
        _, instance = Generator().gen_submodular(3, n=4, count=4)
        result = self.pipeline.solve_value(instance)
        self.assertEqual(result.status, "exact-if-BWC")
        self.assertEqual(result.value, brute_force(instance).value)

    def test_unsatisfiable(self):
        self.assertEqual(self.pipeline.solve_value(empty_instance()).status, "unsatisfiable")

    def test_assignment_of_cut_edge(self):
        found = self.pipeline.solve_assignment(cut_edge())
        self.assertEqual(found.assignment, (0, 0))
        self.assertEqual(found.value, ext(0))
        self.assertTrue(found.slackness)
        self.assertLessEqual(found.lp_solves, 1 + 2 * 2)

    def test_assignment_of_unary(self):
        self.assertEqual(self.pipeline.solve_assignment(unary_instance()).assignment, (0,))

    def test_assignment_matches_value(self):
        _, instance = Generator().gen_submodular(8, n=4, count=4)
        found = self.pipeline.solve_assignment(instance)
        self.assertEqual(instance.evaluate(found.assignment), self.pipeline.solve_value(instance).value)

    def test_assignment_needs_exactness(self):
        with self.assertRaises(StructuralError):
            self.pipeline.solve_assignment(xor_triangle())

        with self.assertRaises(StructuralError):
            self.pipeline.solve_assignment(empty_instance())

    def test_forced_assignment_on_triangle(self):
        found = self.pipeline.solve_assignment(xor_triangle(), force=True)
        self.assertEqual(found.value, ext(1))

    def test_exact_families_match_the_oracle(self):
        generator = Generator()
        families = [
            (generator.gen_improved(6, submodular(2), LanguageShape((1, 2, 2))), 25, 5),
            (generator.gen_improved(4, mjn(2), LanguageShape((2, 2))), 15, 4),
            (generator.gen_majority_closed(3, domain_size=2, arity=2, count=2), 15, 4),
        ]

        for f, (language, samples, count) in enumerate(families):
            for seed in range(samples):
                instance = generator.gen_instance(seed, language, 4, count)
                oracle = brute_force(instance)
                result = self.pipeline.solve_value(instance)

                with self.subTest(family=f, seed=seed):
                    self.assertEqual(result.value, oracle.value)

                    if not oracle.satisfiable:
                        self.assertEqual(result.status, "unsatisfiable")
                        continue

                    self.assertEqual(result.status, "exact-if-BWC")
                    found = self.pipeline.solve_assignment(instance)
                    self.assertEqual(instance.evaluate(found.assignment), oracle.value)
                    self.assertIn(found.assignment, oracle.optima)
                    self.assertLessEqual(found.lp_solves, 1 + instance.num_vars * instance.domain_size)
                    self.assertTrue(found.slackness)


class TestWidthAudit(unittest.TestCase):
    def setUp(self):
        self.pipeline = Pipeline()

    def test_cut_has_no_gaps(self):
        report = self.pipeline.width_audit(cut_language(), AuditConfig(seed=1, samples=10, n=4, count=4))
        self.assertEqual(len(report.rows), 10)
        self.assertEqual(report.gaps, [])
        self.assertTrue(report.verdict.is_yes)

    def test_cycles(self):
        cycles = [gen_min_uncut(f"cycle:{n}") for n in range(3, 6)]
        report = self.pipeline.width_audit(xor_language(), instances=cycles)
        self.assertEqual(len(report.rows), 3)

        for row in report.rows:
            self.assertLessEqual(row.sa_value, row.oracle_value)

    def test_csv(self):
        report = self.pipeline.width_audit(cut_language(), AuditConfig(samples=2))
        lines = report.to_csv().splitlines()
        self.assertEqual(lines[0], "instance_id,oracle_value,sa_value,gap")
        self.assertEqual(len(lines), 3)
        self.assertTrue(report.to_csv(timings=True).splitlines()[0].endswith(",runtime"))

    def test_mixed_language(self):
        generator = Generator()
        finite = generator.gen_improved(3, mjn(2), LanguageShape((2,), prefix="f"))
        language = Language(2, [*finite, *generator.gen_majority_closed(2, count=1)])
        report = self.pipeline.width_audit(language, AuditConfig(seed=3, samples=5, n=3, count=3))
        self.assertEqual(report.matches, 5)


if __name__ == "__main__":
    unittest.main()
