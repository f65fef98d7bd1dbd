import unittest

from fractions import Fraction

from savcsp.algebra import (
    FractionalOperation,
    Operation,
    clone_generate,
    clone_part,
    compose,
    compose_fractional,
    enumerate_polymorphisms,
    identity,
    is_fractional_polymorphism,
    is_majority,
    is_minority,
    is_polymorphism,
    is_stp,
    is_tournament,
    is_wnu,
    majority,
    majority_from_stp,
    max_op,
    min_op,
    minority,
    named_fractional,
    named_operation,
    projection,
    projections,
    satisfies_bwc_identity,
    submodular,
    tau,
    tournaments,
    wnu_operations,
)
from savcsp.algebra.bwc import chain_quaternary, chain_ternary, padded_quaternary
from savcsp.model import Language, crisp_relation
from savcsp.utils import ResourceCapError, StructuralError

from .fixtures import cut_language, xor_language


class TestOperations(unittest.TestCase):
    def test_apply_is_coordinatewise(self):
        self.assertEqual(min_op(2).apply([(0, 1, 1), (1, 1, 0)]), (0, 1, 0))

    def test_table_size(self):
        with self.assertRaises(StructuralError):
            Operation(2, 2, [0, 1, 1])

    def test_compose_projection(self):
        g1, g2 = min_op(2), max_op(2)
        self.assertEqual(compose(projection(2, 2, 0), [g1, g2]), g1)

    def test_compose_min_is_commutative(self):
        swapped = compose(min_op(2), [projection(2, 2, 1), projection(2, 2, 0)])
        self.assertEqual(swapped, min_op(2))

    def test_compose_minority_unary(self):
        p = projection(2, 1, 0)
        self.assertEqual(compose(minority(2), [p, p, p]), identity(2))

    def test_compose_arity_mismatch(self):
        with self.assertRaises(StructuralError):
            compose(min_op(2), [projection(2, 2, 0)])

    def test_compose_fractional(self):
        omega = compose_fractional(submodular(2), [tau(2, 2), tau(2, 2)])
        self.assertEqual(sum(w for _, w in omega.items()), Fraction(1))
        self.assertEqual(omega.weight(projection(2, 2, 0)), Fraction(1, 4))

    def test_fractional_weights_must_sum_to_one(self):
        with self.assertRaises(StructuralError):
            FractionalOperation({min_op(2): Fraction(1, 2)})

        with self.assertRaises(StructuralError):
            FractionalOperation({min_op(2): Fraction(1, 2), projection(2, 3, 0): Fraction(1, 2)})

    def test_repeated_operations_are_merged(self):
        omega = FractionalOperation([(min_op(2), Fraction(1, 2)), (min_op(2), Fraction(1, 2))])
        self.assertEqual(omega, FractionalOperation.point_mass(min_op(2)))

    def test_properties(self):
        self.assertTrue(is_majority(majority(3)))
        self.assertTrue(is_minority(minority(2)))
        self.assertTrue(is_tournament(min_op(3)))
        self.assertTrue(is_stp(min_op(2), max_op(2)))
        self.assertFalse(is_stp(min_op(2), min_op(2)))
        self.assertTrue(is_majority(majority_from_stp(min_op(2), max_op(2))))

    def test_tournament_count(self):
        # one winner per unordered pair of labels
        self.assertEqual(len(tournaments(3)), 8)
        self.assertTrue(all(is_tournament(t) for t in tournaments(3)))

    def test_library_names(self):
        self.assertEqual(named_operation("proj3_1", 2), projection(2, 3, 1))
        self.assertEqual(named_fractional("tau2", 2), tau(2, 2))
        self.assertEqual(named_fractional("submodular", 2), submodular(2))

        with self.assertRaises(StructuralError):
            named_operation("nope", 2)


class TestPolymorphisms(unittest.TestCase):
    def test_finite_valued_relation(self):
        xor = xor_language().relation("xor")
        self.assertTrue(is_polymorphism(min_op(2), xor))
        self.assertTrue(is_polymorphism(majority(2), xor))

    def test_min_breaks_disequality(self):
        neq = crisp_relation("neq", 2, 2, [(0, 1), (1, 0)])
        self.assertFalse(is_polymorphism(min_op(2), neq))

    def test_projections_everywhere(self):
        neq = crisp_relation("neq", 2, 2, [(0, 1), (1, 0)])

        for p in projections(2, 3):
            self.assertTrue(is_polymorphism(p, neq))

    def test_submodular_improves_cut(self):
        self.assertTrue(is_fractional_polymorphism(submodular(2), cut_language()))

    def test_submodular_fails_on_xor(self):
        check = is_fractional_polymorphism(submodular(2), xor_language())
        self.assertFalse(check)
        self.assertEqual(check.relation, "xor")
        self.assertEqual(set(check.rows), {(0, 1), (1, 0)})
        self.assertEqual(check.expected, Fraction(1))
        self.assertEqual(check.average, Fraction(0))

    def test_identity_point_mass(self):
        omega = FractionalOperation.point_mass(identity(2))

        for language in (cut_language(), xor_language()):
            self.assertTrue(is_fractional_polymorphism(omega, language))

    def test_binary_projection_point_mass_is_not_averaging(self):
        check = is_fractional_polymorphism(FractionalOperation.point_mass(projection(2, 2, 0)), cut_language())
        self.assertFalse(check)
        self.assertEqual(check.expected - check.average, Fraction(1, 2))

    def test_tau_improves_everything(self):
        for k in (1, 2, 3):
            self.assertTrue(is_fractional_polymorphism(tau(2, k), xor_language()))

    def test_enumerated_polymorphisms_preserve_every_relation(self):
        language = Language(2, [crisp_relation("neq", 2, 2, [(0, 1), (1, 0)])])
        pols = list(enumerate_polymorphisms(language, 2))
        self.assertTrue(all(is_polymorphism(f, language.relation("neq")) for f in pols))
        self.assertIn(projection(2, 2, 0), pols)
        self.assertNotIn(min_op(2), pols)

    def test_enumeration_cap(self):
        with self.assertRaises(ResourceCapError):
            list(enumerate_polymorphisms(cut_language(), 3, max_ops=16))


class TestClones(unittest.TestCase):
    def test_no_seeds(self):
        ops = clone_generate([], 2, 2)
        self.assertEqual(ops, {identity(2), *projections(2, 2)})

    def test_min_generates_ternary_min(self):
        ternary = Operation.from_function(3, 2, lambda x, y, z: min(min(x, y), z))
        self.assertIn(ternary, clone_generate([min_op(2)], 3, 2))

    def test_majority_generates_padded_quaternary(self):
        m = majority(2)
        self.assertIn(padded_quaternary(m), clone_part([m], 4, 2))

    def test_clone_part_is_closed(self):
        part = clone_part([min_op(2)], 2, 2)
        tables = {f.table for f in part}

        for f in part:
            for g in part:
                self.assertIn(compose(min_op(2), [f, g]).table, tables)

    def test_wnu(self):
        self.assertTrue(is_wnu(majority(2)))
        self.assertTrue(is_wnu(minority(2)))
        self.assertFalse(is_wnu(projection(2, 3, 0)))

    def test_boolean_ternary_wnus(self):
        ops = wnu_operations(2, 3)
        self.assertIn(majority(2), ops)
        self.assertIn(minority(2), ops)
        self.assertTrue(all(is_wnu(f) for f in ops))

    def test_chained_tournament_satisfies_identity(self):
        t = min_op(2)
        self.assertTrue(satisfies_bwc_identity(chain_ternary(t), chain_quaternary(t)))
        self.assertTrue(is_wnu(chain_ternary(t)) and is_wnu(chain_quaternary(t)))


if __name__ == "__main__":
    unittest.main()
