import unittest

from dataclasses import replace
from fractions import Fraction

from savcsp.lp import LpBuilder, SimplexSolver, verify_certificate
from savcsp.utils import ResourceCapError, StructuralError, make_rng


def one_variable(sense: str, row_sense: str, rhs) -> "LpBuilder":
    builder = LpBuilder("one")
    x = builder.add_variable("x")
    builder.add_row({x: 1}, row_sense, rhs, "r0")
    builder.set_objective({x: 1} if sense == "max" else {}, sense)

    return builder


def contradictory(seed: int) -> "LpBuilder":
    """A random program with two rows that cannot hold together, next to a few rows that can."""
    rng = make_rng(seed)
    builder = LpBuilder(f"contradiction{seed}")
    xs = [builder.add_variable(f"x{j}") for j in range(2 + seed % 4)]
    coefs = {x: Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4))) for x in xs}
    rhs, gap = Fraction(int(rng.integers(-5, 6))), Fraction(int(rng.integers(1, 4)), 2)

    if seed % 3 == 0:
        y = builder.add_variable("y", free=True)
        builder.add_row({**coefs, y: 1}, "<=", rhs)
        builder.add_row({**coefs, y: 1}, ">=", rhs + gap)
    elif seed % 3 == 1:
        builder.add_row(coefs, "=", -gap)
    else:
        builder.add_row(coefs, "<=", rhs)
        builder.add_row({x: 2 * c for x, c in coefs.items()}, ">=", 2 * rhs + gap)

    for x in xs[:2]:
        builder.add_row({x: 1}, "<=", int(rng.integers(5, 20)))

    builder.set_objective({x: 1 for x in xs}, "min")

    return builder


class TestSimplex(unittest.TestCase):
    def setUp(self):
        self.solver = SimplexSolver()

    def test_max_single_variable(self):
        lp = one_variable("max", "<=", 3).build()
        outcome = self.solver.solve_lp(lp)
        self.assertEqual(outcome.status, "optimal")
        self.assertEqual(outcome.primal, (Fraction(3),))
        self.assertEqual(outcome.objective, Fraction(3))
        self.assertEqual(outcome.dual, (Fraction(1),))
        self.assertTrue(verify_certificate(lp, outcome))

    def test_infeasible_with_farkas(self):
        lp = one_variable("min", "<=", -1).build()
        outcome = self.solver.solve_lp(lp)
        self.assertEqual(outcome.status, "infeasible")
        self.assertEqual(len(outcome.farkas), 1)
        self.assertTrue(verify_certificate(lp, outcome))

    def test_farkas_certificates_of_random_contradictions(self):
        for seed in range(25):
            lp = contradictory(seed).build()
            outcome = self.solver.solve_lp(lp)

            with self.subTest(seed=seed):
                self.assertEqual(outcome.status, "infeasible")
                self.assertEqual(len(outcome.farkas), lp.num_rows)
                self.assertTrue(verify_certificate(lp, outcome))

    def test_rational_rhs(self):
        builder = LpBuilder("frac")
        x, y = builder.add_variable("x"), builder.add_variable("y")
        builder.add_row({x: 1, y: 1}, "<=", Fraction(1, 3))
        builder.set_objective({x: 1, y: 1}, "max")
        outcome = self.solver.solve_lp(builder.build())
        self.assertEqual(outcome.objective, Fraction(1, 3))

    def test_unbounded(self):
        builder = LpBuilder("ray")
        x = builder.add_variable("x")
        builder.add_row({x: 1}, ">=", 1)
        builder.set_objective({x: 1}, "max")
        lp = builder.build()
        outcome = self.solver.solve_lp(lp)
        self.assertEqual(outcome.status, "unbounded")
        self.assertTrue(verify_certificate(lp, outcome))

    def test_equality_rows_and_free_variable(self):
        builder = LpBuilder("eq")
        x, y = builder.add_variable("x"), builder.add_variable("y", free=True)
        builder.add_row({x: 1, y: 1}, "=", 2)
        builder.add_row({y: 1}, ">=", -1)
        builder.set_objective({x: 1, y: 2}, "min")
        lp = builder.build()
        outcome = self.solver.solve_lp(lp)
        self.assertEqual(outcome.status, "optimal")
        self.assertEqual(outcome.objective, Fraction(1))
        self.assertEqual(outcome.primal, (Fraction(3), Fraction(-1)))
        self.assertTrue(verify_certificate(lp, outcome))

    def test_degenerate_program_terminates(self):
        # several rows meet at the optimum vertex
        builder = LpBuilder("degenerate")
        xs = [builder.add_variable(f"x{i}") for i in range(3)]

        for i in range(3):
            builder.add_row({xs[i]: 1}, "<=", 1)
            builder.add_row({xs[i]: 1, xs[(i + 1) % 3]: 1}, "<=", 1)

        builder.add_row({x: 1 for x in xs}, "<=", Fraction(3, 2))
        builder.set_objective({x: 1 for x in xs}, "max")
        lp = builder.build()
        outcome = SimplexSolver(max_pivots=1_000).solve_lp(lp)
        self.assertEqual(outcome.objective, Fraction(3, 2))
        self.assertTrue(verify_certificate(lp, outcome))

    def test_deterministic(self):
        lp = one_variable("max", "<=", 3).build()
        self.assertEqual(self.solver.solve_lp(lp), self.solver.solve_lp(lp))

    def test_tableau_cap(self):
        with self.assertRaises(ResourceCapError):
            SimplexSolver(max_tableau_cells=1).solve_lp(one_variable("max", "<=", 3).build())

    def test_perturbed_primal_is_rejected(self):
        lp = one_variable("max", "<=", 3).build()
        outcome = self.solver.solve_lp(lp)
        perturbed = replace(outcome, primal=(outcome.primal[0] - Fraction(1, 10**9),))
        self.assertFalse(verify_certificate(lp, perturbed))


class TestLpBuilder(unittest.TestCase):
    def test_duplicate_variable(self):
        builder = LpBuilder()
        builder.add_variable("x")

        with self.assertRaises(StructuralError):
            builder.add_variable("x")

    def test_bad_sense(self):
        builder = LpBuilder()
        x = builder.add_variable("x")
        builder.add_row({x: 1}, "<", 1)

        with self.assertRaises(StructuralError):
            builder.build()

    def test_lp_text(self):
        text = one_variable("max", "<=", 3).build().to_lp_text()
        self.assertIn("\nMaximize\n", text)
        self.assertIn("r0:", text)
        self.assertTrue(text.rstrip().endswith("End"))


if __name__ == "__main__":
    unittest.main()
