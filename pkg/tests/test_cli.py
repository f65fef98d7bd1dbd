import io
import json
import tempfile
import unittest

from contextlib import redirect_stdout
from pathlib import Path

from savcsp.cli import EXIT_CAP, EXIT_OK, EXIT_UNSAT, EXIT_USAGE, main
from savcsp.model import load_instance

from .fixtures import CUT_LANGUAGE_TEXT

XOR_LANGUAGE_TEXT = "domain 2\nrelation xor 2\ndefault 0\n0 0 : 1\n1 1 : 1\n"
NEQ_LANGUAGE_TEXT = "domain 2\nrelation neq 2\ndefault inf\n0 1 : 0\n1 0 : 0\n"
UNARY_LANGUAGE_TEXT = "domain 2\nrelation u 1\ndefault 0\n1 : 1\n"
TRIANGLE_TEXT = "language xor.lang\nvars 3\nconstraint xor x0 x1\nconstraint xor x1 x2\nconstraint xor x0 x2\n"
NEQ_TRIANGLE_TEXT = "language neq.lang\nvars 3\nconstraint neq x0 x1\nconstraint neq x1 x2\nconstraint neq x0 x2\n"


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.write("cut.lang", CUT_LANGUAGE_TEXT)
        self.write("xor.lang", XOR_LANGUAGE_TEXT)
        self.write("neq.lang", NEQ_LANGUAGE_TEXT)
        self.write("u.lang", UNARY_LANGUAGE_TEXT)
        self.write("edge.vcsp", "language cut.lang\nvars 2\nconstraint cut x0 x1\n")
        self.write("tri.vcsp", TRIANGLE_TEXT)
        self.write("neq3.vcsp", NEQ_TRIANGLE_TEXT)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> Path:
        path = self.dir / name
        path.write_text(text, encoding="utf-8")

        return path

    def run_cli(self, *argv) -> tuple[int, str]:
        buffer = io.StringIO()

        with redirect_stdout(buffer):
            code = main([str(a) for a in argv])

        return code, buffer.getvalue()

    def test_solve(self):
        code, out = self.run_cli("solve", "--instance", self.dir / "edge.vcsp", "--assign")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("value 0", out)
        self.assertIn("status exact-if-BWC", out)
        self.assertIn("assignment 0 0", out)

    def test_solve_json(self):
        code, out = self.run_cli("solve", "--instance", self.dir / "tri.vcsp", "--json")
        report = json.loads(out)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report, {"status": "relaxation-only", "value": "1"})

    def test_relax(self):
        code, out = self.run_cli("relax", "--instance", self.dir / "tri.vcsp", "--k", 2, "--l", 3, "--lp")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("objective 1", out)
        self.assertIn("Subject To", out)

    def test_bad_levels(self):
        code, _ = self.run_cli("relax", "--instance", self.dir / "tri.vcsp", "--k", 3, "--l", 2)
        self.assertEqual(code, EXIT_USAGE)

    def test_minimal_empty(self):
        code, out = self.run_cli("minimal", "--instance", self.dir / "neq3.vcsp")
        self.assertEqual(code, EXIT_UNSAT)
        self.assertEqual(out.strip(), "EMPTY")

    def test_oracle(self):
        code, out = self.run_cli("oracle", "--instance", self.dir / "tri.vcsp")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("value 1", out)
        self.assertIn("optima 6", out)

    def test_oracle_cap(self):
        code, _ = self.run_cli("oracle", "--instance", self.dir / "tri.vcsp", "--max-assignments", 2)
        self.assertEqual(code, EXIT_CAP)

    def test_check_fpol(self):
        _, out = self.run_cli("check-fpol", "--language", self.dir / "cut.lang", "--named", "submodular")
        self.assertEqual(out, "yes\n")
        code, out = self.run_cli("check-fpol", "--language", self.dir / "xor.lang", "--named", "submodular")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("no\nrelation xor\n"))

    def test_supp_member_witness(self):
        witness = self.dir / "min.witness.vcsp"
        code, out = self.run_cli(
            "supp-member", "--language", self.dir / "xor.lang", "--named", "min", "--witness-out", witness
        )
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("no"))
        self.assertEqual(load_instance(witness).num_vars, 4)

    def test_supp_member_yes(self):
        code, out = self.run_cli("supp-member", "--language", self.dir / "cut.lang", "--named", "min")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("yes\nweight "))

    def test_core(self):
        code, out = self.run_cli("core", "--language", self.dir / "u.lang")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("domain 1", out)
        self.assertIn("labels 0", out)

    def test_bwc(self):
        code, out = self.run_cli("bwc", "--language", self.dir / "cut.lang")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines()[0], "yes")

    def test_malformed_language(self):
        bad = self.write("bad.lang", "domain 2\nrelation r 2\ndefault 0\n0 1 : 1.5\n")
        code, _ = self.run_cli("core", "--language", bad)
        self.assertEqual(code, EXIT_USAGE)

    def test_missing_file(self):
        code, _ = self.run_cli("oracle", "--instance", self.dir / "nope.vcsp")
        self.assertEqual(code, EXIT_USAGE)

    def test_gen_min_uncut(self):
        language, instance = self.dir / "g.lang", self.dir / "g.vcsp"
        argv = ["--family", "min-uncut", "--graph", "cycle:4", "--out-language", language, "--out-instance", instance]
        code, _ = self.run_cli("gen", *argv)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(load_instance(instance).constraints), 4)

    def test_gen_instance_needs_a_language_path(self):
        code, _ = self.run_cli("gen", "--family", "min-uncut", "--out-instance", self.dir / "g.vcsp")
        self.assertEqual(code, EXIT_USAGE)

    def test_gen_prints_language(self):
        code, out = self.run_cli("gen", "--family", "improved", "--named", "submodular", "--seed", 3)
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("domain 2"))

    def test_audit(self):
        code, out = self.run_cli("audit", "--graphs", "triangle;cycle:4")
        lines = out.splitlines()
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(lines[0], "instance_id,oracle_value,sa_value,gap")
        self.assertEqual(len(lines), 3)


if __name__ == "__main__":
    unittest.main()
