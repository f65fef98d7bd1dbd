import unittest

from savcsp import Workbench
from savcsp.decorators import cached_by_fingerprint, method_params


class Component(Workbench):
    def __init__(self, **kwargs) -> None:
        super().__init__(**kwargs)
        self.calls = 0
        self._method_kwargs = {
            "run": {
                "req_params": ["name"],
                "validate": {"mode": ["fast", "full"]},
                "ranges": {"k": (1, "MAX_SA_LEVEL"), "l": (1, "MAX_SA_LEVEL")},
                "ordered": [("k", "l")],
            }
        }

    @method_params
    def run(self, name: str = None, mode: str = "full", k: int = 2, l: int = 3) -> tuple:
        return name, mode, k, l

    @cached_by_fingerprint(lambda text: text)
    def expensive(self, text: str) -> int:
        self.calls += 1
        return len(text)


class TestMethodParams(unittest.TestCase):
    def setUp(self):
        self.component = Component()

    def test_defaults_pass(self):
        self.assertEqual(self.component.run("x"), ("x", "full", 2, 3))

    def test_required(self):
        with self.assertRaises(TypeError):
            self.component.run()

    def test_allowed_values(self):
        with self.assertRaises(ValueError):
            self.component.run("x", mode="slow")

    def test_range_bound_from_attribute(self):
        with self.assertRaises(ValueError):
            self.component.run("x", l=Workbench.MAX_SA_LEVEL + 1)

    def test_integer_type(self):
        with self.assertRaises(TypeError):
            self.component.run("x", k=True)

    def test_ordered(self):
        with self.assertRaises(ValueError):
            self.component.run("x", k=3, l=2)


class TestCaching(unittest.TestCase):
    def test_cached_per_key(self):
        component = Component()
        component.expensive("abc")
        component.expensive("abc")
        component.expensive("de")
        self.assertEqual(component.calls, 2)


class TestWorkbench(unittest.TestCase):
    def test_caps_are_shared(self):
        caps = Workbench(max_assignments=10, max_ops=20).caps()
        self.assertEqual(caps["max_assignments"], 10)
        self.assertEqual(Workbench(**caps).max_ops, 20)


if __name__ == "__main__":
    unittest.main()
