"""
Unit tests for core.models module.
"""

import unittest

from morseframe.core.exceptions import InputError
from morseframe.core.models import Report, SceneConfig
from morseframe.utils.serialization import dumps, loads


def sample_report(**overrides):
    data = dict(
        scene={"scene": "two_cosines", "params": {"a": 3.0, "b": 1.0}},
        p=1,
        q=2,
        r=1,
        critical_points=[{"position": [0.0, 0.0], "index": 2, "value": 1.0}],
        saddle_distances=[[0.0, 0.75], [0.75, 0.0]],
        epsilon=0.16666666666666666,
        c=[0.5, -0.5],
        c_prime=[0.027777777777777776, -0.027777777777777776],
        scaled_values=[0.3333333333333333, -0.3333333333333333],
        face=[[2], [1]],
        t_offsets=[
            -0.9166666666666666,
            -0.4722222222222222,
            0.4722222222222222,
            0.9166666666666666,
        ],
        kkt={
            "lambda": 0.4722222222222222,
            "lambda_k": [0.9444444444444444],
            "residual": 0.0,
        },
        special_before={"special": False},
        special_after={"special": True},
        separatrix_edges=[],
        tolerances={"tie_tol": 1e-9},
    )
    data.update(overrides)
    return Report(**data)


class TestSceneConfig(unittest.TestCase):
    """Test cases for SceneConfig model."""

    def test_scene_config_minimal(self):
        """Test SceneConfig creation with minimal required fields."""
        scene = SceneConfig(scene="two_cosines")

        self.assertEqual(scene.params, {})
        self.assertEqual(scene.grid_n, 256)
        self.assertEqual(scene.tolerances, {})

    def test_unknown_scene(self):
        with self.assertRaises(InputError) as cm:
            SceneConfig(scene="klein_bottle")

        self.assertIn("klein_bottle", str(cm.exception))
        self.assertIn("two_cosines", str(cm.exception))

    def test_grid_bounds(self):
        SceneConfig(scene="two_cosines", grid_n=64)
        SceneConfig(scene="two_cosines", grid_n=4096)
        for grid in (63, 4097, 256.0, True):
            with self.assertRaises(InputError):
                SceneConfig(scene="two_cosines", grid_n=grid)

    def test_unknown_tolerance(self):
        with self.assertRaises(InputError) as cm:
            SceneConfig(scene="two_cosines", tolerances={"newton_tol": 1e-3})

        self.assertIn("newton_tol", str(cm.exception))

    def test_errors_are_collected(self):
        with self.assertRaises(InputError) as cm:
            SceneConfig(scene="nope", grid_n=1, params={"a": "x"})

        message = str(cm.exception)
        self.assertIn("unknown scene", message)
        self.assertIn("grid_n", message)
        self.assertIn("parameter 'a'", message)

    def test_from_dict(self):
        scene = SceneConfig.from_dict(
            {
                "scene": "two_cosines",
                "params": {"a": 3, "b": 1},
                "grid_n": 128,
                "tolerances": {"delta_ext": 0.2},
            }
        )

        self.assertEqual(scene.params, {"a": 3.0, "b": 1.0})
        self.assertEqual(scene.grid_n, 128)
        self.assertEqual(scene.tolerances, {"delta_ext": 0.2})
        self.assertEqual(SceneConfig.from_dict(scene.to_dict()), scene)

    def test_from_dict_rejects_unknown_keys(self):
        with self.assertRaises(InputError):
            SceneConfig.from_dict({"scene": "two_cosines", "colour": "red"})
        with self.assertRaises(InputError):
            SceneConfig.from_dict({"params": {}})

    def test_from_dict_reports_non_numbers(self):
        with self.assertRaises(InputError) as cm:
            SceneConfig.from_dict(
                {
                    "scene": "two_cosines",
                    "params": {"a": "x"},
                    "tolerances": {"tie_tol": None},
                }
            )

        self.assertIn("parameter 'a'", str(cm.exception))
        self.assertIn("tolerance 'tie_tol'", str(cm.exception))
        with self.assertRaises(InputError):
            SceneConfig.from_dict({"scene": "two_cosines", "params": [1, 2]})

    def test_from_json(self):
        scene = SceneConfig.from_json('{"scene": "sphere_height"}')

        self.assertEqual(scene.scene, "sphere_height")
        with self.assertRaises(InputError):
            SceneConfig.from_json("{not json")

    def test_str_representation(self):
        scene = SceneConfig(scene="two_cosines", params={"a": 3.0, "b": 1.0})

        self.assertEqual(str(scene), "two_cosines(a=3, b=1) on a 256x256 grid")


class TestReport(unittest.TestCase):
    """Test cases for Report model."""

    def test_to_dict_omits_missing_homotopy(self):
        data = sample_report().to_dict()

        self.assertNotIn("homotopy", data)
        self.assertEqual(data["face"], [[2], [1]])

    def test_to_dict_keeps_homotopy(self):
        homotopy = [{"t": 0.0, "values": [0.0], "face": [[1]]}]

        data = sample_report(homotopy=homotopy).to_dict()

        self.assertEqual(data["homotopy"], homotopy)

    def test_json_round_trip(self):
        report = sample_report()

        self.assertEqual(Report.from_dict(loads(dumps(report.to_dict()))), report)

    def test_from_dict_missing_fields(self):
        data = sample_report().to_dict()
        del data["epsilon"]
        del data["kkt"]

        with self.assertRaises(InputError) as cm:
            Report.from_dict(data)

        self.assertIn("epsilon", str(cm.exception))
        self.assertIn("kkt", str(cm.exception))


if __name__ == "__main__":
    unittest.main()
