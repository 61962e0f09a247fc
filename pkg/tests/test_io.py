import json
import math

import numpy as np

from nernst_lab.io import csv_lines, dumps, fmt
from nernst_lab.numerics import Classification


class TestFormatting:
    def test_seventeen_digits(self):
        assert fmt(2 * math.pi) == "6.2831853071795862"
        assert float(fmt(0.1)) == 0.1

    def test_special_values(self):
        assert fmt(-math.inf) == "-inf"
        assert fmt(math.inf) == "inf"

    def test_dumps_round_trip(self):
        doc = {"a": [1.0, 2, np.float64(0.1)], "b": {"c": None, "d": True},
               "e": Classification.FINITE, "f": -math.inf, "g": np.int64(3)}
        back = json.loads(dumps(doc))
        assert back["a"] == [1.0, 2, 0.1]
        assert back["e"] == "FINITE" and back["f"] == "-inf" and back["g"] == 3

    def test_dumps_deterministic(self):
        doc = {"x": [math.pi, math.e], "y": "z"}
        assert dumps(doc) == dumps(doc)

    def test_csv(self):
        text = csv_lines(["a", "b"], [["x", 1.0 / 3.0], ["y", 2]])
        assert text == "a,b\nx,0.33333333333333331\ny,2\n"
