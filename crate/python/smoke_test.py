"""Quick end-to-end check of the Python bindings.

Build and install first, for example:
    pip install --no-build-isolation ./crates/py
"""

from fractions import Fraction
import math

import mdist_py as md


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    golden = (1 + math.sqrt(5)) / 2
    assert close(md.distance("mahler", [1, -1, -1]), golden, 1e-12)
    assert close(md.RootFunction("reciprocal").distance([1, 0, -5]), golden + 1, 1e-12)
    assert len(md.roots([1, 0, 1])) == 2

    table = md.table_coefficients()
    assert table[1] == Fraction(4) and table[2] == Fraction(16, 3)

    form = md.closed_form("reciprocal", "F", 2)
    assert form.constant == Fraction(32, 3), str(form)
    numeric = md.moment_numeric("trec:1/2", "H", 2, 4.0)
    closed = md.closed_form("trec:1/2", "H", 2)(4.0)
    assert close(numeric, closed, 1e-8), (numeric, closed)

    pi_power, vol = md.star_volume_exact("reciprocal", 4)
    assert vol == Fraction(655360, 11907) and pi_power == 0

    report = md.count_reciprocal(1, 10.0)
    assert report["exact"] == 40

    value, err = md.mc_star_volume("mahler", 1, samples=20000, seed=5)
    assert abs(value - 4.0) <= 3 * err + 1e-12

    points = md.trajectory("H", 3, ["1/2"])
    assert any(p[1] == "zero" for p in points)

    assert md.distance("mahler", [0]) == 0.0
    try:
        md.distance("trec:3/2", [1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range parameter accepted")
    try:
        md.count_reciprocal(8, 1000.0)
    except md.BudgetExceededError:
        pass
    else:
        raise AssertionError("budget not enforced")

    ok, checks = md.run_verify("table")
    assert ok and len(checks) == 13
    print("python smoke test passed")


if __name__ == "__main__":
    main()
