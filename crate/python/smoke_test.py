"""Smoke test for the combicoh Python module.

Build and install first:

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/combicoh-*.whl
"""

import cmath
import json
import math
from fractions import Fraction

import combicoh


def main():
    assert combicoh.sequence("catalan", 5) == [1, 1, 2, 5, 14, 42]
    assert combicoh.sequence("bell", 4) == [1, 1, 2, 5, 15]
    assert combicoh.spectrum("catalan", 4) == [0, 1, 2, Fraction(5, 2), Fraction(14, 5)]
    assert combicoh.radius("ex3") == 4.0
    assert math.isinf(combicoh.radius("ex1"))

    report = combicoh.verify("catalan", 10)
    assert report.passes(1e-8), report
    assert abs(report.calibration_ratio - 2.0) < 1e-6
    assert [row[1] for row in report.rows][:4] == [1, 1, 2, 5]
    assert combicoh.MomentReport.from_json(report.to_json()) == report
    assert combicoh.MomentReport.from_text(report.to_text()) == report
    assert json.loads(report.to_json())["format"] == combicoh.REPORT_FORMAT
    assert report.to_csv().splitlines()[0] == "n,exact,numeric,relative_error,scheme"

    value, scheme = combicoh.moment("ex1", 3)
    assert abs(value / 720 - 1) < 1e-10, (value, scheme)
    assert combicoh.weight("ex3", 2.0) > 0
    atoms = combicoh.bell_atoms()
    assert atoms[0] == (0, math.exp(-1)) and atoms[1][0] == 1

    for x in (0.0, 1.0, 25.0):
        n = combicoh.normalization("ex1", x)
        assert abs(n / math.cosh(math.sqrt(x)) - 1) < 1e-12

    z, w = 0.3 + 0.4j, -0.2 + 0.1j
    expected = cmath.exp(-(abs(z) ** 2 + abs(w) ** 2) / 2 + z.conjugate() * w)
    assert abs(combicoh.overlap("factorial", z, w) - expected) < 1e-12
    assert abs(combicoh.overlap("ex4", 0.5, 0.5) - 1) < 1e-12

    state = combicoh.state("catalan", 0.5 - 0.5j, 4)
    assert abs(sum(state.probabilities()) + state.truncation_mass - 1) < 1e-12

    try:
        combicoh.normalization("ex3", 4.0)
    except combicoh.DomainError as e:
        assert "R = 4" in str(e)
    else:
        raise AssertionError("expected DomainError")
    try:
        combicoh.verify("ex10", 4, scheme="jacobi")
    except combicoh.NumericalError:
        pass
    else:
        raise AssertionError("expected NumericalError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
