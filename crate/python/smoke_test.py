"""Smoke test for the hermcov_py extension.

Build and install it first:

    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/hermcov_py-*.whl
"""

import json

import hermcov_py as hc


def main():
    field = json.loads(hc.field_descriptor(2, 3))
    assert field["p"] == 2 and len(field["modulus"]) == 12

    params = hc.family_parameters("I", 2, 3)
    assert len(params) == 6
    model = json.loads(hc.construct("I", 2, 3, params[0]))
    assert model["claimed_genus"] == 4 == hc.genus_formula("I", 2, 3)

    for b in params:
        m = json.loads(hc.maximality("I", 2, 3, b))
        assert (m["N"], m["genus"], m["maximal"]) == (129, 4, True)

    herm = json.loads(hc.maximality("hermitian", 2, 2))
    assert herm["N"] == 65 and herm["maximal"]

    b3 = hc.family_parameters("III", 2, 2)[0]
    assert json.loads(hc.maximality("III", 2, 2, b3))["N"] == 25

    assert hc.semigroup([3, 4, 10]) == (3, [1, 2, 5])
    assert hc.telescopic([3, 4, 10]) == (5, 3)

    try:
        hc.construct("II", 2, 3, params[0])
    except ValueError as e:
        assert "p > 2" in str(e)
    else:
        raise AssertionError("family II at p = 2 must be rejected")

    check = json.loads(hc.verify(1))
    assert check["passed"], check["failures"]
    print("smoke test passed")


if __name__ == "__main__":
    main()
