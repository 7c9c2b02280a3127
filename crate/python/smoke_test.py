"""Quick check of the Python bindings against the built-in presets."""

import json

import rational_ba_py as rb


def main():
    gamma = rb.SpectralData.preset("gamma-n2")
    assert gamma.variety == "gamma" and gamma.n == 2
    assert all(ok for _, ok in gamma.validate())
    assert gamma.flow_space_dimension() == 3
    assert [gamma.grade_dimension(k) for k in (1, 2, 3)] == [2, 6, 12]

    basis = gamma.basis()
    lambdas = gamma.lambdas()
    ops = [basis.operator(l) for l in lambdas]
    assert ops[0].entry(0, 0) == "∂x - ∂y" and ops[0].entry(0, 1) == "0"
    for a in ops:
        for b in ops:
            assert a.commutator(b).is_zero()
    for op, l in zip(ops, lambdas):
        assert all(basis.eigen_relation(op, l))
    assert basis.operator(lambdas[0] * lambdas[1]) == ops[0] @ ops[1]
    assert rb.Operator.from_json(ops[2].to_json()) == ops[2]

    try:
        gamma.function("num = z1*t1; d = 1")
    except rb.MathError as e:
        assert "does not descend" in str(e)
    else:
        raise AssertionError("non-descending function accepted")

    assert rb.reproduce("gamma-n2") == []
    report = json.loads(rb.embed_check("omega", samples=20, seed=1))
    assert report["violations"] == [] and report["point_failures"] == []

    code, out, _ = rb.run_cli(["validate", "--preset", "omega", "--format", "json"])
    assert code == 0 and json.loads(out.splitlines()[-1])["passed"]
    print("smoke test passed")


if __name__ == "__main__":
    main()
