"""End-to-end smoke checks for the python bindings."""
import json
import math

import qei_py as qp


def config(**kw):
    cfg = qp.RunConfig()
    for key, value in kw.items():
        setattr(cfg, key, value)
    return cfg


def main():
    # A canonical two-species tensor satisfies the inequality.
    res = qp.run(config(command="verdict", model="federbush"))
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["status"] == "Holds"
    assert doc["command"] == "verdict"
    assert doc["seed"] == 1

    # A degree-one prefactor on the vector model fails with growth rate 2.
    res = qp.run(config(command="verdict", model="nls",
                        params={"n": "3"}, q={"q": "2,1"}))
    assert res.exit_code == 1
    doc = json.loads(res.output)
    assert doc["status"] == "Fails"
    assert doc["exponent"] == 2

    # Bound output is deterministic and strictly positive.
    cfg = config(command="bound", model="ising")
    first, second = qp.run(cfg), qp.run(cfg)
    assert first.output == second.output
    assert json.loads(first.output)["bound_constant"] > 0

    # Config text round trips through parse and serialize.
    cfg = config(command="witness", model="federbush",
                 q={"q1_s": "2,1"}, tau=0.8, seed=5)
    text = qp.serialize_config(cfg)
    back = qp.parse_config(text)
    assert back == cfg
    assert qp.serialize_config(back) == text

    # Characteristic-function header carries the growth germ.
    res = qp.run(config(command="charfct", model="sinh-gordon",
                        params={"b": "0.5"}))
    header = json.loads(res.output)["header"]
    assert header["f0"] == -1.0
    assert header["f1"] == 0.0

    # Witness on a satisfied inequality raises the dedicated exception.
    try:
        qp.run(config(command="witness", model="federbush"))
    except qp.VerdictPreconditionError:
        pass
    else:
        raise AssertionError("expected VerdictPreconditionError")

    # Unknown presets surface as configuration errors.
    try:
        qp.run(config(command="verdict", model="sine-gordon"))
    except qp.CliError:
        pass
    else:
        raise AssertionError("expected CliError")

    # Closed-form bound antiderivatives at s = 1 and s = 2.
    root3 = math.sqrt(3.0)
    assert qp.w_plus(1.0) == 0.0 and qp.w_minus(1.0) == 0.0
    assert abs(qp.w_plus(2.0) - (2 * root3 + math.log(2 + root3))) < 1e-12
    assert abs(qp.w_minus(2.0) - (2 * root3 - math.log(2 + root3))) < 1e-12

    # Number rendering is plain C-locale text.
    assert qp.format_number(0.1) == "0.1"
    assert qp.format_number(1.0 / 3.0) == "0.333333333333333"

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
