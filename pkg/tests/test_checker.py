from fractions import Fraction

import pytest

from expdef.checker import (
    NumericModel, SKModel, Truth, check_matrix, check_with_witnesses, exact_theta_check, verify_trig_identities,
)
from expdef.definitions import (
    BUILDERS, PI_SK, WitnessPlan, def_int_forall, def_int_laczkovich, def_pi, def_rat_exists, def_sqrt2,
)
from expdef.formula import Eq, Exists, Exp, Forall, Mul, Not, One, RatConst, Var, parse_sexpr
from expdef.skmodel import TAU, SKElement

x, y = Var("x"), Var("y")


def test_truth_tables():
    T, F, U = Truth.TRUE, Truth.FALSE, Truth.UNKNOWN
    assert ~T is F and ~F is T and ~U is U
    assert (T & U) is U and (F & U) is F and (T & T) is T
    assert (F | U) is U and (T | U) is T and (F | F) is F


def test_sk_kernel_membership():
    f = Eq(Exp(x), One())
    sk = SKModel()
    assert check_matrix(sk, f, {"x": TAU * 3}) is Truth.TRUE
    assert check_matrix(sk, f, {"x": TAU / 2}) is Truth.FALSE
    # E(tau*tau) lies outside the domain: the atom is false, the partiality is recorded
    report = check_with_witnesses(sk, Exists("x", f), WitnessPlan({"x": "tau*tau"}))
    assert report.verdict == "fail"
    assert report.partiality


def test_numeric_model_answers_unknown_in_the_gray_zone():
    model = NumericModel(64)
    with model.session():
        zero = model.zero()
        tiny = model.const(Fraction(1, 2**32))
        assert model.eq(tiny, zero)[0] is Truth.UNKNOWN
        assert model.eq(model.const(Fraction(1, 2**40)), zero)[0] is Truth.TRUE
        assert model.eq(model.const(Fraction(1, 2**20)), zero)[0] is Truth.FALSE
        assert model.eq(model.E(model.tau()), model.one())[0] is Truth.TRUE


def test_numeric_model_requires_a_session():
    with pytest.raises(RuntimeError):
        NumericModel(128).tau()
    with pytest.raises(ValueError):
        NumericModel(32)


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_builders_pass_in_numeric_model(name):
    d = BUILDERS[name]()
    report = check_with_witnesses(NumericModel(256), d.formula, d.plan)
    assert report.verdict == "pass", report.first_failure
    assert report.residual_value < 2.0**-120


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_sk_and_numeric_agree(name):
    d = BUILDERS[name]()
    exact = check_with_witnesses(SKModel(), d.formula, d.plan)
    if d.plan.numeric_only:
        assert exact.verdict == "inapplicable"
    else:
        assert exact.verdict == "pass", exact.first_failure
        assert exact.identities


def test_block_statuses():
    d = def_int_forall()
    report = check_with_witnesses(SKModel(), d.formula, d.plan)
    assert report.blocks == [{"quantifier": "∀", "variables": ["x"], "status": "probe-verified"}]
    d = def_rat_exists()
    report = check_with_witnesses(SKModel(), d.formula, d.plan)
    assert {b["status"] for b in report.blocks} == {"witnessed"}


def test_wrong_subjects_fail():
    d = def_int_forall()
    assert check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(y="1/2")).verdict == "fail"
    assert check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(y="-4")).verdict == "pass"
    d = def_rat_exists()
    report = check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(y="z(4)"))
    assert report.verdict == "fail"
    assert report.reason == "witness-plan failure"
    d = def_sqrt2()
    for other in ("-(z(8) - z(8)^3)", "1", "z(8) + z(8)^3"):
        assert check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(x=other)).verdict == "fail"


def test_plan_gap_is_inapplicable():
    f = Exists("x", Eq(Mul(x, x), RatConst(4)))
    report = check_with_witnesses(SKModel(), f, WitnessPlan())
    assert report.verdict == "inapplicable"
    assert check_with_witnesses(SKModel(), f, WitnessPlan({"x": "-2"})).verdict == "pass"


def test_negated_existential_is_probed():
    # not exists x (x*x = -1): refuted only once some probe squares to -1
    f = Not(Exists("x", Eq(Mul(x, x), RatConst(-1))))
    assert check_with_witnesses(SKModel(), f, WitnessPlan()).verdict == "pass"
    report = check_with_witnesses(SKModel(), f, WitnessPlan(probes={"x": ("z(4)",)}))
    assert report.verdict == "fail"


def test_numeric_precision_shrinks_residuals():
    d = def_sqrt2()
    residuals = []
    for bits in (128, 256, 512):
        report = check_with_witnesses(NumericModel(bits), d.formula, d.plan)
        assert report.verdict == "pass"
        residuals.append(report.residual_value)
    assert residuals[0] > residuals[1] > residuals[2]


def test_exact_theta_check_matches_brute_force():
    for n in range(1, 40):
        for m in range(-40, 41):
            q = Fraction(m, n)
            # 2**q is rational iff some integer r satisfies r**den == 2**|num|
            k, d = abs(q.numerator), q.denominator
            guess = round(2 ** (k / d))
            brute = any(r**d == 2**k for r in range(max(guess - 2, 1), guess + 3))
            assert exact_theta_check(q) == brute


def test_theta_numeric():
    d = def_int_laczkovich()
    for value in ("-3", "0", "1", "2"):
        assert check_with_witnesses(NumericModel(256), d.formula, d.plan.with_assignments(x=value)).passed
    assert check_with_witnesses(NumericModel(256), d.formula, d.plan.with_assignments(x="1/2")).verdict == "fail"


@pytest.mark.parametrize("j", ["z(4)", "z(4)^3"])
def test_trig_identities(j):
    exact = verify_trig_identities(SKModel(), j)
    assert exact.verdict == "pass", exact.first_failure
    numeric = verify_trig_identities(NumericModel(192), j)
    assert numeric.verdict == "pass", numeric.first_failure
    assert numeric.residual_value < 2.0**-90
    assert exact.atoms_checked == numeric.atoms_checked > 50


def test_trig_identities_reject_a_non_square_root():
    with pytest.raises(ValueError):
        verify_trig_identities(SKModel(), "z(3)")


def test_sexpr_formula_checks():
    f = parse_sexpr("(forall x (implies (= (E x) 1) (= (E (* y x)) 1)))")
    sk = SKModel()
    assert check_with_witnesses(sk, f, WitnessPlan(), bindings={"y": SKElement.const(5)}).passed
    assert not check_with_witnesses(sk, f, WitnessPlan(), bindings={"y": SKElement.const(Fraction(1, 3))}).passed


def test_report_json_shape():
    d = def_sqrt2()
    doc = check_with_witnesses(NumericModel(128), d.formula, d.plan).to_json()
    assert doc["verdict"] == "pass"
    assert doc["precision_bits"] == 128
    assert set(doc["witnesses"]) >= {"x", "p"}
    assert doc["atoms_checked"] > 0


def test_universal_probe_counts_are_reported():
    f = Forall("x", Eq(Mul(x, One()), x))
    report = check_with_witnesses(SKModel(), f, WitnessPlan())
    assert report.passed
    assert report.probe_counts["x"] >= 10


@pytest.mark.parametrize("j", ["z(4)", "z(4)^3"])
def test_pi_selection_does_not_depend_on_j(j):
    d = def_pi()
    outer_js = {k: j for k in d.plan.assignments if k == "j" or k.startswith("j_")}
    assert check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(x=PI_SK, **outer_js)).passed
    minus = d.plan.with_assignments(x=f"-{PI_SK}", **outer_js)
    assert check_with_witnesses(SKModel(), d.formula, minus).verdict == "fail"


def test_int_forall_at_tau_fails_by_partiality():
    d = def_int_forall()
    report = check_with_witnesses(SKModel(), d.formula, d.plan.with_assignments(y="tau"))
    assert report.verdict == "fail"
    assert "not in Q*tau" in report.partiality[0]


@pytest.mark.parametrize("kind", ["cos", "sin"])
def test_exists_and_forall_variants_agree(kind):
    ex_def, all_def = BUILDERS[kind](), BUILDERS[f"{kind}_forall"]()
    ys = ["0", "1", "-1", "1/2", "(z(8) + z(8)^-1)/2", "(z(8) - z(8)^-1)/(2*z(4))"]
    for c in ("0", "1/8", "1/4", "1/2", "-1/3", "2/3"):
        x = f"({c})*tau/z(4)"
        for y in ys:
            a = check_with_witnesses(SKModel(), ex_def.formula, ex_def.plan.with_assignments(x=x, y=y)).verdict
            b = check_with_witnesses(SKModel(), all_def.formula, all_def.plan.with_assignments(x=x, y=y)).verdict
            assert a == b, (c, y)
