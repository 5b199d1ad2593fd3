import io
import json
import random
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ethplan.cli import run
from ethplan.errors import MoralityOutOfRange, NonPropositionalEffect, UndeclaredName
from ethplan.fileformat import (
    DomainFile,
    DomainSyntaxError,
    Effect,
    bundled_path,
    parse_domain_file,
    render_domain_file,
)
from ethplan.ltlf import Atom
from oracles import random_formula

HOSPITAL = str(bundled_path("hospital.epd"))
ROVER = str(bundled_path("rover.epd"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def schema(command):
    text = (resources.files("ethplan") / "schemas" / f"{command}.schema.json").read_text()
    return json.loads(text)


COMMANDS = [
    ("check",),
    ("simulate", "--plan", "ask,move"),
    ("compare", "--plan1", "ask,move", "--plan2", "horn,move"),
    ("compare", "--plan1", "ask,move", "--plan2", "horn,move", "--quant", "--morality", "2"),
    ("solve", "--horizon", "2", "--exact-length", "--collapse-profiles"),
    ("solve", "--horizon", "2", "--quant"),
    ("conflict", "--horizon", "4"),
    ("conflict", "--horizon", "2", "--omit-desires"),
    ("contract", "--horizon", "4"),
    ("contract", "--horizon", "3", "--criterion", "lex"),
    ("contract", "--horizon", "3", "--criterion", "quant"),
]


@pytest.mark.parametrize("cmd", COMMANDS, ids=lambda c: " ".join(c))
def test_json_schema_and_verdicts(cmd):
    code, text, _ = call(cmd[0], HOSPITAL, *cmd[1:])
    assert code == 0
    code, raw, _ = call(cmd[0], HOSPITAL, *cmd[1:], "--json")
    assert code == 0
    payload = json.loads(raw)
    jsonschema.validate(payload, schema(cmd[0]))
    assert payload["command"] == cmd[0]
    assert payload["verdict"] in text


def test_compare_examples():
    code, out, _ = call("compare", HOSPITAL, "--plan1", "ask,move", "--plan2", "horn,move")
    assert code == 0 and out.splitlines()[0] == "plan1 preferred (level 2: G !annoyed)"
    code, out, _ = call("compare", HOSPITAL, "--morality", "2", "--plan1", "ask,move", "--plan2", "horn,move")
    assert code == 0 and out.startswith("plan2 preferred")


def test_simulate_example():
    code, out, _ = call("simulate", HOSPITAL, "--plan", "ask,move")
    assert "{blocked} -> {waited} -> {destination, waited}" in out
    payload = json.loads(call("simulate", HOSPITAL, "--plan", "ask,move", "--json")[1])
    assert payload["details"]["states"] == [["blocked"], ["waited"], ["destination", "waited"]]


def test_contract_example():
    payload = json.loads(call("contract", HOSPITAL, "--horizon", "4", "--json")[1])
    assert payload["verdict"] == "2 minimal contractions"
    assert payload["details"]["contractions"] == [
        ["F (destination & !waited)", "F destination", "G !dangerous"],
        ["F destination", "G !annoyed", "G !dangerous"],
    ]


def test_conflict_and_horizon_default():
    code, out, _ = call("conflict", HOSPITAL)  # horizon from the file
    assert code == 0 and out.startswith("conflict")
    code, out, _ = call("conflict", HOSPITAL, "--horizon", "4", "--omit-desires")
    assert out.startswith("no conflict")


def test_exit_codes(tmp_path):
    assert call("check", HOSPITAL)[0] == 0
    assert call("check", ROVER)[0] == 0
    assert call("bogus", HOSPITAL)[0] == 2
    assert call("compare", HOSPITAL, "--plan1", "ask")[0] == 2
    assert call("solve", HOSPITAL, "--horizon", "-1")[0] == 2
    assert call("check", str(tmp_path / "missing.epd"))[0] == 1
    assert call("simulate", HOSPITAL, "--plan", "ask,fly")[0] == 1
    assert call("check", HOSPITAL, "--morality", "1")[0] == 1
    code, out, err = call("compare", HOSPITAL, "--plan1", "x", "--plan2", "ask", "--json")
    assert code == 1 and "fly" not in err
    payload = json.loads(out)
    jsonschema.validate(payload, schema("error"))
    bad = tmp_path / "bad.epd"
    bad.write_text("domain {\n  propositions: p\n  actions: a\n  effect+ a p: X p\n}\nproblem {\n  init: none\n}\n")
    assert call("check", str(bad))[0] == 1
    nohz = tmp_path / "nohz.epd"
    nohz.write_text("domain {\n  propositions: p\n  actions: a\n}\nproblem {\n  init: p\n}\n")
    assert call("solve", str(nohz))[0] == 1
    assert call("solve", str(nohz), "--horizon", "1")[0] == 0


def test_hospital_file(hospital):
    assert len(hospital.propositions) == 6
    assert len(hospital.all_actions) == 4
    assert len(hospital.effects) == 6
    assert len(hospital.levels) == 2 and len(hospital.desires) == 2
    assert hospital.morality == 3 and hospital.morality_range == (2, 3)
    assert hospital.theory().positive("horn", "dangerous") == Atom("surgery")


def test_parse_errors():
    base = "domain {{\n  propositions: p, q\n  actions: a\n{eff}}}\nproblem {{\n{prob}}}\n"
    with pytest.raises(NonPropositionalEffect):
        parse_domain_file(base.format(eff="  effect+ a p: X p\n", prob="  init: none\n"))
    with pytest.raises(UndeclaredName):
        parse_domain_file(base.format(eff="  effect+ a r: true\n", prob="  init: none\n"))
    with pytest.raises(UndeclaredName):
        parse_domain_file(base.format(eff="", prob="  init: z\n"))
    with pytest.raises(MoralityOutOfRange):
        parse_domain_file(base.format(eff="", prob="  init: none\n  values[1]: p\n  morality: 3\n"))
    with pytest.raises(DomainSyntaxError) as info:
        parse_domain_file(base.format(eff="  effect+ a p: p &\n", prob="  init: none\n"))
    assert info.value.lineno == 4
    with pytest.raises(DomainSyntaxError):
        parse_domain_file(base.format(eff="  frobnicate\n", prob="  init: none\n"))


def test_round_trip_bundled(hospital):
    for path in (HOSPITAL, ROVER):
        d = parse_domain_file(open(path).read())
        assert parse_domain_file(render_domain_file(d)) == d


PROPS = ("p", "q", "r")


@st.composite
def domain_files(draw):
    rng = random.Random(draw(st.integers(0, 10**9)))
    actions = tuple(draw(st.lists(st.sampled_from(["a", "b", "c"]), unique=True, max_size=3)))
    effects = []
    seen = set()
    for _ in range(rng.randint(0, 4)):
        if not actions:
            break
        key = (rng.choice("+-"), rng.choice(actions), rng.choice(PROPS))
        if key not in seen:
            seen.add(key)
            effects.append(Effect(*key, random_formula(rng, 4, PROPS, temporal=False)))
    levels = tuple(
        tuple(dict.fromkeys(random_formula(rng, 6, PROPS) for _ in range(rng.randint(1, 3))))
        for _ in range(rng.randint(0, 3))
    )
    desires = tuple(dict.fromkeys(random_formula(rng, 5, PROPS) for _ in range(rng.randint(0, 2))))
    morality = rng.choice([None, *range(1, len(levels) + 2)])
    return DomainFile(
        PROPS,
        actions,
        tuple(effects),
        frozenset(p for p in PROPS if rng.random() < 0.5),
        levels,
        desires,
        morality,
        None,
        rng.choice([None, 0, 3]),
    )


@settings(max_examples=100, deadline=None)
@given(domain_files())
def test_round_trip_random(d):
    assert parse_domain_file(render_domain_file(d)) == d
