"""Parsing, elaboration diagnostics and the canonical formatter."""

import pytest

import models
from feta import (
    TRUE,
    And,
    Var,
    Xor,
    elaborate_text,
    format_document,
    parse,
    parse_expr,
)
from feta.dsl import has_errors

EXAMPLES = (
    "access_management",
    "broadcast_logger",
    "dual_sign",
    "relay",
    "sensor_fusion",
    "turnstile",
)


def read_example(name: str = "access_management") -> str:
    with open(models.example_path(name), encoding="utf-8") as handle:
        return handle.read()


def codes(diagnostics):
    return [d.code for d in diagnostics]


MINIMAL = """
features f;
feature_model true;

component C {
  output go;
  init 0;
  0 -> 0 by go!;
}

component D {
  input go;
  init 0;
  0 -> 0 by go?;
}

system S = { c: C, d: D };

sync {
  default [1,1] -> [0,*];
}
"""


# --- parsing ----------------------------------------------------------------


def test_parse_bundled_example_structure():
    result = parse(read_example())
    assert not result.diagnostics
    doc = result.document
    assert doc.features == ("lock", "unlock")
    assert doc.model == Xor(Var("lock"), Var("unlock"))
    assert [c.name for c in doc.components] == ["User", "Server"]
    assert doc.system.bindings == (("u1", "User"), ("u2", "User"), ("s", "Server"))
    assert len(doc.sync) == 3
    assert doc.sync[1].actions == ("join", "leave")
    assert doc.sync[1].send_hi == 1 and doc.sync[2].send_hi is None


def test_elaborated_example_matches_the_programmatic_model():
    result = elaborate_text(read_example())
    assert result.ok and not result.diagnostics
    fsys, fspec = models.make_all()
    built = result.system
    assert built.names == fsys.names
    assert built.space == fsys.space
    assert built.feature_model == fsys.feature_model
    for name in fsys.names:
        ours, theirs = fsys.components[name], built.components[name]
        assert set(theirs.states) == set(ours.states)
        assert theirs.initial == ours.initial
        assert theirs.inputs == ours.inputs
        assert theirs.outputs == ours.outputs
        assert set(theirs.transitions) == set(ours.transitions)
        assert {t: theirs.guards[t] for t in theirs.transitions} == {
            t: ours.guards[t] for t in ours.transitions
        }
    assert result.sync.rules == fspec.rules


def test_guard_defaults_to_true_and_suffix_is_optional():
    result = elaborate_text(MINIMAL)
    assert result.ok and not result.diagnostics
    component = result.system.components["c"]
    assert component.guards[("0", "go", "0")] == TRUE
    assert result.sync.rules[0].guard == TRUE


def test_numeric_and_named_states_mix():
    result = elaborate_text(MINIMAL.replace("0 -> 0 by go!;", "0 -> done by go!;\n  done -> 0 by go!;"))
    assert result.ok
    assert set(result.system.components["c"].states) == {"0", "done"}


def test_expression_precedence_and_associativity():
    assert parse_expr("a && b || c") == Var("a") & Var("b") | Var("c")
    assert parse_expr("!a && b") == And((~Var("a"), Var("b")))
    assert parse_expr("a -> b -> c") == parse_expr("a -> (b -> c)")
    assert parse_expr("a xor b && c") == Xor(Var("a"), Var("b") & Var("c"))


def test_syntax_error_reports_position():
    result = parse("features f;\nfeature_model f;\ncomponent {")
    assert result.document is None
    (diag,) = result.diagnostics
    assert diag.code == "syntax"
    assert (diag.line, diag.col) == (3, 11)
    assert "component name" in diag.message


# --- elaboration diagnostics ------------------------------------------------


def test_empty_input_reports_all_missing_sections():
    result = elaborate_text("")
    assert result.system is None and result.sync is None
    assert codes(result.diagnostics) == [
        "missing-feature-model",
        "missing-system",
        "missing-sync",
    ]
    first = result.diagnostics[0]
    assert (first.line, first.col) == (1, 1)
    assert str(first) == "1:1: error: missing feature model [missing-feature-model]"


def test_duplicate_state_is_fatal():
    text = MINIMAL.replace("init 0;", "states 0, 0;\n  init 0;")
    result = elaborate_text(text)
    assert result.system is None
    assert "duplicate-state" in codes(result.diagnostics)
    assert any("declared twice" in d.message for d in result.diagnostics)


def test_suffix_mismatch_is_fatal():
    text = MINIMAL.replace("0 -> 0 by go!;", "0 -> 0 by go?;")
    result = elaborate_text(text)
    assert result.system is None
    (diag,) = result.diagnostics
    assert diag.code == "suffix-mismatch"
    assert "'go' is an output of 'C'" in diag.message


def test_unknown_names_are_reported():
    unknown_action = MINIMAL.replace("by go!;", "by stop;")
    assert "unknown-action" in codes(elaborate_text(unknown_action).diagnostics)
    unknown_feature = MINIMAL.replace("by go!;", "by go! when g;")
    assert "unknown-feature" in codes(elaborate_text(unknown_feature).diagnostics)
    undeclared_state = MINIMAL.replace("init 0;", "states 0;\n  init 0;").replace(
        "0 -> 0 by go!;", "0 -> 9 by go!;"
    )
    assert "unknown-state" in codes(elaborate_text(undeclared_state).diagnostics)
    unknown_component = MINIMAL.replace("d: D", "d: E")
    assert "unknown-component" in codes(elaborate_text(unknown_component).diagnostics)


def test_missing_init_is_fatal():
    result = elaborate_text(MINIMAL.replace("  init 0;\n", ""))
    assert result.system is None
    assert "missing-init" in codes(result.diagnostics)


def test_sync_rules_must_cover_every_product_and_action():
    text = MINIMAL.replace("default [1,1] -> [0,*];", "go: [1,1] -> [0,*] when f;")
    result = elaborate_text(text)
    assert result.sync is None
    (diag,) = [d for d in result.diagnostics if d.code == "not-total"]
    assert "({}, go)" in diag.message


def test_empty_interval_is_rejected():
    text = MINIMAL.replace("[1,1] -> [0,*]", "[2,1] -> [0,*]")
    result = elaborate_text(text)
    assert result.sync is None
    assert "empty-interval" in codes(result.diagnostics)


def test_unsatisfiable_feature_model_warns_but_elaborates():
    text = MINIMAL.replace("feature_model true;", "feature_model f && !f;")
    result = elaborate_text(text)
    assert result.ok
    assert not has_errors(result.diagnostics)
    assert codes(result.diagnostics) == ["empty-family"]


def test_open_system_warns_on_unservable_sends():
    text = """
features f;
feature_model true;

component C {
  output go;
  init 0;
  0 -> 0 by go!;
}

system S = { c: C };

sync {
  default [1,1] -> [1,1];
}
"""
    result = elaborate_text(text)
    assert result.ok
    assert codes(result.diagnostics) == ["open-system"]
    assert result.diagnostics[0].severity == "warning"


# --- formatting -------------------------------------------------------------


@pytest.mark.parametrize("name", EXAMPLES)
def test_format_is_a_fixpoint_for_every_bundled_example(name):
    parsed = parse(read_example(name))
    assert parsed.document is not None
    rendered = format_document(parsed.document)
    reparsed = parse(rendered)
    assert reparsed.document == parsed.document
    assert format_document(reparsed.document) == rendered


def test_format_keeps_defaults_implicit():
    rendered = format_document(parse(MINIMAL).document)
    assert "when true" not in rendered
    assert "default [1,1] -> [0,*];" in rendered
