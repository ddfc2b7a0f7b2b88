"""End-to-end CLI behavior: golden outputs, exit codes, error channel."""

import json
from pathlib import Path

import pytest

from nbhdmc.cli import main

MODELS = Path(__file__).resolve().parent.parent / "models"
MOORE = str(MODELS / "moore.json")
W_BASE = str(MODELS / "w_separation_base.json")
W_EXT = str(MODELS / "w_separation_extended.json")
W_GAMMA = str(MODELS / "w_separation_gamma.json")
B_BASE = str(MODELS / "bullet_separation_base.json")
B_EXT = str(MODELS / "bullet_separation_extended.json")
TC_BASE = str(MODELS / "tc_base.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- check / extension ---------------------------------------------------------

def test_check_true(capsys):
    code, out, err = run(capsys, "check", "-m", MOORE, "-s", "s",
                         "-f", "U p")
    assert (code, out, err) == (0, "true\n", "")


def test_check_false_exits_one(capsys):
    code, out, _ = run(capsys, "check", "-m", MOORE, "-s", "s",
                       "-f", "U p -> ! U (U p -> p)")
    assert (code, out) == (1, "false\n")


def test_check_unknown_state(capsys):
    code, _, err = run(capsys, "check", "-m", MOORE, "-s", "x", "-f", "p")
    assert code == 2
    assert err.startswith("error: invalid-argument: unknown state name")


def test_extension(capsys):
    code, out, _ = run(capsys, "extension", "-m", W_EXT, "-f", "p | W p")
    assert (code, out) == (0, '["s", "t"]\n')


def test_forced_announcement_note(capsys, tmp_path):
    doc = {"states": ["s"], "neighborhoods": {"s": [[]]},
           "valuation": {"p": ["s"]}}
    path = tmp_path / "nonmono.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "check", "-m", str(path), "-s", "s",
                         "-f", "[p] K p", "--force")
    assert code == 1
    assert out == "false\n"
    assert "note: forced announcement" in err


def test_unforced_announcement_on_nonmonotone_model(capsys, tmp_path):
    doc = {"states": ["s"], "neighborhoods": {"s": [[]]},
           "valuation": {"p": ["s"]}}
    path = tmp_path / "nonmono.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "-m", str(path), "-s", "s",
                       "-f", "[p] K p")
    assert code == 2
    assert err.startswith("error: non-monotone:")
    assert "--force" in err


# --- valid / countermodel ----------------------------------------------------------

def test_valid_exhaustive(capsys):
    code, out, _ = run(capsys, "valid", "-f", "W p -> ! p",
                       "--max-states", "2")
    assert code == 0
    assert out == ("no-counterexample\n"
                   "no countermodel up to 2 states (valuations: exhaustive)\n")


def test_valid_sampled(capsys):
    code, out, _ = run(capsys, "valid", "-f", "W p -> ! p",
                       "--max-states", "3", "--samples", "100", "--seed", "5")
    assert code == 0
    assert out.splitlines()[1] == ("no countermodel up to 3 states "
                                   "(valuations: sampled, samples=100, seed=5)")


def test_valid_finds_countermodel(capsys):
    code, out, _ = run(capsys, "valid", "-f", "O true", "--max-states", "1")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "countermodel"
    assert json.loads(lines[1]) == {
        "verdict": "countermodel",
        "model": {"states": ["s"], "neighborhoods": {"s": []},
                  "valuation": {}},
        "state": "s"}


def test_countermodel_json_verdict(capsys):
    code, out, _ = run(capsys, "countermodel", "-f", "U p -> ! U (U p -> p)",
                       "--class", "m")
    assert code == 1
    assert json.loads(out) == {
        "verdict": "countermodel",
        "model": {"states": ["s"], "neighborhoods": {"s": []},
                  "valuation": {"p": ["s"]}},
        "state": "s"}
    code, out, _ = run(capsys, "countermodel", "-f", "U p -> p",
                       "--max-states", "2")
    assert code == 0
    assert out == ('{"verdict": "no-counterexample", "max_states": 2, '
                   '"valuations": "exhaustive"}\n')


def test_search_rejects_announcements_off_monotone_class(capsys):
    code, _, err = run(capsys, "countermodel", "-f", "[p] U p")
    assert code == 2
    assert err.startswith("error: invalid-argument:")


def test_bad_class_token(capsys):
    code, _, err = run(capsys, "valid", "-f", "p", "--class", "serial")
    assert code == 2
    assert err.startswith("error: invalid-argument: unknown class token")


# --- reduce / desugar ----------------------------------------------------------------

def test_reduce_with_trace(capsys):
    code, out, _ = run(capsys, "reduce", "-f", "[W p] W p")
    assert code == 0
    assert out == (
        "W p -> W (W p -> p)\n"
        "1. AW @ root: [W p] W p ==> W p -> W [W p] p\n"
        "2. AP @ 1.0: W p -> W [W p] p ==> W p -> W (W p -> p)\n")


def test_reduce_announcement_free(capsys):
    code, out, _ = run(capsys, "reduce", "-f", "U p & W q")
    assert (code, out) == (0, "U p & W q\n")


def test_reduce_rejects_sugar(capsys):
    code, _, err = run(capsys, "reduce", "-f", "[p] K q")
    assert code == 2
    assert err.startswith("error: reduction-input:")


def test_desugar(capsys):
    code, out, _ = run(capsys, "desugar", "-f", "K p")
    assert (code, out) == (0, "! (! W p & ! (! U p & p))\n")
    code, out, _ = run(capsys, "desugar", "-f", "K p", "--target", "full")
    assert (code, out) == (0, "K p\n")


# --- morphism ---------------------------------------------------------------------------

def test_morphism_witness(capsys):
    code, out, _ = run(capsys, "morphism", "--source", W_BASE,
                       "--target", W_EXT, "--kind", "w", "--map", "s:s,t:t")
    assert code == 1
    assert out == "false\nwitness: s {t}\n"


def test_morphism_passes(capsys):
    code, out, _ = run(capsys, "morphism", "--source", W_BASE,
                       "--target", W_EXT, "--kind", "bullet",
                       "--map", "s:s,t:t")
    assert (code, out) == (0, "true\n")


def test_morphism_atom_witness(capsys, tmp_path):
    src = tmp_path / "src.json"
    tgt = tmp_path / "tgt.json"
    src.write_text(json.dumps({"states": ["s"], "neighborhoods": {"s": []},
                               "valuation": {"p": ["s"]}}))
    tgt.write_text(json.dumps({"states": ["s"], "neighborhoods": {"s": []},
                               "valuation": {}}))
    code, out, _ = run(capsys, "morphism", "--source", str(src),
                       "--target", str(tgt), "--kind", "bullet",
                       "--map", "s:s")
    assert code == 1
    assert out == "false\nwitness: s p\n"


def test_morphism_bad_map_syntax(capsys):
    code, _, err = run(capsys, "morphism", "--source", W_BASE,
                       "--target", W_EXT, "--kind", "w", "--map", "s=s")
    assert code == 2
    assert err.startswith("error: invalid-argument: map entries")


# --- transform ---------------------------------------------------------------------------

def test_transform_perturb_reproduces_shipped_pair(capsys):
    code, out, _ = run(capsys, "transform", "-m", W_BASE,
                       "--op", f"perturb:{W_GAMMA}")
    assert code == 0
    assert out == Path(W_EXT).read_text()


def test_transform_supplementation(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"states": ["s", "t"],
                                "neighborhoods": {"s": [["s"]]},
                                "valuation": {}}))
    code, out, _ = run(capsys, "transform", "-m", str(path),
                       "--op", "supplementation")
    assert code == 0
    assert json.loads(out) == {"states": ["s", "t"],
                               "neighborhoods": {"s": [["s"], ["s", "t"]],
                                                 "t": []},
                               "valuation": {}}


def test_transform_tc(capsys):
    code, out, _ = run(capsys, "transform", "-m", TC_BASE, "--op", "tc")
    assert code == 0
    assert json.loads(out)["neighborhoods"] == {"s": [["s"], ["t"]], "t": []}


def test_transform_intersect(capsys):
    code, out, _ = run(capsys, "transform", "-m", W_BASE,
                       "--op", "intersect:p")
    assert code == 0
    assert json.loads(out) == {"states": ["t"],
                               "neighborhoods": {"t": [["t"]]},
                               "valuation": {"p": ["t"]}}


def test_transform_intersect_needs_monotone(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"states": ["s"],
                                "neighborhoods": {"s": [[]]},
                                "valuation": {"p": ["s"]}}))
    code, _, err = run(capsys, "transform", "-m", str(path),
                       "--op", "intersect:p")
    assert code == 2
    assert err.startswith("error: non-monotone:")
    assert "--force" in err
    code, out, _ = run(capsys, "transform", "-m", str(path),
                       "--op", "intersect:p", "--force")
    assert code == 0
    assert json.loads(out)["neighborhoods"] == {"s": [[]]}


def test_transform_unknown_op(capsys):
    code, _, err = run(capsys, "transform", "-m", W_BASE, "--op", "shrink")
    assert code == 2
    assert err.startswith("error: invalid-argument: unknown op")


def test_transform_perturb_rejects_illegal_map(capsys, tmp_path):
    pmap = tmp_path / "pmap.json"
    pmap.write_text(json.dumps({"kind": "bullet", "sign": "add",
                                "families": {"s": [["s"]]}}))
    code, _, err = run(capsys, "transform", "-m", W_BASE,
                       "--op", f"perturb:{pmap}")
    assert code == 2
    assert err.startswith("error: model-format:")


# --- props / enumerate / distinguish / frame-valid ----------------------------------------

def test_props(capsys):
    code, out, _ = run(capsys, "props", "-m", MOORE)
    assert code == 0
    assert out == ('{"m": true, "c": true, "n": false, "r": false, '
                   '"filter": false, "neg-suppl": true}\n')


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-states", "3",
                       "--class", "m")
    assert (code, out) == (0, '{"1": 3, "2": 36, "3": 8000}\n')


def test_enumerate_all(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-states", "2")
    assert (code, out) == (0, '{"1": 4, "2": 256}\n')


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", "--m1", W_BASE, "--s1", "s",
                       "--m2", W_EXT, "--s2", "s", "--fragment", "w")
    assert (code, out) == (0, "W p\n")


def test_distinguish_none(capsys):
    code, out, _ = run(capsys, "distinguish", "--m1", W_BASE, "--s1", "s",
                       "--m2", W_EXT, "--s2", "s", "--fragment", "bullet",
                       "--depth", "2")
    assert (code, out) == (1, "none up to depth 2\n")


def test_frame_valid(capsys):
    code, out, _ = run(capsys, "frame-valid", "-m", MOORE, "-f", "U p -> p")
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, "frame-valid", "-m", MOORE, "-f", "O true")
    assert (code, out) == (1, "false\n")


# --- error channel --------------------------------------------------------------------------

def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "-m", "no/such/file.json",
                       "-s", "s", "-f", "p")
    assert code == 2
    assert err.startswith("error: io:")


def test_bad_model_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code, _, err = run(capsys, "check", "-m", str(path), "-s", "s", "-f", "p")
    assert code == 2
    assert err.startswith("error: model-format:")


def test_bad_formula(capsys):
    code, _, err = run(capsys, "extension", "-m", MOORE, "-f", "p &")
    assert code == 2
    assert err.startswith("error: parse:")


# --- paper-suite ------------------------------------------------------------------------------

def test_paper_suite_all_rows_pass(capsys):
    code, out, _ = run(capsys, "paper-suite")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "30/30 rows pass"
    rows = [line.split()[0] for line in lines[:-1]]
    for expected in ("3.2", "3.5", "4.7", "5.26", "6.4", "6.6"):
        assert expected in rows
    assert all("  PASS  " in line for line in lines[:-1])
