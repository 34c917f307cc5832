"""Golden-file and determinism tests for the command-line front end.

Each subcommand's envelope is byte-compared against a frozen golden file;
regenerate them with scripts/regen_goldens.py after intentional changes.
"""

import io
import json
import os
import subprocess
import sys
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from lscf.cli import main

GOLDEN_DIR = Path(__file__).parent / "golden"


def run_cli(argv, cwd=None) -> tuple[int, str]:
    buf = io.StringIO()
    old = os.getcwd()
    if cwd is not None:
        os.chdir(cwd)
    try:
        with redirect_stdout(buf):
            code = main(argv)
    finally:
        os.chdir(old)
    return code, buf.getvalue()


def build_fixtures(root: Path) -> dict[str, str]:
    """Deterministic input files shared by the file-reading subcommands."""
    code, out = run_cli(
        ["plan", "build", "--q", "2", "--U", "zero-constant", "--horizon", "8",
         "--count", "2"]
    )
    assert code == 0
    plan_payload = json.loads(out)["result"]
    plan_path = root / "plan.json"
    plan_path.write_text(json.dumps(plan_payload, sort_keys=True) + "\n")

    tampered = dict(plan_payload)
    tampered["M"] = [plan_payload["M"][0] - 1] + list(plan_payload["M"][1:])
    tampered_path = root / "tampered.json"
    tampered_path.write_text(json.dumps(tampered, sort_keys=True) + "\n")

    digits_path = root / "digits.jsonl"
    digits_path.write_text(
        "\n".join(json.dumps(s) for s in [{"q": 2}, "X", "X^2+X", "X+1"]) + "\n"
    )

    code, _ = run_cli(
        ["point", "emit", "--plan", str(plan_path), "--digits", "30",
         "--out", str(root / "point.jsonl")]
    )
    assert code == 0
    return {
        "plan": str(plan_path),
        "tampered": str(tampered_path),
        "digits": str(digits_path),
        "point": str(root / "point.jsonl"),
    }


def golden_cases(fx: dict[str, str]) -> dict[str, list[str]]:
    return {
        "cf_expand": ["cf", "expand", "X/(X^2+1)", "--q", "2"],
        "cf_value": ["cf", "value", fx["digits"], "--through", "24"],
        "poly_count_irreducible": ["poly", "count-irreducible", "--q", "2", "--d", "4", "--monic"],
        "poly_rank": ["poly", "rank", "X^2+1", "--q", "2"],
        "poly_unrank": ["poly", "unrank", "4", "--q", "2"],
        "density_poly": ["density", "poly", "--q", "3", "--U", "monic", "--S", "full", "--horizon", "6"],
        "density_int": ["density", "int", "--B", "even", "--G", "all", "--horizon", "30"],
        "seed_report": ["seed", "report", "--q", "2", "--t", "3", "--horizon", "4"],
        "plan_build": ["plan", "build", "--q", "2", "--U", "zero-constant", "--horizon", "8", "--count", "2"],
        "plan_validate": ["plan", "validate", fx["plan"]],
        "plan_validate_tampered": ["plan", "validate", fx["tampered"]],
        "point_emit": ["point", "emit", "--plan", fx["plan"], "--digits", "30", "--through", "48"],
        "diag_holder": ["diag", "holder", "--plan", fx["plan"], "--depths", "5,23,28", "--variants", "1"],
        "pattern_scan": ["pattern", "scan", "--point", fx["point"], "--U", "zero-constant", "--horizon", "30", "--L", "3", "--k", "1"],
        "source_counts": ["source", "counts", "--q", "2", "--S", "irreducible", "--max-d", "8"],
    }


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    return build_fixtures(root)


@pytest.fixture(scope="module")
def cases(fixtures):
    return golden_cases(fixtures)


def test_all_subcommands_have_goldens(cases):
    missing = [n for n in cases if not (GOLDEN_DIR / f"{n}.json").exists()]
    assert not missing, f"golden files missing: {missing}"


@pytest.mark.parametrize(
    "name",
    [
        "cf_expand", "cf_value", "poly_count_irreducible", "poly_rank",
        "poly_unrank", "density_poly", "density_int", "seed_report",
        "plan_build", "plan_validate", "plan_validate_tampered", "point_emit",
        "diag_holder", "pattern_scan", "source_counts",
    ],
)
def test_golden(name, cases):
    code, out = run_cli(cases[name])
    if name == "plan_validate_tampered":
        assert code == 1
        assert json.loads(out)["error"]["kind"] == "PlanViolation"
    else:
        assert code == 0
    expected = (GOLDEN_DIR / f"{name}.json").read_text()
    assert out == expected


def test_repeat_run_byte_identical(cases):
    for name in ("plan_build", "seed_report", "diag_holder"):
        _, first = run_cli(cases[name])
        _, second = run_cli(cases[name])
        assert first == second


def test_hash_seed_independence(fixtures):
    """Byte-identical output under different interpreter hash seeds."""
    env_base = dict(os.environ)
    outputs = []
    for seed in ("0", "4242"):
        env = dict(env_base, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "lscf.cli", "plan", "build", "--q", "2",
             "--U", "zero-constant", "--horizon", "8", "--count", "2"],
            capture_output=True, env=env, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]


def test_error_envelope_shape():
    code, out = run_cli(["cf", "expand", "X^2/X", "--q", "2"])
    assert code == 1
    payload = json.loads(out)
    assert payload["error"]["kind"] == "OutOfDomain"


def test_point_emit_writes_jsonl(tmp_path, fixtures):
    out_file = tmp_path / "pt.jsonl"
    code, _ = run_cli(
        ["point", "emit", "--plan", fixtures["plan"], "--digits", "25",
         "--out", str(out_file)]
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert json.loads(lines[0]) == {"q": 2}
    assert len(lines) == 26
