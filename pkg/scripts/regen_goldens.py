#!/usr/bin/env python3
"""Regenerate the CLI golden files under tests/golden/.

Run from the repository root after an intentional output change:

    python scripts/regen_goldens.py
"""

import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from test_cli import build_fixtures, golden_cases, run_cli  # noqa: E402


def main() -> None:
    golden_dir = ROOT / "tests" / "golden"
    golden_dir.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        fixtures = build_fixtures(Path(tmp))
        for name, argv in golden_cases(fixtures).items():
            code, out = run_cli(argv)
            expected_code = 1 if name == "plan_validate_tampered" else 0
            assert code == expected_code, (name, code, out)
            (golden_dir / f"{name}.json").write_text(out)
            print(f"wrote {name}.json ({len(out)} bytes)")


if __name__ == "__main__":
    main()
