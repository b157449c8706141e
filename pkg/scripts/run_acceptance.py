"""Run the acceptance suite and print its PASS/FAIL lines."""
from __future__ import annotations

import subprocess
import sys
from pathlib import Path

from configs import AcceptanceConfig


def main(cfg: AcceptanceConfig = AcceptanceConfig()) -> int:
    root = Path(__file__).resolve().parents[1]
    cmd = [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"), *cfg.pytest_args]
    proc = subprocess.run(cmd, cwd=root, capture_output=True, text=True)
    lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("[criterion")]
    print("\n".join(lines))
    if proc.returncode:
        print(proc.stdout[-4000:], file=sys.stderr)
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
