#!/usr/bin/env python3
"""Regenerate the bundled data files from their in-code sources.

Writes the `.cat` program files and the three derivation documents into
src/catbench/data/.  Run from the repository root after changing the
programs or the proof builders; the test suite checks the shipped files
against the builders.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from catbench import programs  # noqa: E402
from catbench.derivations import script_to_json  # noqa: E402
from catbench.proofs import (  # noqa: E402
    countdown_derivation, fib_derivation, gcd_derivation,
)

WORD_SIZE = 2**31
DATA = Path(__file__).resolve().parent.parent / "src" / "catbench" / "data"


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def main() -> None:
    progs = DATA / "programs"
    write(progs / "gcd.cat", programs.GCD_SRC)
    write(progs / "gcd.A.cat", programs.GCD_A_SRC.format(w=WORD_SIZE))
    write(progs / "gcd.B.cat", programs.GCD_B_SRC)
    write(progs / "gcd.P.cat", programs.GCD_P_SRC)
    write(progs / "fib.cat", programs.FIB_SRC)
    write(progs / "fib.A.cat", "nat\n")
    write(progs / "fib.B.cat", "nat\n")
    write(progs / "fib.P.cat", programs.FIB_P_SRC)
    write(progs / "fib.P9.cat", programs.FIB_P9_SRC)
    write(progs / "countdown.cat", programs.COUNTDOWN_SRC)
    write(progs / "countdown.P.cat", programs.COUNTDOWN_P_SRC)
    write(progs / "zero.cat", "zero\n")
    write(progs / "gcd_app_2_4.cat",
          f"(ap\n{programs.GCD_SRC.rstrip()}\n  (pair 2 4))\n")
    write(progs / "fib_app_2.cat",
          f"(ap\n{programs.FIB_SRC.rstrip()}\n  2)\n")

    derivs = DATA / "derivations"
    scripts = [
        ("gcd", gcd_derivation(WORD_SIZE), "seq"),
        ("fib", fib_derivation(), "par"),
        ("countdown", countdown_derivation(), "seq"),
    ]
    for name, deriv, mode in scripts:
        doc = script_to_json(deriv, mode=mode, word_size=WORD_SIZE, samples=8)
        write(derivs / f"{name}.deriv.json", json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
