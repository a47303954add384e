"""Regenerate the committed synthetic coefficient fixtures.

Each fixture is a serialized eigensystem document produced by the seeded
builders in twistctl.synth, written with sorted keys so regeneration is
byte-stable.  The builders plant a known twist structure, which the test
suite then expects detection to recover from the file alone.

Usage: python3 scripts/make_fixtures.py [outdir]
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from twistctl.eigensystem import serialize
from twistctl import synth

FIXTURES = {
    # rank 3 over Q(i) with one outer twist; coefficients reach 500 so the
    # command-line walkthroughs can run at larger bounds
    "vantop.json": lambda: synth.vantop_system(500),
    # rank 3 over Q(i) with no twists at all (general type, trivial group)
    "generic.json": lambda: synth.generic_system(200),
    # rank 3 over Q(sqrt 2) with one planted inner twist
    "rational_inner.json": lambda: synth.rational_inner_system(200),
    # rank 3 over the biquadratic field with a planted four-group of twists
    "klein.json": lambda: synth.klein_system(200),
    # rank 2 over Q, nothing to detect: the smallest control fixture
    "rational_rank2.json": lambda: synth.rational_rank2_system(200),
}


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(__file__).resolve().parent.parent / "tests" / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, build in sorted(FIXTURES.items()):
        doc = serialize(build())
        path = outdir / name
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
