"""Write tests/data/pr_calibration.json from one run against the exact values.

The bound used by the acceptance suite is 1.1 times the j = 20 figure and is
not recomputed on later runs.

    python tests/data/calibrate_pr.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from pr_rms import pr_rms  # noqa: E402

OUT = Path(__file__).parent / "pr_calibration.json"


def main():
    rms = {str(j): pr_rms(j) for j in (5, 10, 20, 40)}
    doc = {"family": "equilateral", "window": "middle half of the classical j23 interval",
           "rms": rms, "j": 20, "bound": round(1.1 * rms["20"], 4)}
    OUT.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
