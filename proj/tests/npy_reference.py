"""Loads meta.npy with numpy and compares it with meta.json, bit for bit."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np


def main() -> int:
    brepforge = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "d"
        subprocess.run([brepforge, "gen", "--count", "40", "--seed", "11", "--out", str(out)], check=True)
        raw = (out / "meta.npy").read_bytes()
        assert raw[:8] == b"\x93NUMPY\x01\x00", raw[:8]

        m = np.load(out / "meta.npy", allow_pickle=False)
        meta = json.loads((out / "meta.json").read_text())
        records = meta["records"]
        assert m.dtype == np.dtype("<f8"), m.dtype
        assert m.shape == (len(records), 14), m.shape
        assert m.flags["C_CONTIGUOUS"]

        want = np.array(
            [
                [r["storey_count"], r["room_total"], r["avg_room_area"], r["footprint_area"], *r["room_per_floor"]]
                for r in records
            ],
            dtype="<f8",
        )
        assert np.array_equal(m.view("<u8"), want.view("<u8")), "payload differs"

        # Writing the same matrix with numpy gives the same bytes.
        again = Path(tmp) / "again.npy"
        np.save(again, want)
        assert again.read_bytes() == raw, "numpy writes a different file"
    print(f"numpy reads {m.shape[0]} x 14 float64 rows bit-exactly")
    return 0


if __name__ == "__main__":
    sys.exit(main())
