#!/usr/bin/env python3
"""Download KEEL classification datasets into data/ (needs network access).

Usage: python3 scripts/fetch_datasets.py [name ...]

Without arguments fetches the benchmark set the acceptance suite expects
beyond the bundled files: wisconsin, glass, sonar.
"""

import io
import os
import sys
import urllib.request
import zipfile

BASE_URL = "https://sci2s.ugr.es/keel/dataset/data/classification/{name}.zip"
OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")
DEFAULT = ["wisconsin", "glass", "sonar"]


def fetch(name: str) -> None:
    url = BASE_URL.format(name=name)
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as response:
        payload = response.read()
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        member = f"{name}.dat"
        if member not in archive.namelist():
            candidates = [m for m in archive.namelist() if m.endswith(".dat")]
            if not candidates:
                raise RuntimeError(f"no .dat file inside {url}")
            member = candidates[0]
        target = os.path.join(OUT_DIR, f"{name}.dat")
        with open(target, "wb") as out:
            out.write(archive.read(member))
    print(f"wrote {target}")


def main() -> int:
    names = sys.argv[1:] or DEFAULT
    os.makedirs(OUT_DIR, exist_ok=True)
    failures = 0
    for name in names:
        try:
            fetch(name)
        except Exception as exc:  # noqa: BLE001 - report and continue
            print(f"failed to fetch {name}: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
