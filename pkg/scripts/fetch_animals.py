"""Download the MASS ``Animals`` table and rewrite the bundled animals.csv.

Usage: python scripts/fetch_animals.py [--url URL] [--out PATH]
"""

import argparse
import csv
import io
import pathlib
import urllib.request

URL = "https://vincentarelbundock.github.io/Rdatasets/csv/MASS/Animals.csv"
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "lqdepth" / "datasets" / "animals.csv"


def convert(text):
    rows = list(csv.reader(io.StringIO(text)))
    header = [h.strip().lower() for h in rows[0]]
    body, brain = header.index("body"), header.index("brain")
    lines = ["body_kg,brain_g"]
    for row in rows[1:]:
        if row:
            lines.append(f"{float(row[body]):g},{float(row[brain]):g}")
    if len(lines) != 29:
        raise SystemExit(f"expected 28 species, got {len(lines) - 1}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default=URL)
    parser.add_argument("--out", type=pathlib.Path, default=OUT)
    args = parser.parse_args()
    with urllib.request.urlopen(args.url, timeout=30) as resp:
        text = resp.read().decode("utf-8")
    args.out.write_text(convert(text))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
