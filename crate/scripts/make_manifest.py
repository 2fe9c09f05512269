#!/usr/bin/env python3
"""Build `iqa eval` manifests from local copies of public IQA databases.

The databases are not redistributable, so they are not bundled. Download
them from their maintainers and point this script at the unpacked folder:

    python3 scripts/make_manifest.py live    /data/live_release2 > live.csv
    python3 scripts/make_manifest.py csiq    /data/CSIQ --scores csiq_dmos.csv > csiq.csv
    python3 scripts/make_manifest.py tid2008 /data/tid2008 > tid2008.csv

Rows are written with absolute paths. Files that cannot be found are
reported on stderr and left out.
"""

import argparse
import csv
import sys
from pathlib import Path

HEADER = ["ref_path", "test_path", "subjective", "subjective_kind", "distortion", "database"]


def find_ci(folder: Path, name: str) -> Path | None:
    """Case-insensitive lookup; the databases ship with inconsistent casing."""
    exact = folder / name
    if exact.exists():
        return exact
    if not folder.is_dir():
        return None
    lowered = name.lower()
    for p in folder.iterdir():
        if p.name.lower() == lowered:
            return p
    return None


def live(root: Path, _args):
    # release 2 layout: dmos.mat holds `dmos` and `orgs` (1 = undistorted copy)
    # over 982 images ordered jp2k, jpeg, wn, gblur, fastfading;
    # refnames_all.mat holds the reference name of each.
    from scipy.io import loadmat

    dmos = loadmat(root / "dmos.mat")
    scores = dmos["dmos"].ravel()
    orgs = dmos["orgs"].ravel()
    refs = [str(r[0]) for r in loadmat(root / "refnames_all.mat")["refnames_all"].ravel()]
    folders = [("jp2k", 227), ("jpeg", 233), ("wn", 174), ("gblur", 174), ("fastfading", 174)]
    k = 0
    for folder, count in folders:
        for i in range(1, count + 1):
            if not orgs[k]:
                yield (root / "refimgs" / refs[k], root / folder / f"img{i}.bmp", scores[k], "DMOS", folder, "LIVE")
            k += 1


def csiq(root: Path, args):
    # scores come from the DMOS spreadsheet exported to CSV with columns
    # image, dst_type, dst_lev, dmos
    if args.scores is None:
        sys.exit("csiq needs --scores (CSV export of the DMOS spreadsheet)")
    folders = {"noise": "awgn", "awgn": "awgn", "jpeg": "jpeg", "jpeg 2000": "jpeg2000",
               "jpeg2000": "jpeg2000", "1/f noise": "fnoise", "fnoise": "fnoise",
               "blur": "blur", "contrast": "contrast"}
    with open(args.scores, newline="") as f:
        for row in csv.DictReader(f):
            kind = folders[row["dst_type"].strip().lower()]
            name = row["image"].strip()
            dst = f"{name}.{kind}.{row['dst_lev'].strip()}.png"
            test = find_ci(root / "dst_imgs" / kind, dst)
            ref = find_ci(root / "src_imgs", f"{name}.png")
            yield (ref, test or root / "dst_imgs" / kind / dst, float(row["dmos"]), "DMOS", kind, "CSIQ")


def tid2008(root: Path, _args):
    # mos_with_names.txt: "<mos> <name>" with names like i01_05_3.bmp
    # (reference 01, distortion type 05, level 3)
    for line in (root / "mos_with_names.txt").read_text().splitlines():
        if not line.strip():
            continue
        mos, name = line.split()
        ref_id, kind, _level = Path(name).stem.split("_")
        ref = find_ci(root / "reference_images", f"{ref_id}.bmp")
        test = find_ci(root / "distorted_images", name)
        yield (ref, test or root / "distorted_images" / name, float(mos), "MOS", f"type{int(kind):02d}", "TID2008")


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("database", choices=["live", "csiq", "tid2008"])
    parser.add_argument("root", type=Path, help="unpacked database folder")
    parser.add_argument("--scores", type=Path, help="score table (csiq only)")
    args = parser.parse_args()

    rows = {"live": live, "csiq": csiq, "tid2008": tid2008}[args.database](args.root.resolve(), args)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(HEADER)
    written = missing = 0
    for ref, test, score, kind, distortion, database in rows:
        if ref is None or not Path(ref).exists() or not Path(test).exists():
            missing += 1
            print(f"missing: {ref} / {test}", file=sys.stderr)
            continue
        out.writerow([ref, test, repr(float(score)), kind, distortion, database])
        written += 1
    print(f"{written} rows written, {missing} missing", file=sys.stderr)


if __name__ == "__main__":
    main()
