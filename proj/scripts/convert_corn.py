#!/usr/bin/env python3
"""Convert the Eigenvector corn benchmark archive (corn.mat) into the CSV
layout this project consumes.

Usage:
    python3 scripts/convert_corn.py /path/to/corn.mat data/corn

The archive is not redistributed here; download it from Eigenvector Research
(http://www.eigenvector.com/data/Corn/) and point this script at corn.mat.

What gets written to the output directory:
    m5.csv, mp5.csv, mp6.csv          80 x 700 spectra, wavelength header row
    responses.csv                     80 x 4 (moisture, oil, protein, starch)
    m5_nbs.csv, mp5_nbs.csv,
    mp6_nbs.csv                       first 3 NBS glass standard spectra per
                                      instrument, in archive row order
    manifest.json                     m5 -> mp6 scenario (the default)
    manifest_mp6_m5.json, manifest_m5_mp5.json, manifest_mp5_mp6.json

The script prints the SHA-256 of the input archive and of every emitted file
so conversions can be compared across machines, and refuses to continue when
the archive does not have the documented shapes (80 samples, 700 channels at
1100..2498 nm in 2 nm steps, 4 response columns).
"""

import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import scipy.io


RESPONSE_NAMES = ["moisture", "oil", "protein", "starch"]
N_SAMPLES = 80
N_CHANNELS = 700
WAVELENGTH_START = 1100.0
WAVELENGTH_STEP = 2.0
N_STANDARDS = 3  # the first three NBS glass spectra, archive order


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def extract_array(obj, name: str) -> np.ndarray:
    """Unwrap an Eigenvector DataSet object (or plain array) to a 2-D array."""
    seen = obj
    for _ in range(8):
        if isinstance(seen, np.ndarray) and seen.dtype == object and seen.size == 1:
            seen = seen.item()
            continue
        if isinstance(seen, np.ndarray) and seen.dtype.names and "data" in seen.dtype.names:
            seen = seen["data"]
            continue
        if hasattr(seen, "data") and not isinstance(seen, np.ndarray):
            seen = seen.data
            continue
        break
    arr = np.asarray(seen, dtype=float)
    if arr.ndim != 2:
        raise SystemExit(f"{name}: expected a 2-D table, got shape {arr.shape}")
    return arr


def fmt(value: float) -> str:
    return repr(float(value))


def write_csv(path: Path, rows: np.ndarray, header: list | None) -> None:
    lines = []
    if header is not None:
        lines.append(",".join(str(h) for h in header))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    print(f"  {path}  sha256={sha256(path)}")


def write_manifest(path: Path, name: str, primary: str, secondary: str) -> None:
    doc = {
        "version": 1,
        "name": name,
        "primary_label": primary,
        "secondary_label": secondary,
        "response_names": RESPONSE_NAMES,
        "wavelength_start_nm": WAVELENGTH_START,
        "wavelength_step_nm": WAVELENGTH_STEP,
        "files": {
            "primary_spectra": f"{primary}.csv",
            "secondary_spectra": f"{secondary}.csv",
            "responses": "responses.csv",
            "primary_standards": f"{primary}_nbs.csv",
            "secondary_standards": f"{secondary}_nbs.csv",
        },
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"  {path}  sha256={sha256(path)}")


def main() -> None:
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    mat_path = Path(sys.argv[1])
    out_dir = Path(sys.argv[2])
    if not mat_path.is_file():
        raise SystemExit(f"archive not found: {mat_path}")
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"input {mat_path}  sha256={sha256(mat_path)}")
    mat = scipy.io.loadmat(str(mat_path), squeeze_me=False, struct_as_record=True)

    spectra = {}
    for key in ("m5spec", "mp5spec", "mp6spec"):
        if key not in mat:
            raise SystemExit(f"archive is missing '{key}'")
        arr = extract_array(mat[key], key)
        if arr.shape != (N_SAMPLES, N_CHANNELS):
            raise SystemExit(f"{key}: expected {N_SAMPLES}x{N_CHANNELS}, got {arr.shape}")
        spectra[key[:-4]] = arr

    propvals = extract_array(mat["propvals"], "propvals")
    if propvals.shape != (N_SAMPLES, len(RESPONSE_NAMES)):
        raise SystemExit(f"propvals: expected {N_SAMPLES}x{len(RESPONSE_NAMES)}, "
                         f"got {propvals.shape}")

    standards = {}
    for key in ("m5nbs", "mp5nbs", "mp6nbs"):
        if key not in mat:
            raise SystemExit(f"archive is missing '{key}'")
        arr = extract_array(mat[key], key)
        if arr.shape[1] != N_CHANNELS or arr.shape[0] < N_STANDARDS:
            raise SystemExit(f"{key}: expected at least {N_STANDARDS}x{N_CHANNELS}, "
                             f"got {arr.shape}")
        if arr.shape[0] > N_STANDARDS:
            print(f"  note: {key} has {arr.shape[0]} rows; keeping the first "
                  f"{N_STANDARDS} (archive order)")
        standards[key[:-3]] = arr[:N_STANDARDS]

    wavelengths = [WAVELENGTH_START + WAVELENGTH_STEP * j for j in range(N_CHANNELS)]
    header = [fmt(w) for w in wavelengths]

    print("writing:")
    for label, arr in spectra.items():
        write_csv(out_dir / f"{label}.csv", arr, header)
    write_csv(out_dir / "responses.csv", propvals, RESPONSE_NAMES)
    for label, arr in standards.items():
        write_csv(out_dir / f"{label}_nbs.csv", arr, header)

    write_manifest(out_dir / "manifest.json", "corn_m5_mp6", "m5", "mp6")
    write_manifest(out_dir / "manifest_mp6_m5.json", "corn_mp6_m5", "mp6", "m5")
    write_manifest(out_dir / "manifest_m5_mp5.json", "corn_m5_mp5", "m5", "mp5")
    write_manifest(out_dir / "manifest_mp5_mp6.json", "corn_mp5_mp6", "mp5", "mp6")
    print("done")


if __name__ == "__main__":
    main()
