#!/usr/bin/env python3
# Copyright 2026 The bipv-assess Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

"""Regenerates the two-tile fixture under data/fixture/.

Masks are axis-aligned rectangles so the expected areas can be checked by
hand. Weather years come from the make_weather tool, which must be built.
"""

import argparse
import json
import pathlib
import random
import subprocess

W = H = 64
# (category code, x0, y0, x1, y1) per tile; half-open, non-overlapping.
BUILDINGS = {
    "t000": [(1, 2, 2, 30, 24), (2, 34, 2, 62, 20), (3, 2, 28, 26, 50),
             (4, 30, 24, 62, 52), (5, 4, 54, 28, 63), (6, 34, 55, 60, 63)],
    "t001": [(1, 4, 4, 28, 30), (2, 36, 6, 60, 26), (3, 6, 34, 30, 58),
             (4, 34, 30, 62, 62), (5, 40, 0, 62, 5), (6, 0, 60, 30, 64)],
}
PROMPTS = ["TP1", "TP4", "TP6"]


def rle(cells):
    """Row-major runs, background first."""
    runs, cur, n = [], False, 0
    for y in range(H):
        for x in range(W):
            v = (x, y) in cells
            if v != cur:
                runs.append(n)
                cur, n = v, 0
            n += 1
    runs.append(n)
    return {"width_px": W, "height_px": H, "runs": runs}


def rect(x0, y0, x1, y1):
    return {(x, y) for x in range(max(0, x0), min(W, x1))
            for y in range(max(0, y0), min(H, y1))}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/fixture")
    ap.add_argument("--make-weather", default="build/tools/make_weather")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    (out / "predictions").mkdir(parents=True, exist_ok=True)
    (out / "ground_truth").mkdir(parents=True, exist_ok=True)
    rng = random.Random(7)

    manifest = {"name": "fixture", "labeled": True, "tiles": []}
    for tile_id, buildings in BUILDINGS.items():
        manifest["tiles"].append({"tile_id": tile_id, "width_px": W, "height_px": H,
                                  "ppi": 96.0, "scale_denominator": 5000.0,
                                  "lens_height_m": 1200.0})
        labels = {str(c): set() for c in range(7)}
        for code, *box in buildings:
            labels[str(code)] |= rect(*box)
        taken = set().union(*labels.values())
        labels["0"] = {(x, y) for x in range(W) for y in range(H)} - taken
        gt = {"tile_id": tile_id, "width_px": W, "height_px": H,
              "labels": {k: rle(v) for k, v in labels.items()}}
        (out / "ground_truth" / f"{tile_id}.json").write_text(json.dumps(gt) + "\n")

        instances = []
        for code, x0, y0, x1, y1 in buildings:
            for prompt in PROMPTS:
                # Better prompts hug the footprint more tightly.
                slack = {"TP4": 0, "TP6": 1, "TP1": 3}[prompt]
                dx, dy = rng.randint(-slack, slack), rng.randint(-slack, slack)
                box = (x0 + dx, y0 + dy, x1 + dx - slack, y1 + dy)
                score = round(rng.uniform(0.30, 0.55), 3)
                instances.append({"category": "all" if code == 6 else code, "score": score,
                                  "prompt_id": prompt, "rle": rle(rect(*box))})
            # Every building also shows up in the generic all-buildings stream.
            if code != 6:
                instances.append({"category": "all", "score": round(rng.uniform(0.3, 0.6), 3),
                                  "prompt_id": "TP4", "rle": rle(rect(x0, y0, x1, y1))})
            # Low-confidence false positive drifting off the footprint.
            fx, fy = rng.randint(0, W - 10), rng.randint(0, H - 10)
            instances.append({"category": "all" if code == 6 else code,
                              "score": round(rng.uniform(0.05, 0.2), 3),
                              "prompt_id": "TP4", "rle": rle(rect(fx, fy, fx + 9, fy + 9))})
        pred = {"tile_id": tile_id, "instances": instances}
        (out / "predictions" / f"{tile_id}.json").write_text(json.dumps(pred) + "\n")

    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    for year in (2021, 2022):
        subprocess.run([args.make_weather, "--year", str(year), "--seed", str(year),
                        str(out / f"weather_{year}.csv")], check=True)
    (out / "consumption.csv").write_text("year,kwh\n2021,2500000\n2022,2600000\n")
    config = {
        "name": "two-tile fixture",
        "manifest": "manifest.json",
        "predictions_dir": "predictions",
        "ground_truth_dir": "ground_truth",
        "weather": {"2021": "weather_2021.csv", "2022": "weather_2022.csv"},
        "site": {"latitude_deg": 36.8, "longitude_deg": 118.05},
        "thresholds": {"default": 0.25},
        "consumption_csv": "consumption.csv",
        "output_dir": "out",
        "sweep": {"objective": "pa"},
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
