#!/usr/bin/env python3
# Copyright 2026 The critscene Authors
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

"""Regenerates the sample scenarios in this directory.

approach/      two cars on one lane, the follower closing in, plus a parked car
intersection/  a four-way crossing with a left-turn conflict and a pedestrian
"""

import csv
import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent
HEADER = ["trackId", "timestamp", "xCenter", "yCenter", "heading", "length", "width", "class", "xVelocity", "yVelocity"]


def write_tracks(path, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(HEADER)
        for r in rows:
            w.writerow([f"{v:.6f}" if isinstance(v, float) else v for v in r])


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2) + "\n")


def lane(lane_id, points, successors=(), left=None, right=None, width=3.5, kind="road"):
    doc = {"id": lane_id, "type": kind, "width": width, "centerline": [list(p) for p in points]}
    if successors:
        doc["successors"] = list(successors)
    if left is not None:
        doc["left_neighbor"] = left
    if right is not None:
        doc["right_neighbor"] = right
    return doc


def approach():
    out = HERE / "approach"
    out.mkdir(exist_ok=True)
    rows = []
    for k in range(81):
        t = 100 * k
        s = 0.1 * k
        rows.append((1, t, 10.0 + 15.0 * s, 0.0, 0.0, 4.5, 1.8, "Car", 15.0, 0.0))
        rows.append((2, t, 60.0 + 10.0 * s, 0.0, 0.0, 4.5, 1.8, "Car", 10.0, 0.0))
        rows.append((3, t, 100.0, 50.0, 0.0, 4.5, 1.8, "Car", 0.0, 0.0))
    rows.sort(key=lambda r: (r[1], r[0]))
    write_tracks(out / "tracks.csv", rows)
    write_json(out / "map.json", {
        "format": "critscene.lanemap", "version": 1, "meta": {"name": "approach"},
        "lanes": [lane(1, [(0, 0), (500, 0)]), lane(7, [(0, 50), (500, 50)])]})


def arc(center, radius, a0, a1, n=12):
    return [(center[0] + radius * math.cos(a0 + (a1 - a0) * i / n),
             center[1] + radius * math.sin(a0 + (a1 - a0) * i / n)) for i in range(n + 1)]


def intersection():
    out = HERE / "intersection"
    out.mkdir(exist_ok=True)
    lanes = [
        lane(1, [(-80, -1.75), (-10, -1.75)], successors=[2, 5]),       # eastbound approach
        lane(2, [(-10, -1.75), (80, -1.75)]),                            # eastbound through
        lane(3, [(80, 1.75), (10, 1.75)], successors=[4]),               # westbound approach
        lane(4, [(10, 1.75), (-80, 1.75)]),                              # westbound through
        lane(5, arc((-10, 8.25), 10.0, -math.pi / 2, 0.0)[:-1] + [(0.0, 8.25), (0.0, 80.0)]),  # eastbound left turn
        lane(6, [(-1.75, -6), (-1.75, 6)], width=3.0, kind="crosswalk"),
    ]
    write_json(out / "map.json", {"format": "critscene.lanemap", "version": 1,
                                  "meta": {"name": "four-way crossing"}, "lanes": lanes})

    rows = []
    turn = [p for p in lanes[4]["centerline"]]

    def along(points, s):
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            seg = math.hypot(x1 - x0, y1 - y0)
            if s <= seg:
                f = s / seg
                return x0 + f * (x1 - x0), y0 + f * (y1 - y0), math.atan2(y1 - y0, x1 - x0)
            s -= seg
        (x0, y0), (x1, y1) = points[-2], points[-1]
        return x1, y1, math.atan2(y1 - y0, x1 - x0)

    east_turn = [(-80, -1.75), (-10, -1.75)] + turn
    for k in range(0, 101):
        t = 100 * k
        secs = 0.1 * k
        # car 10 turns left from the eastbound approach, slowing into the turn
        v10 = max(6.0, 12.0 - 0.8 * secs)
        s10 = 12.0 * secs - 0.4 * min(secs, 7.5) ** 2 + (0.0 if secs <= 7.5 else 0.0)
        x, y, h = along(east_turn, 30.0 + s10)
        rows.append((10, t, x, y, h, 4.6, 1.9, "Car", v10 * math.cos(h), v10 * math.sin(h)))
        # car 11 drives westbound straight through the junction
        x11 = 70.0 - 11.0 * secs
        rows.append((11, t, x11, 1.75, math.pi, 4.4, 1.8, "Car", -11.0, 0.0))
        # truck 12 follows car 10 on the eastbound approach
        x12 = -75.0 + 10.5 * secs
        rows.append((12, t, x12, -1.75, 0.0, 9.5, 2.5, "Truck", 10.5, 0.0))
        # pedestrian 20 walks north over the crosswalk
        if k >= 30:
            y20 = -6.0 + 1.3 * (secs - 3.0)
            if y20 <= 6.0:
                rows.append((20, t, -1.75, y20, math.pi / 2, 0.5, 0.5, "Pedestrian", 0.0, 1.3))
    rows.sort(key=lambda r: (r[1], r[0]))
    write_tracks(out / "tracks.csv", rows)
    write_json(out / "params.json", {
        "rss": {"Truck": {"a_min_brake": 3.0, "a_max_brake": 6.0}},
        "sff": {"a_brake": 5.0, "norm_order": 2},
        "ttc_int": {"simultaneity_window": 2.0}})


if __name__ == "__main__":
    approach()
    intersection()
