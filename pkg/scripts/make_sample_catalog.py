"""Regenerate the bundled synthetic gateway catalog.

The sites are random draws inside coarse regional boxes, chosen so the
latitude mix resembles the public Starlink gateway map (dense in North
America, Europe and Australia, a handful of sites above 60 N). They are NOT
real gateway coordinates.

    python scripts/make_sample_catalog.py > src/leonet/data/gateways_sample.csv
"""

import math
import sys

import numpy as np

# (tag, lat_min, lat_max, lon_min, lon_max, count)
REGIONS = [
    ("NAM", 26.0, 50.0, -124.0, -68.0, 62),
    ("CAN", 50.0, 60.0, -135.0, -60.0, 8),
    ("ALK", 60.0, 71.0, -165.0, -140.0, 4),
    ("NOR", 62.0, 71.0, 5.0, 30.0, 4),
    ("EUR", 36.0, 58.0, -10.0, 30.0, 40),
    ("CAM", 14.0, 25.0, -110.0, -65.0, 8),
    ("SAM", -55.0, 5.0, -80.0, -35.0, 20),
    ("AUS", -43.0, -12.0, 114.0, 153.0, 22),
    ("NZL", -46.0, -35.0, 166.0, 178.0, 5),
    ("JPN", 31.0, 43.0, 130.0, 145.0, 5),
    ("SEA", -8.0, 18.0, 100.0, 125.0, 5),
    ("AFR", -34.0, 10.0, -17.0, 40.0, 8),
    ("MEA", 25.0, 40.0, 30.0, 55.0, 3),
]
FIXED = [
    ("SVB", 78.2, 15.6),
    ("ISL", 64.1, -21.9),
    ("HAW", 21.3, -157.9),
    ("GUM", 13.4, 144.8),
]
MIN_SEPARATION_DEG = 1.5


def central_angle(a, b):
    la1, lo1, la2, lo2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    c = math.sin(la1) * math.sin(la2) + math.cos(la1) * math.cos(la2) * math.cos(lo1 - lo2)
    return math.degrees(math.acos(max(-1.0, min(1.0, c))))


def main(seed=2025):
    rng = np.random.default_rng(seed)
    sites = [(tag, lat, lon) for tag, lat, lon in FIXED]
    for tag, la0, la1, lo0, lo1, count in REGIONS:
        placed = 0
        while placed < count:
            # uniform on the sphere inside the box
            z = rng.uniform(math.sin(math.radians(la0)), math.sin(math.radians(la1)))
            lat = math.degrees(math.asin(z))
            lon = rng.uniform(lo0, lo1)
            if all(central_angle((lat, lon), (s[1], s[2])) >= MIN_SEPARATION_DEG for s in sites):
                sites.append((tag, lat, lon))
                placed += 1
    counters = {}
    out = sys.stdout
    out.write("id,name,lat_deg,lon_deg,alt_m,max_links\n")
    for i, (tag, lat, lon) in enumerate(sites):
        counters[tag] = counters.get(tag, 0) + 1
        out.write(f"{i},SYN-{tag}-{counters[tag]:02d},{lat:.4f},{lon:.4f},0,8\n")


if __name__ == "__main__":
    main()
