#!/usr/bin/env python3
"""Build the grayscale QF65 desk corpus from images bundled with scikit-image/scikit-learn.

Each source photo is converted to luma, cut into 256x256 tiles, auto-levelled
(1st/99th percentile stretched to 0/255 with clipping)
and saved as a baseline JPEG with the standard IJG tables.
"""
import argparse
import os

import numpy as np
from PIL import Image

SKIMAGE = "/usr/local/lib/python3.10/dist-packages/skimage/data"
SKLEARN = "/usr/local/lib/python3.10/dist-packages/sklearn/datasets/images"

SOURCES = [
    (SKIMAGE, "camera.png", 4),
    (SKIMAGE, "astronaut.png", 4),
    (SKIMAGE, "coffee.png", 3),
    (SKIMAGE, "chelsea.png", 2),
    (SKIMAGE, "coins.png", 2),
    (SKIMAGE, "moon.png", 3),
    (SKIMAGE, "brick.png", 2),
    (SKIMAGE, "grass.png", 2),
    (SKIMAGE, "gravel.png", 2),
    (SKIMAGE, "rocket.jpg", 3),
    (SKIMAGE, "motorcycle_left.png", 4),
    (SKIMAGE, "motorcycle_right.png", 2),
    (SKLEARN, "china.jpg", 4),
    (SKLEARN, "flower.jpg", 3),
    (SKIMAGE, "hubble_deep_field.jpg", 3),
    (SKIMAGE, "retina.jpg", 2),
    (SKIMAGE, "cell.png", 2),
    (SKIMAGE, "ihc.png", 2),
    (SKIMAGE, "clock_motion.png", 1),
]

TILE = 256


def auto_levels(a):
    lo, hi = np.percentile(a, [1.0, 99.0])
    if hi <= lo:
        return a.astype(np.uint8)
    b = (a.astype(np.float64) - lo) * 255.0 / (hi - lo)
    return np.clip(np.rint(b), 0, 255).astype(np.uint8)


def tiles(gray, count):
    h, w = gray.shape
    ys = np.linspace(0, h - TILE, num=max(1, int(np.ceil(np.sqrt(count))))).astype(int)
    xs = np.linspace(0, w - TILE, num=max(1, int(np.ceil(count / len(ys))))).astype(int)
    out = []
    for y in ys:
        for x in xs:
            if len(out) < count:
                out.append(gray[y:y + TILE, x:x + TILE])
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--qf", type=int, default=65)
    args = ap.parse_args()

    corpus = os.path.join(args.out, "corpus")
    os.makedirs(corpus, exist_ok=True)
    index = 0
    for base, name, count in SOURCES:
        gray = np.asarray(Image.open(os.path.join(base, name)).convert("L"))
        for tile in tiles(gray, count):
            path = os.path.join(corpus, f"img{index:03d}.jpg")
            Image.fromarray(auto_levels(tile)).save(path, quality=args.qf, optimize=False)
            index += 1

    demo = auto_levels(np.asarray(Image.open(os.path.join(SKIMAGE, "camera.png")).convert("L")))
    Image.fromarray(demo).save(os.path.join(args.out, "demo.jpg"), quality=args.qf, optimize=False)
    print(f"wrote {index} corpus images to {corpus}")


if __name__ == "__main__":
    main()
