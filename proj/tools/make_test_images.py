"""Regenerate the ground-truth PGM images under data/.

natural_<side>.pgm : grayscale portrait crop (scikit-image 'astronaut', public
                     domain), the natural-image test target.
galaxy_<side>.pgm  : synthetic inclined spiral galaxy on a dark sky, the
                     radio-imaging test target.
"""
import pathlib

import numpy as np
from skimage import color, data, transform

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write_pgm(path, img):
    img = np.clip(np.round(img * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (img.shape[1], img.shape[0]))
        f.write(img.tobytes())


def natural(side):
    gray = color.rgb2gray(data.astronaut())
    crop = gray[0:320, 90:410]
    return transform.resize(crop, (side, side), anti_aliasing=True)


def galaxy(side):
    hi = 512
    yy, xx = np.mgrid[0:hi, 0:hi].astype(float)
    xx = (xx - hi / 2) / (hi / 2)
    yy = (yy - hi / 2) / (hi / 2)
    theta = np.deg2rad(38.0)
    u = np.cos(theta) * xx + np.sin(theta) * yy
    v = -np.sin(theta) * xx + np.cos(theta) * yy
    incl = 0.38
    r = np.sqrt(u**2 + (v / incl) ** 2)
    phi = np.arctan2(v / incl, u)
    disk = np.exp(-r / 0.22)
    arms = 0.5 + 0.5 * np.cos(2.0 * (phi - 6.0 * np.log(r + 1e-3)))
    ring = np.exp(-((r - 0.55) ** 2) / (2 * 0.05**2))
    bulge = np.exp(-(r**2) / (2 * 0.05**2))
    img = 0.55 * disk * (0.35 + 0.65 * arms) + 0.35 * ring * (0.5 + 0.5 * arms) + 1.2 * bulge
    img *= r < 0.95
    rng = np.random.default_rng(31)
    for _ in range(12):
        cx, cy = rng.uniform(-0.9, 0.9, size=2)
        amp = rng.uniform(0.3, 1.0)
        img += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * 0.006**2))
    small = transform.resize(img, (side, side), anti_aliasing=True)
    small = np.clip(small / small.max(), 0.0, 1.0)
    return small


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for side in (64, 256):
        write_pgm(OUT / f"natural_{side}.pgm", natural(side))
        write_pgm(OUT / f"galaxy_{side}.pgm", galaxy(side))
