#!/usr/bin/env python3
"""Render exported wavelet sample CSVs into 3D figures.

Consumes the CSV files written by the quatwave command line tool and
turns each one into a PNG.  Scaling-function and wavelet samples
(columns x1, x2, magnitude, R, G, B) become colored 3D scatter plots:
point height is the magnitude and point color is the RGB triple with
each channel affinely rescaled into [0, 1] per file.  Eigenvalue
profiles (columns xi1, xi2, lambda) become surface plots.  No numbers
are computed here beyond that color rescaling; everything plotted comes
straight from the files.

Usage: render.py --in <csv...> --out <dir> [--lambda]
"""

import argparse
import csv
import os
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCATTER_COLUMNS = ("x1", "x2", "magnitude", "R", "G", "B")
SURFACE_COLUMNS = ("xi1", "xi2", "lambda")


class InputError(Exception):
    """A CSV file that cannot be rendered."""


@dataclass
class RenderJob:
    """One batch of input files and where their images go."""

    inputs: list
    out_dir: str
    surface: bool = False
    elevation: float = 30.0
    azimuth: float = -60.0


def read_table(path, columns):
    """Read a CSV with the exact given header into float columns.

    Returns one list per column.  Raises InputError naming the offending
    row (the header is row 1) for a wrong header, a row with the wrong
    field count, or a field that does not parse as a number.
    """
    tables = [[] for _ in columns]
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise InputError("%s: file is empty" % path)
        if tuple(name.strip() for name in header) != columns:
            raise InputError("%s: row 1: header must be %s, got %r"
                             % (path, ",".join(columns), ",".join(header)))
        for number, row in enumerate(reader, start=2):
            if len(row) != len(columns):
                raise InputError(
                    "%s: row %d: expected %d fields, found %d"
                    % (path, number, len(columns), len(row)))
            for column, text in zip(tables, row):
                try:
                    column.append(float(text))
                except ValueError:
                    raise InputError(
                        "%s: row %d: %r is not a number"
                        % (path, number, text)) from None
    if not tables[0]:
        raise InputError("%s: no data rows" % path)
    return tables


def rescale_channel(values):
    """Map a list of values affinely onto [0, 1]; a flat channel goes dark."""
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def render_scatter(path, out_path, job):
    """Plot one sample file as a colored 3D scatter; returns point count."""
    x1, x2, magnitude, red, green, blue = read_table(path, SCATTER_COLUMNS)
    colors = list(zip(rescale_channel(red), rescale_channel(green),
                      rescale_channel(blue)))
    fig = plt.figure(figsize=(8.0, 6.0))
    ax = fig.add_subplot(projection="3d")
    ax.view_init(elev=job.elevation, azim=job.azimuth)
    ax.scatter(x1, x2, magnitude, c=colors, s=2.0, depthshade=False)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_zlabel("magnitude")
    ax.set_title(os.path.splitext(os.path.basename(path))[0])
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return len(x1)


def render_surface(path, out_path, job):
    """Plot one eigenvalue profile as a surface; returns point count."""
    xi1, xi2, lam = read_table(path, SURFACE_COLUMNS)
    # rows come out of the exporter in row-major grid order, so the run
    # of equal leading coordinates gives the grid width
    width = 1
    while width < len(xi1) and xi1[width] == xi1[0]:
        width += 1
    if len(xi1) % width:
        raise InputError("%s: %d rows do not fill a grid of width %d"
                         % (path, len(xi1), width))
    height = len(xi1) // width

    def grid(flat):
        return np.array(flat).reshape(height, width)

    fig = plt.figure(figsize=(8.0, 6.0))
    ax = fig.add_subplot(projection="3d")
    ax.view_init(elev=job.elevation, azim=job.azimuth)
    ax.plot_surface(grid(xi1), grid(xi2), grid(lam), cmap="viridis",
                    linewidth=0.0)
    ax.set_xlabel("xi1")
    ax.set_ylabel("xi2")
    ax.set_zlabel("lambda")
    ax.set_title(os.path.splitext(os.path.basename(path))[0])
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return len(xi1)


def render(job):
    """Render every input of a job; returns [(image path, point count)]."""
    os.makedirs(job.out_dir, exist_ok=True)
    results = []
    for path in job.inputs:
        stem = os.path.splitext(os.path.basename(path))[0]
        out_path = os.path.join(job.out_dir, stem + ".png")
        if job.surface:
            count = render_surface(path, out_path, job)
        else:
            count = render_scatter(path, out_path, job)
        print("%s: plotted %d points" % (out_path, count))
        results.append((out_path, count))
    return results


def build_parser():
    parser = argparse.ArgumentParser(
        prog="render.py",
        description="Render exported wavelet sample CSVs as PNG figures.")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="input CSV files")
    parser.add_argument("--out", required=True, metavar="DIR",
                        help="directory for the PNG images")
    parser.add_argument("--lambda", dest="surface", action="store_true",
                        help="treat inputs as eigenvalue profiles "
                             "(xi1, xi2, lambda) and draw surfaces")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    job = RenderJob(inputs=args.inputs, out_dir=args.out,
                    surface=args.surface)
    try:
        render(job)
    except (InputError, OSError) as err:
        print("render.py: %s" % err, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
