#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        curveplot.py
# Purpose:     Make a plot of correlation curve files
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------


def main():
    """Uses matplotlib to plot the correlation curves written by the speckle command"""
    import sys
    import argparse
    import matplotlib.pyplot as plt

    from specklelib.correlation.curve import CorrelationCurve

    parser = argparse.ArgumentParser(description="Plots C12 against the wavefront radius for one or more curve files")
    parser.add_argument('curves', nargs='+', help="Curve CSV files")
    parser.add_argument("-o", "--output", type=str, default=None,
                        help="Output the image to a file instead of showing it. Example: -o curves.png")
    parser.add_argument("-t", "--title", type=str, default=None, help="Title to appear on the top of the plot")

    if len(sys.argv) == 1:
        parser.print_help(sys.stderr)
        sys.exit(-1)
    args = parser.parse_args()

    fig, ax = plt.subplots()
    ax.grid(True)
    for filename in args.curves:
        curve = CorrelationCurve.from_csv(filename)
        label = f"{filename} ({curve.engine.value})"
        if curve.stat_error is not None:
            ax.errorbar(curve.radii, curve.c12, yerr=[3 * e for e in curve.stat_error], marker='o', markersize=3,
                        capsize=2, label=label)
        else:
            ax.plot(curve.radii, curve.c12, marker='.', label=label)
    ax.set(xlabel='wavefront radius', ylabel='C12', ylim=(0, 1.05))
    if args.title:
        ax.set_title(args.title)
    ax.legend()
    fig.tight_layout()
    if args.output:
        fig.savefig(args.output)
    else:
        plt.show()


if __name__ == "__main__":
    main()
