#!/usr/bin/env python3
"""Static plots from bench CSV output.

Each input file is one bench invocation (config_hash,metric,value,unit,seed).
Each metric gets a bar chart with one bar per file; survey metrics (ending
in _m<cells>) are drawn as a line over m instead.

    scripts/plot_csv.py out.png run_c1.csv run_c2.csv ...
"""

import argparse
import re
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

SURVEY = re.compile(r"^(?P<metric>.+)_m(?P<m>\d+)$")


def load(paths):
    frames = []
    for p in paths:
        df = pd.read_csv(p)
        df["file"] = Path(p).stem
        frames.append(df)
    return pd.concat(frames, ignore_index=True)


def survey_series(df):
    series = defaultdict(list)
    for row in df.itertuples():
        m = SURVEY.match(row.metric)
        if m:
            series[(row.file, m["metric"])].append((int(m["m"]), row.value))
    return series


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", help="output image (png, svg, pdf)")
    ap.add_argument("csv", nargs="+")
    ap.add_argument("--metrics", nargs="*", help="only these metrics")
    args = ap.parse_args(argv)

    df = load(args.csv)
    series = survey_series(df)
    plain = df[~df.metric.str.match(SURVEY.pattern)]
    metrics = sorted({m for _, m in series} | set(plain.metric))
    if args.metrics:
        metrics = [m for m in metrics if m in args.metrics]
    if not metrics:
        print("no metrics to plot", file=sys.stderr)
        return 1

    fig, axes = plt.subplots(len(metrics), 1, figsize=(7, 2.6 * len(metrics)), squeeze=False)
    for ax, metric in zip(axes[:, 0], metrics):
        lines = {f: sorted(pts) for (f, mm), pts in series.items() if mm == metric}
        if lines:
            for f, pts in sorted(lines.items()):
                xs, ys = zip(*pts)
                ax.plot(xs, ys, marker="o", label=f)
            ax.set_xscale("log", base=2)
            ax.set_xlabel("m")
            ax.legend(fontsize="small")
        else:
            sub = plain[plain.metric == metric]
            ax.bar(sub.file, sub.value)
            ax.tick_params(axis="x", labelrotation=30)
        unit = df.loc[df.metric.str.startswith(metric), "unit"].iloc[0]
        ax.set_title(f"{metric} ({unit})", fontsize="medium")
    fig.tight_layout()
    fig.savefig(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
