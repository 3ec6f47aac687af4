#!/usr/bin/env python3
"""Regenerates the bundled dataset fixtures under data/.

The nine classic effort-estimation datasets (kemerer, albrecht, isbsg10,
finnish, miyazaki, maxwell, desharnais, kitchenham, china) are distributed
under varying licenses, so the repository bundles synthetic stand-ins
instead: same row counts, column names, and value ranges as the published
summaries, with effort driven by a latent project-size signal plus
multiplicative noise so that analogy-based methods have real structure to
exploit.
"""

import numpy as np

# name -> (rows, [(feature, min, max, relevance)], (effort_min, effort_max))
# relevance in [0,1]: how strongly the feature tracks the latent size signal.
DATASETS = {
    "kemerer": (15, [
        ("Language", 1, 3, 0.1),
        ("Hardware", 1, 6, 0.1),
        ("Duration", 5, 31, 0.7),
        ("KSLOC", 39, 450, 0.9),
        ("AdjFP", 100, 2307, 0.9),
        ("RAWFP", 97, 2284, 0.9),
    ], (23, 1107)),
    "albrecht": (24, [
        ("Input", 7, 193, 0.8),
        ("Output", 12, 150, 0.8),
        ("Inquiry", 0, 75, 0.6),
        ("File", 3, 60, 0.6),
        ("FPAdj", 1, 1, 0.0),
        ("RawFPs", 190, 1902, 0.9),
        ("AdjFP", 199, 1902, 0.9),
    ], (0.5, 105)),
    "isbsg10": (37, [
        ("UFP", 1, 2, 0.1),
        ("IS", 1, 10, 0.2),
        ("DP", 1, 5, 0.2),
        ("LT", 1, 3, 0.1),
        ("PPL", 1, 14, 0.2),
        ("CA", 1, 2, 0.1),
        ("FS", 44, 1371, 0.9),
        ("RS", 1, 4, 0.2),
        ("FPS", 1, 5, 0.3),
        ("Dev", 1, 4, 0.2),
        ("Org", 1, 6, 0.1),
    ], (87, 14453)),
    "finnish": (38, [
        ("hw", 1, 3, 0.2),
        ("at", 1, 5, 0.2),
        ("FP", 65, 1814, 0.9),
        ("co", 2, 10, 0.4),
        ("prod", 1, 29, 0.5),
        ("lnsize", 4, 8, 0.8),
        ("lneff", 6, 10, 0.9),
    ], (460, 26670)),
    "miyazaki": (48, [
        ("KLOC", 7, 390, 0.9),
        ("SCRN", 0, 150, 0.7),
        ("FORM", 0, 76, 0.7),
        ("FILE", 2, 100, 0.7),
        ("ESCRN", 0, 2113, 0.8),
        ("EFORM", 0, 1566, 0.8),
        ("EFILE", 57, 3800, 0.8),
    ], (6, 340)),
    "maxwell": (62,
        [("App", 1, 5, 0.2), ("Har", 1, 5, 0.1), ("Dba", 0, 4, 0.1),
         ("Ifc", 1, 2, 0.1), ("Source", 1, 2, 0.1), ("Telon", 0, 1, 0.1),
         ("Nlan", 1, 4, 0.2)] +
        [(f"T{i:02d}", 1, 5, 0.15) for i in range(1, 15)] +
        [("Duration", 4, 54, 0.7), ("Size", 48, 3643, 0.9),
         ("Time", 1, 9, 0.2), ("Nland", 1, 4, 0.1)],
        (583, 63694)),
    "desharnais": (77, [
        ("TeamExp", 0, 4, 0.2),
        ("MngExp", 0, 7, 0.2),
        ("Length", 1, 36, 0.7),
        ("Transactions", 9, 886, 0.8),
        ("Entities", 7, 387, 0.8),
        ("AdjPts", 73, 1127, 0.9),
    ], (546, 23940)),
    "kitchenham": (145, [
        ("code", 1, 6, 0.1),
        ("type", 0, 6, 0.1),
        ("duration", 37, 946, 0.7),
        ("fun_pts", 15, 18137, 0.9),
        ("estimate", 121, 79870, 0.9),
        ("esti_mtd", 1, 5, 0.1),
    ], (219, 113930)),
    "china": (499, [
        ("ID", 1, 499, 0.0),
        ("AFP", 9, 17518, 0.9),
        ("Input", 0, 9404, 0.8),
        ("Output", 0, 2455, 0.8),
        ("Enquiry", 0, 952, 0.7),
        ("File", 0, 2955, 0.7),
        ("Interface", 0, 1572, 0.5),
        ("Added", 0, 13580, 0.8),
        ("Changed", 0, 5193, 0.4),
        ("Deleted", 0, 2657, 0.2),
        ("PDR_A", 0, 84, 0.3),
        ("PDR_U", 0, 97, 0.3),
        ("NPDR_A", 0, 101, 0.3),
        ("NPDU_U", 0, 108, 0.3),
        ("Resource", 1, 4, 0.2),
        ("DevType", 0, 0, 0.0),
        ("Duration", 1, 84, 0.6),
        ("N_effort", 31, 54620, 0.95),
    ], (26, 54620)),
}


def generate(name, rows, features, effort_range, rng):
    size = rng.uniform(0.0, 1.0, rows)
    columns = {}
    for fname, lo, hi, relevance in features:
        noise = rng.uniform(0.0, 1.0, rows)
        signal = np.clip(relevance * size + (1.0 - relevance) * noise, 0.0, 1.0)
        # Skew toward small projects, like the published summaries.
        raw = lo + (hi - lo) * signal ** 1.4
        columns[fname] = np.round(raw).astype(int) if float(lo).is_integer() and float(hi).is_integer() else raw

    e_lo, e_hi = effort_range
    wobble = np.exp(rng.normal(0.0, 0.30, rows))
    effort_signal = np.clip(size ** 1.6 * wobble, 0.0, None)
    effort_signal = effort_signal / effort_signal.max()
    effort = e_lo + (e_hi - e_lo) * effort_signal
    effort = np.maximum(effort, e_lo if e_lo > 0 else 0.5)

    lines = [",".join([f[0] for f in features] + ["effort"])]
    for r in range(rows):
        cells = [str(columns[f[0]][r]) for f in features]
        cells.append(f"{effort[r]:.2f}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def main():
    for name, (rows, features, effort_range) in DATASETS.items():
        rng = np.random.default_rng(int.from_bytes(name.encode(), "little") % (2**32))
        csv = generate(name, rows, features, effort_range, rng)
        path = f"data/{name}.csv"
        with open(path, "w") as fh:
            fh.write(csv)
        print(f"wrote {path}: {rows} rows, {len(features)} features")


if __name__ == "__main__":
    main()
