#!/usr/bin/env python3
"""Regenerate src/joe_kuo_table.inc from the new-joe-kuo-6.21201 direction numbers.

The numbers are read from the copy bundled with SciPy. Each row after the
first dimension is emitted as (degree, interior polynomial bits, offset into
the flat m-value array).
"""
import pathlib
import sys

import numpy as np
import scipy.stats

src = pathlib.Path(scipy.stats.__file__).parent / "_sobol_direction_numbers.npz"
data = np.load(src)
poly, vinit = data["poly"], data["vinit"]

rows, mvals = [], []
for dim in range(1, len(poly)):
    p = int(poly[dim])
    degree = p.bit_length() - 1
    interior = (p >> 1) & ((1 << (degree - 1)) - 1) if degree > 1 else 0
    rows.append((degree, interior, len(mvals)))
    mvals.extend(int(v) for v in vinit[dim][:degree])

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "src/joe_kuo_table.inc")
with out.open("w") as f:
    f.write("// Generated by tools/gen_joe_kuo_table.py. Do not edit.\n")
    f.write("// Joe & Kuo new-joe-kuo-6.21201 primitive polynomials and initial m values.\n")
    f.write(f"constexpr std::size_t kJoeKuoDimensions = {len(poly)};\n")
    f.write("constexpr JoeKuoRow kJoeKuoRows[] = {\n")
    for i in range(0, len(rows), 6):
        f.write("  " + " ".join("{%d,%d,%d}," % r for r in rows[i:i + 6]) + "\n")
    f.write("};\n")
    f.write("constexpr std::uint32_t kJoeKuoM[] = {\n")
    for i in range(0, len(mvals), 16):
        f.write("  " + ",".join(str(v) for v in mvals[i:i + 16]) + ",\n")
    f.write("};\n")
