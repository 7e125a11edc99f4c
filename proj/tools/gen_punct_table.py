#!/usr/bin/env python3
"""Regenerates the Unicode punctuation range table (category P*)."""

import sys
import unicodedata


def main() -> None:
    points = [cp for cp in range(0x110000)
              if unicodedata.category(chr(cp)).startswith("P")]
    ranges = []
    start = prev = points[0]
    for cp in points[1:]:
        if cp == prev + 1:
            prev = cp
            continue
        ranges.append((start, prev))
        start = prev = cp
    ranges.append((start, prev))

    out = sys.stdout
    out.write("// Generated by tools/gen_punct_table.py (Unicode %s). Do not edit.\n"
              % unicodedata.unidata_version)
    out.write("// Inclusive codepoint ranges with general category P*.\n")
    out.write("static constexpr uint32_t kPunctRanges[][2] = {\n")
    for lo, hi in ranges:
        out.write("    {0x%04X, 0x%04X},\n" % (lo, hi))
    out.write("};\n")


if __name__ == "__main__":
    main()
