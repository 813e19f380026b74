#!/usr/bin/env python3
"""Regenerates include/prefact/unicode_tables.hpp from Python's unicodedata.

Usage: python3 tools/gen_unicode_tables.py > include/prefact/unicode_tables.hpp

Emits two tables:
  kAlnumRanges  - inclusive code point ranges whose general category is a
                  letter (L*) or decimal digit (Nd)
  kLowerRuns    - (start, end, step, delta) runs encoding the simple
                  lowercase mapping; multi-codepoint expansions are skipped
"""

import sys
import unicodedata

MAX_CP = 0x2FFFF  # BMP + SMP covers every script we care to tokenize


def alnum_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP + 1):
        cat = unicodedata.category(chr(cp))
        is_alnum = cat.startswith("L") or cat == "Nd"
        if is_alnum and start is None:
            start = cp
        elif not is_alnum and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX_CP))
    return ranges


def lower_runs():
    pairs = []
    for cp in range(MAX_CP + 1):
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low) - cp))
    runs = []
    i = 0
    while i < len(pairs):
        start, delta = pairs[i]
        j = i + 1
        step = None
        while j < len(pairs) and pairs[j][1] == delta:
            gap = pairs[j][0] - pairs[j - 1][0]
            if step is None:
                if gap > 2:
                    break
                step = gap
            elif gap != step:
                break
            j += 1
        end = pairs[j - 1][0]
        runs.append((start, end, step or 1, delta))
        i = j
    return runs


def main():
    ranges = alnum_ranges()
    runs = lower_runs()
    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py -- do not edit by hand.\n")
    out.write("// python3 tools/gen_unicode_tables.py > include/prefact/unicode_tables.hpp\n")
    out.write("#pragma once\n\n")
    out.write("#include <cstdint>\n#include <cstddef>\n\n")
    out.write("namespace prefact::detail {\n\n")
    out.write("struct CpRange { char32_t lo; char32_t hi; };\n")
    out.write("struct LowerRun { char32_t lo; char32_t hi; std::uint8_t step; std::int32_t delta; };\n\n")
    out.write(f"// {len(ranges)} ranges, categories L* and Nd, Unicode {unicodedata.unidata_version}\n")
    out.write("inline constexpr CpRange kAlnumRanges[] = {\n")
    for k in range(0, len(ranges), 6):
        row = ranges[k : k + 6]
        out.write("    " + " ".join(f"{{0x{a:X},0x{b:X}}}," for a, b in row) + "\n")
    out.write("};\n")
    out.write(f"inline constexpr std::size_t kAlnumRangeCount = {len(ranges)};\n\n")
    out.write(f"// {len(runs)} simple lowercase-mapping runs\n")
    out.write("inline constexpr LowerRun kLowerRuns[] = {\n")
    for k in range(0, len(runs), 4):
        row = runs[k : k + 4]
        out.write("    " + " ".join(f"{{0x{a:X},0x{b:X},{s},{d}}}," for a, b, s, d in row) + "\n")
    out.write("};\n")
    out.write(f"inline constexpr std::size_t kLowerRunCount = {len(runs)};\n\n")
    out.write("}  // namespace prefact::detail\n")


if __name__ == "__main__":
    main()
