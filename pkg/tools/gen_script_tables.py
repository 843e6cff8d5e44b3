#!/usr/bin/env python3
"""Regenerate the per-script character mapping tables under src/indicvox/text/data/.

The eight Indic blocks in Unicode are laid out in parallel: a letter usually
sits at the same offset from its block base in every script that has it.  The
common label id of a character is therefore its offset in the Devanagari
reference block.  This tool enumerates a curated set of offsets, keeps the
(script, offset) pairs whose Unicode character name matches the expected name
for that slot, and writes one TSV per script:

    hex-codepoint <TAB> labelId-or-NAME <TAB> category

Name matching (not mere assignment) matters: e.g. U+0D3C is a Malayalam
virama variant, not a nukta, and must not land in the nukta slot.

Run from the repository root:  python tools/gen_script_tables.py
"""

import sys
import unicodedata
from pathlib import Path

BLOCKS = {
    "devanagari": 0x0900,
    "bengali": 0x0980,
    "gujarati": 0x0A80,
    "odia": 0x0B00,
    "tamil": 0x0B80,
    "telugu": 0x0C00,
    "kannada": 0x0C80,
    "malayalam": 0x0D00,
}

# Script word as it appears in Unicode character names (Odia is "ORIYA").
NAME_WORD = {
    "devanagari": "DEVANAGARI",
    "bengali": "BENGALI",
    "gujarati": "GUJARATI",
    "odia": "ORIYA",
    "tamil": "TAMIL",
    "telugu": "TELUGU",
    "kannada": "KANNADA",
    "malayalam": "MALAYALAM",
}

# offset -> (category, accepted name suffixes).  A slot is included for a
# script iff the character at block_base+offset is assigned, its name (minus
# the script word) is in the accepted set, and it is stable under NFD+NFC.
# The E/O rows accept both the Indo-Aryan and the Dravidian naming of the
# same slot (SHORT E vs E, E vs EE, ...).
SLOTS = {
    0x01: ("nasalization", {"SIGN CANDRABINDU"}),
    0x02: ("nasalization", {"SIGN ANUSVARA"}),
    0x03: ("nasalization", {"SIGN VISARGA"}),
    0x05: ("independent-vowel", {"LETTER A"}),
    0x06: ("independent-vowel", {"LETTER AA"}),
    0x07: ("independent-vowel", {"LETTER I"}),
    0x08: ("independent-vowel", {"LETTER II"}),
    0x09: ("independent-vowel", {"LETTER U"}),
    0x0A: ("independent-vowel", {"LETTER UU"}),
    0x0B: ("independent-vowel", {"LETTER VOCALIC R"}),
    0x0C: ("independent-vowel", {"LETTER VOCALIC L"}),
    0x0D: ("independent-vowel", {"LETTER CANDRA E", "VOWEL CANDRA E"}),
    0x0E: ("independent-vowel", {"LETTER SHORT E", "LETTER E"}),
    0x0F: ("independent-vowel", {"LETTER E", "LETTER EE"}),
    0x10: ("independent-vowel", {"LETTER AI"}),
    0x11: ("independent-vowel", {"LETTER CANDRA O", "VOWEL CANDRA O"}),
    0x12: ("independent-vowel", {"LETTER SHORT O", "LETTER O"}),
    0x13: ("independent-vowel", {"LETTER O", "LETTER OO"}),
    0x14: ("independent-vowel", {"LETTER AU"}),
    **{off: ("consonant", None) for off in range(0x15, 0x3A)},
    0x3C: ("consonant", {"SIGN NUKTA"}),  # combining dot; grouped with consonants
    0x3D: ("punctuation", {"SIGN AVAGRAHA"}),
    0x3E: ("vowel-sign", {"VOWEL SIGN AA"}),
    0x3F: ("vowel-sign", {"VOWEL SIGN I"}),
    0x40: ("vowel-sign", {"VOWEL SIGN II"}),
    0x41: ("vowel-sign", {"VOWEL SIGN U"}),
    0x42: ("vowel-sign", {"VOWEL SIGN UU"}),
    0x43: ("vowel-sign", {"VOWEL SIGN VOCALIC R"}),
    0x44: ("vowel-sign", {"VOWEL SIGN VOCALIC RR"}),
    0x45: ("vowel-sign", {"VOWEL SIGN CANDRA E"}),
    0x46: ("vowel-sign", {"VOWEL SIGN SHORT E", "VOWEL SIGN E"}),
    0x47: ("vowel-sign", {"VOWEL SIGN E", "VOWEL SIGN EE"}),
    0x48: ("vowel-sign", {"VOWEL SIGN AI"}),
    0x49: ("vowel-sign", {"VOWEL SIGN CANDRA O"}),
    0x4A: ("vowel-sign", {"VOWEL SIGN SHORT O", "VOWEL SIGN O"}),
    0x4B: ("vowel-sign", {"VOWEL SIGN O", "VOWEL SIGN OO"}),
    0x4C: ("vowel-sign", {"VOWEL SIGN AU"}),
    0x4D: ("virama", {"SIGN VIRAMA"}),
    **{0x66 + d: ("digit", None) for d in range(10)},
}

# Consonant slots take their expected name from the Devanagari reference
# letter; digit slots likewise.  Filled in below.

# (script, offset) pairs excluded even though the name test passes.
# Tamil SHA sits outside the classical Tamil letter inventory and is kept
# out of the map on purpose (it maps to nothing and must raise).
EXCLUDE = {("tamil", 0x36)}

# Script-neutral characters shared by every language.  Danda and double
# danda live in the Devanagari block but punctuate all the scripts, so they
# are named tokens here rather than per-script label ids.
COMMON_TOKENS = [
    (0x0020, "SPACE", "space"),
    (0x0964, "DANDA", "punctuation"),
    (0x0965, "DOUBLE_DANDA", "punctuation"),
    (0x002E, "PERIOD", "punctuation"),
    (0x002C, "COMMA", "punctuation"),
    (0x003F, "QUESTION", "punctuation"),
    (0x0021, "EXCLAIM", "punctuation"),
    (0x002D, "HYPHEN", "punctuation"),
    (0x003A, "COLON", "punctuation"),
    (0x003B, "SEMICOLON", "punctuation"),
    (0x0027, "APOSTROPHE", "punctuation"),
    (0x0022, "QUOTE", "punctuation"),
    (0x0028, "LPAREN", "punctuation"),
    (0x0029, "RPAREN", "punctuation"),
] + [(0x0030 + d, f"DIGIT_{d}", "digit") for d in range(10)]


def reference_suffix(offset: int) -> set:
    cat, names = SLOTS[offset]
    if names is not None:
        return names
    ref = unicodedata.name(chr(BLOCKS["devanagari"] + offset))
    return {ref.replace("DEVANAGARI ", "", 1)}


def stable(ch: str) -> bool:
    return unicodedata.normalize("NFC", unicodedata.normalize("NFD", ch)) == ch


def main() -> int:
    out_dir = Path(__file__).resolve().parents[1] / "src" / "indicvox" / "text" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)

    for script, base in BLOCKS.items():
        word = NAME_WORD[script] + " "
        rows = []
        for offset, (category, _) in sorted(SLOTS.items()):
            if (script, offset) in EXCLUDE:
                continue
            ch = chr(base + offset)
            name = unicodedata.name(ch, None)
            if name is None or not name.startswith(word):
                continue
            if name.replace(word, "", 1) not in reference_suffix(offset):
                continue
            if not stable(ch):
                continue
            rows.append(f"{base + offset:04X}\t{offset:02X}\t{category}")
        path = out_dir / f"mlcm_{script}.tsv"
        path.write_text(
            f"# MLCM character map for {script} (generated by tools/gen_script_tables.py)\n"
            f"# unicodedata {unicodedata.unidata_version}\n"
            + "\n".join(rows) + "\n",
            encoding="utf-8",
        )
        print(f"{path.name}: {len(rows)} rows")

    common = out_dir / "common_tokens.tsv"
    common.write_text(
        "# Script-neutral named tokens (generated by tools/gen_script_tables.py)\n"
        + "\n".join(f"{cp:04X}\t{name}\t{cat}" for cp, name, cat in COMMON_TOKENS) + "\n",
        encoding="utf-8",
    )
    print(f"{common.name}: {len(COMMON_TOKENS)} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main())
