"""Script detection and the multi-language character map (MLCM).

The eight Indic Unicode blocks are laid out in parallel: a letter normally
sits at the same offset from its block base in every script that has it.
MLCM exploits this by representing a character as its offset within the
Devanagari reference block (the label id, 0..127).  Mapping is table-driven:
each script ships a TSV of codepoints it actually defines, so codepoints
with no cross-script counterpart fail loudly instead of aliasing.

Script-neutral characters (space, danda, ASCII digits, a small punctuation
whitelist) become named tokens rather than offsets.  Danda and double danda
live in the Devanagari block but punctuate every script, so they must not
participate in script detection.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources

# ---------------------------------------------------------------------------
# errors

class ScriptError(ValueError):
    """Base class for script and mapping failures."""


class MixedScriptError(ScriptError):
    """Text contains codepoints from two or more Indic blocks."""


class NoIndicContentError(ScriptError):
    """Text contains no codepoint from any Indic block."""


class ScriptMismatchError(ScriptError):
    """Detected script is not the script of the requested language."""


class UnmappableCodepointError(ScriptError):
    """Codepoint lies in the source block but is absent from the map."""


class UnrenderableTokenError(ScriptError):
    """Token has no codepoint in the requested target script."""


# ---------------------------------------------------------------------------
# script identities

@dataclass(frozen=True)
class ScriptBlock:
    """One Indic Unicode block: 128 codepoints starting at base_codepoint."""

    name: str
    base_codepoint: int

    def __contains__(self, codepoint: int) -> bool:
        return self.base_codepoint <= codepoint < self.base_codepoint + 0x80


SCRIPTS = {
    "devanagari": ScriptBlock("devanagari", 0x0900),
    "bengali": ScriptBlock("bengali", 0x0980),
    "gujarati": ScriptBlock("gujarati", 0x0A80),
    "odia": ScriptBlock("odia", 0x0B00),
    "tamil": ScriptBlock("tamil", 0x0B80),
    "telugu": ScriptBlock("telugu", 0x0C00),
    "kannada": ScriptBlock("kannada", 0x0C80),
    "malayalam": ScriptBlock("malayalam", 0x0D00),
}

# Hindi and Rajasthani share Devanagari, so the language can never be
# inferred from the script; it is always an explicit input.
LANGUAGE_SCRIPT = {
    "bengali": "bengali",
    "gujarati": "gujarati",
    "hindi": "devanagari",
    "odia": "odia",
    "rajasthani": "devanagari",
    "kannada": "kannada",
    "malayalam": "malayalam",
    "tamil": "tamil",
    "telugu": "telugu",
}

LANGUAGE_FAMILY = {
    "bengali": "indo-aryan",
    "gujarati": "indo-aryan",
    "hindi": "indo-aryan",
    "odia": "indo-aryan",
    "rajasthani": "indo-aryan",
    "kannada": "dravidian",
    "malayalam": "dravidian",
    "tamil": "dravidian",
    "telugu": "dravidian",
}

LANGUAGES = tuple(sorted(LANGUAGE_SCRIPT))


# ---------------------------------------------------------------------------
# tokens and sequences

@dataclass(frozen=True)
class CommonToken:
    """One MLCM unit: an offset label id (int) or a named special token (str)."""

    label_id: int | str
    category: str


@dataclass(frozen=True)
class MLCMSequence:
    tokens: tuple[CommonToken, ...]
    source_script: ScriptBlock
    language: str


# ---------------------------------------------------------------------------
# table loading

def _load_tables():
    data = resources.files("indicvox.text.data")
    per_script = {}
    for name in SCRIPTS:
        table = {}
        text = (data / f"mlcm_{name}.tsv").read_text(encoding="utf-8")
        for line in text.splitlines():
            if not line or line.startswith("#"):
                continue
            cp_hex, label_hex, category = line.split("\t")
            table[int(cp_hex, 16)] = (int(label_hex, 16), category)
        per_script[name] = table
    common = {}
    text = (data / "common_tokens.tsv").read_text(encoding="utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        cp_hex, token, category = line.split("\t")
        common[int(cp_hex, 16)] = (token, category)
    return per_script, common


_PER_SCRIPT, _COMMON = _load_tables()
_PER_SCRIPT_INVERSE = {
    name: {label: cp for cp, (label, _) in table.items()}
    for name, table in _PER_SCRIPT.items()
}
_COMMON_INVERSE = {token: cp for cp, (token, _) in _COMMON.items()}

# Categories are a total function of the label id, identical across scripts.
_CATEGORY_BY_LABEL: dict[int, str] = {}
for _table in _PER_SCRIPT.values():
    for _label, _cat in _table.values():
        _CATEGORY_BY_LABEL.setdefault(_label, _cat)

_IGNORED = {0x200C, 0x200D}  # ZWNJ/ZWJ carry no phonetic content


# ---------------------------------------------------------------------------
# operations

def normalize_text(text: str) -> str:
    """Canonical recomposition with joiner control characters removed."""
    text = unicodedata.normalize("NFC", unicodedata.normalize("NFD", text))
    return "".join(ch for ch in text if ord(ch) not in _IGNORED)

def detect_script(text: str) -> ScriptBlock:
    """Return the unique script block covering all Indic codepoints in text.

    Script-neutral codepoints (danda, digits, punctuation) do not vote.
    Raises MixedScriptError on two or more blocks, NoIndicContentError on
    none.
    """
    seen = set()
    for ch in normalize_text(text):
        cp = ord(ch)
        if cp in _COMMON or cp in _IGNORED:
            continue
        for block in SCRIPTS.values():
            if cp in block:
                seen.add(block.name)
                break
    if len(seen) > 1:
        raise MixedScriptError(f"codepoints from {sorted(seen)} in one text")
    if not seen:
        raise NoIndicContentError("no Indic codepoints found")
    return SCRIPTS[seen.pop()]

def to_mlcm(text: str, language: str) -> MLCMSequence:
    """Map text to MLCM tokens for the given language.

    The language is required (never inferred) and its script must match the
    detected script.  Codepoints inside the source block but missing from
    the script table raise UnmappableCodepointError; codepoints outside all
    blocks and outside the common-token whitelist do too.
    """
    if language not in LANGUAGE_SCRIPT:
        raise ScriptError(f"unknown language: {language!r}")
    script = SCRIPTS[LANGUAGE_SCRIPT[language]]
    detected = detect_script(text)
    if detected.name != script.name:
        raise ScriptMismatchError(
            f"text is {detected.name} but language {language} uses {script.name}"
        )
    table = _PER_SCRIPT[script.name]
    tokens = []
    for ch in normalize_text(text):
        cp = ord(ch)
        if cp in _COMMON:
            token, category = _COMMON[cp]
            tokens.append(CommonToken(token, category))
        elif cp in table:
            label, category = table[cp]
            tokens.append(CommonToken(label, category))
        else:
            raise UnmappableCodepointError(
                f"U+{cp:04X} ({unicodedata.name(ch, '?')}) not mapped for {script.name}"
            )
    return MLCMSequence(tuple(tokens), script, language)

def render_from_mlcm(seq: MLCMSequence, target: ScriptBlock | str) -> str:
    """Render MLCM tokens as text in the target script.

    Raises UnrenderableTokenError for label ids the target script does not
    define (the inverse of the unmappable case).
    """
    name = target if isinstance(target, str) else target.name
    if name not in SCRIPTS:
        raise ScriptError(f"unknown script: {name!r}")
    inverse = _PER_SCRIPT_INVERSE[name]
    out = []
    for token in seq.tokens:
        if isinstance(token.label_id, str):
            out.append(chr(_COMMON_INVERSE[token.label_id]))
        elif token.label_id in inverse:
            out.append(chr(inverse[token.label_id]))
        else:
            raise UnrenderableTokenError(
                f"label 0x{token.label_id:02X} has no {name} codepoint"
            )
    return "".join(out)

def script_inventory(script: ScriptBlock | str) -> dict[int, int]:
    """Mapping of codepoint -> label id for one script (for audits/tests)."""
    name = script if isinstance(script, str) else script.name
    return {cp: label for cp, (label, _) in _PER_SCRIPT[name].items()}

def label_category(label_id: int | str) -> str:
    """Category of a label id; total over the shipped inventory."""
    if isinstance(label_id, str):
        for token, category in _COMMON.values():
            if token == label_id:
                return category
        raise ScriptError(f"unknown named token: {label_id!r}")
    try:
        return _CATEGORY_BY_LABEL[label_id]
    except KeyError:
        raise ScriptError(f"unknown label id: 0x{label_id:02X}") from None
