"""Rule-based parsing of Indic text onto the common label set (CLS).

The parser runs in three stages on the MLCM token stream:

1. Akshara expansion: every consonant carries the inherent vowel "a" unless
   followed by a virama (which suppresses it) or an explicit vowel sign
   (which replaces it).  Nukta fuses with the preceding consonant where the
   inventory has a distinct phone (dx -> dxq, dxh -> dxhq) and is otherwise
   silent.
2. Schwa deletion, Indo-Aryan languages only: the word-final inherent "a"
   is always deleted; medial inherent "a" is deleted in context VC_CV,
   scanning right to left over the mutated sequence, unless deletion would
   create a three-consonant cluster.  Explicit vowels are never deleted.
3. Stop voicing, Tamil only: Tamil writes voiced and unvoiced stops with
   one letter, so voicing is contextual.  Word-initial stops and geminates
   stay unvoiced; a stop directly after a homorganic nasal (or anusvara) or
   between vowels becomes voiced; everything else stays unvoiced.

Digits and punctuation act as word boundaries and emit no phones (number
expansion is out of scope).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from indicvox.text import scripts
from indicvox.text.scripts import CommonToken, UnmappableCodepointError

# ---------------------------------------------------------------------------
# inventory

def _load_inventory() -> dict[str, str]:
    text = (resources.files("indicvox.text.data") / "cls_inventory.tsv").read_text(
        encoding="utf-8"
    )
    inventory = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        label, cls = line.split("\t")
        inventory[label] = cls
    return inventory


CLS_INVENTORY = _load_inventory()

_VOWELS = frozenset(l for l, c in CLS_INVENTORY.items() if c == "vowel")
_NASALS = frozenset(l for l, c in CLS_INVENTORY.items() if c == "nasal")
_CONSONANT_CLASSES = frozenset(
    {"stop", "nasal", "flap", "liquid", "glide", "fricative"}
)

# ---------------------------------------------------------------------------
# label id -> phone tables (offsets within the Devanagari reference block)

_VOWEL_PHONES = {
    0x05: "a", 0x06: "aa", 0x07: "i", 0x08: "ii", 0x09: "u", 0x0A: "uu",
    0x0B: "ru", 0x0C: "lu", 0x0D: "ae", 0x0E: "e", 0x0F: "ee", 0x10: "ai",
    0x11: "ao", 0x12: "o", 0x13: "oo", 0x14: "au",
}

_VOWEL_SIGN_PHONES = {
    0x3E: "aa", 0x3F: "i", 0x40: "ii", 0x41: "u", 0x42: "uu",
    0x43: "ru", 0x44: "ru", 0x45: "ae", 0x46: "e", 0x47: "ee", 0x48: "ai",
    0x49: "ao", 0x4A: "o", 0x4B: "oo", 0x4C: "au",
}

_CONSONANT_PHONES = {
    0x15: "k", 0x16: "kh", 0x17: "g", 0x18: "gh", 0x19: "ng",
    0x1A: "c", 0x1B: "ch", 0x1C: "j", 0x1D: "jh", 0x1E: "nj",
    0x1F: "tx", 0x20: "txh", 0x21: "dx", 0x22: "dxh", 0x23: "nx",
    0x24: "t", 0x25: "th", 0x26: "d", 0x27: "dh", 0x28: "n",
    0x29: "n", 0x2A: "p", 0x2B: "ph", 0x2C: "b", 0x2D: "bh", 0x2E: "m",
    0x2F: "y", 0x30: "r", 0x31: "rx", 0x32: "l", 0x33: "lx", 0x34: "zh",
    0x35: "v", 0x36: "sh", 0x37: "sx", 0x38: "s", 0x39: "h",
}

_NASALIZATION_PHONES = {0x01: "nq", 0x02: "mq", 0x03: "hq"}

# Consonant + nukta pairs with a phone of their own.
_NUKTA_FUSION = {"dx": "dxq", "dxh": "dxhq"}

_VIRAMA = 0x4D
_NUKTA = 0x3C
_AVAGRAHA = 0x3D

# Tamil contextual voicing.
_VOICED = {"k": "g", "c": "j", "tx": "dx", "t": "d", "p": "b"}

# Homorganic nasal for each voiceable stop; anusvara assimilates to any.
_HOMORGANIC = {"k": "ng", "c": "nj", "tx": "nx", "t": "n", "p": "m"}


@dataclass(frozen=True)
class PhoneSequence:
    """Flat CLS phone list with word start indices.

    word_boundaries[i] is the index into phones where word i begins; it is
    strictly increasing and every entry is a valid phone index.
    """

    phones: tuple[str, ...]
    language: str
    word_boundaries: tuple[int, ...]

    def __post_init__(self):
        for phone in self.phones:
            if phone not in CLS_INVENTORY:
                raise ValueError(f"phone {phone!r} not in CLS inventory")
        previous = -1
        for index in self.word_boundaries:
            if not previous < index < len(self.phones):
                raise ValueError("word boundaries not strictly increasing in range")
            previous = index

    def words(self) -> list[tuple[str, ...]]:
        bounds = list(self.word_boundaries) + [len(self.phones)]
        return [tuple(self.phones[a:b]) for a, b in zip(bounds, bounds[1:])]


def _is_vowel(phone: str) -> bool:
    return phone in _VOWELS


def _is_consonant(phone: str) -> bool:
    return CLS_INVENTORY.get(phone) in _CONSONANT_CLASSES


# ---------------------------------------------------------------------------
# stage 1: akshara expansion

def _expand_word(tokens: list[CommonToken]) -> list[tuple[str, bool]]:
    """Expand one word of MLCM tokens to (phone, is_inherent_schwa) pairs."""
    out: list[tuple[str, bool]] = []
    i = 0
    while i < len(tokens):
        label = tokens[i].label_id
        if label in _CONSONANT_PHONES:
            phone = _CONSONANT_PHONES[label]
            i += 1
            if i < len(tokens) and tokens[i].label_id == _NUKTA:
                phone = _NUKTA_FUSION.get(phone, phone)
                i += 1
            if i < len(tokens) and tokens[i].label_id == _VIRAMA:
                out.append((phone, False))
                i += 1
            elif i < len(tokens) and tokens[i].label_id in _VOWEL_SIGN_PHONES:
                out.append((phone, False))
                out.append((_VOWEL_SIGN_PHONES[tokens[i].label_id], False))
                i += 1
            else:
                out.append((phone, False))
                out.append(("a", True))
        elif label in _VOWEL_PHONES:
            out.append((_VOWEL_PHONES[label], False))
            i += 1
        elif label in _NASALIZATION_PHONES:
            out.append((_NASALIZATION_PHONES[label], False))
            i += 1
        elif label in (_AVAGRAHA, _NUKTA, _VIRAMA) or label in _VOWEL_SIGN_PHONES:
            # Stray combining marks carry nothing on their own.
            i += 1
        else:
            raise UnmappableCodepointError(f"no phone rule for label {label!r}")
    return out


# ---------------------------------------------------------------------------
# stage 2: schwa deletion (Indo-Aryan)

def _delete_schwas(pairs: list[tuple[str, bool]]) -> list[tuple[str, bool]]:
    if pairs and pairs[-1] == ("a", True):
        pairs = pairs[:-1]
    i = len(pairs) - 1
    while i >= 0:
        phone, inherent = pairs[i]
        if (
            inherent
            and phone == "a"
            and 2 <= i < len(pairs) - 2
            and _is_vowel(pairs[i - 2][0])
            and _is_consonant(pairs[i - 1][0])
            and _is_consonant(pairs[i + 1][0])
            and _is_vowel(pairs[i + 2][0])
        ):
            candidate = pairs[:i] + pairs[i + 1:]
            if not _has_triple_cluster(candidate):
                pairs = candidate
        i -= 1
    return pairs


def _has_triple_cluster(pairs: list[tuple[str, bool]]) -> bool:
    run = 0
    for phone, _ in pairs:
        run = run + 1 if _is_consonant(phone) else 0
        if run >= 3:
            return True
    return False


# ---------------------------------------------------------------------------
# stage 3: Tamil stop voicing

def _voice_stops(phones: list[str]) -> list[str]:
    out = list(phones)
    for i, phone in enumerate(phones):
        if phone not in _VOICED:
            continue
        if i == 0:
            continue
        if (i > 0 and phones[i - 1] == phone) or (
            i + 1 < len(phones) and phones[i + 1] == phone
        ):
            continue
        prev = phones[i - 1]
        if prev == "mq" or prev == _HOMORGANIC[phone]:
            out[i] = _VOICED[phone]
        elif _is_vowel(prev) and i + 1 < len(phones) and _is_vowel(phones[i + 1]):
            out[i] = _VOICED[phone]
    return out


# ---------------------------------------------------------------------------
# entry point

def parse_to_cls(
    text: str, language: str, *, schwa_deletion: bool | None = None
) -> PhoneSequence:
    """Parse text into a CLS phone sequence for the given language.

    schwa_deletion defaults to the language family rule (on for Indo-Aryan,
    off for Dravidian) and can be forced either way for rule audits.
    """
    seq = scripts.to_mlcm(text, language)
    if schwa_deletion is None:
        schwa_deletion = scripts.LANGUAGE_FAMILY[language] == "indo-aryan"

    words: list[list[CommonToken]] = [[]]
    for token in seq.tokens:
        if isinstance(token.label_id, str):
            if words[-1]:
                words.append([])
        else:
            words[-1].append(token)

    phones: list[str] = []
    boundaries: list[int] = []
    for word in words:
        if not word:
            continue
        pairs = _expand_word(word)
        if schwa_deletion:
            pairs = _delete_schwas(pairs)
        word_phones = [phone for phone, _ in pairs]
        if language == "tamil":
            word_phones = _voice_stops(word_phones)
        if word_phones:
            boundaries.append(len(phones))
            phones.extend(word_phones)
    return PhoneSequence(tuple(phones), language, tuple(boundaries))
